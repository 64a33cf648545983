"""Command-line front end.

Exit codes:
    0  success
    1  usage or input-file error
    2  polytope validation failure
    3  observation outside the domain (or otherwise invalid)
    4  degree cap reached before the error tolerance
    5  basis check failed (span mismatch or non-tangent field)

The primary scalar (a dimension or an error) goes to stdout; diagnostics
go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import logging
import os
import sys

import numpy as np

from .arrangement import (
    DEFAULT_MAX_DENOMINATOR,
    DegenerateArrangementError,
    Polytope,
    PolytopeError,
    bounding_box,
    facet_quotient,
    facet_tangency_check,
    normal_component,
    validate_polytope,
)
from .fitting import (
    FitResult,
    Observation,
    ObservationError,
    exact_interpolant,
    fit_with_degree,
    fit_with_error_bound,
)
from .polycore import Polynomial
from .tangentbasis import (
    TangentBasis,
    dimension_by_resolution,
    in_span,
    oracle_tangent_basis,
    same_span,
    span_rank,
    tangent_basis,
)

logger = logging.getLogger("tangentfit")

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_OUTSIDE, EXIT_KMAX, EXIT_MISMATCH = 0, 1, 2, 3, 4, 5
CONSTRAINTS = {"none": "none", "div": "divergence_free", "rot": "rotation_free", "harm": "harmonic"}


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _affine(f, limit=240):
    text = f.to_str(names=[f"x{q + 1}" for q in range(f.nvars)])
    return text if len(text) <= limit else text[:limit] + " ..."


def _err(*parts):
    print(*parts, file=sys.stderr)


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_USAGE) from None


def _write_json(data, path):
    text = json.dumps(data, indent=1, sort_keys=True) + "\n"
    with open(path, "w") as fh:
        fh.write(text)


def _load_polytope(args, validate=True):
    if not args.polytope:
        raise CliError("--polytope is required", EXIT_USAGE)
    data = _read_json(args.polytope)
    try:
        P = Polytope.from_json(data, max_denominator=args.max_denominator)
    except (PolytopeError, KeyError, TypeError, ValueError) as exc:
        raise CliError(f"malformed polytope: {exc}", EXIT_INVALID) from None
    if validate:
        try:
            validate_polytope(P)
        except PolytopeError as exc:
            for line in exc.report.lines() if exc.report else [str(exc)]:
                _err(f"invalid polytope: {line}")
            raise CliError("polytope validation failed", EXIT_INVALID) from None
    return P


def _load_observations(path):
    data = _read_json(path)
    items = data["observations"] if isinstance(data, dict) else data
    try:
        return [Observation.from_json(o) for o in items]
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"malformed observations: {exc}", EXIT_OUTSIDE) from None


def _load_basis(path, d):
    try:
        return TangentBasis.from_json(_read_json(path), d=d)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"malformed basis file: {exc}", EXIT_USAGE) from None


def _basis(P, k, args):
    try:
        return tangent_basis(P, k, allow_degenerate=args.allow_degenerate, validate=False)
    except DegenerateArrangementError as exc:
        _err(f"degenerate arrangement: {exc} (pass --allow-degenerate to override)")
        raise CliError("degenerate arrangement", EXIT_INVALID) from None


def _need_k(args):
    if args.k is None:
        raise CliError("--k is required", EXIT_USAGE)
    if args.k < 0:
        raise CliError("--k must be non-negative", EXIT_USAGE)
    return args.k


# ---------------------------------------------------------------------------
# commands


def cmd_basis(args):
    P = _load_polytope(args)
    k = _need_k(args)
    B = _basis(P, k, args)
    if args.out:
        _write_json(B.to_json(), args.out)
    print(B.dim)
    return EXIT_OK


def cmd_dim(args):
    P = _load_polytope(args)
    k = _need_k(args)
    try:
        dim = dimension_by_resolution(P, k, allow_degenerate=args.allow_degenerate)
    except DegenerateArrangementError as exc:
        _err(f"degenerate arrangement: {exc}")
        return EXIT_INVALID
    print(dim)
    return EXIT_OK


def cmd_fit(args):
    P = _load_polytope(args)
    if not args.obs:
        raise CliError("--obs is required", EXIT_USAGE)
    if (args.k is None) == (args.eps is None):
        raise CliError("exactly one of --k and --eps is required", EXIT_USAGE)
    obs = _load_observations(args.obs)
    kind = CONSTRAINTS[args.constraint]
    try:
        if args.k is not None:
            k = _need_k(args)
            basis = _load_basis(args.basis, P.d) if args.basis else _basis(P, k, args)
            if basis.k != k:
                raise CliError(f"basis file has k={basis.k}, requested k={k}", EXIT_USAGE)
            result = fit_with_degree(P, k, obs, kind, basis=basis, allow_outside=args.allow_outside)
        else:
            if args.basis:
                raise CliError("--basis only applies with --k", EXIT_USAGE)
            result = fit_with_error_bound(P, args.eps, obs, kind, k_max=args.kmax,
                                          allow_outside=args.allow_outside)
    except ObservationError as exc:
        _err(f"observation error: {exc}")
        return EXIT_OUTSIDE
    except DegenerateArrangementError as exc:
        _err(f"degenerate arrangement: {exc}")
        return EXIT_INVALID
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    if args.out:
        _write_json(result.to_json(), args.out)
    if args.residuals:
        with open(args.residuals, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["index"] + [f"x{q + 1}" for q in range(P.d)] + ["residual"])
            for s, (o, r) in enumerate(zip(obs, result.residuals)):
                r = r if isinstance(r, list) else [r]
                w.writerow([s] + [float(v) for v in o.x] + [repr(float(np.linalg.norm(r)))])
    print(repr(result.error))
    _err(f"degree {result.degree_used}, {len(result.basis_fields)} basis fields")
    if not result.converged:
        _err(f"degree cap reached: error {result.error!r} exceeds {args.eps!r}")
        return EXIT_KMAX
    return EXIT_OK


def cmd_interp(args):
    P = _load_polytope(args)
    if not args.obs:
        raise CliError("--obs is required", EXIT_USAGE)
    obs = _load_observations(args.obs)
    try:
        xi = exact_interpolant(P, obs)
    except ObservationError as exc:
        _err(f"observation error: {exc}")
        return EXIT_OUTSIDE
    deg = max((f.degree for f in xi if f), default=0)
    bound = 2 * (len(obs) - 1) + P.m
    result = FitResult([], xi, 0.0, int(deg), [], [], "none", True, 0)
    out = result.to_json()
    out["degree_bound"] = bound
    if args.out:
        _write_json(out, args.out)
    print(int(deg))
    _err(f"interpolant degree {deg} (bound {bound})")
    return EXIT_OK


def cmd_check(args):
    P = _load_polytope(args)
    k = _need_k(args)
    oracle = oracle_tangent_basis(P, k)
    if args.basis:
        candidate = _load_basis(args.basis, P.d)
        label = args.basis
        if candidate.k != k:
            _err(f"basis file has k={candidate.k}, checking against k={k}")
    else:
        candidate = _basis(P, k, args)
        label = "pipeline"
    failed = False
    for j, xi in enumerate(candidate.fields):
        for v in facet_tangency_check(xi, P):
            if not v.tangent:
                failed = True
                _err(f"FAIL field {j}: not tangent to facet {v.index + 1}, residue {_affine(v.residue)}")
    r = span_rank(candidate.fields)
    if r != len(candidate.fields):
        failed = True
        _err(f"FAIL {label}: fields are linearly dependent (rank {r} of {len(candidate.fields)})")
    if not same_span(candidate.fields, oracle.fields):
        failed = True
        witness = next((xi for xi in oracle.fields if not in_span(xi, candidate.fields)), None)
        if witness is not None:
            _err("FAIL span mismatch; oracle field outside the basis span: "
                 + "; ".join(_affine(f) for f in witness))
        else:
            _err("FAIL span mismatch; basis contains fields outside the oracle span")
    if args.samples:
        failed |= not _spot_check(P, candidate, args.samples)
    _err(f"{label}: dim {candidate.dim}; oracle: dim {oracle.dim}; {'FAIL' if failed else 'PASS'}")
    print(f"{candidate.dim} {oracle.dim}")
    return EXIT_MISMATCH if failed else EXIT_OK


def _seed():
    raw = os.environ.get("TANGENTFIT_SEED")
    return int(raw) if raw not in (None, "") else 0


def _spot_check(P, basis, n):
    """Float check of <xi, alpha_i> = 0 at random points of each facet."""
    rng = np.random.default_rng(_seed())
    box = bounding_box(P) or [(-1, 1)] * P.d
    lo = np.array([float(a) for a, _ in box])
    hi = np.array([float(b) for _, b in box])
    ok = True
    for i in range(P.m):
        a = np.array([float(v) for v in P.normals[i]])
        l = float(P.offsets[i])
        pts = rng.uniform(lo, hi, size=(n, P.d))
        pts -= np.outer(pts @ a + l, a) / (a @ a)  # project onto H_i
        inside = [x for x in pts if max(P.values(tuple(x))) <= 1e-9]
        for j, xi in enumerate(basis.fields):
            g = normal_component(xi, P.normals[i])
            if not inside or not g:
                continue
            vals = _unit_scaled(g).evaluate_float(np.array(inside))
            if np.max(np.abs(vals)) > 1e-8:
                ok = False
                _err(f"FAIL field {j}: normal component nonzero on facet {i + 1} at sampled points")
    return ok


def _unit_scaled(f):
    # primitive integer basis fields can exceed the float range
    top = max(abs(c) for c in f.terms.values())
    return f * (1 / top)


def _load_field(args, d):
    data = _read_json(args.field)
    if "field" in data:
        return tuple(Polynomial.from_json(f, nvars=d) for f in data["field"])
    if "fields" in data:
        fields = TangentBasis.from_json(data, d=d).fields
        if not 0 <= args.index < len(fields):
            raise CliError(f"--index {args.index} out of range for {len(fields)} fields", EXIT_USAGE)
        xi = fields[args.index]
        top = max(abs(c) for f in xi for c in f.terms.values())
        _err(f"basis member {args.index} scaled by 1/{top} to unit max coefficient")
        return tuple(f * (1 / top) for f in xi)
    raise CliError("field file needs a 'field' or 'fields' entry", EXIT_USAGE)


def _parse_bbox(text, d):
    vals = [float(v) for v in text.split(",")]
    if len(vals) != 2 * d:
        raise CliError(f"--bbox needs {2 * d} numbers lo1,hi1,...", EXIT_USAGE)
    return [(vals[2 * q], vals[2 * q + 1]) for q in range(d)]


def cmd_grid(args):
    P = _load_polytope(args)
    if not args.field:
        raise CliError("--field is required", EXIT_USAGE)
    xi = _load_field(args, P.d)
    if args.bbox:
        box = _parse_bbox(args.bbox, P.d)
    else:
        box = bounding_box(P)
        if box is None:
            raise CliError("unbounded polytope: pass --bbox", EXIT_USAGE)
        box = [(float(a), float(b)) for a, b in box]
    n = args.grid_res
    axes = [np.linspace(a, b, n) for a, b in box]
    pts = np.array(list(itertools.product(*axes)))
    A = np.array([[float(v) for v in a] for a in P.normals]).reshape(P.m, P.d)
    L = np.array([float(v) for v in P.offsets])
    H = pts @ A.T + L if P.m else np.zeros((len(pts), 0))
    keep = np.all(H <= 0, axis=1) if P.m else np.ones(len(pts), bool)
    pts, H = pts[keep], H[keep]
    vals = np.array([f.evaluate_float(pts) if f else np.zeros(len(pts)) for f in xi]).T.reshape(len(pts), P.d)
    sink = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(sink)
        w.writerow([f"x{q + 1}" for q in range(P.d)] + [f"f{q + 1}" for q in range(P.d)])
        for x, v in zip(pts, vals):
            w.writerow([repr(float(a)) for a in x] + [repr(float(b)) for b in v])
    finally:
        if sink is not sys.stdout:
            sink.close()
    if not len(pts):
        _err("warning: no lattice point lies in the polytope")
    tangent = all(v.tangent for v in facet_tangency_check(xi, P))
    for i in range(P.m):
        if not tangent or not len(pts):
            break
        g = facet_quotient(xi, P, i)
        gv = g.evaluate_float(pts) if g else np.zeros(len(pts))
        # |<xi, alpha_i>| = |h_i| |g_i| <= C_i |h_i| on the emitted points
        _err(f"facet {i + 1}: tangency constant C = {float(np.max(np.abs(gv))):.6g}")
    if not tangent:
        _err("warning: field is not tangent to every facet")
    if args.out:
        print(len(pts))
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def build_parser():
    p = argparse.ArgumentParser(prog="tangentfit", description="Tangent polynomial vector fields on polytopes.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--polytope", help="polytope JSON file")
    common.add_argument("--max-denominator", type=int, default=None,
                        help=f"rationalization bound for float input (default {DEFAULT_MAX_DENOMINATOR})")
    common.add_argument("--out", help="output file")
    common.add_argument("--verbose", "-v", action="count", default=0)
    common.add_argument("--allow-degenerate", action="store_true",
                        help="run the pipeline when the cone hyperplanes share a line")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("basis", parents=[common], help="tangent basis of degree <= k")
    s.add_argument("--k", type=int)
    s.set_defaults(func=cmd_basis)

    s = sub.add_parser("dim", parents=[common], help="dimension from the free resolution")
    s.add_argument("--k", type=int)
    s.set_defaults(func=cmd_dim)

    s = sub.add_parser("fit", parents=[common], help="least-squares tangent fit")
    s.add_argument("--obs", help="observations JSON file")
    s.add_argument("--k", type=int)
    s.add_argument("--eps", type=float)
    s.add_argument("--kmax", type=int)
    s.add_argument("--constraint", choices=sorted(CONSTRAINTS), default="none")
    s.add_argument("--basis", help="precomputed basis JSON (with --k)")
    s.add_argument("--residuals", help="per-observation residual CSV")
    s.add_argument("--allow-outside", action="store_true")
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("interp", parents=[common], help="exact tangent interpolant")
    s.add_argument("--obs", help="observations JSON file")
    s.set_defaults(func=cmd_interp)

    s = sub.add_parser("check", parents=[common], help="compare a basis against the linear-system oracle")
    s.add_argument("--k", type=int)
    s.add_argument("--basis", help="basis JSON to verify instead of the pipeline output")
    s.add_argument("--samples", type=int, default=0, help="random facet points per facet (TANGENTFIT_SEED)")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("grid", parents=[common], help="field values on a lattice clipped to the polytope")
    s.add_argument("--field", help="fit or basis JSON file")
    s.add_argument("--index", type=int, default=0, help="basis member when --field is a basis")
    s.add_argument("--grid-res", type=int, default=50)
    s.add_argument("--bbox", help="lo1,hi1,...,lod,hid")
    s.set_defaults(func=cmd_grid)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    # INFO by default so every rationalization choice is visible
    level = logging.DEBUG if args.verbose else logging.INFO
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    saved = logger.level, logger.propagate
    logger.addHandler(handler)
    logger.setLevel(level)
    logger.propagate = False
    try:
        if args.max_denominator is not None and args.max_denominator < 1:
            raise CliError("--max-denominator must be positive", EXIT_USAGE)
        return args.func(args)
    except CliError as exc:
        _err(f"error: {exc}")
        return exc.code
    finally:
        logger.removeHandler(handler)
        logger.setLevel(saved[0])
        logger.propagate = saved[1]


if __name__ == "__main__":
    sys.exit(main())
