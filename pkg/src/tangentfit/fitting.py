"""Least-squares fitting of tangent polynomial fields to observations.

Observations are point samples of the field value, of its divergence, of
the planar vorticity or of a single component.  The boundary condition is
built into the basis, so every fitted field is exactly tangent regardless
of the coefficients found by the solver.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
import gmpy2
from gmpy2 import mpq

from .arrangement import Polytope, facet_tangency_check
from .linalg import nullspace, rref
from .polycore import Polynomial, poly_eval, to_rational
from .tangentbasis import TangentBasis, primitive_field, tangent_basis

logger = logging.getLogger(__name__)

__all__ = [
    "Observation",
    "FitResult",
    "ObservationError",
    "CONSTRAINT_KINDS",
    "apply_operator",
    "operator_polynomials",
    "design_matrix",
    "least_squares_min_norm",
    "exact_least_squares",
    "constraint_nullspace",
    "constraint_polynomials",
    "fit_with_degree",
    "fit_with_error_bound",
    "exact_interpolant",
    "divergence",
    "curl2d",
    "laplacian",
]

OPERATORS = ("value", "divergence", "curl2d", "component")
_OP_ALIASES = {"div": "divergence", "curl": "curl2d", "vorticity": "curl2d"}

CONSTRAINT_KINDS = ("none", "divergence_free", "rotation_free", "harmonic")
_KIND_ALIASES = {"div": "divergence_free", "rot": "rotation_free", "harm": "harmonic"}

OUTSIDE_TOL = 1e-9


class ObservationError(ValueError):
    """An observation is malformed or lies outside the domain."""


def _to_float(v):
    # float(mpq) overflows on huge numerators even when the ratio is small
    return float(gmpy2.mpfr(v)) if isinstance(v, type(mpq())) else float(v)


def _is_exact(v):
    return not isinstance(v, (float, np.floating))


@dataclass(frozen=True)
class Observation:
    x: tuple
    target: object  # tuple for "value", scalar otherwise
    op: str = "value"
    component: int | None = None

    def __post_init__(self):
        op = _OP_ALIASES.get(self.op, self.op)
        if op not in OPERATORS:
            raise ObservationError(f"unknown operator {self.op!r}")
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "x", tuple(self.x))
        if op == "value":
            object.__setattr__(self, "target", tuple(self.target))
            if len(self.target) != len(self.x):
                raise ObservationError("value target and point differ in dimension")
        elif isinstance(self.target, (list, tuple)):
            raise ObservationError(f"{op} observations need a scalar target")
        if op == "curl2d" and len(self.x) != 2:
            raise ObservationError("curl2d observations require d = 2")
        if op == "component" and (self.component is None or not 0 <= self.component < len(self.x)):
            raise ObservationError("component observations need a valid component index")

    @property
    def exact(self):
        t = self.target if isinstance(self.target, tuple) else (self.target,)
        return all(_is_exact(v) for v in self.x + t)

    def rows(self):
        return len(self.x) if self.op == "value" else 1

    def target_vector(self, exact=False):
        t = self.target if isinstance(self.target, tuple) else (self.target,)
        return [to_rational(v) for v in t] if exact else [float(v) for v in t]

    def to_json(self):
        def enc(v):
            return str(v) if _is_exact(v) and not isinstance(v, int) else v

        out = {"x": [enc(v) for v in self.x], "op": self.op}
        out["target"] = [enc(v) for v in self.target] if self.op == "value" else enc(self.target)
        if self.component is not None:
            out["component"] = self.component
        return out

    @classmethod
    def from_json(cls, data):
        def dec(v):
            return to_rational(v) if isinstance(v, str) else v

        target = data["target"]
        target = [dec(v) for v in target] if isinstance(target, list) else dec(target)
        return cls(tuple(dec(v) for v in data["x"]), target, data.get("op", "value"),
                   data.get("component"))


# ---------------------------------------------------------------------------
# differential operators


def divergence(xi):
    return sum((f.diff(q) for q, f in enumerate(xi)), Polynomial.zero(xi[0].nvars))


def curl2d(xi):
    if len(xi) != 2:
        raise ValueError("curl2d is only defined for planar fields")
    return xi[1].diff(0) - xi[0].diff(1)


def laplacian(f: Polynomial):
    return sum((f.diff(q).diff(q) for q in range(f.nvars)), Polynomial.zero(f.nvars))


def operator_polynomials(xi, op, component=None):
    """The polynomials whose values an observation of kind ``op`` measures."""
    op = _OP_ALIASES.get(op, op)
    xi = tuple(xi)
    if op == "value":
        return list(xi)
    if op == "divergence":
        return [divergence(xi)]
    if op == "curl2d":
        return [curl2d(xi)]
    if op == "component":
        return [xi[component]]
    raise ValueError(f"unknown operator {op!r}")


def apply_operator(xi, op, x, component=None):
    """Evaluate an operator applied to xi at x (exact for rational x)."""
    polys = operator_polynomials(xi, op, component)
    vals = [poly_eval(p, x) for p in polys]
    return tuple(vals) if _OP_ALIASES.get(op, op) == "value" else vals[0]


# ---------------------------------------------------------------------------
# least squares


def design_matrix(fields, obs, exact=False):
    """Stacked operator values of each basis field at each observation.

    Returns (A, b).  Entries are computed exactly and converted to float
    unless ``exact`` is set, in which case lists of mpq are returned.
    """
    fields = list(fields.fields if isinstance(fields, TangentBasis) else fields)
    obs = list(obs)
    if not fields and obs:
        nrows = sum(o.rows() for o in obs)
        b = [v for o in obs for v in o.target_vector(exact)]
        return ([[] for _ in range(nrows)] if exact else np.zeros((nrows, 0))), (
            b if exact else np.array(b, dtype=float))
    d = len(fields[0]) if fields else 0
    for o in obs:
        if len(o.x) != d:
            raise ObservationError(f"observation point of dimension {len(o.x)} for a {d}-dimensional basis")
    cache: dict = {}
    rows, b = [], []
    for o in obs:
        key = (o.op, o.component)
        if key not in cache:
            cache[key] = [operator_polynomials(xi, o.op, o.component) for xi in fields]
        per_field = cache[key]
        pt = tuple(to_rational(v) for v in o.x)
        vals = [[poly_eval(p, pt) for p in polys] for polys in per_field]
        for r in range(o.rows()):
            rows.append([vals[j][r] for j in range(len(fields))])
        b.extend(o.target_vector(exact))
    if exact:
        return rows, b
    A = np.array([[_to_float(v) for v in row] for row in rows], dtype=float).reshape(len(rows), len(fields))
    return A, np.array(b, dtype=float)


def least_squares_min_norm(A, b):
    """Minimum-norm minimizer of ||A c - b||^2 via a truncated SVD.

    Singular values below max(dims) * eps * (largest column norm) are
    treated as zero.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
        raise ValueError("least-squares input contains non-finite entries")
    m, n = A.shape
    if n == 0:
        return np.zeros(0)
    if m == 0:
        return np.zeros(n)
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    colnorm = np.max(np.linalg.norm(A, axis=0))
    tol = max(m, n) * np.finfo(float).eps * colnorm
    keep = s > tol
    coef = (U[:, keep].T @ b) / s[keep]
    return Vt[keep].T @ coef


def exact_least_squares(A, b):
    """Exact minimum-norm least-squares solution over Q.

    The solution is sought in the row space of A (spanned by its reduced
    rows R), where the normal equations become an invertible system.
    """
    ncols = len(A[0]) if A else 0
    if ncols == 0:
        return []
    R, _ = rref(A, ncols)
    if not R:
        return [mpq(0)] * ncols
    AR = [[sum((a * r for a, r in zip(row, rr)), mpq(0)) for rr in R] for row in A]  # A R^T
    r = len(R)
    M = [[sum((AR[s][i] * AR[s][j] for s in range(len(A))), mpq(0)) for j in range(r)] for i in range(r)]
    rhs = [sum((AR[s][i] * to_rational(b[s]) for s in range(len(A))), mpq(0)) for i in range(r)]
    aug, piv = rref([row + [v] for row, v in zip(M, rhs)], r + 1)
    y = [row[-1] for row in aug]
    return [sum((R[i][j] * y[i] for i in range(r)), mpq(0)) for j in range(ncols)]


# ---------------------------------------------------------------------------
# constrained subspaces


def constraint_polynomials(xi, kind):
    """Polynomials that must vanish identically for xi to satisfy ``kind``."""
    kind = _KIND_ALIASES.get(kind, kind)
    xi = tuple(xi)
    if kind == "none":
        return []
    if kind == "divergence_free":
        return [divergence(xi)]
    if kind == "rotation_free":
        return [xi[q].diff(p) - xi[p].diff(q) for p in range(len(xi)) for q in range(p + 1, len(xi))]
    if kind == "harmonic":
        return [laplacian(f) for f in xi]
    raise ValueError(f"unknown constraint kind {kind!r}")


def constraint_nullspace(basis: TangentBasis, kind="none") -> TangentBasis:
    """Sub-basis of fields satisfying a linear differential constraint exactly."""
    kind = _KIND_ALIASES.get(kind, kind)
    if kind not in CONSTRAINT_KINDS:
        raise ValueError(f"unknown constraint kind {kind!r}")
    if kind == "none" or not basis.fields:
        return basis
    cols: dict = {}
    per_field = []
    for xi in basis.fields:
        coeffs = {}
        for idx, p in enumerate(constraint_polynomials(xi, kind)):
            for e, c in p.terms.items():
                coeffs[(idx, e)] = c
                cols.setdefault((idx, e), len(cols))
        per_field.append(coeffs)
    rows = [[mpq(0)] * len(basis.fields) for _ in range(len(cols))]
    for j, coeffs in enumerate(per_field):
        for t, c in coeffs.items():
            rows[cols[t]][j] = c
    null = nullspace(rows, len(basis.fields))
    fields = [primitive_field(basis.combine(v)) for v in null]
    return TangentBasis(k=basis.k, d=basis.d, fields=fields, source=f"{basis.source}+{kind}")


# ---------------------------------------------------------------------------
# fitting


@dataclass
class FitResult:
    coefficients: list
    field: tuple
    error: float
    degree_used: int
    residuals: list = field(default_factory=list)
    basis_fields: list = field(default_factory=list)
    constraint: str = "none"
    converged: bool = True
    exact_error: object = None

    def to_json(self):
        def enc(c):
            return str(c) if not isinstance(c, float) else c

        return {
            "degree": self.degree_used,
            "constraint": self.constraint,
            "error": float(self.error),
            "exact_error": None if self.exact_error is None else str(self.exact_error),
            "converged": self.converged,
            "coefficients": [enc(c) for c in self.coefficients],
            "field": [f.to_json() for f in self.field],
            "basis": [[f.to_json() for f in xi] for xi in self.basis_fields],
            "residuals": [list(r) if isinstance(r, (list, tuple)) else r for r in self.residuals],
        }

    @classmethod
    def from_json(cls, data, d=None):
        fld = data["field"]
        if d is None:
            d = len(fld)
        return cls(
            coefficients=data.get("coefficients", []),
            field=tuple(Polynomial.from_json(f, nvars=d) for f in fld),
            error=float(data.get("error", 0.0)),
            degree_used=int(data.get("degree", 0)),
            residuals=data.get("residuals", []),
            constraint=data.get("constraint", "none"),
            converged=bool(data.get("converged", True)),
        )


def _check_inside(P: Polytope, obs, allow_outside):
    for idx, o in enumerate(obs):
        if len(o.x) != P.d:
            raise ObservationError(f"observation {idx} has dimension {len(o.x)}, domain has {P.d}")
        vals = P.values(o.x)
        worst = max(vals, default=0)
        tol = 0 if o.exact else OUTSIDE_TOL
        if worst > tol:
            msg = f"observation {idx} at {o.x} lies outside the domain (max h_i = {float(worst):.3g})"
            if not allow_outside:
                raise ObservationError(msg)
            warnings.warn(msg, stacklevel=3)


def _normalized(fields):
    # unit max-coefficient scaling keeps design-matrix columns comparable
    out = []
    for xi in fields:
        top = max((abs(c) for f in xi for c in f.terms.values()), default=mpq(1))
        out.append(tuple(f * (1 / top) for f in xi))
    return out


def _residuals(xi, obs, exact):
    res, total = [], mpq(0)
    for o in obs:
        pt = tuple(to_rational(v) for v in o.x)
        polys = operator_polynomials(xi, o.op, o.component)
        tv = o.target_vector(exact=True)
        r = [poly_eval(p, pt) - t for p, t in zip(polys, tv)]
        total += sum((v * v for v in r), mpq(0))
        if exact:
            res.append([str(v) for v in r] if o.op == "value" else str(r[0]))
        else:
            res.append([float(v) for v in r] if o.op == "value" else float(r[0]))
    return res, total


def _zero_error(obs):
    return sum((v * v for o in obs for v in o.target_vector(exact=True)), mpq(0))


def fit_with_degree(P: Polytope, k: int, obs, kind="none", basis: TangentBasis | None = None,
                    allow_outside=False, exact=False, allow_degenerate=False) -> FitResult:
    """Best tangent field of degree <= k in the least-squares sense."""
    obs = list(obs)
    kind = _KIND_ALIASES.get(kind, kind)
    _check_inside(P, obs, allow_outside)
    if basis is None:
        basis = tangent_basis(P, k, allow_degenerate=allow_degenerate)
    restricted = constraint_nullspace(basis, kind)
    fields = _normalized(restricted.fields)
    zero = tuple(Polynomial.zero(P.d) for _ in range(P.d))
    if not obs:
        return FitResult([0.0] * len(fields), zero, 0.0, k, [], fields, kind, True, mpq(0))
    if not fields:
        res, total = _residuals(zero, obs, exact)
        return FitResult([], zero, float(total), k, res, fields, kind, True, total)
    A, b = design_matrix(fields, obs, exact=exact)
    if exact:
        c = exact_least_squares(A, b)
        coeffs = c
    else:
        c = least_squares_min_norm(A, b)
        coeffs = [float(v) for v in c]
    xi = zero
    for cj, phi in zip(c, fields):
        cj = to_rational(float(cj) if not exact else cj)
        if cj:
            xi = tuple(a + f * cj for a, f in zip(xi, phi))
    res, total = _residuals(xi, obs, exact)
    return FitResult(coeffs if not exact else [str(v) for v in coeffs], xi, float(total), k,
                     res, fields, kind, True, total)


def default_degree_cap(P: Polytope, obs):
    """2(|O| - 1) + m, the exact-interpolation degree bound."""
    return 2 * (len(obs) - 1) + P.m


def fit_with_error_bound(P: Polytope, eps, obs, kind="none", k_max=None, exact=None,
                         allow_outside=False) -> FitResult:
    """Raise the degree from 0 until the error drops to eps or below.

    The cap defaults to the interpolation bound for value-only data; other
    observation kinds carry no existence guarantee and need ``k_max``.  When
    the cap is passed the best fit is returned with ``converged=False``.
    With eps == 0 and rational data the fits run in exact arithmetic.
    """
    obs = list(obs)
    eps = float(eps)
    if eps < 0:
        raise ValueError("error tolerance must be non-negative")
    if k_max is None:
        if any(o.op != "value" for o in obs):
            raise ValueError("k_max is required for operator observations")
        k_max = max(default_degree_cap(P, obs), 0)
    if exact is None:
        exact = eps == 0 and all(o.exact for o in obs)
    _check_inside(P, obs, allow_outside)
    zero = tuple(Polynomial.zero(P.d) for _ in range(P.d))
    err0 = _zero_error(obs)
    best = FitResult([], zero, float(err0), 0, [], [], kind, True, err0)
    if (err0 if exact else float(err0)) <= eps:
        return best
    k = 0
    while True:
        if k > k_max:
            best.converged = False
            logger.warning("degree cap %d reached with error %.3g > %.3g", k_max, best.error, eps)
            return best
        fit = fit_with_degree(P, k, obs, kind, exact=exact, allow_outside=True)
        logger.info("degree %d: error %.6g", k, fit.error)
        if fit.error < best.error or (exact and fit.exact_error < best.exact_error):
            best = fit
        err = fit.exact_error if exact else fit.error
        if err <= eps:
            return fit
        k += 1


# ---------------------------------------------------------------------------
# explicit interpolation


def exact_interpolant(P: Polytope, obs):
    """Tangent field through every value observation, in exact arithmetic.

    sum_s L_s(x) W_s(x) / W_s(x_s) u_s, where L_s is a Lagrange-type product
    of squared distances and W_s multiplies the facet forms that do not
    vanish at x_s.
    """
    obs = list(obs)
    if any(o.op != "value" for o in obs):
        raise ObservationError("exact interpolation needs value observations")
    d = P.d
    pts = [tuple(to_rational(v) for v in o.x) for o in obs]
    us = [tuple(to_rational(v) for v in o.target) for o in obs]
    if len(set(pts)) != len(pts):
        raise ObservationError("observation points must be distinct")
    xs = [Polynomial.var(q, d) for q in range(d)]
    Ws = []
    for idx, (x, u) in enumerate(zip(pts, us)):
        vals = P.values(x)
        if any(v > 0 for v in vals):
            raise ObservationError(f"observation {idx} lies outside the domain")
        W = Polynomial.constant(1, d)
        for j, v in enumerate(vals):
            if v:
                W = W * P.h(j)
            elif sum((a * b for a, b in zip(P.normals[j], u)), mpq(0)):
                raise ObservationError(
                    f"observation {idx} lies on facet {j + 1} but its target is not tangent to it"
                )
        Ws.append(W)
    out = [Polynomial.zero(d) for _ in range(d)]
    for s, (x, u) in enumerate(zip(pts, us)):
        L = Polynomial.constant(1, d)
        for t, y in enumerate(pts):
            if t == s:
                continue
            dist = sum(((xq - yq) ** 2 for xq, yq in zip(xs, y)), Polynomial.zero(d))
            L = L * dist * (1 / sum(((a - b) ** 2 for a, b in zip(x, y)), mpq(0)))
        weight = L * Ws[s] * (1 / poly_eval(Ws[s], x))
        out = [acc + weight * uq for acc, uq in zip(out, u)]
    return tuple(out)
