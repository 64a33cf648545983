"""Polytopes in H-representation and their cone arrangements.

A polytope is ``{x : <alpha_i, x> + l_i <= 0, i = 1..m}``.  Its cone lives in
``d + 1`` variables with ``x0`` the homogenizing coordinate; the extra plane
``x0 = 0`` is always part of the arrangement.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpq

from .linalg import rank
from .polycore import Polynomial, divmod_linear, reduce_mod_linear, to_rational

logger = logging.getLogger(__name__)

DEFAULT_MAX_DENOMINATOR = 10**6


class PolytopeError(ValueError):
    """Invalid polytope data; ``report`` carries facet-level diagnostics."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DegenerateArrangementError(ValueError):
    """The cone hyperplanes do not meet only at the origin."""


# ---------------------------------------------------------------------------
# rationalization


def rationalize(value, max_denominator=DEFAULT_MAX_DENOMINATOR):
    """Exact rational for ints/strings; best approximation for floats.

    Floats go through a continued-fraction best approximation bounded by
    ``max_denominator``; each such choice is logged.
    """
    if isinstance(value, float):
        frac = Fraction(value).limit_denominator(max_denominator)
        q = mpq(frac.numerator, frac.denominator)
        logger.info("rationalized %r -> %s (denominator %d)", value, q, frac.denominator)
        return q
    return to_rational(value)


# ---------------------------------------------------------------------------
# polytope


@dataclass(frozen=True)
class Polytope:
    d: int
    normals: tuple = ()
    offsets: tuple = ()

    def __post_init__(self):
        normals = tuple(tuple(to_rational(a) for a in n) for n in self.normals)
        offsets = tuple(to_rational(l) for l in self.offsets)
        if len(normals) != len(offsets):
            raise PolytopeError("normals and offsets differ in length")
        for n in normals:
            if len(n) != self.d:
                raise PolytopeError(f"normal {n} is not of dimension {self.d}")
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "offsets", offsets)

    @classmethod
    def from_halfspaces(cls, halfspaces, d=None, max_denominator=DEFAULT_MAX_DENOMINATOR):
        """Build from (normal, offset) pairs; floats are rationalized."""
        normals, offsets = [], []
        for normal, offset in halfspaces:
            normals.append(tuple(rationalize(a, max_denominator) for a in normal))
            offsets.append(rationalize(offset, max_denominator))
        if d is None:
            if not normals:
                raise PolytopeError("dimension needed when there are no halfspaces")
            d = len(normals[0])
        return cls(d, tuple(normals), tuple(offsets))

    @property
    def m(self):
        return len(self.normals)

    def h(self, i):
        """Affine form h_i (0-based index) as a polynomial in x1..xd."""
        return Polynomial.linear(self.normals[i], self.offsets[i])

    def forms(self):
        return [self.h(i) for i in range(self.m)]

    def values(self, x):
        """Exact h_i(x) for every halfspace (rational or float x)."""
        if len(x) != self.d:
            raise ValueError(f"point of dimension {len(x)} in a {self.d}-dimensional polytope")
        exact = not any(isinstance(v, float) for v in x)
        pt = [to_rational(v) for v in x] if exact else [float(v) for v in x]
        out = []
        for a, l in zip(self.normals, self.offsets):
            if exact:
                out.append(sum((ai * xi for ai, xi in zip(a, pt)), mpq(0)) + l)
            else:
                out.append(sum(float(ai) * xi for ai, xi in zip(a, pt)) + float(l))
        return out

    def contains(self, x, tol=0):
        return all(v <= tol for v in self.values(x))

    def scaled(self, factors):
        """Same polytope with halfspace i multiplied by factors[i] > 0."""
        fs = [to_rational(f) for f in factors]
        if any(f <= 0 for f in fs):
            raise ValueError("scaling factors must be positive")
        return Polytope(
            self.d,
            tuple(tuple(a * f for a in n) for n, f in zip(self.normals, fs)),
            tuple(l * f for l, f in zip(self.offsets, fs)),
        )

    def to_json(self):
        return {
            "d": self.d,
            "halfspaces": [
                {"normal": [str(a) for a in n], "offset": str(l)}
                for n, l in zip(self.normals, self.offsets)
            ],
        }

    @classmethod
    def from_json(cls, data, max_denominator=None):
        if max_denominator is None:
            max_denominator = data.get("max_denominator", DEFAULT_MAX_DENOMINATOR)
        hs = [(h["normal"], h["offset"]) for h in data.get("halfspaces", [])]
        return cls.from_halfspaces(hs, d=int(data["d"]), max_denominator=max_denominator)


# ---------------------------------------------------------------------------
# exact LP (two-phase simplex, Bland's rule)


def _pivot(T, r, c):
    inv = 1 / T[r][c]
    T[r] = [x * inv for x in T[r]]
    for i in range(len(T)):
        if i != r and T[i][c]:
            f = T[i][c]
            T[i] = [a - f * b for a, b in zip(T[i], T[r])]


def _run_simplex(T, basis, cost, allowed):
    """Maximize cost . y over the tableau; returns 'optimal' or 'unbounded'."""
    ncols = len(T[0]) - 1
    while True:
        entering = None
        for j in range(ncols):
            if j not in allowed or j in basis:
                continue
            red = cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(len(T)))
            if red > 0:
                entering = j
                break
        if entering is None:
            return "optimal"
        best = None
        for i in range(len(T)):
            if T[i][entering] > 0:
                ratio = T[i][-1] / T[i][entering]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(T, best[1], entering)
        basis[best[1]] = entering


def linprog_max(c, A, b):
    """Maximize c . x subject to A x <= b with x free, exactly over Q.

    Returns (status, value, x) with status in {"optimal", "unbounded",
    "infeasible"}.
    """
    c = [to_rational(v) for v in c]
    A = [[to_rational(v) for v in row] for row in A]
    b = [to_rational(v) for v in b]
    n, m = len(c), len(A)
    # columns: u (n), v (n), slack (m), artificial (m); x = u - v
    nc = 2 * n + 2 * m
    T = []
    for i in range(m):
        sign = -1 if b[i] < 0 else 1
        row = [mpq(0)] * (nc + 1)
        for j in range(n):
            row[j] = sign * A[i][j]
            row[n + j] = -sign * A[i][j]
        row[2 * n + i] = mpq(sign)
        row[2 * n + m + i] = mpq(1)
        row[-1] = sign * b[i]
        T.append(row)
    basis = [2 * n + m + i for i in range(m)]
    art = set(range(2 * n + m, nc))
    cost1 = [mpq(0)] * nc
    for j in art:
        cost1[j] = mpq(-1)
    _run_simplex(T, basis, cost1, set(range(nc)))
    if sum(T[i][-1] for i in range(m) if basis[i] in art) > 0:
        return "infeasible", None, None
    # drive zero-level artificials out of the basis
    keep = []
    for i in range(m):
        if basis[i] in art:
            j = next((j for j in range(2 * n + m) if T[i][j]), None)
            if j is None:
                continue
            _pivot(T, i, j)
            basis[i] = j
        keep.append(i)
    T = [T[i] for i in keep]
    basis = [basis[i] for i in keep]
    cost2 = [mpq(0)] * nc
    for j in range(n):
        cost2[j] = c[j]
        cost2[n + j] = -c[j]
    status = _run_simplex(T, basis, cost2, set(range(2 * n + m)))
    if status == "unbounded":
        return "unbounded", None, None
    y = [mpq(0)] * nc
    for i, j in enumerate(basis):
        y[j] = T[i][-1]
    x = [y[j] - y[n + j] for j in range(n)]
    return "optimal", sum((ci * xi for ci, xi in zip(c, x)), mpq(0)), x


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    valid: bool = True
    redundant: list = field(default_factory=list)
    problems: list = field(default_factory=list)
    lp_optima: dict = field(default_factory=dict)

    def lines(self):
        out = list(self.problems)
        for j in self.redundant:
            out.append(f"halfspace {j + 1} is redundant (max h_{j + 1} over the others = {self.lp_optima.get(j)})")
        return out


def _proportional(u, v):
    # exact proportionality test for two nonzero rational vectors
    piv = next(i for i, a in enumerate(u) if a)
    if not v[piv]:
        return False
    r = v[piv] / u[piv]
    return all(b == r * a for a, b in zip(u, v))


def validate_polytope(P: Polytope, check_redundancy=True, raise_on_error=True):
    """Check normals, proportional halfspaces, interior and redundancy.

    A halfspace j is redundant when max h_j over the other halfspaces is
    <= 0: dropping it leaves the region unchanged.
    """
    rep = ValidationReport()
    for i, n in enumerate(P.normals):
        if not any(n):
            rep.problems.append(f"halfspace {i + 1} has a zero normal")
    if not rep.problems:
        rows = [n + (l,) for n, l in zip(P.normals, P.offsets)]
        for j in range(P.m):
            for i in range(j):
                if _proportional(rows[i], rows[j]):
                    rep.problems.append(f"halfspaces {i + 1} and {j + 1} are proportional")
    if not rep.problems and P.m:
        # interior point: maximize t with h_i(x) + t <= 0, t <= 1
        A = [list(n) + [mpq(1)] for n in P.normals] + [[mpq(0)] * P.d + [mpq(1)]]
        b = [-l for l in P.offsets] + [mpq(1)]
        status, val, _ = linprog_max([mpq(0)] * P.d + [mpq(1)], A, b)
        if status == "infeasible" or val <= 0:
            rep.problems.append("polytope has empty interior")
    if not rep.problems and check_redundancy:
        for j in range(P.m):
            A = [list(P.normals[i]) for i in range(P.m) if i != j]
            b = [-P.offsets[i] for i in range(P.m) if i != j]
            status, val, _ = linprog_max(P.normals[j], A, b)
            if status == "unbounded":
                rep.lp_optima[j] = "+inf"
                continue
            val = val + P.offsets[j]
            rep.lp_optima[j] = val
            if val <= 0:
                rep.redundant.append(j)
    rep.valid = not rep.problems and not rep.redundant
    if raise_on_error and not rep.valid:
        raise PolytopeError("; ".join(rep.lines()), rep)
    return rep


def bounding_box(P: Polytope):
    """Exact [lo, hi] per coordinate, or None when P is unbounded."""
    A = [list(n) for n in P.normals]
    b = [-l for l in P.offsets]
    box = []
    for q in range(P.d):
        e = [mpq(0)] * P.d
        e[q] = mpq(1)
        st_hi, hi, _ = linprog_max(e, A, b)
        st_lo, lo, _ = linprog_max([-v for v in e], A, b)
        if st_hi != "optimal" or st_lo != "optimal":
            return None
        box.append((-lo, hi))
    return box


# ---------------------------------------------------------------------------
# cone arrangement


@dataclass(frozen=True)
class ConeArrangement:
    d: int
    forms: tuple  # hat h_0 = x0, hat h_1..hat h_m, each primitive
    Q: Polynomial

    @property
    def m(self):
        return len(self.forms) - 1

    def coefficient_matrix(self):
        return [[f.coefficient(tuple(1 if i == q else 0 for i in range(self.d + 1)))
                 for q in range(self.d + 1)] for f in self.forms]

    def is_essential(self):
        return rank(self.coefficient_matrix(), self.d + 1) == self.d + 1


def cone_form(P: Polytope, i):
    """hat h_i = l_i x0 + sum alpha_q x_q, content-normalized."""
    return Polynomial.linear((P.offsets[i],) + P.normals[i]).primitive()


def build_cone(P: Polytope) -> ConeArrangement:
    forms = [Polynomial.var(0, P.d + 1)] + [cone_form(P, i) for i in range(P.m)]
    seen = {}
    for idx, f in enumerate(forms):
        if f in seen:
            raise PolytopeError(
                f"cone forms {seen[f]} and {idx} are proportional; Q would not be squarefree"
            )
        seen[f] = idx
    Q = Polynomial.constant(1, P.d + 1)
    for f in forms:
        Q = Q * f
    return ConeArrangement(P.d, tuple(forms), Q)


@dataclass(frozen=True)
class JacobianTuple:
    partials: tuple

    def __len__(self):
        return len(self.partials)

    def __iter__(self):
        return iter(self.partials)

    def __getitem__(self, i):
        return self.partials[i]


def euler_identity_holds(Q: Polynomial) -> bool:
    total = Polynomial.zero(Q.nvars)
    for q in range(Q.nvars):
        total = total + Polynomial.var(q, Q.nvars) * Q.diff(q)
    return total == Q * Q.degree


def jacobian(C: ConeArrangement, allow_degenerate=False) -> JacobianTuple:
    """(d_0 Q, ..., d_d Q); requires the cone planes to meet only at 0."""
    if not allow_degenerate and not C.is_essential():
        raise DegenerateArrangementError(
            "cone hyperplanes share a nonzero common point; "
            "the partial derivatives need not minimally generate J(Q)"
        )
    parts = tuple(C.Q.diff(q) for q in range(C.d + 1))
    if not euler_identity_holds(C.Q):
        raise AssertionError("Euler identity failed")
    return JacobianTuple(parts)


# ---------------------------------------------------------------------------
# tangency


@dataclass(frozen=True)
class FacetVerdict:
    index: int  # 0-based halfspace index
    tangent: bool
    residue: Polynomial  # <xi, alpha_i> restricted to H_i (zero when tangent)


def _pivot_of(normal):
    return next(q for q, a in enumerate(normal) if a)


def normal_component(xi, normal):
    """<xi, alpha> as a polynomial."""
    nv = xi[0].nvars
    total = Polynomial.zero(nv)
    for f, a in zip(xi, normal):
        if a and f:
            total = total + f * a
    return total


def facet_tangency_check(xi, P: Polytope):
    """Exact per-facet verdict: is <xi, alpha_i> divisible by h_i?"""
    xi = list(xi)
    if len(xi) != P.d:
        raise ValueError(f"field has {len(xi)} components, polytope dimension is {P.d}")
    out = []
    for i in range(P.m):
        g = normal_component(xi, P.normals[i])
        res = reduce_mod_linear(g, P.h(i), _pivot_of(P.normals[i])) if g else g
        out.append(FacetVerdict(i, res.is_zero(), res))
    return out


def is_tangent(xi, P: Polytope) -> bool:
    return all(v.tangent for v in facet_tangency_check(xi, P))


def facet_quotient(xi, P: Polytope, i):
    """g with <xi, alpha_i> = h_i * g; raises if xi is not tangent to facet i."""
    g = normal_component(list(xi), P.normals[i])
    q, r = divmod_linear(g, P.h(i), _pivot_of(P.normals[i]))
    if not r.is_zero():
        raise ValueError(f"field is not tangent to facet {i + 1}")
    return q
