"""Bases of polynomial vector fields tangent to the boundary of a polytope.

The pipeline homogenizes the polytope into its cone arrangement, computes
syzygies of the Jacobian tuple of the defining polynomial Q, extracts the
degree-k graded piece, strips the x0 direction with the Euler field and
dehomogenizes.  An independent construction solves the tangency conditions
directly as a linear system and serves as an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

from gmpy2 import mpq

from .arrangement import (
    Polytope,
    build_cone,
    facet_tangency_check,
    jacobian,
    validate_polytope,
    _pivot_of,
)
from .groebner import ModuleVector, free_resolution, syzygies_of_tuple
from .linalg import IncrementalEchelon, nullspace, rank
from .polycore import (
    GREVLEX,
    Polynomial,
    dehomogenize,
    monomials_of_degree,
    reduce_mod_linear,
    to_rational,
)

__all__ = [
    "TangentBasis",
    "euler_field",
    "cone_syzygies",
    "syzygy_degree_component",
    "psi_map",
    "phi_map",
    "tangent_basis",
    "dimension_by_resolution",
    "oracle_tangent_basis",
    "field_vector",
    "span_rank",
    "same_span",
    "in_span",
    "primitive_field",
]


def euler_field(nvars):
    """The radial field (x0, x1, ..., xd)."""
    return tuple(Polynomial.var(q, nvars) for q in range(nvars))


# ---------------------------------------------------------------------------
# field helpers


def primitive_field(fields):
    """Scale a tuple of polynomials to coprime integer coefficients.

    The first nonzero term (component order, then grevlex) gets a positive
    sign.
    """
    fields = tuple(fields)
    nv = fields[0].nvars
    # pack into one polynomial in an extra variable to reuse Polynomial.primitive
    packed = {}
    for q, f in enumerate(fields):
        for e, c in f.terms.items():
            packed[(len(fields) - q,) + e] = c
    if not packed:
        return fields
    prim = Polynomial(nv + 1, packed).primitive()
    scale = None
    for (e, c) in prim.terms.items():
        scale = c / packed[e]
        break
    return tuple(f * scale for f in fields)


def _degree_of(vec: ModuleVector):
    return max((p.degree for p in vec.entries if not p.is_zero()), default=None)


def field_vector(xi):
    """Coefficient map {(component, exponents): coef} of a field tuple."""
    out = {}
    for q, f in enumerate(xi):
        for e, c in f.terms.items():
            out[(q, e)] = c
    return out


def _matrix(fields_list):
    cols = {}
    vecs = [field_vector(f) for f in fields_list]
    for v in vecs:
        for t in v:
            cols.setdefault(t, len(cols))
    rows = []
    for v in vecs:
        row = [mpq(0)] * len(cols)
        for t, c in v.items():
            row[cols[t]] = c
        rows.append(row)
    return rows, len(cols)


def span_rank(fields_list):
    if not fields_list:
        return 0
    rows, n = _matrix(fields_list)
    return rank(rows, n) if n else 0


def same_span(a, b):
    """Exact span equality of two lists of field tuples."""
    ra, rb = span_rank(list(a)), span_rank(list(b))
    return ra == rb == span_rank(list(a) + list(b))


def in_span(xi, fields_list):
    return span_rank(list(fields_list)) == span_rank(list(fields_list) + [tuple(xi)])


# ---------------------------------------------------------------------------
# basis container


@dataclass
class TangentBasis:
    k: int
    d: int
    fields: list
    homogeneous_preimages: list | None = None
    source: str = "syzygy"

    @property
    def dim(self):
        return len(self.fields)

    def __len__(self):
        return len(self.fields)

    def combine(self, coefficients):
        """sum_j c_j * fields[j] with exact rational c_j."""
        out = [Polynomial.zero(self.d) for _ in range(self.d)]
        for c, xi in zip(coefficients, self.fields):
            c = to_rational(c)
            if not c:
                continue
            out = [a + f * c for a, f in zip(out, xi)]
        return tuple(out)

    def is_independent(self):
        return span_rank(self.fields) == len(self.fields)

    def is_tangent(self, P: Polytope):
        return all(all(v.tangent for v in facet_tangency_check(xi, P)) for xi in self.fields)

    def to_json(self):
        return {
            "k": self.k,
            "dim": self.dim,
            "fields": [[f.to_json() for f in xi] for xi in self.fields],
        }

    @classmethod
    def from_json(cls, data, d=None):
        fields = []
        for xi in data["fields"]:
            nv = d
            if nv is None:
                nv = next((len(f[0]["exps"]) for f in xi if f), len(xi))
            fields.append(tuple(Polynomial.from_json(f, nvars=nv) for f in xi))
        if d is None:
            d = len(fields[0]) if fields else int(data.get("d", 0))
        if "dim" in data and int(data["dim"]) != len(fields):
            raise ValueError(f"basis file declares dim {data['dim']} but lists {len(fields)} fields")
        return cls(k=int(data["k"]), d=d, fields=fields, source="file")


# ---------------------------------------------------------------------------
# syzygy pipeline


@dataclass(frozen=True)
class _ConeData:
    cone: object
    jac: tuple
    generators: tuple  # syzygy generators (ModuleVector), relative degrees below
    degrees: tuple
    zero_partials: tuple


@lru_cache(maxsize=64)
def cone_syzygies(P: Polytope, allow_degenerate=False):
    """Cone, Jacobian tuple and syzygy generators of J(Q) for P.

    Zero partial derivatives (only possible for degenerate arrangements,
    e.g. m = 0) contribute the corresponding unit vectors.
    """
    cone = build_cone(P)
    degenerate_ok = allow_degenerate or P.m == 0
    J = jacobian(cone, allow_degenerate=degenerate_ok)
    nv = P.d + 1
    zero = tuple(q for q, f in enumerate(J) if f.is_zero())
    nonzero = [q for q in range(nv) if q not in zero]
    gens, degs = [], []
    for q in zero:
        gens.append(ModuleVector([Polynomial.constant(1 if i == q else 0, nv) for i in range(nv)]))
        degs.append(0)
    if len(nonzero) > 1:
        for v in syzygies_of_tuple([J[q] for q in nonzero]):
            entries = [Polynomial.zero(nv)] * nv
            for pos, q in enumerate(nonzero):
                entries[q] = v.entries[pos]
            mv = ModuleVector(entries)
            gens.append(mv)
            degs.append(_degree_of(mv))
    return _ConeData(cone, tuple(J), tuple(gens), tuple(degs), zero)


def syzygy_degree_component(gens, k, degrees=None):
    """Basis of the degree-k piece of the module generated by ``gens``.

    Every generator of degree <= k is multiplied by all monomials of the
    complementary degree; a maximal independent subset is kept by exact
    incremental row reduction (pivots: lowest component, then largest
    grevlex monomial).
    """
    gens = list(gens)
    if degrees is None:
        degrees = [_degree_of(g) for g in gens]
    if not gens:
        return []
    nv = gens[0].nvars
    ech = IncrementalEchelon(key=lambda t: (-t[0], GREVLEX.key(t[1])))
    out = []
    for g, dg in zip(gens, degrees):
        if dg is None or dg > k:
            continue
        for mono in monomials_of_degree(nv, k - dg):
            cand = ModuleVector([p.mul_term(mono) for p in g.entries])
            if ech.add(cand.to_flat()):
                out.append(cand)
    return out


def psi_map(G):
    """(g_0..g_d) - (g_0 / x0) * xi_E; the result has zero x0 entry."""
    entries = list(G.entries if isinstance(G, ModuleVector) else G)
    nv = entries[0].nvars
    g0 = entries[0]
    if g0.is_zero():
        return tuple(entries)
    try:
        t = g0.exact_div_var(0)
    except ValueError:
        raise ValueError("x0 does not divide the first syzygy entry") from None
    euler = euler_field(nv)
    out = [e - t * x for e, x in zip(entries, euler)]
    assert out[0].is_zero()
    return tuple(out)


def phi_map(xi, Q: Polynomial):
    """Inverse of psi: [0, f1..fd] - xi[Q] / (deg Q * Q) * xi_E."""
    from .groebner import _reduce, _Elem, ModuleOrder  # exact division by Q

    entries = list(xi)
    nv = entries[0].nvars
    action = Polynomial.zero(nv)
    for q in range(nv):
        if entries[q]:
            action = action + entries[q] * Q.diff(q)
    order = ModuleOrder(GREVLEX, "top")
    qv = {(0, e): c for e, c in Q.terms.items()}
    lead = max(qv, key=order.key)
    rem, quot = _reduce({(0, e): c for e, c in action.terms.items()}, [_Elem(qv, lead)], order, track=True)
    if rem:
        raise ValueError("field is not a logarithmic derivation of Q")
    ratio = Polynomial._raw(nv, {e: c for (_, e), c in quot.items()}) * (mpq(1) / Q.degree)
    return tuple(e - ratio * x for e, x in zip(entries, euler_field(nv)))


def tangent_basis(P: Polytope, k: int, allow_degenerate=False, validate=True) -> TangentBasis:
    """R-basis of the tangent fields of degree <= k via Jacobian syzygies."""
    if k < 0:
        raise ValueError("degree bound must be non-negative")
    if validate:
        validate_polytope(P)
    data = cone_syzygies(P, allow_degenerate)
    homog = syzygy_degree_component(data.generators, k, data.degrees)
    fields = []
    for G in homog:
        psi = psi_map(G)
        fields.append(primitive_field(tuple(dehomogenize(f) for f in psi[1:])))
    return TangentBasis(k=k, d=P.d, fields=fields, homogeneous_preimages=homog)


@lru_cache(maxsize=64)
def _resolution(P: Polytope, allow_degenerate=False):
    data = cone_syzygies(P, allow_degenerate)
    nonzero = [f for f in data.jac if not f.is_zero()]
    return free_resolution(nonzero), len(data.zero_partials), nonzero[0].degree


def dimension_by_resolution(P: Polytope, k: int, allow_degenerate=False) -> int:
    """Alternating sum of Hilbert functions over a graded free resolution.

    dim = sum_{p>=2} (-1)^p sum_j C(d + k - a_{p,j}, d), with a_{p,j} the
    generator degrees measured so that a syzygy with degree-k entries has
    degree k.  Zero partials (degenerate arrangements) each add a free
    summand S.
    """
    res, nzero, m = _resolution(P, allow_degenerate)
    d = P.d
    total = nzero * comb(k + d, d) if k >= 0 else 0
    return total + res.hilbert_sum(k + m, start=2)


def resolution(P: Polytope, allow_degenerate=False):
    return _resolution(P, allow_degenerate)[0]


# ---------------------------------------------------------------------------
# linear-system oracle


def oracle_tangent_basis(P: Polytope, k: int) -> TangentBasis:
    """Tangent fields of degree <= k as the nullspace of the facet conditions.

    Unknowns are all coefficients of a generic degree-<=k field; each facet
    requires <xi, alpha_i> to vanish modulo h_i.  No Gröbner machinery.
    """
    d = P.d
    monos = [e for t in range(k + 1) for e in monomials_of_degree(d, t)]
    unknowns = [(q, e) for q in range(d) for e in monos]
    rows = []
    for i in range(P.m):
        h = P.h(i)
        piv = _pivot_of(P.normals[i])
        alpha = P.normals[i]
        reduced = {e: reduce_mod_linear(Polynomial.monomial(e), h, piv) for e in monos}
        eqs: dict = {}
        for col, (q, e) in enumerate(unknowns):
            a = alpha[q]
            if not a:
                continue
            for t, c in reduced[e].terms.items():
                eqs.setdefault(t, {})[col] = eqs.get(t, {}).get(col, 0) + a * c
        for t, coeffs in eqs.items():
            row = [mpq(0)] * len(unknowns)
            for col, c in coeffs.items():
                row[col] = c
            if any(row):
                rows.append(row)
    null = nullspace(rows, len(unknowns))
    fields = []
    for v in null:
        comps = [dict() for _ in range(d)]
        for (q, e), c in zip(unknowns, v):
            if c:
                comps[q][e] = c
        fields.append(primitive_field(tuple(Polynomial._raw(d, c) for c in comps)))
    return TangentBasis(k=k, d=d, fields=fields, source="oracle")
