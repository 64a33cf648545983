"""Gröbner bases, Schreyer syzygies and graded free resolutions.

Ideals and submodules of a free module S^r are handled uniformly.  Internally
a module element is a flat ``dict`` mapping ``(component, exponents)`` to an
``mpq`` coefficient; an ideal is simply the rank-1 case.  The public surface
accepts :class:`~tangentfit.polycore.Polynomial` (rank 1) or
:class:`ModuleVector` and returns the same kind.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from operator import add

from gmpy2 import mpq

from .polycore import GREVLEX, MonomialOrder, Polynomial

logger = logging.getLogger(__name__)

__all__ = [
    "ModuleVector",
    "ModuleOrder",
    "FreeResolution",
    "normal_form",
    "buchberger",
    "is_groebner",
    "schreyer_syzygies",
    "syzygies_of_tuple",
    "free_resolution",
    "dot",
]


# ---------------------------------------------------------------------------
# flat sparse vectors


def _mono_mul(a, b):
    return tuple(map(add, a, b))


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _mono_div(b, a):
    return tuple(y - x for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _axpy(target, coef, mono, vec, skip=None):
    """target -= coef * mono * vec, in place; returns the list of touched terms."""
    touched = []
    for (c, e), v in vec.items():
        t = (c, _mono_mul(e, mono))
        if t == skip:
            continue
        old = target.get(t)
        new = -coef * v if old is None else old - coef * v
        if new:
            target[t] = new
            touched.append(t)
        elif old is not None:
            del target[t]
    return touched


def _scale(vec, coef, mono=None):
    if mono is None:
        return {t: v * coef for t, v in vec.items()}
    return {(c, _mono_mul(e, mono)): v * coef for (c, e), v in vec.items()}


def _vec_add_into(target, vec, coef=1):
    for t, v in vec.items():
        new = target.get(t, 0) + coef * v
        if new:
            target[t] = new
        else:
            target.pop(t, None)


# ---------------------------------------------------------------------------
# public value types


class ModuleVector:
    """Element of a graded free module S^r.

    ``shifts[q]`` is the degree attached to the q-th basis vector, so a
    homogeneous element has ``deg(entries[q]) + shifts[q]`` constant over its
    nonzero entries.
    """

    __slots__ = ("entries", "shifts")

    def __init__(self, entries, shifts=None):
        entries = list(entries)
        if not entries:
            raise ValueError("ModuleVector needs at least one entry")
        nv = entries[0].nvars
        if any(p.nvars != nv for p in entries):
            raise ValueError("ModuleVector entries must share the variable count")
        self.entries = tuple(entries)
        self.shifts = tuple(shifts) if shifts is not None else (0,) * len(entries)
        if len(self.shifts) != len(self.entries):
            raise ValueError("shift list length differs from rank")

    @property
    def rank(self):
        return len(self.entries)

    @property
    def nvars(self):
        return self.entries[0].nvars

    def is_zero(self):
        return all(p.is_zero() for p in self.entries)

    def degree(self):
        degs = {p.degree + s for p, s in zip(self.entries, self.shifts) if not p.is_zero()}
        if not degs:
            return float("-inf")
        if len(degs) > 1:
            raise ValueError("ModuleVector is not homogeneous")
        return degs.pop()

    def is_homogeneous(self):
        if not all(p.is_homogeneous() for p in self.entries):
            return False
        degs = {p.degree + s for p, s in zip(self.entries, self.shifts) if not p.is_zero()}
        return len(degs) <= 1

    def dot(self, polys):
        if len(polys) != self.rank:
            raise ValueError("rank mismatch in dot product")
        total = Polynomial.zero(self.nvars)
        for a, b in zip(self.entries, polys):
            if a and b:
                total = total + a * b
        return total

    def __add__(self, other):
        return ModuleVector([a + b for a, b in zip(self.entries, other.entries)], self.shifts)

    def __sub__(self, other):
        return ModuleVector([a - b for a, b in zip(self.entries, other.entries)], self.shifts)

    def __mul__(self, p):
        return ModuleVector([e * p for e in self.entries], self.shifts)

    __rmul__ = __mul__

    def __neg__(self):
        return ModuleVector([-e for e in self.entries], self.shifts)

    def __eq__(self, other):
        return isinstance(other, ModuleVector) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return "[" + ", ".join(str(e) for e in self.entries) + "]"

    # conversions to the internal flat form
    def to_flat(self):
        out = {}
        for q, p in enumerate(self.entries):
            for e, c in p.terms.items():
                out[(q, e)] = c
        return out

    @classmethod
    def from_flat(cls, vec, rank, nvars, shifts=None):
        parts = [dict() for _ in range(rank)]
        for (q, e), c in vec.items():
            parts[q][e] = c
        return cls([Polynomial._raw(nvars, p) for p in parts], shifts)


def dot(v: ModuleVector, polys) -> Polynomial:
    """Exact dot product v . polys."""
    return v.dot(list(polys))


class ModuleOrder:
    """Term order on module monomials ``m * e_q``.

    ``strategy`` is ``"top"`` (term over position), ``"pot"`` (position over
    term) or ``"schreyer"``.  A Schreyer order compares ``m * e_i`` through
    ``m * LT(g_i)`` in the previous order; ties go to the lower index.
    """

    def __init__(self, base: MonomialOrder = GREVLEX, strategy: str = "top",
                 shifts=None, prev: "ModuleOrder | None" = None, leads=None):
        if strategy not in ("top", "pot", "schreyer"):
            raise ValueError(f"unknown module order strategy {strategy!r}")
        if strategy == "schreyer" and (prev is None or leads is None):
            raise ValueError("a Schreyer order needs the previous order and leading terms")
        self.base = base
        self.strategy = strategy
        self.shifts = tuple(shifts) if shifts is not None else None
        self.prev = prev
        self.leads = list(leads) if leads is not None else None
        self._cache: dict = {}

    @classmethod
    def schreyer(cls, prev: "ModuleOrder", leads):
        return cls(prev.base, "schreyer", prev=prev, leads=leads)

    def shift(self, comp):
        return self.shifts[comp] if self.shifts else 0

    def key(self, term):
        k = self._cache.get(term)
        if k is not None:
            return k
        comp, exps = term
        if self.strategy == "top":
            k = (sum(exps) + self.shift(comp), self.base.key(exps), -comp)
        elif self.strategy == "pot":
            k = (-comp, self.base.key(exps))
        else:
            lc, le = self.leads[comp]
            k = (self.prev.key((lc, _mono_mul(le, exps))), -comp)
        self._cache[term] = k
        return k

    def term_degree(self, term, degrees):
        """Graded degree of a term given per-component generator degrees."""
        comp, exps = term
        return sum(exps) + degrees[comp]


# ---------------------------------------------------------------------------
# Gröbner basis element bookkeeping


@dataclass
class _Elem:
    vec: dict
    lead: tuple
    rep: dict | None = None  # combination of the input generators, flat form


def _lead(vec, order):
    return max(vec, key=order.key)


def _reduce(f, G, order, track=False, full=True):
    """Divide flat vector f by the elements of G.

    Returns (remainder, quotient) where quotient is a flat vector over the
    indices of G (``None`` unless ``track``).  ``f - remainder`` equals
    ``sum quotient[i] * G[i]``.
    """
    f = dict(f)
    rem = {}
    quot = {} if track else None
    by_comp: dict = {}
    for i, g in enumerate(G):
        by_comp.setdefault(g.lead[0], []).append(i)
    heap = [(_neg(order.key(t)), t) for t in f]
    heapq.heapify(heap)
    while heap:
        _, t = heapq.heappop(heap)
        c = f.pop(t, None)
        if c is None:
            continue
        comp, exps = t
        hit = None
        for i in by_comp.get(comp, ()):
            if _divides(G[i].lead[1], exps):
                hit = i
                break
        if hit is None:
            rem[t] = c
            if not full:
                # stop at the first irreducible leading term
                rem.update(f)
                return rem, quot
            continue
        g = G[hit]
        mono = _mono_div(exps, g.lead[1])
        coef = c / g.vec[g.lead]
        for nt in _axpy(f, coef, mono, g.vec, skip=t):
            heapq.heappush(heap, (_neg(order.key(nt)), nt))
        if track:
            qt = (hit, mono)
            v = quot.get(qt, 0) + coef
            if v:
                quot[qt] = v
            else:
                quot.pop(qt, None)
    return rem, quot


class _Neg:
    """Wrapper inverting comparison, so a min-heap pops the largest key."""

    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __lt__(self, other):
        return self.k > other.k

    def __eq__(self, other):
        return self.k == other.k


def _neg(k):
    return _Neg(k)


def _spair(gi, gj, order):
    """S-vector of two elements whose leading terms share a component."""
    li, lj = gi.lead[1], gj.lead[1]
    l = _lcm(li, lj)
    mi, mj = _mono_div(l, li), _mono_div(l, lj)
    ci, cj = 1 / gi.vec[gi.lead], 1 / gj.vec[gj.lead]
    s = _scale(gi.vec, ci, mi)
    _axpy(s, cj, mj, gj.vec)
    return s, (mi, ci), (mj, cj), l


def _combine_rep(parts):
    """Sum of coef * mono * rep over (coef, mono, rep) triples."""
    out: dict = {}
    for coef, mono, rep in parts:
        for (c, e), v in rep.items():
            t = (c, _mono_mul(e, mono))
            nv = out.get(t, 0) + coef * v
            if nv:
                out[t] = nv
            else:
                out.pop(t, None)
    return out


def _rep_from_quot(quot, G):
    parts = [(c, mono, G[i].rep) for (i, mono), c in quot.items()]
    return _combine_rep(parts)


def _make_monic(elem, order):
    c = elem.vec[elem.lead]
    if c == 1:
        return elem
    inv = 1 / c
    return _Elem(_scale(elem.vec, inv), elem.lead,
                 None if elem.rep is None else _scale(elem.rep, inv))


def _buchberger_flat(gens, order, rank, track=False):
    """Reduced monic Gröbner basis of flat vectors (list of _Elem)."""
    G: list = []
    for idx, v in enumerate(gens):
        if not v:
            continue
        rep = {(idx, (0,) * len(next(iter(v))[1])): mpq(1)} if track else None
        G.append(_make_monic(_Elem(dict(v), _lead(v, order), rep), order))
    if not G:
        return []
    pairs = set()
    for j in range(len(G)):
        for i in range(j):
            if G[i].lead[0] == G[j].lead[0]:
                pairs.add((i, j))
    shifts = order.shifts

    def pair_key(p):
        l = _lcm(G[p[0]].lead[1], G[p[1]].lead[1])
        comp = G[p[0]].lead[0]
        deg = sum(l) + (shifts[comp] if shifts else 0)
        return (deg, order.key((comp, l)), p)

    while pairs:
        p = min(pairs, key=pair_key)
        pairs.discard(p)
        i, j = p
        gi, gj = G[i], G[j]
        l = _lcm(gi.lead[1], gj.lead[1])
        comp = gi.lead[0]
        if rank == 1 and l == _mono_mul(gi.lead[1], gj.lead[1]):
            logger.debug("pair (%d,%d) lcm=%s reduced_to=zero", i, j, _fmt_mono(l))
            continue
        if _chain_skip(G, pairs, i, j, comp, l):
            logger.debug("pair (%d,%d) lcm=%s reduced_to=zero", i, j, _fmt_mono(l))
            continue
        s, (mi, ci), (mj, cj), _ = _spair(gi, gj, order)
        rem, quot = _reduce(s, G, order, track=track)
        if not rem:
            logger.debug("pair (%d,%d) lcm=%s reduced_to=zero", i, j, _fmt_mono(l))
            continue
        rep = None
        if track:
            rep = _combine_rep([(ci, mi, gi.rep), (-cj, mj, gj.rep)])
            _vec_add_into(rep, _rep_from_quot(quot, G), -1)
        new = _make_monic(_Elem(rem, _lead(rem, order), rep), order)
        k = len(G)
        logger.debug("pair (%d,%d) lcm=%s reduced_to=new gen %d", i, j, _fmt_mono(l), k)
        G.append(new)
        for a in range(k):
            if G[a].lead[0] == new.lead[0]:
                pairs.add((a, k))
    return _interreduce(G, order, track)


def _chain_skip(G, pairs, i, j, comp, l):
    for k, g in enumerate(G):
        if k == i or k == j or g.lead[0] != comp:
            continue
        if not _divides(g.lead[1], l):
            continue
        if (min(i, k), max(i, k)) in pairs or (min(j, k), max(j, k)) in pairs:
            continue
        return True
    return False


def _interreduce(G, order, track):
    # minimalize: drop elements whose leading term is a multiple of another's
    keep = []
    for idx, g in sorted(enumerate(G), key=lambda t: order.key(t[1].lead)):
        if any(h.lead[0] == g.lead[0] and _divides(h.lead[1], g.lead[1]) for h in keep):
            continue
        keep.append(g)
    out = []
    for idx, g in enumerate(keep):
        others = keep[:idx] + keep[idx + 1:]
        rem, quot = _reduce(g.vec, others, order, track=track)
        rep = None
        if track:
            rep = dict(g.rep)
            _vec_add_into(rep, _rep_from_quot(quot, others), -1)
        out.append(_make_monic(_Elem(rem, _lead(rem, order), rep), order))
    final = out
    final.sort(key=lambda g: order.key(g.lead), reverse=True)
    return final


def _fmt_mono(e):
    parts = [f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k]
    return "*".join(parts) or "1"


# ---------------------------------------------------------------------------
# conversions between public and flat forms


def _to_flat(x):
    if isinstance(x, Polynomial):
        return {(0, e): c for e, c in x.terms.items()}
    if isinstance(x, ModuleVector):
        return x.to_flat()
    raise TypeError(f"expected Polynomial or ModuleVector, got {type(x).__name__}")


def _kind(items):
    items = list(items)
    if not items:
        raise ValueError("empty generator list")
    first = items[0]
    if isinstance(first, Polynomial):
        nv = first.nvars
        for p in items:
            if not isinstance(p, Polynomial) or p.nvars != nv:
                raise ValueError("generators must share kind and variable count")
        return "poly", 1, nv, None
    if isinstance(first, ModuleVector):
        r, nv = first.rank, first.nvars
        for v in items:
            if not isinstance(v, ModuleVector) or v.rank != r or v.nvars != nv:
                raise ValueError("rank mismatch between module elements")
        return "module", r, nv, first.shifts
    raise TypeError(f"expected Polynomial or ModuleVector, got {type(first).__name__}")


def _from_flat(vec, kind, rank, nvars, shifts):
    if kind == "poly":
        return Polynomial._raw(nvars, {e: c for (_, e), c in vec.items()})
    return ModuleVector.from_flat(vec, rank, nvars, shifts)


def _default_order(kind, shifts, base=GREVLEX):
    if kind == "poly":
        return ModuleOrder(base, "top")
    return ModuleOrder(base, "top", shifts=shifts)


# ---------------------------------------------------------------------------
# public operations


def normal_form(f, G, order: ModuleOrder | None = None):
    """Remainder of f on division by G (fully reduced)."""
    kind, rank, nv, shifts = _kind([f] + list(G))
    order = order or _default_order(kind, shifts)
    elems = []
    for g in G:
        v = _to_flat(g)
        if v:
            elems.append(_Elem(v, _lead(v, order)))
    rem, _ = _reduce(_to_flat(f), elems, order)
    return _from_flat(rem, kind, rank, nv, shifts)


def buchberger(gens, order: ModuleOrder | None = None):
    """Reduced Gröbner basis (monic elements, sorted by decreasing leading term)."""
    gens = list(gens)
    if not gens:
        return []
    kind, rank, nv, shifts = _kind(gens)
    order = order or _default_order(kind, shifts)
    G = _buchberger_flat([_to_flat(g) for g in gens], order, rank)
    return [_from_flat(g.vec, kind, rank, nv, shifts) for g in G]


def is_groebner(G, order: ModuleOrder | None = None) -> bool:
    """Audit: every S-pair of G reduces to zero modulo G."""
    G = [g for g in G if not (g.is_zero() if hasattr(g, "is_zero") else False)]
    if not G:
        return True
    kind, rank, nv, shifts = _kind(G)
    order = order or _default_order(kind, shifts)
    elems = [_Elem(_to_flat(g), None) for g in G]
    for e in elems:
        e.lead = _lead(e.vec, order)
    for j in range(len(elems)):
        for i in range(j):
            if elems[i].lead[0] != elems[j].lead[0]:
                continue
            s, *_ = _spair(elems[i], elems[j], order)
            rem, _ = _reduce(s, elems, order)
            if rem:
                return False
    return True


@dataclass
class SyzygyResult:
    """Schreyer syzygies of a Gröbner basis, with the induced order."""

    syzygies: list  # flat vectors over S^{len(basis)}
    order: ModuleOrder  # Schreyer order on S^{len(basis)}


def _schreyer_flat(G, order):
    """Schreyer syzygies of the Gröbner basis G (list of _Elem).

    Only pairs whose leading syzygy monomial is minimal are kept; the
    result is a Gröbner basis for the induced Schreyer order.
    """
    sorder = ModuleOrder.schreyer(order, [g.lead for g in G])
    syz = []
    for i, gi in enumerate(G):
        cands = []
        for j in range(i + 1, len(G)):
            gj = G[j]
            if gj.lead[0] != gi.lead[0]:
                continue
            l = _lcm(gi.lead[1], gj.lead[1])
            cands.append((_mono_div(l, gi.lead[1]), j))
        minimal = []
        for m, j in sorted(cands, key=lambda t: (sum(t[0]), t[1])):
            if any(_divides(m2, m) for m2, _ in minimal):
                continue
            minimal.append((m, j))
        for _, j in minimal:
            s, (mi, ci), (mj, cj), _ = _spair(gi, G[j], order)
            rem, quot = _reduce(s, G, order, track=True)
            if rem:
                raise ValueError("input to Schreyer syzygies is not a Gröbner basis")
            v = {(i, mi): ci}
            _vec_add_into(v, {(j, mj): cj}, -1)
            _vec_add_into(v, quot, -1)
            syz.append(v)
    return syz, sorder


def _sort_for_schreyer(elems):
    # same component: leading monomials in decreasing lex order, which keeps
    # the Schreyer resolution within the Hilbert syzygy bound
    return sorted(elems, key=lambda g: (g.lead[0], tuple(-x for x in g.lead[1])))


def schreyer_syzygies(G, order: ModuleOrder | None = None):
    """Schreyer syzygies of a Gröbner basis G.

    Returns ModuleVectors in S^len(G), each satisfying ``s . G = 0``.
    """
    G = list(G)
    if not G:
        return []
    kind, rank, nv, shifts = _kind(G)
    order = order or _default_order(kind, shifts)
    elems = []
    for g in G:
        v = _to_flat(g)
        if not v:
            raise ValueError("zero element in Gröbner basis")
        elems.append(_Elem(v, _lead(v, order)))
    syz, _ = _schreyer_flat(elems, order)
    degs = [_elem_degree(e, shifts if kind == "module" else None) for e in elems]
    return [ModuleVector.from_flat(s, len(G), nv, degs) for s in syz]


def _elem_degree(elem, shifts):
    comp, exps = elem.lead
    return sum(exps) + (shifts[comp] if shifts else 0)


def _syzygies_flat(gens, order, rank, nvars):
    """Generators of Syz(gens) as flat vectors over S^len(gens).

    Gröbner basis with transcripts, Schreyer syzygies of the basis lifted
    through the change-of-basis matrix, plus the relations expressing each
    input through the basis.
    """
    G = _buchberger_flat(gens, order, rank, track=True)
    G = _sort_for_schreyer(G)
    syz, _ = _schreyer_flat(G, order)
    out = []
    for s in syz:
        lifted = _rep_from_quot(s, G)
        if lifted:
            out.append(lifted)
    zero = (0,) * nvars
    for idx, f in enumerate(gens):
        rem, quot = _reduce(f, G, order, track=True)
        assert not rem
        v = {(idx, zero): mpq(1)}
        _vec_add_into(v, _rep_from_quot(quot, G), -1)
        if v:
            out.append(v)
    return _dedupe(out, order)


def _dedupe(vecs, order):
    seen = set()
    out = []
    for v in vecs:
        lt = _lead(v, order)
        c = v[lt]
        key = frozenset((t, x / c) for t, x in v.items())
        if key in seen:
            continue
        seen.add(key)
        out.append(v)
    return out


def syzygies_of_tuple(F):
    """Generators of the syzygy module {v : v . F = 0} of a polynomial tuple.

    The i-th component carries grade shift ``deg F[i]``.
    """
    F = list(F)
    if not F:
        raise ValueError("empty tuple")
    if any(f.is_zero() for f in F):
        raise ValueError("tuple contains a zero polynomial")
    nv = F[0].nvars
    if any(f.nvars != nv for f in F):
        raise ValueError("variable-count mismatch")
    order = ModuleOrder(GREVLEX, "top")
    flat = _syzygies_flat([_to_flat(f) for f in F], order, 1, nv)
    shifts = [f.degree for f in F]
    return [ModuleVector.from_flat(v, len(F), nv, shifts) for v in flat]


@dataclass
class FreeResolution:
    """Graded free resolution ``... -> N_2 -> N_1 -> S``.

    ``maps[p]`` is the matrix of phi_{p+1} stored column by column (each
    column a ModuleVector in the target module); ``degrees[p]`` lists the
    degrees of the generators of N_{p+1}.
    """

    nvars: int
    maps: list = field(default_factory=list)
    degrees: list = field(default_factory=list)

    @property
    def length(self):
        return len(self.maps)

    def betti_degrees(self, p):
        """Generator degrees of N_p (p >= 1)."""
        return list(self.degrees[p - 1])

    def relative_degrees(self, p):
        """Degrees of N_p generators measured from the N_1 grading.

        For the Jacobian this reports syzygy degrees in the convention where
        a relation with degree-k entries has degree k.
        """
        base = min(self.degrees[0])
        return [a - base for a in self.degrees[p - 1]]

    def compose_is_zero(self, p):
        """Check phi_p . phi_{p+1} == 0 exactly (p >= 1)."""
        if p >= len(self.maps):
            return True
        if p == 0:
            return True
        target = self.maps[p - 1]
        for col in self.maps[p]:
            acc = None
            for a, c in zip(col.entries, target):
                if a.is_zero():
                    continue
                term = c * a
                acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero():
                return False
        return True

    def hilbert_sum(self, t, start=2):
        """sum_{p>=start} (-1)^p sum_j dim S(-a_{p,j})_t."""
        from math import comb

        n = self.nvars
        total = 0
        for p in range(start, len(self.degrees) + 1):
            sign = -1 if p % 2 else 1
            for a in self.degrees[p - 1]:
                s = t - a
                if s >= 0:
                    total += sign * comb(s + n - 1, n - 1)
        return total


def free_resolution(F, max_length=None):
    """Schreyer resolution of S/(F) starting from the tuple F itself.

    N_1 = S^len(F) maps onto F; N_2 is a Gröbner basis of Syz(F); every later
    step takes Schreyer syzygies in the induced order until the module is 0.
    """
    F = list(F)
    if not F or any(f.is_zero() for f in F):
        raise ValueError("resolution input must be a nonempty tuple of nonzero polynomials")
    if not all(f.is_homogeneous() for f in F):
        raise ValueError("resolution input must be homogeneous")
    nv = F[0].nvars
    res = FreeResolution(nvars=nv)
    res.maps.append(list(F))
    degs1 = [f.degree for f in F]
    res.degrees.append(degs1)

    torder = ModuleOrder(GREVLEX, "top")
    syz = _syzygies_flat([_to_flat(f) for f in F], torder, 1, nv)
    if not syz:
        return res
    order = ModuleOrder(GREVLEX, "top", shifts=degs1)
    G = _buchberger_flat(syz, order, len(F))
    G = _sort_for_schreyer(G)
    prev_degs = degs1
    rank = len(F)
    while G:
        degs = [_elem_degree(g, prev_degs) for g in G]
        res.maps.append([ModuleVector.from_flat(g.vec, rank, nv, prev_degs) for g in G])
        res.degrees.append(degs)
        if max_length is not None and len(res.maps) >= max_length:
            break
        syz, sorder = _schreyer_flat(G, order)
        nxt = [_Elem(v, _lead(v, sorder)) for v in syz]
        G = _sort_for_schreyer(nxt)
        order = sorder
        prev_degs = degs
        rank = len(degs)
    return res
