"""Exact sparse multivariate polynomials over the rationals.

A :class:`Polynomial` stores a map from exponent tuples to nonzero
``gmpy2.mpq`` coefficients.  Exponent tuples have a fixed length ``nvars``.
For homogeneous work in ``d + 1`` variables, index 0 is the homogenizing
variable ``x0``; affine polynomials in ``x1..xd`` use ``nvars = d`` with
index ``q - 1`` standing for ``x_q``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce as _reduce
from numbers import Rational

import gmpy2
from gmpy2 import mpq, mpz

__all__ = [
    "mpq",
    "to_rational",
    "Monomial",
    "MonomialOrder",
    "GREVLEX",
    "Polynomial",
    "poly_arith",
    "poly_diff",
    "poly_eval",
    "homogenize",
    "dehomogenize",
    "reduce_mod_linear",
    "divmod_linear",
    "monomials_of_degree",
    "NEG_INF",
]

NEG_INF = float("-inf")

Monomial = tuple  # tuple[int, ...]


def to_rational(value) -> mpq:
    """Convert ints, Fractions, mpq, "p/q" strings or floats to an exact mpq.

    Floats are converted exactly (binary expansion), not approximated.
    """
    if isinstance(value, type(mpq())):
        return value
    if isinstance(value, (int, type(mpz()))):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational string")
        if "." in text or "e" in text.lower():
            return mpq(Fraction(text).numerator, Fraction(text).denominator)
        return mpq(text)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return mpq(value)
    if isinstance(value, Rational):
        return mpq(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


class MonomialOrder:
    """Graded monomial order with a variable permutation.

    ``perm`` lists variable indices from most to least significant.  The
    default places ``x0`` last, so ``x1 > x2 > ... > xd > x0``.
    """

    KINDS = ("grevlex", "grlex")

    def __init__(self, kind: str = "grevlex", perm=None):
        if kind not in self.KINDS:
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.perm = None if perm is None else tuple(perm)
        self._cache: dict = {}

    def _perm_for(self, n: int):
        if self.perm is not None and len(self.perm) == n:
            return self.perm
        # homogenizing variable x0 is least significant
        return tuple(range(1, n)) + (0,) if n > 1 else (0,)

    def key(self, exps: Monomial):
        """Sort key: larger key means larger monomial."""
        k = self._cache.get(exps)
        if k is not None:
            return k
        perm = self._perm_for(len(exps))
        if self.kind == "grevlex":
            k = (sum(exps),) + tuple(-exps[perm[j]] for j in range(len(perm) - 1, -1, -1))
        else:
            k = (sum(exps),) + tuple(exps[p] for p in perm)
        self._cache[exps] = k
        return k

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.perm) == (other.kind, other.perm)

    def __hash__(self):
        return hash((self.kind, self.perm))

    def __repr__(self):
        return f"MonomialOrder({self.kind!r}, perm={self.perm})"


GREVLEX = MonomialOrder("grevlex")


def monomials_of_degree(n: int, k: int):
    """All exponent tuples of length n and total degree k (lex-descending)."""
    if k < 0:
        return []
    if n == 0:
        return [()] if k == 0 else []
    if n == 1:
        return [(k,)]
    out = []
    for e in range(k, -1, -1):
        for rest in monomials_of_degree(n - 1, k - e):
            out.append((e,) + rest)
    return out


def _add_exps(a, b):
    return tuple(x + y for x, y in zip(a, b))


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms=None):
        self.nvars = int(nvars)
        clean = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for exps, coef in items:
                exps = tuple(int(e) for e in exps)
                if len(exps) != self.nvars:
                    raise ValueError(f"exponent {exps} does not have length {self.nvars}")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                c = to_rational(coef)
                if c:
                    c = clean.get(exps, 0) + c
                    if c:
                        clean[exps] = c
                    else:
                        clean.pop(exps, None)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars, terms):
        # trusted constructor: terms already canonical
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, nvars):
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, value, nvars):
        c = to_rational(value)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, index, nvars, coef=1):
        if not 0 <= index < nvars:
            raise IndexError(f"variable index {index} out of range for {nvars} variables")
        exps = tuple(1 if i == index else 0 for i in range(nvars))
        return cls._raw(nvars, {exps: to_rational(coef)})

    @classmethod
    def monomial(cls, exps, coef=1):
        exps = tuple(exps)
        c = to_rational(coef)
        return cls._raw(len(exps), {exps: c} if c else {})

    @classmethod
    def linear(cls, coeffs, constant=0):
        """Affine form sum(coeffs[q] * x_q) + constant in len(coeffs) variables."""
        n = len(coeffs)
        terms = {}
        for q, a in enumerate(coeffs):
            a = to_rational(a)
            if a:
                terms[tuple(1 if i == q else 0 for i in range(n))] = a
        c = to_rational(constant)
        if c:
            terms[(0,) * n] = c
        return cls._raw(n, terms)

    # -- basic queries -------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree(self):
        """Total degree; the zero polynomial has degree ``-inf``."""
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self):
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), mpq(0))

    def leading_term(self, order: MonomialOrder = GREVLEX):
        """(exponents, coefficient) of the largest term; None for zero."""
        if not self.terms:
            return None
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    # -- arithmetic ----------------------------------------------------

    def _check(self, other):
        if not isinstance(other, Polynomial):
            raise TypeError(f"expected Polynomial, got {type(other).__name__}")
        if other.nvars != self.nvars:
            raise ValueError(f"variable-count mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(other, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for e, c in small.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Polynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = to_rational(other)
            if not c:
                return Polynomial.zero(self.nvars)
            return Polynomial._raw(self.nvars, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exps(e1, e2)
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return Polynomial._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def mul_term(self, exps, coef=1):
        c = to_rational(coef)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(
            self.nvars, {_add_exps(e, exps): v * c for e, v in self.terms.items()}
        )

    def __truediv__(self, scalar):
        c = to_rational(scalar)
        if not c:
            raise ZeroDivisionError("polynomial division by zero scalar")
        return self * (1 / c)

    def exact_div_var(self, index: int):
        """Divide by x_index; raises if some term is not divisible."""
        out = {}
        for e, c in self.terms.items():
            if e[index] == 0:
                raise ValueError(f"polynomial not divisible by variable {index}")
            out[e[:index] + (e[index] - 1,) + e[index + 1:]] = c
        return Polynomial._raw(self.nvars, out)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            return self == Polynomial.constant(other, self.nvars)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- calculus / evaluation -----------------------------------------

    def diff(self, q: int):
        if not 0 <= q < self.nvars:
            raise IndexError(f"variable index {q} out of range for {self.nvars} variables")
        out = {}
        for e, c in self.terms.items():
            if e[q]:
                out[e[:q] + (e[q] - 1,) + e[q + 1:]] = c * e[q]
        return Polynomial._raw(self.nvars, out)

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = tuple(point[0])
        return poly_eval(self, point)

    def evaluate_float(self, point):
        """Float evaluation, vectorised over leading axes of ``point``.

        ``point`` has shape (..., nvars); returns an array of shape (...).
        """
        import numpy as np

        pts = np.asarray(point, dtype=float)
        if pts.shape[-1] != self.nvars:
            raise ValueError(f"point dimension {pts.shape[-1]} != {self.nvars}")
        out = np.zeros(pts.shape[:-1])
        for e, c in self.terms.items():
            term = np.full(pts.shape[:-1], float(c))
            for q, k in enumerate(e):
                if k:
                    term = term * pts[..., q] ** k
            out = out + term
        return out

    def substitute_linear(self, index: int, replacement: "Polynomial"):
        """Replace variable x_index by a polynomial in the same ring."""
        self._check(replacement)
        powers = {0: Polynomial.constant(1, self.nvars)}
        result = Polynomial.zero(self.nvars)
        grouped: dict = {}
        for e, c in self.terms.items():
            k = e[index]
            rest = e[:index] + (0,) + e[index + 1:]
            grouped.setdefault(k, {})[rest] = c
        for k in sorted(grouped):
            if k not in powers:
                powers[k] = replacement ** k
            result = result + Polynomial._raw(self.nvars, grouped[k]) * powers[k]
        return result

    # -- normalisation -------------------------------------------------

    def primitive(self, order: MonomialOrder = GREVLEX):
        """Scale to coprime integer coefficients with positive leading coefficient."""
        if not self.terms:
            return self
        den = _reduce(gmpy2.lcm, (c.denominator for c in self.terms.values()), mpz(1))
        nums = [c.numerator * (den // c.denominator) for c in self.terms.values()]
        g = _reduce(gmpy2.gcd, nums, mpz(0))
        scale = mpq(den, g)
        if self.leading_term(order)[1] < 0:
            scale = -scale
        return self * scale

    def monic(self, order: MonomialOrder = GREVLEX):
        if not self.terms:
            return self
        return self / self.leading_term(order)[1]

    # -- io ------------------------------------------------------------

    def to_json(self, order: MonomialOrder = GREVLEX):
        return [{"exps": list(e), "coef": str(c)} for e, c in self.sorted_terms(order)]

    @classmethod
    def from_json(cls, data, nvars=None):
        if nvars is None:
            if not data:
                raise ValueError("cannot infer variable count of an empty polynomial")
            nvars = len(data[0]["exps"])
        return cls(nvars, {tuple(t["exps"]): to_rational(t["coef"]) for t in data})

    def to_str(self, names=None, order: MonomialOrder = GREVLEX):
        if names is None:
            names = [f"x{i}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms(order):
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.to_str()!r})"


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    """Exact add/sub/mul of two polynomials over the same variables."""
    if not isinstance(a, Polynomial) or not isinstance(b, Polynomial):
        raise TypeError("poly_arith expects two Polynomials")
    if a.nvars != b.nvars:
        raise ValueError(f"variable-count mismatch: {a.nvars} vs {b.nvars}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def poly_diff(f: Polynomial, q: int) -> Polynomial:
    return f.diff(q)


def poly_eval(f: Polynomial, point):
    """Evaluate at a point.

    Exact (mpq) when every coordinate is rational; float otherwise.
    """
    point = tuple(point)
    if len(point) != f.nvars:
        raise ValueError(f"point has {len(point)} coordinates, polynomial has {f.nvars} variables")
    exact = all(not isinstance(x, float) for x in point)
    if exact:
        xs = [to_rational(x) for x in point]
        total = mpq(0)
    else:
        xs = [float(x) for x in point]
        total = 0.0
    for e, c in f.terms.items():
        term = c if exact else float(c)
        for x, k in zip(xs, e):
            if k:
                term = term * x**k
        total = total + term
    return total


def homogenize(f: Polynomial, k: int) -> Polynomial:
    """Degree-k homogenization ``x0^k f(x/x0)`` in one more variable (index 0)."""
    if f.degree > k:
        raise ValueError(f"degree {f.degree} exceeds homogenization degree {k}")
    out = {}
    for e, c in f.terms.items():
        out[(k - sum(e),) + e] = c
    return Polynomial._raw(f.nvars + 1, out)


def dehomogenize(f: Polynomial) -> Polynomial:
    """Set x0 = 1 and drop it from the variable list."""
    out: dict = {}
    for e, c in f.terms.items():
        rest = e[1:]
        v = out.get(rest)
        out[rest] = c if v is None else v + c
    return Polynomial._raw(f.nvars - 1, {e: c for e, c in out.items() if c})


def reduce_mod_linear(f: Polynomial, h: Polynomial, pivot: int) -> Polynomial:
    """Eliminate x_pivot from f using the linear relation h = 0.

    The result agrees with f on the hyperplane {h = 0} and is free of the
    pivot variable, so it is zero exactly when h divides f.
    """
    if h.nvars != f.nvars:
        raise ValueError(f"variable-count mismatch: {f.nvars} vs {h.nvars}")
    if h.degree != 1:
        raise ValueError("reduce_mod_linear needs a degree-one polynomial")
    unit = tuple(1 if i == pivot else 0 for i in range(h.nvars))
    a = h.coefficient(unit)
    if not a:
        raise ValueError(f"pivot variable {pivot} has zero coefficient in h")
    # x_pivot = -(h - a x_pivot) / a
    rest = Polynomial._raw(h.nvars, {e: c for e, c in h.terms.items() if e != unit})
    return f.substitute_linear(pivot, rest * (-1 / a))


def divmod_linear(f: Polynomial, h: Polynomial, pivot: int):
    """Quotient and remainder of f by the degree-one h, eliminating x_pivot.

    ``f == q * h + r`` with r free of the pivot variable; r equals
    ``reduce_mod_linear(f, h, pivot)``.
    """
    unit = tuple(1 if i == pivot else 0 for i in range(h.nvars))
    a = h.coefficient(unit)
    if h.degree != 1 or not a:
        raise ValueError("divmod_linear needs a degree-one h with nonzero pivot coefficient")
    rem = dict(f.terms)
    quot: dict = {}
    while True:
        top = [e for e in rem if e[pivot]]
        if not top:
            break
        e = max(top, key=lambda t: (t[pivot], t))
        c = rem[e] / a
        m = e[:pivot] + (e[pivot] - 1,) + e[pivot + 1:]
        quot[m] = quot.get(m, 0) + c
        for he, hc in h.terms.items():
            t = tuple(x + y for x, y in zip(m, he))
            v = rem.get(t, 0) - c * hc
            if v:
                rem[t] = v
            else:
                rem.pop(t, None)
    return (Polynomial._raw(f.nvars, {e: c for e, c in quot.items() if c}),
            Polynomial._raw(f.nvars, rem))
