"""Exact linear algebra over the rationals (dense, small matrices)."""

from __future__ import annotations

from gmpy2 import mpq

from .polycore import to_rational


def rref(rows, ncols=None):
    """Reduced row echelon form.  Returns (rows, pivot_columns)."""
    M = [[to_rational(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(M[0]) if M else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(M):
            break
        p = next((i for i in range(r, len(M)) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                Mi, Mr = M[i], M[r]
                M[i] = [a - f * b for a, b in zip(Mi, Mr)]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank(rows, ncols=None):
    return len(rref(rows, ncols)[1])


def nullspace(rows, ncols):
    """Basis of {v : rows . v = 0}, one vector per free column."""
    R, pivots = rref(rows, ncols) if rows else ([], [])
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [mpq(0)] * ncols
        v[free] = mpq(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[free]
        basis.append(v)
    return basis


class IncrementalEchelon:
    """Keeps reduced sparse rows; tells whether a new vector is independent."""

    def __init__(self, key=None):
        self.rows = {}  # pivot -> row (dict index -> value), pivot entry 1
        self.key = key  # pivot selection key; default = max index

    def _k(self, i):
        return self.key(i) if self.key else i

    def reduce(self, vec):
        v = {i: to_rational(x) for i, x in vec.items() if x}
        # each row only has entries below its pivot, so eliminating the
        # largest remaining pivot never re-creates a larger one
        while True:
            hits = [i for i in v if i in self.rows]
            if not hits:
                return v
            piv = max(hits, key=self._k)
            c = v[piv]
            for i, x in self.rows[piv].items():
                nv = v.get(i, 0) - c * x
                if nv:
                    v[i] = nv
                else:
                    v.pop(i, None)

    def add(self, vec):
        """Insert vec; returns True when it was independent of earlier rows."""
        v = self.reduce(vec)
        if not v:
            return False
        piv = max(v, key=self._k)
        inv = 1 / v[piv]
        self.rows[piv] = {i: x * inv for i, x in v.items()}
        return True

    def __len__(self):
        return len(self.rows)
