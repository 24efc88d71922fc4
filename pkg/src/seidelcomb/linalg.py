"""Exact linear algebra over Q and Z.

Vectors are tuples of :class:`fractions.Fraction` (or ints), matrices are
tuples of row tuples.  Everything here is small-dimensional, so plain Python
loops are fast enough and keep every result exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

from .errors import LatticeError

Vector = tuple
Matrix = tuple


def vec(xs: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in xs)


def zero(n: int) -> tuple[Fraction, ...]:
    return (Fraction(0),) * n


def add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, u: Sequence) -> tuple:
    return tuple(c * a for a in u)


def neg(u: Sequence) -> tuple:
    return tuple(-a for a in u)


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    return sum((a * b for a, b in zip(u, v)), 0)


def matvec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in m)


def vecmat(v: Sequence, m: Sequence[Sequence]) -> tuple:
    """Row vector times matrix."""
    n = len(m[0]) if m else 0
    return tuple(sum((v[k] * m[k][j] for k in range(len(v))), 0) for j in range(n))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def transpose(m: Sequence[Sequence]) -> tuple:
    return tuple(zip(*m)) if m else ()


def identity(n: int) -> tuple:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def is_integral(v: Iterable) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def rref(m: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [[Fraction(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: Sequence[Sequence]) -> int:
    if not m:
        return 0
    return len(rref(m)[1])


def inverse(m: Sequence[Sequence]) -> tuple:
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(row[n:]) for row in red)


def solve_in_span(columns: Sequence[Sequence], v: Sequence) -> Optional[tuple[Fraction, ...]]:
    """Coefficients ``c`` with ``sum(c_k * columns[k]) == v``, or None.

    ``columns`` must be linearly independent.
    """
    k = len(columns)
    if k == 0:
        return () if all(x == 0 for x in v) else None
    n = len(v)
    aug = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(v[i])] for i in range(n)]
    red, piv = rref(aug)
    if k in piv:
        return None
    if piv != list(range(k)):
        raise ValueError("columns are linearly dependent")
    return tuple(red[i][k] for i in range(k))


def nullspace(m: Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
    """Basis of {x : m x = 0}."""
    if not m:
        return []
    cols = len(m[0])
    red, piv = rref(m)
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * cols
        x[f] = Fraction(1)
        for i, p in enumerate(piv):
            x[p] = -red[i][f]
        basis.append(tuple(x))
    return basis


# -- integer lattices -------------------------------------------------------


def common_denominator(rows: Iterable[Iterable]) -> int:
    d = 1
    for row in rows:
        for x in row:
            d = lcm(d, Fraction(x).denominator)
    return d


def hnf(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by integer ``rows``.

    Returns a basis in echelon form: pivots strictly increase, pivot entries
    are positive and entries above a pivot lie in ``[0, pivot)``.
    """
    a = [[int(x) for x in row] for row in rows if any(row)]
    if not a:
        return []
    cols = len(a[0])
    out: list[list[int]] = []
    for c in range(cols):
        live = [row for row in a if row[c] != 0]
        rest = [row for row in a if row[c] == 0]
        if not live:
            continue
        # Euclid on column c across the live rows
        while len(live) > 1:
            live.sort(key=lambda row: abs(row[c]))
            piv = live[0]
            nxt = [piv]
            for row in live[1:]:
                f = row[c] // piv[c]
                red = [x - f * y for x, y in zip(row, piv)]
                if red[c] != 0:
                    nxt.append(red)
                elif any(red):
                    rest.append(red)
            live = nxt
        piv = live[0]
        if piv[c] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        a = rest
        if not a:
            break
    # reduce entries above pivots
    for i in range(len(out)):
        p = next(j for j, x in enumerate(out[i]) if x)
        for k in range(i):
            f = out[k][p] // out[i][p]
            if f:
                out[k] = [x - f * y for x, y in zip(out[k], out[i])]
    return out


def smith_invariants(m: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    a = [[int(x) for x in row] for row in m]
    a = [row for row in a]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag: list[int] = []
    t = 0
    while t < min(rows, cols):
        entries = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                f = a[i][t] // p
                if f:
                    a[i] = [x - f * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, cols):
                f = a[t][j] // p
                if f:
                    for row in a:
                        row[j] -= f * row[t]
                if a[t][j]:
                    dirty = True
            if not dirty:
                bad = next(
                    ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            entries = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols)
                       if a[i][j] and (i == t or j == t)]
            _, i, j = min(entries)
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


class Lattice:
    """A full-rank-in-its-span lattice of rational vectors, stored in HNF.

    The basis is kept as integer rows scaled by a common denominator so that
    membership and coset reduction are exact.
    """

    __slots__ = ("dim", "denom", "rows")

    def __init__(self, generators: Iterable[Sequence], dim: Optional[int] = None):
        gens = [tuple(Fraction(x) for x in g) for g in generators]
        if dim is None:
            if not gens:
                raise ValueError("dim required for an empty generating set")
            dim = len(gens[0])
        self.dim = dim
        self.denom = common_denominator(gens) if gens else 1
        self.rows = tuple(tuple(r) for r in hnf([[int(x * self.denom) for x in g] for g in gens]))

    @property
    def rank(self) -> int:
        return len(self.rows)

    def basis(self) -> list[tuple[Fraction, ...]]:
        return [tuple(Fraction(x, self.denom) for x in r) for r in self.rows]

    def _pivots(self) -> list[int]:
        return [next(j for j, x in enumerate(r) if x) for r in self.rows]

    def reduce(self, v: Sequence) -> tuple[Fraction, ...]:
        """Canonical representative of ``v`` modulo the lattice."""
        w = [Fraction(x) * self.denom for x in v]
        for row, p in zip(self.rows, self._pivots()):
            f = w[p] // row[p]
            if f:
                w = [x - f * y for x, y in zip(w, row)]
        return tuple(x / self.denom for x in w)

    def __contains__(self, v: Sequence) -> bool:
        r = self.reduce(v)
        return all(x == 0 for x in r)

    def coordinates(self, v: Sequence) -> Optional[tuple[Fraction, ...]]:
        """Coordinates of ``v`` in :meth:`basis`, or None outside the span."""
        return solve_in_span(self.basis(), v)

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(b in self for b in other.basis())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.dim == other.dim and self.basis() == other.basis()

    def __hash__(self) -> int:
        return hash((self.dim, tuple(self.basis())))

    def __repr__(self) -> str:
        return f"Lattice(rank={self.rank}, basis={[tuple(str(x) for x in b) for b in self.basis()]})"


def quotient_structure(big: Lattice, small: Lattice) -> tuple[int, list[int]]:
    """(free rank, torsion invariants > 1) of ``big / small``."""
    big_basis = big.basis()
    coords = []
    for v in small.basis():
        c = solve_in_span(big_basis, v)
        if c is None or not is_integral(c):
            raise LatticeError("sublattice is not contained in the ambient lattice")
        coords.append([int(x) for x in c])
    invariants = smith_invariants(coords) if coords else []
    free = big.rank - len(invariants)
    return free, [d for d in invariants if d > 1]


def gcd_all(xs: Iterable[int]) -> int:
    g = 0
    for x in xs:
        g = gcd(g, int(x))
    return g
