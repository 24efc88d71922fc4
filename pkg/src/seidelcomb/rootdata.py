"""Root data, Weyl groups and the lattices attached to them.

Conventions
-----------
Points of the Cartan subalgebra ``t`` are written in the basis of simple
coroots ``α_1^∨, …, α_r^∨`` as tuples of Fractions.  A root is stored by its
simple-root coefficients together with its *pairing row*
``(α(α_1^∨), …, α(α_r^∨))``, so evaluating a root on a point is a dot product
and never touches the metric.

Simple indices are 1-based in the public API (``I={2}`` means ``{α_2}``),
following Bourbaki's numbering of Dynkin diagrams.
"""

from __future__ import annotations

import enum
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Optional, Sequence

from . import linalg as la
from .errors import LatticeError, NotGenericError, SizeError, SpecError
from .linalg import Lattice, quotient_structure

__all__ = [
    "LatticeKind",
    "Root",
    "RootDatum",
    "WeylElement",
    "SublatticePair",
    "parse_series",
    "build_root_datum",
    "weyl_group",
    "chamber_of",
    "sublattices",
    "quotient_structure",
    "rho",
    "rho_I",
]

DEFAULT_NORM = 12
DEFAULT_WEYL_CAP = 10**6


class LatticeKind(enum.Enum):
    SIMPLY_CONNECTED = "sc"
    ADJOINT = "ad"

    @classmethod
    def parse(cls, s: "str | LatticeKind") -> "LatticeKind":
        if isinstance(s, cls):
            return s
        key = str(s).lower()
        aliases = {"sc": cls.SIMPLY_CONNECTED, "simplyconnected": cls.SIMPLY_CONNECTED,
                   "simply_connected": cls.SIMPLY_CONNECTED,
                   "ad": cls.ADJOINT, "adjoint": cls.ADJOINT}
        if key not in aliases:
            raise SpecError(f"unknown lattice kind {s!r}")
        return aliases[key]


_SERIES_RE = re.compile(r"^([A-G])([0-9]+)(x([A-G])([0-9]+))*$")


def parse_series(text: str) -> list[tuple[str, int]]:
    """Parse ``"A1xB2"`` into ``[("A", 1), ("B", 2)]``."""
    text = text.strip()
    if not _SERIES_RE.match(text):
        raise SpecError(f"malformed root-system spec {text!r}")
    out = []
    for part in text.split("x"):
        out.append((part[0], int(part[1:])))
    for letter, n in out:
        _check_factor(letter, n)
    return out


def _check_factor(letter: str, n: int) -> None:
    ok = {
        "A": n >= 1,
        "B": n >= 2,
        "C": n >= 2,
        "D": n >= 4,
        "E": n in (6, 7, 8),
        "F": n == 4,
        "G": n == 2,
    }.get(letter)
    if not ok:
        raise SpecError(f"invalid series {letter}{n}")


def _simple_root_products(letter: str, n: int) -> list[list[Fraction]]:
    """Inner products of simple roots for one factor, long roots of length² 2."""
    f = Fraction
    b = [[f(0)] * n for _ in range(n)]
    lengths = [f(2)] * n
    edges: list[tuple[int, int, Fraction]] = []
    if letter == "A":
        edges = [(i, i + 1, f(-1)) for i in range(n - 1)]
    elif letter == "B":
        lengths[n - 1] = f(1)
        edges = [(i, i + 1, f(-1)) for i in range(n - 1)]
    elif letter == "C":
        lengths = [f(1)] * (n - 1) + [f(2)]
        edges = [(i, i + 1, f(-1, 2)) for i in range(n - 2)] + [(n - 2, n - 1, f(-1))]
    elif letter == "D":
        edges = [(i, i + 1, f(-1)) for i in range(n - 2)] + [(n - 3, n - 1, f(-1))]
    elif letter == "E":
        pairs = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]
        edges = [(i - 1, j - 1, f(-1)) for i, j in pairs if i <= n and j <= n]
    elif letter == "F":
        lengths = [f(2), f(2), f(1), f(1)]
        edges = [(0, 1, f(-1)), (1, 2, f(-1)), (2, 3, f(-1, 2))]
    elif letter == "G":
        lengths = [f(2, 3), f(2)]
        edges = [(0, 1, f(-1))]
    for i in range(n):
        b[i][i] = lengths[i]
    for i, j, v in edges:
        b[i][j] = b[j][i] = v
    return b


@dataclass(frozen=True)
class Root:
    """A root, given by simple-root coefficients and its values on simple coroots."""

    coeffs: tuple[int, ...]
    pairing: tuple[int, ...]

    def __call__(self, v: Sequence) -> Fraction:
        return la.dot(self.pairing, v)

    def __neg__(self) -> "Root":
        return Root(tuple(-c for c in self.coeffs), tuple(-c for c in self.pairing))

    @property
    def is_positive(self) -> bool:
        return any(c > 0 for c in self.coeffs)

    @property
    def height(self) -> int:
        return sum(self.coeffs)

    def name(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs, start=1):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else str(abs(c))
            terms.append(f"{sign}{mag}a{i}")
        s = "".join(terms)
        return s[1:] if s.startswith("+") else s


@dataclass(frozen=True, eq=False)
class WeylElement:
    """A Weyl group element: reduced word (1-based labels) and integer matrix on t.

    The matrix acts on column vectors of simple-coroot coordinates.
    Equality and hashing go through the matrix only.
    """

    word: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]

    @property
    def length(self) -> int:
        return len(self.word)

    def act(self, v: Sequence) -> tuple:
        return la.matvec(self.matrix, v)

    __call__ = act

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"WeylElement({word_str(self.word)})"

    def is_identity(self) -> bool:
        return all(x == int(i == j) for i, row in enumerate(self.matrix) for j, x in enumerate(row))


def word_str(word: Sequence[int]) -> str:
    return "e" if not word else "".join(f"s{i}" for i in word)


@dataclass(frozen=True, eq=False)
class RootDatum:
    series_spec: tuple[tuple[str, int], ...]
    rank: int
    cartan_matrix: tuple[tuple[int, ...], ...]
    gram: tuple[tuple[Fraction, ...], ...]
    positive_roots: tuple[Root, ...]
    lattice_kind: LatticeKind
    unit_lattice_basis: tuple[tuple[Fraction, ...], ...]
    root_products: tuple[tuple[Fraction, ...], ...]
    factor_ranges: tuple[range, ...]
    norm: int = DEFAULT_NORM
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    # -- basic data ---------------------------------------------------------

    @property
    def name(self) -> str:
        return "x".join(f"{l}{n}" for l, n in self.series_spec)

    @property
    def simple_roots(self) -> tuple[Root, ...]:
        return tuple(self.root_from_coeffs(tuple(int(i == j) for j in range(self.rank)))
                     for i in range(self.rank))

    @cached_property
    def roots(self) -> tuple[Root, ...]:
        return self.positive_roots + tuple(-r for r in self.positive_roots)

    @cached_property
    def _by_pairing(self) -> dict:
        return {r.pairing: r for r in self.roots}

    @cached_property
    def _by_coeffs(self) -> dict:
        return {r.coeffs: r for r in self.roots}

    def root_from_pairing(self, pairing: Sequence) -> Root:
        key = tuple(int(x) for x in pairing)
        try:
            return self._by_pairing[key]
        except KeyError:
            raise ValueError(f"{key} is not a root") from None

    def root_from_coeffs(self, coeffs: Sequence[int]) -> Root:
        key = tuple(int(x) for x in coeffs)
        try:
            return self._by_coeffs[key]
        except KeyError:
            raise ValueError(f"{key} is not a root") from None

    def positive_of(self, r: Root) -> Root:
        return r if r.is_positive else -r

    @cached_property
    def gram_inverse(self) -> tuple:
        return la.inverse(self.gram)

    def inner(self, u: Sequence, v: Sequence) -> Fraction:
        """The invariant metric on t."""
        return la.dot(u, la.matvec(self.gram, v))

    def norm2(self, v: Sequence) -> Fraction:
        return self.inner(v, v)

    def dual(self, functional: Sequence) -> tuple[Fraction, ...]:
        """Metric dual of a linear functional given by its pairing row."""
        return la.matvec(self.gram_inverse, functional)

    def root_length2(self, r: Root) -> Fraction:
        v = self.dual(r.pairing)
        return r(v)

    def coroot(self, r: Root) -> tuple[Fraction, ...]:
        v = self.dual(r.pairing)
        return la.scale(2 / r(v), v)

    @cached_property
    def highest_roots(self) -> tuple[Root, ...]:
        out = []
        for rng in self.factor_ranges:
            cands = [r for r in self.positive_roots if any(r.coeffs[i] for i in rng)]
            out.append(max(cands, key=lambda r: r.height))
        return tuple(out)

    @cached_property
    def fundamental_coweights(self) -> tuple[tuple[Fraction, ...], ...]:
        """ω_i^∨ with α_j(ω_i^∨) = δ_ij."""
        inv = la.inverse(self.cartan_matrix)
        return tuple(tuple(row) for row in inv)

    @cached_property
    def coroot_lattice(self) -> Lattice:
        return Lattice(la.identity(self.rank), dim=self.rank)

    @cached_property
    def unit_lattice(self) -> Lattice:
        return Lattice(self.unit_lattice_basis, dim=self.rank)

    @cached_property
    def coweight_lattice(self) -> Lattice:
        return Lattice(self.fundamental_coweights, dim=self.rank)

    def simple_values(self, v: Sequence) -> tuple[Fraction, ...]:
        """(α_1(v), …, α_r(v))."""
        return tuple(r(v) for r in self.simple_roots)

    def is_dominant(self, v: Sequence, strict: bool = False) -> bool:
        vals = self.simple_values(v)
        return all(x > 0 for x in vals) if strict else all(x >= 0 for x in vals)

    def reflection_matrix(self, i: int) -> tuple:
        """Matrix of s_i (1-based) on coroot coordinates."""
        k = i - 1
        col = [self.cartan_matrix[j][k] for j in range(self.rank)]  # α_i(α_j^∨)
        return tuple(
            tuple(int(r == c) - (int(r == k) * col[c]) for c in range(self.rank))
            for r in range(self.rank)
        )

    def element(self, word: Sequence[int]) -> WeylElement:
        """The element s_{w1} s_{w2} ⋯ as a WeylElement (word not required reduced)."""
        m = la.identity(self.rank)
        for i in word:
            m = la.matmul(m, self.reflection_matrix(i))
        m = tuple(tuple(int(x) for x in row) for row in m)
        try:
            return self._element_index[m]
        except KeyError:
            raise SizeError("element lookup needs the enumerated Weyl group") from None

    @cached_property
    def _element_index(self) -> dict:
        return {w.matrix: w for w in weyl_group(self)}

    def identity(self) -> WeylElement:
        return self.element(())

    def inverse(self, w: WeylElement) -> WeylElement:
        return self.element(tuple(reversed(w.word)))

    def mul(self, u: WeylElement, v: WeylElement) -> WeylElement:
        m = tuple(tuple(int(x) for x in row) for row in la.matmul(u.matrix, v.matrix))
        return self._element_index[m]

    def act_root(self, w: WeylElement, r: Root) -> Root:
        """w(α), the functional v ↦ α(w⁻¹ v)."""
        inv = self.inverse(w)
        return self.root_from_pairing(la.vecmat(r.pairing, inv.matrix))

    def act_functional(self, w: WeylElement, f: Sequence) -> tuple:
        inv = self.inverse(w)
        return la.vecmat(f, inv.matrix)

    def inversion_count(self, w: WeylElement) -> int:
        return sum(1 for r in self.positive_roots if not self.act_root(w, r).is_positive)

    def longest_element(self) -> WeylElement:
        return max(weyl_group(self), key=lambda w: w.length)

    def __repr__(self) -> str:
        return f"RootDatum({self.name}, {self.lattice_kind.value})"


def build_root_datum(series_spec: "str | Iterable[tuple[str, int]]",
                     lattice_kind: "str | LatticeKind" = LatticeKind.SIMPLY_CONNECTED,
                     norm: int = DEFAULT_NORM) -> RootDatum:
    """Build a (product) root system with the metric normalized so (θ, θ) = norm."""
    if isinstance(series_spec, str):
        spec = parse_series(series_spec)
    else:
        spec = [(str(l), int(n)) for l, n in series_spec]
        if not spec:
            raise SpecError("empty series spec")
        for l, n in spec:
            if l not in "ABCDEFG" or len(l) != 1:
                raise SpecError(f"invalid series letter {l!r}")
            _check_factor(l, n)
    kind = LatticeKind.parse(lattice_kind)
    rank = sum(n for _, n in spec)

    # block-diagonal inner products of simple roots
    b = [[Fraction(0)] * rank for _ in range(rank)]
    ranges = []
    off = 0
    for letter, n in spec:
        blk = _simple_root_products(letter, n)
        for i in range(n):
            for j in range(n):
                b[off + i][off + j] = blk[i][j]
        ranges.append(range(off, off + n))
        off += n

    cartan = tuple(
        tuple(int(2 * b[i][j] / b[i][i]) for j in range(rank)) for i in range(rank)
    )
    positive = _positive_roots(cartan)

    # rescale each factor so that its highest root has length² = norm
    for rng in ranges:
        cands = [m for m in positive if any(m[i] for i in rng)]
        theta = max(cands, key=sum)
        length = sum(theta[i] * theta[j] * b[i][j] for i in rng for j in rng)
        factor = Fraction(norm) / length
        for i in rng:
            for j in rng:
                b[i][j] *= factor

    gram = tuple(
        tuple(4 * b[i][j] / (b[i][i] * b[j][j]) for j in range(rank)) for i in range(rank)
    )
    roots = tuple(Root(m, tuple(int(x) for x in la.matvec(cartan, m))) for m in positive)
    if kind is LatticeKind.SIMPLY_CONNECTED:
        basis = tuple(la.vec(row) for row in la.identity(rank))
    else:
        basis = tuple(tuple(row) for row in la.inverse(cartan))
    return RootDatum(
        series_spec=tuple(spec),
        rank=rank,
        cartan_matrix=cartan,
        gram=gram,
        positive_roots=roots,
        lattice_kind=kind,
        unit_lattice_basis=basis,
        root_products=tuple(tuple(row) for row in b),
        factor_ranges=tuple(ranges),
        norm=norm,
    )


def _positive_roots(cartan: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Positive roots in simple-root coefficients, by closing under simple reflections."""
    r = len(cartan)
    simple = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    seen = set(simple)
    queue = deque(simple)
    while queue:
        m = queue.popleft()
        for i in range(r):
            p = sum(m[j] * cartan[i][j] for j in range(r))  # β(α_i^∨)
            n = tuple(m[j] - (p if j == i else 0) for j in range(r))
            if n not in seen:
                seen.add(n)
                queue.append(n)
    pos = sorted((m for m in seen if all(x >= 0 for x in m)), key=lambda m: (sum(m), tuple(-x for x in m)))
    return tuple(pos)


# -- Weyl group ---------------------------------------------------------------


def _factor_group(R: RootDatum, rng: range, cap: int) -> list[tuple[tuple[int, ...], tuple]]:
    """BFS over one simple factor: (reduced word, matrix) pairs in length order."""
    start = la.identity(R.rank)
    start = tuple(tuple(int(x) for x in row) for row in start)
    out = [((), start)]
    seen = {start}
    frontier = [((), start)]
    gens = {i + 1: R.reflection_matrix(i + 1) for i in rng}
    while frontier:
        nxt = []
        for word, m in frontier:
            for i, s in gens.items():
                mm = la.matmul(m, s)
                mm = tuple(tuple(int(x) for x in row) for row in mm)
                if mm in seen:
                    continue
                seen.add(mm)
                if len(seen) > cap:
                    raise SizeError(f"Weyl group exceeds cap {cap}")
                nxt.append((word + (i,), mm))
        out.extend(nxt)
        frontier = nxt
    return out


def weyl_group(R: RootDatum, cap: int = DEFAULT_WEYL_CAP) -> list[WeylElement]:
    """All elements of W, each once, sorted by length then word."""
    key = ("weyl", cap)
    if key in R._cache:
        return R._cache[key]
    factors = [_factor_group(R, rng, cap) for rng in R.factor_ranges]
    total = 1
    for f in factors:
        total *= len(f)
    if total > cap:
        raise SizeError(f"Weyl group of order {total} exceeds cap {cap}")
    elems = []
    for combo in product(*factors):
        word: tuple[int, ...] = ()
        m = la.identity(R.rank)
        for w, mat in combo:
            word += w
            m = la.matmul(m, mat)
        elems.append(WeylElement(word, tuple(tuple(int(x) for x in row) for row in m)))
    elems.sort(key=lambda w: (w.length, w.word))
    R._cache[key] = elems
    return elems


def chamber_of(v: Sequence, R: RootDatum) -> WeylElement:
    """The unique w with w⁻¹(v) strictly dominant."""
    v = la.vec(v)
    for r in R.positive_roots:
        if r(v) == 0:
            raise NotGenericError(f"point {fmt_vec(v)} lies on the wall of root {r.name()}")
    word: list[int] = []
    cur = v
    while True:
        vals = R.simple_values(cur)
        i = next((k for k, x in enumerate(vals) if x < 0), None)
        if i is None:
            break
        word.append(i + 1)
        cur = la.matvec(R.reflection_matrix(i + 1), cur)
    return R.element(word)


def fmt_vec(v: Sequence) -> str:
    return "(" + ", ".join(str(Fraction(x)) for x in v) + ")"


# -- sublattices --------------------------------------------------------------


@dataclass(frozen=True)
class SublatticePair:
    """Q_S (coroots of S) and P^∨_S (points of span Q_S integral on S)."""

    roots: tuple[Root, ...]
    q_lattice: Lattice
    pvee_lattice: Lattice

    @property
    def q_basis(self) -> list[tuple[Fraction, ...]]:
        return self.q_lattice.basis()

    @property
    def pvee_basis(self) -> list[tuple[Fraction, ...]]:
        return self.pvee_lattice.basis()


def sublattices(R: RootDatum, S: Iterable[Root]) -> SublatticePair:
    pos = sorted({R.positive_of(r) for r in S}, key=lambda r: (r.height, r.coeffs))
    if not pos:
        empty = Lattice([], dim=R.rank)
        return SublatticePair((), empty, empty)
    q = Lattice([R.coroot(r) for r in pos], dim=R.rank)
    basis = q.basis()
    f = [[int(r(b)) for b in basis] for r in pos]
    h = la.hnf(f)
    hinv = la.inverse(h)
    cols = la.transpose(hinv)
    pvee_gens = [
        tuple(sum((c[k] * basis[k][i] for k in range(len(basis))), Fraction(0)) for i in range(R.rank))
        for c in cols
    ]
    return SublatticePair(tuple(pos), q, Lattice(pvee_gens, dim=R.rank))


def lattice_quotient(big: "Lattice | Sequence", small: "Lattice | Sequence",
                     dim: Optional[int] = None) -> tuple[int, list[int]]:
    """quotient_structure accepting either Lattice objects or bases."""
    if not isinstance(big, Lattice):
        big = Lattice(big, dim=dim)
    if not isinstance(small, Lattice):
        small = Lattice(small, dim=dim if dim is not None else big.dim)
    return quotient_structure(big, small)


# -- ρ ------------------------------------------------------------------------


def _check_I(R: RootDatum, I: Iterable[int]) -> frozenset[int]:
    I = frozenset(int(i) for i in I)
    bad = [i for i in I if not 1 <= i <= R.rank]
    if bad:
        raise SpecError(f"simple index out of range 1..{R.rank}: {sorted(bad)}")
    return I


def roots_of_I(R: RootDatum, I: Iterable[int]) -> tuple[Root, ...]:
    """Positive roots in the span of {α_i : i ∈ I}."""
    I = _check_I(R, I)
    return tuple(r for r in R.positive_roots
                 if all(c == 0 for k, c in enumerate(r.coeffs) if k + 1 not in I))


def rho_I_functional(R: RootDatum, I: Iterable[int] = ()) -> tuple[int, ...]:
    """Pairing row of ρ_I = Σ_{α ∈ R⁺∖R_I⁺} α."""
    inside = set(roots_of_I(R, I))
    tot = [0] * R.rank
    for r in R.positive_roots:
        if r not in inside:
            tot = [a + b for a, b in zip(tot, r.pairing)]
    return tuple(tot)


def rho_I(R: RootDatum, I: Iterable[int] = ()) -> tuple[Fraction, ...]:
    """Metric dual of ρ_I as a point of t."""
    return R.dual(rho_I_functional(R, I))


def rho(R: RootDatum) -> tuple[Fraction, ...]:
    """Metric dual of ρ = Σ_{α ∈ R⁺} α (the full sum, not the half sum)."""
    return rho_I(R, ())


def in_unit_lattice(R: RootDatum, v: Sequence) -> bool:
    return la.vec(v) in R.unit_lattice


def require_unit_lattice(R: RootDatum, v: Sequence) -> tuple[Fraction, ...]:
    v = la.vec(v)
    if len(v) != R.rank:
        raise LatticeError(f"expected {R.rank} coordinates, got {len(v)}")
    if v not in R.unit_lattice:
        raise LatticeError(f"{fmt_vec(v)} is not in the unit lattice")
    return v
