"""Affine walls, crossings along segments, and Bott–Samelson wall sequences.

The affine wall ``V_{α,k}`` is the hyperplane ``{α = k}`` for a positive root
``α`` and an integer ``k``.  Segments are parametrized as
``x + t (y - x)`` with ``t ∈ [0, 1]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Iterable, Optional, Sequence

import numpy as np

from . import linalg as la
from .errors import DomainError, InternalError, NotGenericError
from .rootdata import Root, RootDatum, chamber_of, fmt_vec, rho

__all__ = [
    "PerturbationPoint",
    "WallCrossing",
    "NiceReport",
    "canonical_perturbation",
    "perturbation_from_values",
    "crossing_times",
    "is_nice",
    "is_nice_polyline",
    "deg",
    "deg_by_floor",
    "deg_closed_form",
    "bs_wall_sequence",
    "choose_bs_perturbation",
    "affine_orbit_of_zero",
    "lattice_points_in_ball",
    "wall_count",
    "perturbation_for",
]

MAX_SHRINKS = 40


def _odd_primes(n: int, skip: int = 0) -> list[int]:
    out: list[int] = []
    p = 3
    found = 0
    while len(out) < n:
        if all(p % d for d in range(3, int(p**0.5) + 1, 2)):
            if found >= skip:
                out.append(p)
            found += 1
        p += 2
    return out


@dataclass
class PerturbationPoint:
    """A point ``a`` in the open dominant alcove: 0 < α(a) < 1 for all α ∈ R⁺."""

    R: RootDatum
    a: tuple[Fraction, ...]
    genericity_witness: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.a = la.vec(self.a)
        for r in self.R.positive_roots:
            v = r(self.a)
            if not 0 < v < 1:
                raise DomainError(
                    f"a = {fmt_vec(self.a)} is not in the open dominant alcove ({r.name()}(a) = {v})"
                )
        if not self.genericity_witness:
            self.genericity_witness.append("0 < α(a) < 1 for all positive α")

    def scaled(self, s) -> "PerturbationPoint":
        return PerturbationPoint(self.R, la.scale(Fraction(s), self.a))

    def simple_values(self) -> tuple[Fraction, ...]:
        return self.R.simple_values(self.a)

    def certify(self, note: str) -> None:
        self.genericity_witness.append(note)

    def __hash__(self) -> int:
        return hash(self.a)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PerturbationPoint):
            return NotImplemented
        return self.a == other.a and self.R is other.R


def canonical_perturbation(R: RootDatum, prime_shift: int = 0) -> PerturbationPoint:
    """a = c · Σ ω_i^∨ / p_i with odd primes p_i and c the largest 2^-m with θ(a) ≤ 1/2."""
    primes = _odd_primes(R.rank, prime_shift)
    base = la.zero(R.rank)
    for w, p in zip(R.fundamental_coweights, primes):
        base = la.add(base, la.scale(Fraction(1, p), w))
    c = Fraction(1)
    while max(r(la.scale(c, base)) for r in R.positive_roots) > Fraction(1, 2):
        c /= 2
    return PerturbationPoint(R, la.scale(c, base))


def perturbation_from_values(R: RootDatum, simple_values: Sequence) -> PerturbationPoint:
    """The point a with prescribed α_i(a)."""
    vals = la.vec(simple_values)
    a = la.zero(R.rank)
    for w, x in zip(R.fundamental_coweights, vals):
        a = la.add(a, la.scale(x, w))
    return PerturbationPoint(R, a)


def _as_point(a: "PerturbationPoint | Sequence") -> tuple[Fraction, ...]:
    return a.a if isinstance(a, PerturbationPoint) else la.vec(a)


@dataclass(frozen=True)
class WallCrossing:
    root: Root
    level: int
    time: Fraction
    coincidence_group: int = 0

    @property
    def wall(self) -> tuple[tuple[int, ...], int]:
        return (self.root.coeffs, self.level)

    def to_json(self) -> dict:
        return {"root": list(self.root.pairing), "level": self.level,
                "time": str(self.time), "group": self.coincidence_group}

    @classmethod
    def from_json(cls, R: RootDatum, d: dict) -> "WallCrossing":
        return cls(R.root_from_pairing(d["root"]), int(d["level"]), Fraction(d["time"]),
                   int(d["group"]))


def _walls_between(r: Root, x: Sequence, y: Sequence) -> list[tuple[int, Fraction]]:
    """Levels k with (α(x)-k)(α(y)-k) < 0 and the crossing time of each."""
    ax, ay = r(x), r(y)
    if ax == ay:
        return []
    lo, hi = min(ax, ay), max(ax, ay)
    k0 = floor(lo) + 1
    k1 = -floor(-hi) - 1  # ceil(hi) - 1
    return [(k, (k - ax) / (ay - ax)) for k in range(k0, k1 + 1)]


def _group(items: list[WallCrossing], key) -> list[WallCrossing]:
    out = []
    g = -1
    prev = object()
    for c in items:
        kv = key(c)
        if kv != prev:
            g += 1
            prev = kv
        out.append(WallCrossing(c.root, c.level, c.time, g))
    return out


def crossing_times(R: RootDatum, x: Sequence, y: Sequence) -> list[WallCrossing]:
    """All affine walls strictly separating x from y, sorted by crossing time."""
    x, y = la.vec(x), la.vec(y)
    if x == y:
        raise DomainError("segment endpoints coincide")
    out = []
    for r in R.positive_roots:
        for k, t in _walls_between(r, x, y):
            out.append(WallCrossing(r, k, t))
    out.sort(key=lambda c: (c.time, c.root.height, c.root.coeffs, c.level))
    return _group(out, lambda c: c.time)


def wall_count(R: RootDatum, x: Sequence, y: Sequence) -> int:
    """Number of separating walls from the sign formula alone (no times)."""
    n = 0
    for r in R.positive_roots:
        ax, ay = r(x), r(y)
        lo, hi = min(ax, ay), max(ax, ay)
        n += sum(1 for k in range(floor(lo), floor(hi) + 2) if (ax - k) * (ay - k) < 0)
    return n


@dataclass(frozen=True)
class NiceReport:
    ok: bool
    time: Optional[Fraction] = None
    walls: tuple[tuple[tuple[int, ...], int], ...] = ()
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _segment_report(R: RootDatum, x, y, allow_endpoint_walls: bool = True) -> NiceReport:
    x, y = la.vec(x), la.vec(y)
    if x == y:
        raise DomainError("segment endpoints coincide")
    for r in R.positive_roots:
        ax, ay = r(x), r(y)
        if ax == ay and ax.denominator == 1:
            return NiceReport(False, None, ((r.coeffs, int(ax)),), "segment lies inside a wall")
    crossings = crossing_times(R, x, y)
    by_time: dict[Fraction, list[WallCrossing]] = {}
    for c in crossings:
        by_time.setdefault(c.time, []).append(c)
    for t in sorted(by_time):
        group = by_time[t]
        if len(group) > 1:
            return NiceReport(False, t, tuple(c.wall for c in group),
                              "interior point on more than one wall")
    return NiceReport(True)


def is_nice(R: RootDatum, x: Sequence, y: Sequence) -> NiceReport:
    """Every interior point of [x, y] lies on at most one affine wall, crossed transversely.

    A segment meets each hyperplane at most once unless it lies inside it, so
    "crossed exactly once" reduces to the segment not being contained in a wall.
    Walls through the endpoints are allowed.
    """
    return _segment_report(R, x, y)


def is_nice_polyline(R: RootDatum, points: Sequence[Sequence]) -> NiceReport:
    """Niceness for a concatenation of segments (used with two segments).

    Each piece must be nice, junction points may not lie on a wall, and no wall
    may be crossed twice along the whole path.
    """
    pts = [la.vec(p) for p in points]
    if len(pts) < 2:
        raise DomainError("need at least two points")
    seen: dict = {}
    offset = Fraction(0)
    for idx, (p, q) in enumerate(zip(pts, pts[1:])):
        rep = _segment_report(R, p, q)
        if not rep.ok:
            return NiceReport(False, None if rep.time is None else offset + rep.time, rep.walls,
                              rep.reason)
        if idx > 0:
            on = [(r.coeffs, int(r(p))) for r in R.positive_roots if r(p).denominator == 1]
            if on:
                return NiceReport(False, offset, tuple(on), "junction lies on a wall")
        for c in crossing_times(R, p, q):
            if c.wall in seen:
                return NiceReport(False, offset + c.time, (c.wall,), "wall crossed twice")
            seen[c.wall] = offset + c.time
        offset += 1
    return NiceReport(True)


def _start(a) -> tuple[Fraction, ...]:
    return la.neg(_as_point(a))


def deg(R: RootDatum, q: Sequence, a: "PerturbationPoint | Sequence") -> int:
    """Number of affine walls met by the segment from -a to q."""
    q = la.vec(q)
    start = _start(a)
    if start == q:
        return 0
    rep = is_nice(R, start, q)
    if not rep.ok:
        raise NotGenericError(f"segment [-a, q] is not nice at t = {rep.time}: {rep.reason}")
    return len(crossing_times(R, start, q))


def deg_by_floor(R: RootDatum, q: Sequence, a: "PerturbationPoint | Sequence") -> int:
    """Σ_{α∈R⁺} ⌊α(w_q⁻¹(q + a))⌋."""
    p = la.add(la.vec(q), _as_point(a))
    w = chamber_of(p, R)
    winv = R.inverse(w)
    v = winv.act(p)
    return sum(floor(r(v)) for r in R.positive_roots)


def deg_closed_form(R: RootDatum, q: Sequence, a: "PerturbationPoint | Sequence") -> int:
    """⟨q, w_q(ρ)⟩ − ℓ(w_q)."""
    q = la.vec(q)
    w = chamber_of(la.add(q, _as_point(a)), R)
    val = R.inner(q, w.act(rho(R))) - w.length
    if val.denominator != 1:
        raise InternalError("non-integral degree")
    return int(val)


# -- Bott–Samelson ordering -----------------------------------------------------


def _limit_time(c: WallCrossing, q) -> Fraction:
    m = c.root(q)
    return Fraction(c.level) / m


def _bs_valid(R: RootDatum, q, a) -> Optional[list[WallCrossing]]:
    """Crossings of [-a, q] if [-s a, q] is nice for every s ∈ (0, 1], else None.

    For two walls the difference of crossing times has a numerator linear in
    s, so it keeps its sign on (0, 1] exactly when the s = 1 order is strict
    and the s → 0 limit times do not reverse it.
    """
    start = la.neg(a)
    if not is_nice(R, start, q).ok:
        return None
    cs = crossing_times(R, start, q)
    if any(cs[i].time == cs[i + 1].time for i in range(len(cs) - 1)):
        return None
    limits = [_limit_time(c, q) for c in cs]
    if any(limits[i] > limits[i + 1] for i in range(len(limits) - 1)):
        return None
    for c in cs:
        # s-independence of the wall set needs α(q) integral, checked via the floor
        if c.root(q).denominator != 1:
            return None
    return cs


def choose_bs_perturbation(R: RootDatum, q: Sequence,
                           a: "PerturbationPoint | Sequence | None" = None) -> PerturbationPoint:
    """A perturbation point for which [-s a, q] is nice for all s ∈ (0, 1].

    Starting from ``a`` (or the canonical choice), halve it until valid; if
    that fails, move to the next set of primes.
    """
    q = la.vec(q)
    if any(r(q).denominator != 1 for r in R.positive_roots):
        raise DomainError(f"{fmt_vec(q)} has non-integral root values")
    starts = [a] if a is not None else [canonical_perturbation(R, shift) for shift in range(4)]
    for start in starts:
        pt = start if isinstance(start, PerturbationPoint) else PerturbationPoint(R, start)
        cur = pt.a
        for _ in range(MAX_SHRINKS):
            if _bs_valid(R, q, cur) is not None:
                out = PerturbationPoint(R, cur)
                out.certify(f"[-s a, q] nice for all s in (0,1], q = {fmt_vec(q)}")
                return out
            cur = la.scale(Fraction(1, 2), cur)
    raise InternalError(f"no valid perturbation found for q = {fmt_vec(q)}")


def bs_wall_sequence(R: RootDatum, q: Sequence,
                     a: "PerturbationPoint | Sequence | None" = None) -> list[WallCrossing]:
    """Walls of [-a, q] in the order they are met as a shrinks to 0.

    ``time`` is the crossing time along [-a, q] for the chosen a;
    ``coincidence_group`` tags walls whose limit times agree.
    """
    q = la.vec(q)
    if all(x == 0 for x in q):
        return []
    pt = choose_bs_perturbation(R, q, a)
    cs = _bs_valid(R, q, pt.a)
    assert cs is not None
    return _group(cs, lambda c: _limit_time(c, q))


# -- affine Weyl orbit of 0 ------------------------------------------------------


def _max_abs_coord_bound(R: RootDatum, radius2: Fraction) -> int:
    """An integer B with |v_i| ≤ B for all v with ⟨v, v⟩ ≤ radius2."""
    g = np.array([[float(x) for x in row] for row in R.gram])
    ginv = np.linalg.inv(g)
    # |v_i| ≤ sqrt(radius2 · (G⁻¹)_ii)
    b = max(np.sqrt(float(radius2) * ginv[i, i]) for i in range(R.rank))
    return int(np.floor(b * (1 + 1e-9))) + 1


def lattice_points_in_ball(R: RootDatum, radius2, lattice=None) -> set[tuple[Fraction, ...]]:
    """Points of Q₀ (or a given Lattice) with ⟨v, v⟩ ≤ radius2, by box enumeration."""
    from itertools import product

    radius2 = Fraction(radius2)
    bound = _max_abs_coord_bound(R, radius2)
    out = set()
    if lattice is None:
        rng = range(-bound, bound + 1)
        for c in product(rng, repeat=R.rank):
            v = la.vec(c)
            if R.norm2(v) <= radius2:
                out.add(v)
        return out
    denom = lattice.denom
    rng = range(-bound * denom, bound * denom + 1)
    for c in product(rng, repeat=R.rank):
        v = tuple(Fraction(x, denom) for x in c)
        if R.norm2(v) <= radius2 and v in lattice:
            out.add(v)
    return out


def affine_orbit_of_zero(R: RootDatum, radius2) -> set[tuple[Fraction, ...]]:
    """The orbit of 0 under affine reflections, cut to ⟨v, v⟩ ≤ radius2.

    BFS over reflections in walls V_{α,k}; a reflection across a wall between
    the origin and the current point never increases the norm, so the ball
    restriction keeps every orbit point reachable.
    """
    radius2 = Fraction(radius2)
    origin = la.zero(R.rank)
    coroots = {r: R.coroot(r) for r in R.positive_roots}
    bound = {r: _level_bound(R, r, radius2) for r in R.positive_roots}
    seen = {origin}
    frontier = [origin]
    while frontier:
        nxt = []
        for v in frontier:
            for r, cv in coroots.items():
                av = r(v)
                for k in range(-bound[r], bound[r] + 1):
                    w = la.sub(v, la.scale(av - k, cv))
                    if w in seen or R.norm2(w) > radius2:
                        continue
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


def _level_bound(R: RootDatum, r: Root, radius2: Fraction) -> int:
    # |α(v)| ≤ |α| · |v| for the metric; levels beyond that reflect points out of the ball
    l2 = float(R.root_length2(r)) * float(radius2)
    return int(np.floor(np.sqrt(l2) * (1 + 1e-9))) + 1


def perturbation_for(R: RootDatum, qs: Iterable[Sequence],
                     a: "PerturbationPoint | Sequence | None" = None) -> PerturbationPoint:
    """One perturbation point valid (in the Bott–Samelson sense) for every q in ``qs``.

    Validity for all s ∈ (0, 1] implies every [-a, q] is nice, so the result
    can be used for deg, the Bott–Samelson ordering, and anything built on w_q.
    """
    qs = sorted({la.vec(q) for q in qs if any(x != 0 for x in q)})
    for q in qs:
        if any(r(q).denominator != 1 for r in R.positive_roots):
            raise DomainError(f"{fmt_vec(q)} has non-integral root values")
    starts = [a] if a is not None else [canonical_perturbation(R, shift) for shift in range(6)]
    for start in starts:
        pt = start if isinstance(start, PerturbationPoint) else PerturbationPoint(R, start)
        cur = pt.a
        for _ in range(MAX_SHRINKS // 4):
            bad = next((i for i, q in enumerate(qs) if _bs_valid(R, q, cur) is None), None)
            if bad is None:
                out = PerturbationPoint(R, cur)
                out.certify(f"[-s a, q] nice for all s in (0,1] on {len(qs)} queries")
                return out
            qs.insert(0, qs.pop(bad))  # the likeliest to fail again
            cur = la.scale(Fraction(1, 2), cur)
    raise InternalError("no perturbation point valid for the whole query set")
