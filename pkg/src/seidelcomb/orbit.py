"""Coadjoint orbit combinatorics.

An orbit is fixed by a set ``I`` of simple indices: its base point is
``y₀ = c·ρ_I`` (metric dual), whose stabilizer in W is ``W_I``.  Critical
points are the Weyl images ``w(y₀)``, indexed by minimal coset
representatives.  The regular orbit (``I = ∅``) uses ``x₀ = ρ``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from . import linalg as la
from .errors import CosetError, DomainError, InternalError
from .linalg import Lattice
from .rootdata import (
    Root,
    RootDatum,
    SublatticePair,
    WeylElement,
    _check_I,
    chamber_of,
    fmt_vec,
    quotient_structure,
    rho,
    rho_I,
    rho_I_functional,
    roots_of_I,
    sublattices,
    weyl_group,
)

__all__ = [
    "OrbitSpec",
    "NovikovCoset",
    "orbit_data",
    "minimal_reps",
    "vanishing_roots",
    "novikov_group",
    "c1v",
    "c1v_at",
    "c1v_fiber",
    "unstable_dim",
    "coupling_value",
    "psi",
    "projection",
    "p_map",
    "fiber_points",
]


def minimal_reps(R: RootDatum, I: Iterable[int] = ()) -> list[WeylElement]:
    """Minimal-length representatives of W / W_I: w with w(α_i) > 0 for i ∈ I."""
    I = _check_I(R, I)
    simple = R.simple_roots
    out = []
    for w in weyl_group(R):
        if all(R.act_root(w, simple[i - 1]).is_positive for i in I):
            out.append(w)
    return out


def parabolic_subgroup(R: RootDatum, I: Iterable[int]) -> list[WeylElement]:
    I = _check_I(R, I)
    return [w for w in weyl_group(R) if set(w.word) <= I]


def vanishing_roots(R: RootDatum, y: Sequence) -> tuple[Root, ...]:
    """Positive roots α with α(y) = 0."""
    return tuple(r for r in R.positive_roots if r(y) == 0)


@dataclass(frozen=True, eq=False)
class OrbitSpec:
    R: RootDatum
    I: frozenset
    base_point_scale: Fraction
    y0: tuple[Fraction, ...]
    x0: tuple[Fraction, ...]

    @cached_property
    def R_y0(self) -> tuple[Root, ...]:
        return vanishing_roots(self.R, self.y0)

    @cached_property
    def W_y0(self) -> list[WeylElement]:
        return parabolic_subgroup(self.R, self.I)

    @cached_property
    def crit(self) -> list[WeylElement]:
        """Minimal coset representatives of W / W_{y₀}, one per critical point."""
        return minimal_reps(self.R, self.I)

    @cached_property
    def _rep_by_point(self) -> dict:
        return {self.point(w): w for w in self.crit}

    def point(self, w: WeylElement) -> tuple[Fraction, ...]:
        return w.act(self.y0)

    def crit_points(self) -> list[tuple[Fraction, ...]]:
        return [self.point(w) for w in self.crit]

    def coset_rep(self, y: Sequence) -> WeylElement:
        """The minimal representative w with w(y₀) = y."""
        try:
            return self._rep_by_point[la.vec(y)]
        except KeyError:
            raise DomainError(f"{fmt_vec(y)} is not a critical point of this orbit") from None

    def min_rep(self, w: WeylElement) -> WeylElement:
        """Minimal representative of the coset w W_{y₀}."""
        return self.coset_rep(w.act(self.y0))

    def sublattices_at(self, y: Sequence) -> SublatticePair:
        key = la.vec(y)
        cache = self.__dict__.setdefault("_sub_cache", {})
        if key not in cache:
            cache[key] = sublattices(self.R, vanishing_roots(self.R, key))
        return cache[key]

    @property
    def dim_real(self) -> int:
        return 2 * sum(1 for r in self.R.positive_roots if r(self.y0) != 0)

    def __repr__(self) -> str:
        return f"OrbitSpec({self.R.name}, I={sorted(self.I)}, c={self.base_point_scale})"


def orbit_data(R: RootDatum, I: Iterable[int] = (), c=1) -> OrbitSpec:
    I = _check_I(R, I)
    c = Fraction(c)
    if c <= 0:
        raise DomainError("base point scale must be positive")
    y0 = la.scale(c, rho_I(R, I))
    spec = OrbitSpec(R, I, c, y0, rho(R))
    if set(spec.R_y0) != set(roots_of_I(R, I)):
        raise InternalError("stabilizer roots of y0 differ from R_I")
    return spec


def fiber_points(orbit: OrbitSpec, y: Sequence) -> list[tuple[Fraction, ...]]:
    """Critical points of the regular orbit lying over y: {w v x₀ : v ∈ W_I}."""
    w = orbit.coset_rep(y)
    pts = []
    for v in orbit.W_y0:
        pts.append(w.act(v.act(orbit.x0)))
    return pts


# -- Novikov cosets ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class NovikovCoset:
    """The class of q + Q_{R_y} at a critical point y."""

    orbit: OrbitSpec
    base: tuple[Fraction, ...]
    rep: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "base", la.vec(self.base))
        object.__setattr__(self, "rep", la.vec(self.rep))
        self.orbit.coset_rep(self.base)  # validates base

    @property
    def lattice(self) -> Lattice:
        return self.orbit.sublattices_at(self.base).q_lattice

    @property
    def canonical_rep(self) -> tuple[Fraction, ...]:
        return self.lattice.reduce(self.rep)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NovikovCoset):
            return NotImplemented
        return (self.orbit is other.orbit and self.base == other.base
                and la.sub(self.rep, other.rep) in self.lattice)

    def __hash__(self) -> int:
        return hash((self.base, self.canonical_rep))

    def shifted(self, v: Sequence) -> "NovikovCoset":
        return NovikovCoset(self.orbit, self.base, la.add(self.rep, v))

    def rebase(self, w: WeylElement) -> "NovikovCoset":
        """A_{y, q} = A_{w y, w q}."""
        return NovikovCoset(self.orbit, w.act(self.base), w.act(self.rep))

    def to_json(self) -> dict:
        return {
            "base": list(self.orbit.coset_rep(self.base).word),
            "rep": [str(x) for x in self.rep],
            "canonical": [str(x) for x in self.canonical_rep],
        }

    @classmethod
    def from_json(cls, orbit: OrbitSpec, d: dict) -> "NovikovCoset":
        w = orbit.R.element(d["base"])
        nov = cls(orbit, orbit.point(w), [Fraction(x) for x in d["rep"]])
        if "canonical" in d and list(nov.canonical_rep) != [Fraction(x) for x in d["canonical"]]:
            raise CosetError("canonical representative does not match")
        return nov

    def __repr__(self) -> str:
        return f"NovikovCoset(base={fmt_vec(self.base)}, rep={fmt_vec(self.rep)})"


def novikov_group(orbit: OrbitSpec, y: Sequence) -> tuple[int, list[int]]:
    """(free rank, torsion) of Q / Q_{R_y}."""
    return quotient_structure(orbit.R.unit_lattice, orbit.sublattices_at(y).q_lattice)


def c1v_at(R: RootDatum, point: Sequence, q: Sequence,
           roots: Optional[Iterable[Root]] = None) -> Fraction:
    """−Σ α(q) over roots α (from ``roots`` and their negatives, default all of R) with α(point) > 0."""
    pool = R.roots if roots is None else [s for r in roots for s in (r, -r)]
    return -sum((r(q) for r in pool if r(point) > 0), Fraction(0))


def c1v(nov: NovikovCoset) -> int:
    """Vertical Chern number −Σ_{α(y)>0} α(q) of a Novikov class."""
    R = nov.orbit.R
    val = c1v_at(R, nov.base, nov.rep)
    check = c1v_at(R, nov.base, nov.canonical_rep)
    if val != check or val.denominator != 1:
        raise InternalError("vertical Chern number depends on the coset representative")
    return int(val)


def c1v_fiber(orbit: OrbitSpec, x: Sequence, y: Sequence, qt: Sequence) -> int:
    """Chern number of a fiber class: −Σ α(q̃) over α ∈ R_y with α(x) > 0."""
    val = c1v_at(orbit.R, x, qt, vanishing_roots(orbit.R, y))
    if val.denominator != 1:
        raise InternalError("non-integral fiber Chern number")
    return int(val)


def unstable_dim(orbit: OrbitSpec, y: Sequence, a) -> int:
    a_pt = a.a if hasattr(a, "a") else la.vec(a)
    return 2 * sum(1 for r in orbit.R.roots if r(y) > 0 and r(a_pt) < 0)


def coupling_value(orbit: OrbitSpec, q: Sequence, a) -> Fraction:
    """−⟨w_q⁻¹(q), y₀⟩, evaluated as −c·ρ_I(w_q⁻¹ q)."""
    R = orbit.R
    q = la.vec(q)
    a_pt = a.a if hasattr(a, "a") else la.vec(a)
    w = chamber_of(la.add(q, a_pt), R)
    v = R.inverse(w).act(q)
    return -orbit.base_point_scale * la.dot(rho_I_functional(R, orbit.I), v)


# -- fibration maps ----------------------------------------------------------------


def _projector(orbit: OrbitSpec, y: Sequence) -> Optional[tuple]:
    """Matrix of the metric-orthogonal projection onto span Q_{R_y}: B (BᵀGB)⁻¹ BᵀG."""
    key = la.vec(y)
    cache = orbit.__dict__.setdefault("_proj_cache", {})
    if key not in cache:
        R = orbit.R
        basis = orbit.sublattices_at(key).q_basis
        if not basis:
            cache[key] = None
        else:
            b = la.transpose(basis)  # columns
            gb = la.matmul(R.gram, b)
            m = la.matmul(la.transpose(b), gb)
            cache[key] = la.matmul(b, la.matmul(la.inverse(m), la.transpose(gb)))
    return cache[key]


def projection(orbit: OrbitSpec, y: Sequence, q: Sequence) -> tuple[Fraction, ...]:
    """Metric-orthogonal projection of q onto the span of the coroots of R_y."""
    p = _projector(orbit, y)
    if p is None:
        return la.zero(orbit.R.rank)
    return la.matvec(p, la.vec(q))


def psi(orbit: OrbitSpec, y: Sequence, q: Sequence) -> tuple[Fraction, ...]:
    """Canonical representative of π(q) + Q_{R_y} in P^∨_{R_y} / Q_{R_y}."""
    pair = orbit.sublattices_at(y)
    p = projection(orbit, y, q)
    if p not in pair.pvee_lattice:
        raise InternalError(f"projection {fmt_vec(p)} is not in the fiber coweight lattice")
    return pair.q_lattice.reduce(p)


def p_map(orbit: OrbitSpec, y: Sequence, q: Sequence, qt: Sequence) -> tuple[Fraction, ...]:
    """q̃ − π(q) + q, for q̃ in the coset π(q) + Q_{R_y}."""
    q, qt = la.vec(q), la.vec(qt)
    pair = orbit.sublattices_at(y)
    p = projection(orbit, y, q)
    if la.sub(qt, p) not in pair.q_lattice:
        raise CosetError(f"{fmt_vec(qt)} is not in π(q) + Q_R_y for q = {fmt_vec(q)}")
    return la.add(la.sub(qt, p), q)
