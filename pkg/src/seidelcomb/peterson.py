"""Chamber data of q, Peterson elements and lifts, Hofer constants and leading terms.

Everything here takes a perturbation point ``a`` in the open dominant alcove
(see :mod:`seidelcomb.affine`).  For ``q`` in the unit lattice all of
``w_q``, ``deg``, ``deg^{L/T}`` only depend on ``a`` being small enough to
keep the relevant segments nice, which :func:`affine.perturbation_for`
certifies.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import floor
from typing import Optional, Sequence

from . import linalg as la
from .affine import PerturbationPoint, crossing_times, lattice_points_in_ball
from .errors import DomainError, InternalError, LiftError, NotGenericError
from .orbit import NovikovCoset, OrbitSpec, fiber_points, projection, vanishing_roots
from .rootdata import Root, RootDatum, WeylElement, chamber_of, fmt_vec, rho, weyl_group

__all__ = [
    "w_q",
    "ell_prime",
    "ell_prime_closed_form",
    "deg_lt",
    "deg_lt_by_walls",
    "is_peterson",
    "fiber_degree",
    "peterson_lift",
    "associated_lift",
    "hofer_constant",
    "hofer_brute_force",
    "SchubertTerm",
    "SeidelStatus",
    "SeidelResult",
    "seidel_leading",
    "seidel_basis_value",
    "BasisKind",
    "pontryagin_index",
    "image_basis_member",
    "s_generators",
]


def _pt(a) -> tuple[Fraction, ...]:
    return a.a if isinstance(a, PerturbationPoint) else la.vec(a)


def w_q(R: RootDatum, q: Sequence, a) -> WeylElement:
    """The Weyl element whose chamber contains q + a."""
    return chamber_of(la.add(la.vec(q), _pt(a)), R)


def _frac(x: Fraction) -> Fraction:
    return x - floor(x)


def ell_prime(R: RootDatum, w: WeylElement, a) -> Fraction:
    """Perturbed length Σ_{α∈R⁺} frac(α(w⁻¹ a))."""
    v = R.inverse(w).act(_pt(a))
    return sum((_frac(r(v)) for r in R.positive_roots), Fraction(0))


def ell_prime_closed_form(R: RootDatum, w: WeylElement, a) -> Fraction:
    """ℓ(w) + ⟨a, w(ρ)⟩."""
    return w.length + R.inner(_pt(a), w.act(rho(R)))


# -- fiber degree --------------------------------------------------------------


def _fiber_roots(orbit: OrbitSpec, q: Sequence, a) -> tuple[WeylElement, tuple, tuple, tuple[Root, ...]]:
    R = orbit.R
    w = w_q(R, q, a)
    y = w.act(orbit.y0)
    x = w.act(orbit.x0)
    return w, y, x, vanishing_roots(R, y)


def deg_lt(orbit: OrbitSpec, q: Sequence, a) -> int:
    """Σ ⌊α(q + a)⌋ over roots α vanishing at y = w_q(y₀) with α(w_q(x₀)) > 0."""
    q = la.vec(q)
    _, y, x, fiber = _fiber_roots(orbit, q, a)
    p = la.add(q, _pt(a))
    total = 0
    for r in fiber:
        for s in (r, -r):
            if s(x) > 0:
                v = floor(s(p))
                if v < 0:
                    raise InternalError(f"negative fiber summand for q = {fmt_vec(q)}")
                total += v
    return total


def deg_lt_by_walls(orbit: OrbitSpec, q: Sequence, a) -> int:
    """Fiber Bott–Samelson dimension: walls of R_y met by the segment from -π(a) to π(q).

    Roots of R_y take the same values on a point and on its projection to
    the span of their coroots, so the count is done on the projected segment.
    """
    R = orbit.R
    q = la.vec(q)
    _, y, _, fiber = _fiber_roots(orbit, q, a)
    if not fiber:
        return 0
    start = la.neg(projection(orbit, y, _pt(a)))
    end = projection(orbit, y, q)
    keys = {r.coeffs for r in fiber}
    return sum(1 for c in crossing_times(R, start, end) if c.root.coeffs in keys)


def is_peterson(orbit: OrbitSpec, q: Sequence, a) -> bool:
    return deg_lt(orbit, q, a) == 0


def fiber_degree(orbit: OrbitSpec, y: Sequence, qt: Sequence) -> int:
    """Wall count for the fiber system R_y along the segment from -a to q̃, a → 0.

    With β(q̃) = m ∈ Z a positive root β of R_y contributes m walls if m ≥ 0
    and |m| − 1 if m < 0.
    """
    total = 0
    for r in vanishing_roots(orbit.R, y):
        m = r(qt)
        if m.denominator != 1:
            raise DomainError(f"{fmt_vec(qt)} is not integral on the fiber roots")
        m = int(m)
        total += m if m >= 0 else -m - 1
    return total


def _components(R: RootDatum, roots: Sequence[Root]) -> list[list[Root]]:
    comps: list[list[Root]] = []
    for r in roots:
        linked = [c for c in comps if any(R.inner(R.coroot(r), R.coroot(s)) != 0 for s in c)]
        merged = [r] + [s for c in linked for s in c]
        comps = [c for c in comps if c not in linked] + [merged]
    return comps


def fiber_coxeter_number(orbit: OrbitSpec, y: Sequence) -> int:
    R = orbit.R
    best = 1
    for comp in _components(R, vanishing_roots(R, y)):
        rk = la.rank([R.coroot(r) for r in comp])
        best = max(best, 2 * len(comp) // rk)
    return best


def peterson_lift(orbit: OrbitSpec, nov: NovikovCoset, radius: Optional[int] = None,
                  retries: int = 3) -> tuple[Fraction, ...]:
    """The unique element of the coset whose fiber degree is zero."""
    y = nov.base
    pair = orbit.sublattices_at(y)
    basis = pair.q_basis
    base = nov.canonical_rep
    if not basis:
        return base
    r = radius if radius is not None else 2 * fiber_coxeter_number(orbit, y)
    for _ in range(retries + 1):
        found = []
        for ns in product(range(-r, r + 1), repeat=len(basis)):
            v = base
            for n, b in zip(ns, basis):
                if n:
                    v = la.add(v, la.scale(n, b))
            if fiber_degree(orbit, y, v) == 0:
                found.append(v)
        if len(found) == 1:
            return found[0]
        if len(found) > 1:
            raise LiftError(f"{len(found)} zero-degree lifts of {nov}: theory violation")
        r *= 2
    raise LiftError(f"no zero-degree lift of {nov} within radius {r // 2}")


def associated_lift(orbit: OrbitSpec, nov: NovikovCoset, a,
                    qt: Optional[Sequence] = None) -> tuple[Fraction, ...]:
    """The fiber critical point x with sign α(x) = sign α(q̃ + a) on R_y."""
    R = orbit.R
    y = nov.base
    if qt is None:
        qt = peterson_lift(orbit, nov)
    p = la.add(la.vec(qt), _pt(a))
    fiber = vanishing_roots(R, y)
    if any(r(p) == 0 for r in fiber):
        raise NotGenericError("q̃ + a lies on a fiber wall")
    matches = [x for x in fiber_points(orbit, y) if all((r(x) > 0) == (r(p) > 0) for r in fiber)]
    if len(matches) != 1:
        raise LiftError(f"{len(matches)} fiber critical points match the sign pattern")
    return matches[0]


# -- Hofer constants --------------------------------------------------------------


def hofer_constant(orbit: OrbitSpec, q: Sequence, a) -> Fraction:
    """⟨q, w_q(y₀)⟩."""
    R = orbit.R
    q = la.vec(q)
    return R.inner(q, w_q(R, q, a).act(orbit.y0))


def hofer_brute_force(orbit: OrbitSpec, q: Sequence) -> tuple[Fraction, list[WeylElement]]:
    """max_w ⟨q, w(y₀)⟩ and all maximizers."""
    R = orbit.R
    vals = [(R.inner(la.vec(q), w.act(orbit.y0)), w) for w in weyl_group(R)]
    best = max(v for v, _ in vals)
    return best, [w for v, w in vals if v == best]


# -- leading terms ------------------------------------------------------------------


@dataclass(frozen=True)
class SchubertTerm:
    """±σ_{coset} T^{nov}; the sign is never pinned down."""

    coset: WeylElement
    nov: NovikovCoset
    coeff_magnitude: int = 1
    sign_known: bool = False

    def to_json(self) -> dict:
        return {"coset": list(self.coset.word), "nov": self.nov.to_json(),
                "coeff": self.coeff_magnitude, "sign_known": self.sign_known}


class SeidelStatus(enum.Enum):
    LEADING = "leading"
    EXACT = "exact"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class SeidelResult:
    status: SeidelStatus
    term: Optional[SchubertTerm]
    ell_prime_bound: Optional[Fraction] = None
    deg_lt: int = 0


def _leading_term(orbit: OrbitSpec, q, a) -> tuple[WeylElement, SchubertTerm]:
    R = orbit.R
    w = w_q(R, q, a)
    coset = orbit.min_rep(w)
    nov = NovikovCoset(orbit, orbit.y0, R.inverse(w).act(la.vec(q)))
    return w, SchubertTerm(coset, nov)


def seidel_leading(orbit: OrbitSpec, q: Sequence, a) -> SeidelResult:
    """Leading term of the Seidel image of the Bott–Samelson class of q.

    Lower terms are indexed by w′ with ℓ′(w′) < ℓ′(w_q); that bound is returned.
    The value is exact when in addition w_q is the identity.  If q is not a
    Peterson element nothing is claimed.
    """
    d = deg_lt(orbit, q, a)
    if d != 0:
        return SeidelResult(SeidelStatus.UNDETERMINED, None, None, d)
    w, term = _leading_term(orbit, q, a)
    status = SeidelStatus.EXACT if w.is_identity() else SeidelStatus.LEADING
    return SeidelResult(status, term, ell_prime(orbit.R, w, a), 0)


class BasisKind(enum.Enum):
    BOTT_SAMELSON = "bs"
    PRIME = "prime"


def seidel_basis_value(orbit: OrbitSpec, q: Sequence, a,
                       basis_kind: BasisKind = BasisKind.PRIME) -> "list[SchubertTerm] | SeidelResult":
    """Value on the chosen basis element; for PRIME, a list of terms (empty means 0)."""
    if basis_kind is BasisKind.BOTT_SAMELSON:
        return seidel_leading(orbit, q, a)
    if deg_lt(orbit, q, a) != 0:
        return []
    return [_leading_term(orbit, q, a)[1]]


# -- loop products and the image basis -------------------------------------------------


def pontryagin_index(R: RootDatum, q0: Sequence, q1: Sequence, a) -> tuple[Fraction, ...]:
    """Index of x_{q0} · x_{q1}: q1 + w_{q1}(q0), for dominant q0."""
    q0, q1 = la.vec(q0), la.vec(q1)
    if not R.is_dominant(q0):
        raise DomainError(f"{fmt_vec(q0)} is not dominant")
    return la.add(q1, w_q(R, q1, a).act(q0))


def image_basis_member(R: RootDatum, w: WeylElement, q: Sequence, a) -> bool:
    """Whether q + w⁻¹(a) is dominant."""
    v = la.add(la.vec(q), R.inverse(w).act(_pt(a)))
    vals = R.simple_values(v)
    if any(x == 0 for x in vals):
        raise NotGenericError("q + w⁻¹(a) lies on a wall")
    return all(x > 0 for x in vals)


# -- generating set S --------------------------------------------------------------------


def s_generators(R: RootDatum) -> list[tuple[Fraction, ...]]:
    """Nonzero elements of minimal norm in each coset of Q / Q₀."""
    Q = R.unit_lattice
    Q0 = R.coroot_lattice
    # a generous radius: the largest coroot norm, or a coset representative
    reps = _coset_reps(R)
    radius2 = max([R.norm2(R.coroot(r)) for r in R.positive_roots]
                  + [R.norm2(v) for v in reps])
    pts = lattice_points_in_ball(R, radius2, lattice=Q)
    best: dict = {}
    for v in pts:
        if all(x == 0 for x in v):
            continue
        key = Q0.reduce(v)
        n = R.norm2(v)
        cur = best.get(key)
        if cur is None or n < cur[0]:
            best[key] = (n, [v])
        elif n == cur[0]:
            cur[1].append(v)
    if len(best) != len(reps):
        raise InternalError("ball missed a coset of Q/Q0")
    return sorted(v for _, vs in best.values() for v in vs)


def _coset_reps(R: RootDatum) -> list[tuple[Fraction, ...]]:
    seen = {}
    frontier = [la.zero(R.rank)]
    seen[frontier[0]] = frontier[0]
    gens = R.unit_lattice.basis()
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                u = R.coroot_lattice.reduce(la.add(v, g))
                if u not in seen:
                    seen[u] = u
                    nxt.append(u)
        frontier = nxt
    return list(seen)
