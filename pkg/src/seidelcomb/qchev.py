"""Quantum Chevalley products on G/B and G/P, and the Peterson–Woodward check.

Schubert classes of G/P are indexed by minimal coset representatives of
W / W_I; quantum parameters by degrees ``d`` in the coroot lattice with the
coordinates in ``I`` set to zero.  The divisor rule used is the parabolic
quantum Chevalley formula of Fulton–Woodward:

    σ_{s_i} ⋆ σ_w = Σ ⟨ω_i, β^∨⟩ σ_{w s_β}                     (ℓ(w s_β) = ℓ(w) + 1)
                  + Σ ⟨ω_i, β^∨⟩ q^{d(β)} σ_{⌊w s_β⌋}          (ℓ(⌊w s_β⌋) = ℓ(w) + 1 − ρ_I(β^∨))

with β over R⁺ ∖ R_I⁺, ⌊v⌋ the minimal representative of v W_I,
ρ_I = Σ_{α∈R⁺∖R_I⁺} α (the first Chern class of G/P), and d(β) the image of
β^∨ with the I-coordinates dropped.  For I = ∅ this is the quantum
Chevalley formula for G/B.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Iterable, Iterator, Optional, Sequence

from . import linalg as la
from .errors import DomainError, InternalError, SpecError
from .orbit import NovikovCoset, OrbitSpec, minimal_reps, orbit_data
from .peterson import associated_lift, peterson_lift
from .rootdata import Root, RootDatum, WeylElement, rho_I_functional, word_str

__all__ = [
    "QHElement",
    "minimal_reps",
    "quantum_chevalley",
    "multiply_divisor",
    "divisor_product",
    "divisor_power_constant",
    "PWInstance",
    "pw_transfer",
    "pw_instance",
    "verify_pw",
    "degree_coset",
]

Key = tuple[tuple[int, ...], tuple[int, ...]]


class QHElement:
    """Finite integer combination of q^d σ_w, keyed by (word of w, d)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict] = None):
        self.terms: dict[Key, int] = {}
        for k, c in (terms or {}).items():
            if c:
                self.terms[(tuple(k[0]), tuple(int(x) for x in k[1]))] = int(c)

    @classmethod
    def unit(cls, rank: int) -> "QHElement":
        return cls({((), (0,) * rank): 1})

    def coefficient(self, word: Sequence[int], degree: Sequence[int]) -> int:
        return self.terms.get((tuple(word), tuple(degree)), 0)

    def __add__(self, other: "QHElement") -> "QHElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return QHElement(out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QHElement):
            return NotImplemented
        return self.terms == other.terms

    def __iter__(self) -> Iterator[tuple[Key, int]]:
        return iter(sorted(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def classical_part(self) -> "QHElement":
        return QHElement({k: c for k, c in self.terms.items() if not any(k[1])})

    def to_json(self) -> list[dict]:
        return [{"word": list(w), "degree": list(d), "coeff": c} for (w, d), c in self]

    @classmethod
    def from_json(cls, data: list[dict]) -> "QHElement":
        return cls({(tuple(t["word"]), tuple(t["degree"])): t["coeff"] for t in data})

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (w, d), c in self:
            q = "".join(f"q{i + 1}^{e}" if e != 1 else f"q{i + 1}" for i, e in enumerate(d) if e)
            parts.append(f"{c}*{q + '*' if q else ''}σ[{word_str(w)}]")
        return " + ".join(parts)


class _Context:
    """Cached data for one (R, I): coset lookups, reflections, coroots."""

    def __init__(self, R: RootDatum, I: Iterable[int]):
        self.R = R
        self.orbit = orbit_data(R, I)
        self.I = self.orbit.I
        self.reps = self.orbit.crit
        self.rep_words = {w.word for w in self.reps}
        self.c1 = rho_I_functional(R, self.I)
        inside = set(self.orbit.R_y0)
        self.betas = [b for b in R.positive_roots if b not in inside]
        self.coroot = {b: tuple(int(x) for x in R.coroot(b)) for b in R.positive_roots}
        self.refl = {b: self._reflection(b) for b in R.positive_roots}

    def _reflection(self, b: Root) -> WeylElement:
        cv = self.R.coroot(b)
        m = tuple(
            tuple(int(int(i == j) - cv[i] * b.pairing[j]) for j in range(self.R.rank))
            for i in range(self.R.rank)
        )
        return self.R._element_index[m]

    def floor(self, v: WeylElement) -> WeylElement:
        return self.orbit.min_rep(v)

    def degree(self, b: Root) -> tuple[int, ...]:
        return tuple(0 if k + 1 in self.I else x for k, x in enumerate(self.coroot[b]))


_CONTEXTS: dict = {}


def _ctx(R: RootDatum, I: Iterable[int]) -> _Context:
    key = (id(R), frozenset(I))
    if key not in _CONTEXTS:
        _CONTEXTS[key] = (R, _Context(R, I))
    return _CONTEXTS[key][1]


def quantum_chevalley(R: RootDatum, I: Iterable[int], i: int, w: WeylElement) -> QHElement:
    """σ_{s_i} ⋆ σ_w in QH*(G/P_I)."""
    ctx = _ctx(R, I)
    if i in ctx.I or not 1 <= i <= R.rank:
        raise SpecError(f"s_{i} is not a divisor class for I = {sorted(ctx.I)}")
    if w.word not in ctx.rep_words:
        raise DomainError(f"{w} is not a minimal coset representative")
    out: dict = defaultdict(int)
    zero = (0,) * R.rank
    for b in ctx.betas:
        c = ctx.coroot[b][i - 1]
        if c == 0:
            continue
        v = R.mul(w, ctx.refl[b])
        if v.length == w.length + 1:
            if v.word not in ctx.rep_words:
                raise InternalError(f"classical Chevalley term {v} outside W^I")
            out[(v.word, zero)] += c
            continue
        fv = ctx.floor(v)
        shift = sum(ctx.c1[k] * ctx.coroot[b][k] for k in range(R.rank))
        if fv.length == w.length + 1 - shift:
            out[(fv.word, ctx.degree(b))] += c
    return QHElement(out)


def multiply_divisor(R: RootDatum, I: Iterable[int], i: int, x: QHElement) -> QHElement:
    """σ_{s_i} ⋆ x."""
    out: dict = defaultdict(int)
    for (word, d), c in x:
        w = R.element(word)
        for (vw, dd), cc in quantum_chevalley(R, I, i, w):
            out[(vw, tuple(a + b for a, b in zip(d, dd)))] += c * cc
    return QHElement(out)


def divisor_product(R: RootDatum, I: Iterable[int], seq: Sequence[int]) -> QHElement:
    """σ_{s_{i1}} ⋆ ⋯ ⋆ σ_{s_ik} (the unit for an empty sequence)."""
    x = QHElement.unit(R.rank)
    for i in reversed(list(seq)):
        x = multiply_divisor(R, I, i, x)
    return x


def divisor_power_constant(orbit: OrbitSpec, seq: Sequence[int], target: WeylElement,
                           degree: Sequence[int]) -> int:
    return divisor_product(orbit.R, orbit.I, seq).coefficient(target.word, degree)


def degree_coset(orbit: OrbitSpec, target: WeylElement, degree: Sequence[int]) -> NovikovCoset:
    """Novikov class at y = target(y₀) attached to the quantum parameter q^d.

    q^d at the base point corresponds to the class A_{y₀, −d}; moving it to
    y = v(y₀) gives the representative −v(d).
    """
    d = la.vec(degree)
    return NovikovCoset(orbit, orbit.point(target), la.neg(target.act(d)))


# -- Peterson–Woodward comparison ----------------------------------------------------


@dataclass(frozen=True)
class PWInstance:
    orbit: OrbitSpec
    inputs: tuple[WeylElement, ...]
    target: WeylElement
    degree: tuple[int, ...]

    @property
    def nov(self) -> NovikovCoset:
        return degree_coset(self.orbit, self.target, self.degree)


@dataclass(frozen=True)
class PWTransfer:
    """The two structure-constant addresses the comparison formula equates."""

    gp_inputs: tuple[tuple[int, ...], ...]
    gp_target: tuple[int, ...]
    gp_degree: tuple[int, ...]
    lifted_inputs: tuple[tuple[int, ...], ...]
    q_tilde: tuple[Fraction, ...]
    lift_target: tuple[int, ...]
    gb_degree: Optional[tuple[int, ...]]  # None when −u⁻¹(q̃) is not effective


def pw_instance(orbit: OrbitSpec, seq: Sequence[int], target: WeylElement,
                degree: Sequence[int]) -> PWInstance:
    R = orbit.R
    return PWInstance(orbit, tuple(R.element((i,)) for i in seq), target,
                      tuple(int(x) for x in degree))


def pw_transfer(inst: PWInstance, a) -> PWTransfer:
    orbit = inst.orbit
    R = orbit.R
    lifted = []
    for y in inst.inputs:
        # shortest element of the fiber over y(y₀): the minimal representative itself
        lifted.append(orbit.min_rep(y).word)
    nov = inst.nov
    qt = peterson_lift(orbit, nov)
    x = associated_lift(orbit, nov, a, qt)
    u = next(w for w in _weyl_by_point(orbit) if w.act(orbit.x0) == x)
    dB = la.neg(R.inverse(u).act(qt))
    eff = all(v.denominator == 1 and v >= 0 for v in dB)
    return PWTransfer(
        gp_inputs=tuple(y.word for y in inst.inputs),
        gp_target=inst.target.word,
        gp_degree=inst.degree,
        lifted_inputs=tuple(lifted),
        q_tilde=qt,
        lift_target=u.word,
        gb_degree=tuple(int(v) for v in dB) if eff else None,
    )


def _weyl_by_point(orbit: OrbitSpec) -> list[WeylElement]:
    from .rootdata import weyl_group

    return weyl_group(orbit.R)


def _degrees(R: RootDatum, I: frozenset, maxdeg: int) -> list[tuple[int, ...]]:
    free = [k for k in range(R.rank) if k + 1 not in I]
    out = []
    for vals in product(range(maxdeg + 1), repeat=len(free)):
        if sum(vals) > maxdeg:
            continue
        d = [0] * R.rank
        for k, v in zip(free, vals):
            d[k] = v
        out.append(tuple(d))
    return out


def verify_pw(orbit: OrbitSpec, kmax: int, maxdeg: int, a) -> list[dict]:
    """Check the comparison formula on all graded divisor-power instances.

    Inputs are multisets of divisor classes of size 1..kmax, targets run over
    W^I and degrees over effective classes of total degree ≤ maxdeg with
    ℓ(target) + c₁(d) = k.  Each report line records both constants.
    """
    R = orbit.R
    I = orbit.I
    c1_P = rho_I_functional(R, I)
    c1_B = rho_I_functional(R, ())
    divisors = [i for i in range(1, R.rank + 1) if i not in I]
    degrees = _degrees(R, I, maxdeg)
    report = []
    for k in range(1, kmax + 1):
        for seq in combinations_with_replacement(divisors, k):
            gp = divisor_product(R, I, seq)
            gb = divisor_product(R, (), seq)
            for v in orbit.crit:
                for d in degrees:
                    if v.length + la.dot(c1_P, d) != k:
                        continue
                    inst = pw_instance(orbit, seq, v, d)
                    tr = pw_transfer(inst, a)
                    lhs = gp.coefficient(v.word, d)
                    if tr.gb_degree is None:
                        rhs = 0
                    else:
                        u = R.element(tr.lift_target)
                        if u.length + la.dot(c1_B, tr.gb_degree) != k:
                            raise InternalError(f"grading mismatch after transfer for {inst}")
                        rhs = gb.coefficient(tr.lift_target, tr.gb_degree)
                    report.append({
                        "orbit": f"{R.name} I={sorted(I)}",
                        "inputs": [list(w) for w in tr.gp_inputs],
                        "target": list(v.word),
                        "degree": list(d),
                        "lift_target": list(tr.lift_target),
                        "lift_degree": None if tr.gb_degree is None else list(tr.gb_degree),
                        "lhs": lhs,
                        "rhs": rhs,
                        "equal": lhs == rhs,
                    })
    report.sort(key=lambda r: (len(r["inputs"]), r["inputs"], r["target"], r["degree"]))
    return report
