from __future__ import annotations

from fractions import Fraction

import pytest

from conftest import ball, ball_perturbation, datum
from seidelcomb.affine import canonical_perturbation, deg, perturbation_for, perturbation_from_values
from seidelcomb.errors import DomainError, LiftError
from seidelcomb.orbit import NovikovCoset, coupling_value, orbit_data
from seidelcomb.peterson import (
    BasisKind,
    SeidelStatus,
    associated_lift,
    deg_lt,
    deg_lt_by_walls,
    ell_prime,
    ell_prime_closed_form,
    fiber_degree,
    hofer_brute_force,
    hofer_constant,
    image_basis_member,
    is_peterson,
    peterson_lift,
    pontryagin_index,
    s_generators,
    seidel_basis_value,
    seidel_leading,
    w_q,
)
from seidelcomb.rootdata import build_root_datum, rho, weyl_group

F = Fraction


def test_w_q_examples():
    R = datum("A2")
    a = canonical_perturbation(R)
    assert w_q(R, (2, 3), a).word == ()
    assert w_q(R, (1, 0), a).word == (2,)
    R1 = datum("A1")
    assert w_q(R1, (-1,), canonical_perturbation(R1)).word == (1,)


def test_ell_prime_examples():
    R1 = datum("A1")
    a1 = canonical_perturbation(R1)
    alpha_a = R1.simple_roots[0](a1.a)
    assert ell_prime(R1, R1.identity(), a1) == alpha_a
    assert ell_prime(R1, R1.element((1,)), a1) == 1 - alpha_a
    R = datum("A2")
    a = perturbation_from_values(R, (F(1, 7), F(1, 11)))
    assert ell_prime(R, R.identity(), a) == F(1, 7) + F(1, 11) + F(18, 77)
    for w in weyl_group(R):
        assert ell_prime(R, w, a) - w.length - R.inner(a.a, w.act(rho(R))) == 0


@pytest.mark.parametrize("name", ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "G2", "A1xA1"])
def test_ell_prime_identity(name):
    R = datum(name)
    a = canonical_perturbation(R)
    for w in weyl_group(R):
        assert ell_prime(R, w, a) == ell_prime_closed_form(R, w, a)


def test_deg_lt_examples():
    R = datum("A2")
    a = canonical_perturbation(R)
    reg = orbit_data(R)
    O = orbit_data(R, {2})
    assert all(deg_lt(reg, q, a) == 0 for q in ball(2, 2))
    assert deg_lt(O, (0, 1), a) == 1
    assert deg_lt(O, (1, 0), a) == 0
    assert [is_peterson(reg, (1, 1), a), is_peterson(O, (0, 1), a), is_peterson(O, (1, 0), a)] == [
        True, False, True]


@pytest.mark.parametrize("name", ["A2", "B2", "C2", "G2", "A3"])
def test_deg_lt_matches_fiber_wall_count(name):
    R = datum(name)
    r = 2 if R.rank > 2 else 3
    a = ball_perturbation(name, r=r) if r == 3 else perturbation_for(R, ball(R.rank, r))
    for I in [{1}, {2}, set(range(1, R.rank + 1))]:
        O = orbit_data(R, I)
        for q in ball(R.rank, r):
            assert deg_lt(O, q, a) == deg_lt_by_walls(O, q, a) >= 0


def test_peterson_lift_examples():
    R = datum("A2")
    O = orbit_data(R, {2})
    assert peterson_lift(O, NovikovCoset(O, O.y0, (0, 0))) == (0, 0)
    assert peterson_lift(O, NovikovCoset(O, O.y0, (0, 1))) == (0, 0)
    assert peterson_lift(O, NovikovCoset(O, O.y0, (1, 0))) == (1, 0)
    # brute force along the coset line of α₂^∨
    zero_deg = [k for k in range(-4, 5) if fiber_degree(O, O.y0, (0, 1 + k)) == 0]
    assert zero_deg == [-1]


def test_associated_lift_examples():
    R = datum("A2")
    a = canonical_perturbation(R)
    O = orbit_data(R, {2})
    assert associated_lift(O, NovikovCoset(O, O.y0, (0, 0)), a) == O.x0
    assert associated_lift(O, NovikovCoset(O, O.y0, (0, 1)), a) == O.x0
    s2 = R.element((2,))
    assert associated_lift(O, NovikovCoset(O, O.y0, (1, 0)), a) == s2.act(O.x0)


def test_lift_search_failure_is_reported():
    R = datum("G2")
    O = orbit_data(R, {2})
    nov = NovikovCoset(O, O.y0, (-2, -2))
    assert nov.canonical_rep == (-2, 0)
    with pytest.raises(LiftError):
        peterson_lift(O, nov, radius=1, retries=0)
    assert peterson_lift(O, nov) == (-2, -3)
    assert fiber_degree(O, O.y0, (-2, -3)) == 0


@pytest.mark.parametrize("name", ["A2", "B2", "C2"])
def test_lift_round_trip(name):
    R = datum(name)
    for I in [{1}, {2}, {1, 2}]:
        O = orbit_data(R, I)
        for y in O.crit_points():
            for q in ball(2, 2):
                n = NovikovCoset(O, y, q)
                qt = peterson_lift(O, n)
                assert NovikovCoset(O, y, qt) == n
                assert fiber_degree(O, y, qt) == 0
                assert peterson_lift(O, NovikovCoset(O, y, qt)) == qt


def test_hofer_examples():
    R = datum("A2")
    a = canonical_perturbation(R)
    reg = orbit_data(R)
    assert hofer_constant(reg, (0, 0), a) == 0
    assert hofer_constant(reg, (1, 1), a) == 4 == hofer_brute_force(reg, (1, 1))[0]
    R1 = datum("A1")
    assert hofer_constant(orbit_data(R1), (-1,), canonical_perturbation(R1)) == 2


@pytest.mark.parametrize("name", ["A2", "B2", "G2"])
def test_hofer_is_the_max_and_dual_to_coupling(name):
    R = datum(name)
    a = ball_perturbation(name)
    for I in [set(), {1}, {2}]:
        O = orbit_data(R, I)
        for q in ball(2):
            h = hofer_constant(O, q, a)
            best, argmax = hofer_brute_force(O, q)
            assert h == best
            assert w_q(R, q, a) in argmax
            assert coupling_value(O, q, a) == -h


def test_seidel_leading_examples():
    R = datum("A2")
    a = canonical_perturbation(R)
    reg = orbit_data(R)
    zero = seidel_leading(reg, (0, 0), a)
    assert zero.status is SeidelStatus.EXACT
    assert zero.term.coset.word == () and zero.term.nov.rep == (0, 0)
    top = seidel_leading(reg, (1, 1), a)
    assert top.status is SeidelStatus.EXACT and top.term.nov.rep == (1, 1)
    assert not top.term.sign_known
    O = orbit_data(R, {2})
    res = seidel_leading(O, (1, 0), a)
    assert res.status is SeidelStatus.LEADING
    # s₂ lies in the stabilizer, so the coset is the identity coset
    assert res.term.coset.word == ()
    assert res.term.nov == NovikovCoset(O, O.y0, (1, 1))
    assert res.ell_prime_bound == ell_prime(R, R.element((2,)), a)
    und = seidel_leading(O, (0, 1), a)
    assert und.status is SeidelStatus.UNDETERMINED and und.term is None and und.deg_lt == 1


def test_seidel_basis_value_examples():
    R = datum("A2")
    a = canonical_perturbation(R)
    O = orbit_data(R, {2})
    assert seidel_basis_value(O, (0, 1), a, BasisKind.PRIME) == []
    unit = seidel_basis_value(O, (0, 0), a, BasisKind.PRIME)
    assert len(unit) == 1 and unit[0].coset.word == () and unit[0].nov.rep == (0, 0)
    (term,) = seidel_basis_value(O, (1, 0), a, BasisKind.PRIME)
    assert term.coeff_magnitude == 1 and not term.sign_known
    bs = seidel_basis_value(O, (1, 0), a, BasisKind.BOTT_SAMELSON)
    assert bs == seidel_leading(O, (1, 0), a)


def test_pontryagin_examples():
    R1 = datum("A1")
    a = canonical_perturbation(R1)
    assert pontryagin_index(R1, (1,), (-1,), a) == (-2,)
    assert pontryagin_index(R1, (0,), (-1,), a) == (-1,)
    assert pontryagin_index(R1, (2,), (0,), a) == (2,)
    with pytest.raises(DomainError):
        pontryagin_index(R1, (-1,), (0,), a)


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A1xA1"])
def test_pontryagin_laws(name):
    R = datum(name)
    qs = ball(R.rank, 2)
    q0s = [q for q in qs if R.is_dominant(q)]
    prods = {(q0, q1) for q0 in q0s for q1 in qs}
    a0 = canonical_perturbation(R)
    extra = [pontryagin_index(R, q0, q1, a0) for q0, q1 in prods]
    a = perturbation_for(R, qs + extra)
    for q0, q1 in prods:
        p = pontryagin_index(R, q0, q1, a)
        assert deg(R, p, a) == deg(R, q0, a) + deg(R, q1, a)
        if R.is_dominant(q0, strict=True):
            assert w_q(R, p, a) == w_q(R, q1, a)


@pytest.mark.parametrize("name", ["A1", "A2", "B2"])
def test_image_basis_bijection(name):
    R = datum(name)
    a = ball_perturbation(name)
    qs = ball(R.rank)
    W = weyl_group(R)
    members = {(w, q) for w in W for q in qs if image_basis_member(R, w, q, a)}
    images = set()
    for q in ball(R.rank, 3 * 4):
        w = w_q(R, q, a)
        v = R.inverse(w).act(q)
        if tuple(v) in {tuple(map(F, x)) for x in qs}:
            images.add((w, tuple(int(x) for x in v)))
    assert {(w, tuple(q)) for w, q in members} == images


def test_image_basis_examples():
    R1 = datum("A1")
    a = canonical_perturbation(R1)
    assert image_basis_member(R1, R1.identity(), (2,), a)
    assert not image_basis_member(R1, R1.element((1,)), (0,), a)


@pytest.mark.parametrize("name", ["A1", "A2", "A3", "B2", "B3", "C3", "G2", "A1xA1", "A1xA2"])
@pytest.mark.parametrize("kind", ["sc", "ad"])
def test_s_generation(name, kind):
    R = build_root_datum(name, kind)
    S = s_generators(R)
    S0 = [v for v in S if v in R.coroot_lattice]
    dominant = sorted(v for v in S0 if R.is_dominant(v))
    assert dominant == sorted(R.coroot(t) for t in R.highest_roots)
    from seidelcomb.linalg import Lattice

    assert Lattice(S, dim=R.rank) == R.unit_lattice


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "C2", "G2", "A1xA1"])
def test_dimension_identity(name):
    from itertools import combinations

    from seidelcomb.orbit import c1v, unstable_dim

    R = datum(name)
    a = ball_perturbation(name)
    idx = range(1, R.rank + 1)
    for I in [set(c) for k in range(R.rank + 1) for c in combinations(idx, k)]:
        O = orbit_data(R, I)
        for q in ball(R.rank):
            y = w_q(R, q, a).act(O.y0)
            lhs = 2 * deg(R, q, a) + unstable_dim(O, y, a) + 2 * c1v(NovikovCoset(O, y, q))
            assert lhs == 2 * deg_lt(O, q, a)
