from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ball, datum
from seidelcomb import linalg as la
from seidelcomb.affine import canonical_perturbation
from seidelcomb.errors import CosetError, DomainError
from seidelcomb.orbit import (
    NovikovCoset,
    c1v,
    c1v_at,
    c1v_fiber,
    coupling_value,
    fiber_points,
    novikov_group,
    orbit_data,
    p_map,
    projection,
    psi,
    unstable_dim,
)
from seidelcomb.rootdata import build_root_datum, weyl_group

F = Fraction


def test_orbit_data_examples():
    R = datum("A2")
    reg = orbit_data(R)
    assert reg.R_y0 == ()
    assert len(reg.crit) == 6
    O = orbit_data(R, {2})
    assert [r.coeffs for r in O.R_y0] == [(0, 1)]
    assert len(O.crit) == 3
    assert sorted(w.length for w in O.crit) == [0, 1, 2]
    assert len(orbit_data(datum("B2"), {1}).crit) == 4


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3"])
def test_crit_count(name):
    R = datum(name)
    for I in [set(), {1}, {2}, {1, 2}]:
        O = orbit_data(R, I)
        assert len(O.crit) * len(O.W_y0) == len(weyl_group(R))
        assert set(O.R_y0) == {r for r in R.positive_roots if r(O.y0) == 0}


def test_scale_must_be_positive():
    with pytest.raises(DomainError):
        orbit_data(datum("A2"), {2}, 0)
    O = orbit_data(datum("A2"), {2}, F(1, 3))
    assert O.y0 == la.scale(F(1, 3), orbit_data(datum("A2"), {2}).y0)


def test_novikov_group_examples():
    R = datum("A2")
    reg = orbit_data(R)
    assert novikov_group(reg, reg.y0) == (2, [])
    O = orbit_data(R, {2})
    assert novikov_group(O, O.y0) == (1, [])
    for y in O.crit_points():
        assert novikov_group(O, y) == (1, [])
    A1 = build_root_datum("A1", "ad")
    full = orbit_data(A1, {1})
    assert novikov_group(full, full.y0) == (0, [2])


def test_c1v_examples():
    R = datum("A2")
    reg = orbit_data(R)
    assert c1v(NovikovCoset(reg, reg.y0, (0, 0))) == 0
    assert c1v(NovikovCoset(reg, reg.y0, (1, 1))) == -4
    O = orbit_data(R, {2})
    assert c1v(NovikovCoset(O, O.y0, (1, 0))) == -3


def test_unstable_dim_examples():
    R = datum("A2")
    a = canonical_perturbation(R)
    reg = orbit_data(R)
    assert unstable_dim(reg, reg.y0, a) == 0
    w0 = R.longest_element()
    assert unstable_dim(reg, w0.act(reg.y0), a) == 6
    O = orbit_data(R, {2})
    assert unstable_dim(O, R.element((1,)).act(O.y0), a) == 2


@pytest.mark.parametrize("name,I", [("A2", {2}), ("B2", {1}), ("A3", {1, 3}), ("G2", set())])
def test_unstable_plus_stable_is_dimension(name, I):
    R = datum(name)
    a = canonical_perturbation(R)
    O = orbit_data(R, I)
    for y in O.crit_points():
        stable = 2 * sum(1 for r in R.roots if r(y) > 0 and r(a.a) > 0)
        assert unstable_dim(O, y, a) + stable == O.dim_real


def test_coupling_examples():
    R = datum("A2")
    a = canonical_perturbation(R)
    reg = orbit_data(R)
    assert coupling_value(reg, (0, 0), a) == 0
    assert coupling_value(reg, (1, 1), a) == -4
    R1 = datum("A1")
    assert coupling_value(orbit_data(R1), (-1,), canonical_perturbation(R1)) == -2


def test_psi_examples():
    R = datum("A2")
    O = orbit_data(R, {2})
    assert psi(O, O.y0, (2, 1)) == (0, 0)  # orthogonal to α₂^∨
    assert psi(O, O.y0, (0, 1)) == (0, 0)
    assert projection(O, O.y0, (1, 0)) == (0, F(-1, 2))
    cls = psi(O, O.y0, (1, 0))
    assert cls != (0, 0)
    assert la.scale(2, cls) in O.sublattices_at(O.y0).q_lattice


def test_p_map_examples():
    R = datum("A2")
    O = orbit_data(R, {2})
    assert p_map(O, O.y0, (0, 0), (0, 0)) == (0, 0)
    assert p_map(O, O.y0, (0, 1), (0, 0)) == (0, 0)
    assert p_map(O, O.y0, (1, 0), (0, F(-1, 2))) == (1, 0)
    with pytest.raises(CosetError):
        p_map(O, O.y0, (1, 0), (0, 0))


def test_p_map_projects_back():
    R = datum("B2")
    O = orbit_data(R, {2})
    for y in O.crit_points():
        lat = O.sublattices_at(y).q_lattice
        for q in ball(2, 2):
            pq = projection(O, y, q)
            for k in (-1, 0, 2):
                qt = la.add(pq, la.scale(k, lat.basis()[0]))
                out = p_map(O, y, q, qt)
                assert la.sub(out, q) in lat
                assert projection(O, y, out) == qt


@pytest.mark.parametrize("name", ["A2", "A3", "B2", "C2"])
def test_chern_additivity(name):
    R = datum(name)
    r = 1 if R.rank > 2 else 3
    for I in [{1}, {R.rank}, set(range(1, R.rank + 1))]:
        O = orbit_data(R, I)
        for y in O.crit_points():
            lat = O.sublattices_at(y).q_lattice
            xs = fiber_points(O, y)
            for q in ball(R.rank, r):
                base = c1v(NovikovCoset(O, y, q))
                pq = projection(O, y, q)
                for shift in [la.zero(R.rank)] + lat.basis()[:1]:
                    qt = la.add(pq, shift)
                    out = p_map(O, y, q, qt)
                    for x in xs:
                        assert c1v_at(R, x, out) == base + c1v_fiber(O, x, y, qt)


def test_representative_independence():
    R = datum("A3")
    O = orbit_data(R, {1, 2})
    for y in O.crit_points():
        lat = O.sublattices_at(y).q_lattice
        for q in ball(3, 1):
            n = NovikovCoset(O, y, q)
            for b in lat.basis():
                m = n.shifted(la.scale(3, b))
                assert m == n and hash(m) == hash(n)
                assert c1v(m) == c1v(n)
                assert psi(O, y, m.rep) == psi(O, y, n.rep)


@given(st.sampled_from(range(6)), st.sampled_from(range(6)), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_rebase_is_an_action(i, j, q):
    R = datum("A2")
    O = orbit_data(R, {2})
    W = weyl_group(R)
    w1, w2 = W[i], W[j]
    n = NovikovCoset(O, O.y0, q)
    assert n.rebase(w1).rebase(w2) == n.rebase(R.mul(w2, w1))
    assert c1v(n.rebase(w1)) == c1v(n)
    # rebasing by the stabilizer keeps the class
    for v in O.W_y0:
        assert n.rebase(v) == n


def test_novikov_json_roundtrip():
    R = datum("A2")
    O = orbit_data(R, {2})
    for w in O.crit:
        n = NovikovCoset(O, O.point(w), (3, -1))
        d = n.to_json()
        assert d["base"] == list(w.word)
        assert NovikovCoset.from_json(O, d) == n
    with pytest.raises(DomainError):
        NovikovCoset(O, (1, 1), (0, 0))
