from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ramified_satake.errors import GroupTooLarge, NotDominant, RankTooLarge, UnknownType
from ramified_satake.root_datum import (
    build_root_datum,
    dominant_weights_up_to_dim,
    weight_multiplicity,
    weyl_character,
    weyl_dimension,
    weyl_group,
)
from oracles import kostant_multiplicity, reflection_matrices, weyl_closure, wedge_weights


def test_build_gl3():
    rd = build_root_datum("GL3")
    assert rd.rank == 3
    expected = {tuple(int(k == i) - int(k == j) for k in range(3))
                for i in range(3) for j in range(3) if i != j}
    assert set(rd.roots) == expected


def test_build_a1():
    rd = build_root_datum("A1")
    assert rd.rank == 1
    assert rd.simple_roots == ((2,),) and rd.simple_coroots == ((1,),)


def test_build_gl4_gl1():
    rd = build_root_datum("GL4xGL1")
    assert rd.rank == 5
    assert all(a[4] == 0 for a in rd.roots) and all(b[4] == 0 for b in rd.coroots)
    assert len(rd.roots) == 12


def test_build_errors():
    with pytest.raises(UnknownType):
        build_root_datum("Q7")
    with pytest.raises(RankTooLarge):
        build_root_datum("A9")


@pytest.mark.parametrize("name,order", [("GL3", 6), ("GL4", 24), ("C2", 8), ("B3", 48),
                                        ("G2", 12), ("D4", 192), ("F4", 1152)])
def test_weyl_group_order(name, order):
    assert weyl_group(build_root_datum(name)).order == order


@pytest.mark.parametrize("name", ["C2", "G2", "A3", "B3"])
def test_weyl_group_matches_closure_oracle(name):
    rd = build_root_datum(name)
    closure = weyl_closure(reflection_matrices(rd.simple_roots, rd.simple_coroots))
    w = weyl_group(rd)
    assert len(closure) == w.order
    roots = set(rd.roots)
    for k in range(w.order):
        assert {w.act(k, a) for a in roots} == roots


def test_weyl_group_cap():
    with pytest.raises(GroupTooLarge):
        weyl_group(build_root_datum("E8"), cap=10**6)


def test_multiplicity_examples():
    gl3 = build_root_datum("GL3")
    assert weight_multiplicity(gl3, (1, 0, 0), (0, 1, 0)) == 1
    sl3 = build_root_datum("SL3")
    assert weight_multiplicity(sl3, (1, 1), (0, 0)) == 2
    assert kostant_multiplicity(sl3, (1, 1), (0, 0)) == 2
    for lam in [(1, 0, 0), (2, 1, 0), (3, 0, -1)]:
        assert weight_multiplicity(gl3, lam, lam) == 1
    with pytest.raises(NotDominant):
        weight_multiplicity(gl3, (0, 1, 0), (0, 1, 0))


def test_character_examples():
    gl2 = build_root_datum("GL2")
    assert dict(weyl_character(gl2, (1, 0))) == {(1, 0): 1, (0, 1): 1}
    gl4 = build_root_datum("GL4")
    assert dict(weyl_character(gl4, (1, 1, 0, 0))) == dict(wedge_weights(4, 2))
    sl3 = build_root_datum("SL3")
    ch = dict(weyl_character(sl3, (1, 1)))
    assert ch.pop((0, 0)) == 2
    assert len(ch) == 6 and set(ch.values()) == {1}


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_wedge_powers(n):
    rd = build_root_datum(f"GL{n}")
    for k in range(n + 1):
        lam = (1,) * k + (0,) * (n - k)
        assert dict(weyl_character(rd, lam)) == dict(wedge_weights(n, k))


def _all_dominant(rd, bound):
    return dominant_weights_up_to_dim(rd, bound)


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "G2", "A3", "B3", "C3", "A4", "B4", "C4", "D4", "F4"])
def test_dimension_sum_up_to_ten_thousand(name):
    rd = build_root_datum(name)
    wg = weyl_group(rd)
    for lam in _all_dominant(rd, 10**4):
        ch = weyl_character(rd, lam)
        assert sum(ch.values()) == weyl_dimension(rd, lam)
        if weyl_dimension(rd, lam) <= 300:
            for k in range(wg.order):
                for mu, m in ch.items():
                    assert ch[wg.act(k, mu)] == m


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "G2", "A3", "B3", "C3"])
def test_freudenthal_matches_kostant_up_to_500(name):
    rd = build_root_datum(name)
    for lam in _all_dominant(rd, 500):
        ch = weyl_character(rd, lam)
        for mu in ch:
            if rd.is_dominant(mu):
                assert ch[mu] == kostant_multiplicity(rd, lam, mu), (lam, mu)


def test_dominant_up_to_dim_complete_a2():
    # brute force over a large box of fundamental coordinates
    rd = build_root_datum("A2")
    brute = sorted((a, b) for a in range(200) for b in range(200)
                   if weyl_dimension(rd, (a, b)) <= 1000)
    assert dominant_weights_up_to_dim(rd, 1000) == brute


@given(st.integers(0, 6), st.integers(0, 6), st.integers(-3, 3))
def test_gl3_character_weyl_invariant(a, b, c):
    rd = build_root_datum("GL3")
    lam = (a + b + c, b + c, c)
    ch = weyl_character(rd, lam)
    assert sum(ch.values()) == weyl_dimension(rd, lam)
    for mu, m in ch.items():
        assert ch[(mu[1], mu[0], mu[2])] == m
        assert ch[(mu[0], mu[2], mu[1])] == m
