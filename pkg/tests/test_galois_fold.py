from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ramified_satake.errors import NotDiagramAutomorphism, UnsupportedFolding
from ramified_satake.galois_fold import (
    closure_strata,
    coweight_coinvariants,
    dominant_in_box,
    fold_fixed_group,
    is_dominant,
    order_leq,
    pairing_2rho,
    pinned_action,
    reversal,
)
from ramified_satake.lattice import matmul, matvec
from ramified_satake.root_datum import build_root_datum
from oracles import reflection_matrices, weyl_closure


def setup(name, perm=None, recipe=None):
    rd = build_root_datum(name)
    if recipe:
        psi = pinned_action(rd, similitude_recipe=recipe)
    else:
        psi = pinned_action(rd, reversal(rd) if perm is None else perm)
    cl = coweight_coinvariants(rd, psi)
    return rd, psi, cl


def test_pinned_reversal_gl3():
    rd, psi, _ = setup("GL3")
    assert psi.order == 2
    assert psi.apply((1, 2, 3)) == (-3, -2, -1)
    coroots = set(rd.simple_coroots)
    assert {psi.apply(b) for b in coroots} == coroots


def test_pinned_gu_recipe():
    rd, psi, _ = setup("GL4xGL1", recipe="GU")
    assert psi.order == 2
    ident = tuple(tuple(int(i == j) for j in range(5)) for i in range(5))
    assert matmul(psi.matrix, psi.matrix) == ident


def test_pinned_identity():
    rd = build_root_datum("GL3")
    psi = pinned_action(rd, (0, 1))
    assert psi.is_trivial


def test_pinned_rejects_non_automorphism():
    with pytest.raises(NotDiagramAutomorphism):
        pinned_action(build_root_datum("B3"), (2, 1, 0))


def test_coinvariants_gl3():
    _, _, cl = setup("GL3")
    assert (cl.free_rank, cl.torsion) == (1, (2,))
    assert cl.project((1, 0, 0)) == (1, 0)
    assert cl.project((0, 1, 0)) == (0, 1)
    assert cl.format(cl.project((1, 0, 0))) == "1;0"


def test_coinvariants_gl4():
    _, _, cl = setup("GL4")
    assert (cl.free_rank, cl.torsion) == (2, ())
    for v in [(1, 0, 0, 0), (0, 1, 0, 0), (3, -1, 2, 5)]:
        a, b, c, d = v
        assert cl.project(v) == (a - d, b - c)


def test_coinvariants_gu3():
    _, _, cl = setup("GL3xGL1", recipe="GU")
    assert (cl.free_rank, cl.torsion) == (2, ())


def test_dominance_examples():
    _, _, c3 = setup("GL3")
    assert is_dominant(c3, (1, 0)) and not is_dominant(c3, (-1, 0)) and is_dominant(c3, (0, 1))
    _, _, c4 = setup("GL4")
    assert is_dominant(c4, (1, 1)) and not is_dominant(c4, (0, 2))
    for a in range(-3, 4):
        for b in range(-3, 4):
            assert is_dominant(c4, (a, b)) == (a >= b >= 0)


def test_order_examples():
    _, _, c3 = setup("GL3")
    assert order_leq(c3, (0, 1), (1, 0))
    assert not order_leq(c3, (0, 0), (1, 0))
    _, _, c4 = setup("GL4")
    assert order_leq(c4, (0, 0), (1, 1))
    assert set(c4.coroot_image_classes) == {(1, -1), (0, 2)}
    for cl in (c3, c4):
        for x in dominant_in_box(cl, 3):
            assert order_leq(cl, x, x)


def test_pairing_examples():
    _, _, c3 = setup("GL3")
    _, _, c4 = setup("GL4")
    assert pairing_2rho(c3, (0, 0)) == 0
    assert pairing_2rho(c3, (1, 0)) == 2
    assert pairing_2rho(c4, (1, 1)) == 4


@pytest.mark.parametrize("n,label,pi0", [(3, "B_1", (2,)), (5, "B_2", (2,)), (7, "B_3", (2,)),
                                         (9, "B_4", (2,)), (4, "C_2", ()), (6, "C_3", ()),
                                         (8, "C_4", ())])
def test_fold_gl(n, label, pi0):
    rd, psi, cl = setup(f"GL{n}")
    ech = fold_fixed_group(rd, psi, cl)
    assert ech.folded_type == label
    assert ech.pi0 == pi0


def test_fold_gl4_roots():
    rd, psi, cl = setup("GL4")
    ech = fold_fixed_group(rd, psi, cl)
    expected = {(1, -1), (-1, 1), (1, 1), (-1, -1), (2, 0), (-2, 0), (0, 2), (0, -2)}
    assert set(ech.folded_datum.roots) == expected


def test_fold_gu3_connected():
    rd, psi, cl = setup("GL3xGL1", recipe="GU")
    ech = fold_fixed_group(rd, psi, cl)
    assert ech.pi0 == ()
    assert ech.folded_datum.semisimple_rank == 1


@pytest.mark.parametrize("name,perm,label", [("A5", (4, 3, 2, 1, 0), "C_3"),
                                             ("A4", (3, 2, 1, 0), "B_2"),
                                             ("D4", (0, 1, 3, 2), "B_3"),
                                             ("D4", (3, 1, 0, 2), "G_2"),
                                             ("D5", (0, 1, 2, 4, 3), "B_4"),
                                             ("E6", (5, 1, 4, 3, 2, 0), "F_4")])
def test_folding_table(name, perm, label):
    rd, psi, cl = setup(name, perm)
    assert fold_fixed_group(rd, psi, cl).folded_type == label


def test_trivial_fold_is_dual():
    rd, psi, cl = setup("B2", (0, 1))
    ech = fold_fixed_group(rd, psi, cl)
    assert ech.folded_datum.type_label() == rd.dual().type_label()


def _fixed_weyl_order_oracle(rd, psi):
    dual = rd.dual()
    group = weyl_closure(reflection_matrices(dual.simple_roots, dual.simple_coroots))
    g = psi.matrix
    return sum(1 for m in group if matmul(m, g) == matmul(g, m))


@pytest.mark.parametrize("name,perm", [("GL3", None), ("GL4", None), ("GL5", None), ("A3", None),
                                       ("A4", None), ("D4", (0, 1, 3, 2)), ("D4", (3, 1, 0, 2)),
                                       ("B2", (0, 1)), ("GL3xGL1", "GU"), ("GL4xGL1", "GU")])
def test_folded_weyl_order(name, perm):
    if perm == "GU":
        rd, psi, cl = setup(name, recipe="GU")
    else:
        rd, psi, cl = setup(name, perm)
    ech = fold_fixed_group(rd, psi, cl)
    assert ech.relative_weyl.order == _fixed_weyl_order_oracle(rd, psi)


@pytest.mark.parametrize("name", ["GL3", "GL4", "GL5", "GL6"])
def test_closure_parity_and_order(name):
    rd, psi, cl = setup(name)
    for mu in dominant_in_box(cl, 3):
        strata = closure_strata(cl, mu)
        assert strata[0] == mu
        dims = [pairing_2rho(cl, x) for x in strata]
        assert dims == sorted(dims, reverse=True)
        for lam in strata:
            assert is_dominant(cl, lam) and order_leq(cl, lam, mu)
            assert (pairing_2rho(cl, mu) - pairing_2rho(cl, lam)) % 2 == 0


def test_closure_examples():
    _, _, c3 = setup("GL3")
    assert closure_strata(c3, (1, 0)) == [(1, 0), (0, 1)]
    assert [pairing_2rho(c3, x) for x in closure_strata(c3, (1, 0))] == [2, 0]
    _, _, c4 = setup("GL4")
    assert closure_strata(c4, (1, 1)) == [(1, 1), (0, 0)]
    assert closure_strata(c4, (0, 0)) == [(0, 0)]


@given(st.sampled_from(["GL3", "GL4", "GL5"]), st.integers(0, 10**6))
def test_dominance_lift_independent(name, seed):
    rd, psi, cl = setup(name)
    rng = random.Random(seed)
    x = tuple(rng.randint(-4, 4) for _ in range(rd.rank))
    mu = cl.project(x)
    # add random elements of image(1 - psi): same class, different lift
    for _ in range(5):
        y = tuple(rng.randint(-3, 3) for _ in range(rd.rank))
        z = tuple(a + b - c for a, b, c in zip(x, y, psi.apply(y)))
        assert cl.project(z) == mu
        pairings = [sum(p * q for p, q in zip(z, a)) for a in cl.relative_positive_roots]
        assert all(p >= 0 for p in pairings) == is_dominant(cl, mu)


@pytest.mark.parametrize("name", ["GL3", "GL4", "GL5"])
def test_dominant_representatives_of_orbits(name):
    rd, psi, cl = setup(name)
    ech = fold_fixed_group(rd, psi, cl)
    box = 3
    ranges = [range(-box, box + 1)] * cl.free_rank
    import itertools
    torsion = [range(d) for d in cl.torsion]
    for coords in itertools.product(*(ranges + torsion)):
        orbit = ech.orbit(coords)
        dominant = [x for x in orbit if is_dominant(cl, x)]
        assert len(dominant) == 1, (coords, dominant)
