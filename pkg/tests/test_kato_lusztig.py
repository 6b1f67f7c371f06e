from __future__ import annotations

import pytest

from ramified_satake.errors import NotDominant, UnsupportedModel
from ramified_satake.galois_fold import (
    closure_strata,
    coweight_coinvariants,
    dominant_in_box,
    fold_fixed_group,
    pairing_2rho,
    pinned_action,
    reversal,
)
from ramified_satake.kato_lusztig import (
    bk_filtration_oracle,
    builtin_models,
    ic_stalk_table,
    kato_lusztig_column,
    kato_lusztig_poly,
    matrix_model,
    model_datum,
    q_kostant,
)
from ramified_satake.polys import QPoly
from ramified_satake.root_datum import build_root_datum, weyl_character
from oracles import q_partition_multisets


def fold(name):
    rd = build_root_datum(name)
    psi = pinned_action(rd, reversal(rd))
    cl = coweight_coinvariants(rd, psi)
    return cl, fold_fixed_group(rd, psi, cl)


def q(n):
    return QPoly.q(n)


def test_q_kostant_examples():
    a1 = build_root_datum("A1")
    assert q_kostant(a1, (0,)) == QPoly.const(1)
    assert q_kostant(a1, (2,)) == q(1)
    a2 = build_root_datum("A2")
    a1a2 = (1, 1)  # alpha_1 + alpha_2 in the A2 weight coordinates
    assert q_kostant(a2, a1a2) == q(1) + q(2)


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3", "B3"])
def test_q_kostant_matches_multiset_enumeration(name):
    rd = build_root_datum(name)
    pos = [rd.root_coords(a) for a in rd.positive_roots]
    import itertools
    for coords in itertools.product(range(4), repeat=len(rd.simple)):
        beta = tuple(sum(c * a[i] for c, a in zip(coords, rd.simple_roots)) for i in range(rd.rank))
        counts = q_partition_multisets(pos, coords)
        expected = QPoly({2 * k: v for k, v in counts.items()})
        assert q_kostant(rd, beta) == expected, coords


def test_kato_lusztig_examples():
    a1 = build_root_datum("A1")
    assert kato_lusztig_poly(a1, (2,), (0,)) == q(1)
    _, ech = fold("GL4")
    fd = ech.folded_datum
    assert kato_lusztig_poly(fd, (1, 1), (0, 0)) == q(2)
    for lam in [(1, 1), (2, 0), (3, 1)]:
        assert kato_lusztig_poly(fd, lam, lam) == QPoly.const(1)
    with pytest.raises(NotDominant):
        kato_lusztig_poly(fd, (0, 1), (0, 0))
    with pytest.raises(ValueError):
        kato_lusztig_poly(fd, (1, 1, 0), (0, 0))


@pytest.mark.parametrize("name", sorted(builtin_models()))
def test_bk_oracle_equivalence(name):
    model = matrix_model(name)
    assert model.dimension <= 50
    rd = model_datum(model)
    ch = weyl_character(rd, model.highest_weight)
    assert sorted(w for w, m in ch.items() for _ in range(m)) == sorted(model.weights)
    for mu in ch:
        if rd.is_dominant(mu):
            assert kato_lusztig_poly(rd, model.highest_weight, mu) == bk_filtration_oracle(model, mu)


def test_bk_oracle_named_values():
    so3 = matrix_model("SO3-std")
    assert bk_filtration_oracle(so3, (0,)) == q(1)
    adj = matrix_model("SL3-adjoint")
    assert bk_filtration_oracle(adj, (0, 0, 0)) == q(1) + q(2)
    five = matrix_model("Sp4-wedge2prim")
    zero = tuple(0 for _ in five.highest_weight)
    assert bk_filtration_oracle(five, zero) == q(2)


def test_bk_oracle_rejects_unknown_model():
    with pytest.raises(UnsupportedModel):
        matrix_model("E8-adjoint")


@pytest.mark.parametrize("name", ["GL3", "GL4", "GL5", "GL6", "GL7"])
def test_column_properties(name):
    cl, ech = fold(name)
    fd = ech.folded_datum
    for mu in dominant_in_box(cl, 4):
        lam = cl.free_part(mu)
        ch = weyl_character(fd, lam)
        for nu, poly in kato_lusztig_column(fd, lam).items():
            coeffs = poly.q_coeffs()
            assert all(c >= 0 for c in coeffs)
            assert sum(coeffs) == ch[nu]


def test_stalk_table_gl3():
    cl, ech = fold("GL3")
    t = ic_stalk_table(ech, cl, (1, 0))
    assert t.strata() == ((1, 0), (0, 1))
    assert t.degrees((1, 0)) == {-2: 1}
    assert t.degrees((0, 1)) == {-2: 1}
    assert t.polynomial((0, 1)) == q(1)


def test_stalk_table_gl4():
    cl, ech = fold("GL4")
    t = ic_stalk_table(ech, cl, (1, 1))
    assert t.degrees((1, 1)) == {-4: 1}
    assert t.degrees((0, 0)) == {-4: 1}
    assert t.polynomial((0, 0)) == q(2)


def test_stalk_table_point():
    cl, ech = fold("GL4")
    t = ic_stalk_table(ech, cl, (0, 0))
    assert t.strata() == ((0, 0),)
    assert t.degrees((0, 0)) == {0: 1}


@pytest.mark.parametrize("name", ["GL3", "GL4", "GL5", "GL6"])
def test_stalk_tables_degree_bound_and_parity(name):
    cl, ech = fold(name)
    for mu in dominant_in_box(cl, 3):
        t = ic_stalk_table(ech, cl, mu)
        d_mu = pairing_2rho(cl, mu)
        assert t.strata() == tuple(closure_strata(cl, mu))
        assert t.degrees(mu) == {-d_mu: 1}
        for lam in t.strata():
            d_lam = pairing_2rho(cl, lam)
            poly = t.polynomial(lam)
            assert len(poly.q_coeffs()) - 1 <= (d_mu - d_lam) // 2
            for deg in t.degrees(lam):
                assert (deg - d_mu) % 2 == 0
                # stalks of IC sit in degrees below -dim of the stratum except at the top
                assert -d_mu <= deg
