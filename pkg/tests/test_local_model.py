from __future__ import annotations

from math import comb

import pytest

from ramified_satake.errors import BadDimension, BadSignature
from ramified_satake.local_model import (
    QUADRATIC,
    TRIVIAL,
    NearbyCycleReport,
    build_gu_data,
    nearby_cycle_decomposition,
    summand_label,
    twisted_trace_check,
    z_function,
    z_trace_table,
)
from ramified_satake.polys import QPoly
from ramified_satake.satake_hecke import ic_function
from ramified_satake.kato_lusztig import ic_stalk_table

ONE = QPoly.const(1)


@pytest.mark.parametrize("n,label", [(3, "B_1"), (4, "C_2"), (5, "B_2"), (6, "C_3")])
def test_build_gu(n, label):
    st = build_gu_data(n)
    assert st.ech.folded_type == label
    assert st.cl.torsion == () and st.ech.pi0 == ()
    assert st.cl.free_rank == n // 2 + 1


def test_build_gu_rejects_small_n():
    with pytest.raises(BadDimension):
        build_gu_data(2)


def test_bad_signature():
    st = build_gu_data(4)
    with pytest.raises(BadSignature):
        nearby_cycle_decomposition(st, 2, 1)
    with pytest.raises(BadSignature):
        nearby_cycle_decomposition(st, 1, 3)


def test_decomposition_321():
    st = build_gu_data(3)
    rep = nearby_cycle_decomposition(st, 2, 1)
    assert [(summand_label(st, w), c) for w, _, c in rep.summands] == [(1, TRIVIAL)]
    assert rep.summands[0][0] == st.mu(2, 1)


def test_decomposition_422():
    st = build_gu_data(4)
    rep = nearby_cycle_decomposition(st, 2, 2)
    assert [(summand_label(st, w), c) for w, _, c in rep.summands] == [(2, TRIVIAL), (0, QUADRATIC)]
    assert not rep.monodromy_trivial
    assert [summand_label(st, w) for w, _, _ in rep.invariants_part] == [2]


def test_decomposition_541():
    st = build_gu_data(5)
    rep = nearby_cycle_decomposition(st, 4, 1)
    assert [(summand_label(st, w), c) for w, _, c in rep.summands] == [(1, TRIVIAL)]
    assert rep.monodromy_trivial


@pytest.mark.parametrize("n", range(3, 11))
def test_summands_and_dimension_audit(n):
    st = build_gu_data(n)
    for s in range(0, n // 2 + 1):
        r = n - s
        rep = nearby_cycle_decomposition(st, r, s)
        labels = sorted(summand_label(st, w) for w, _, _ in rep.summands)
        if n % 2:
            assert labels == [s]
        else:
            assert labels == sorted(range(s % 2, s + 1, 2))
        assert sum(d for _, d, _ in rep.summands) == comb(n, s)
        assert labels.count(s) == 1  # the top summand has multiplicity one


@pytest.mark.parametrize("n", [4, 6, 8])
def test_inertia_rule(n):
    st = build_gu_data(n)
    m = n // 2
    rep = nearby_cycle_decomposition(st, m, m)
    for w, _, c in rep.summands:
        sp = summand_label(st, w)
        assert (c == TRIVIAL) == ((m - sp) % 4 == 0)


@pytest.mark.parametrize("m,signs", [(1, [(1, 1)]), (2, [(2, 1), (0, -1)]),
                                     (3, [(3, 1), (1, -1)]), (4, [(4, 1), (2, -1), (0, 1)])])
def test_twisted_trace(m, signs):
    ok, w = twisted_trace_check(m)
    assert ok
    assert sorted(w.signs, reverse=True) == signs
    assert (w.lhs - w.alternating_sum).is_zero()
    assert (w.lhs - w.branched_sum).is_zero()


def test_twisted_trace_rejects_zero():
    with pytest.raises(BadDimension):
        twisted_trace_check(0)


@pytest.mark.parametrize("n,r,s", [(3, 2, 1), (4, 3, 1), (5, 4, 1), (6, 5, 1), (7, 6, 1)])
def test_smooth_case_trace_one(n, r, s):
    st = build_gu_data(n)
    table = z_trace_table(st, r, s)
    assert table and all(v == ONE for v in table.values())


def test_z_422_invariants_part():
    st = build_gu_data(4)
    table = z_trace_table(st, 2, 2)
    assert set(table) == {st.mu(2, 2), st.mu(4, 0)}
    assert all(v == ONE for v in table.values())


def test_z_431_is_single_ic():
    st = build_gu_data(4)
    mu = st.mu(3, 1)
    assert z_function(st, 3, 1).as_dict() == ic_function(ic_stalk_table(st.ech, st.cl, mu)).as_dict()


@pytest.mark.parametrize("n,r,s", [(3, 2, 1), (4, 2, 2), (6, 3, 3), (5, 3, 2)])
def test_report_json_round_trip(n, r, s):
    rep = nearby_cycle_decomposition(build_gu_data(n), r, s)
    assert NearbyCycleReport.from_json(rep.dumps()) == rep
    obj = rep.to_json()
    assert obj["schema_version"] == 1
    assert set(obj) >= {"n", "r", "s", "summands", "strata", "monodromy_trivial"}
