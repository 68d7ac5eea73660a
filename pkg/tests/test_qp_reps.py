import pytest
from hypothesis import given, strategies as st

from qpsl.catalog import three_cycle_qp
from qpsl.consistency import zero_potential_qp
from qpsl.errors import NotThin
from qpsl.qp_calculus import QP
from qpsl.qp_reps import (
    DecoratedRep,
    direct_sum,
    e_invariant,
    f_polynomial_thin,
    g_vector,
    hom_dim,
    is_isomorphic,
    mutate_rep,
    thin_subrep_vectors,
    validate_rep,
)

A3 = ((0, 1, 0), (-1, 0, 1), (0, -1, 0))


def three_cycle():
    quiver, potential = three_cycle_qp()
    return QP(quiver, potential)


def invariants(rep):
    return rep.dim_vector(), tuple(d for _, d in rep.decoration), g_vector(rep), e_invariant(rep)


def test_negative_simple_data():
    qp = zero_potential_qp(A3)
    rep = DecoratedRep.negative_simple(qp, "2")
    assert rep.total_dim() == 0
    assert g_vector(rep) == (0, 1, 0)
    assert e_invariant(rep) == 0
    assert f_polynomial_thin(rep).as_dict() == {(0, 0, 0): 1}


def test_mutating_a_negative_simple_gives_the_simple():
    qp = zero_potential_qp(A3)
    rep = mutate_rep(DecoratedRep.negative_simple(qp, "2"), "2")
    assert rep.dim == {"1": 0, "2": 1, "3": 0}
    assert not any(rep.deco.values())
    assert g_vector(rep) == (1, -1, 0)


def test_relations_are_checked():
    qp = three_cycle()
    ones = {a.id: [[1]] for a in qp.quiver.arrows}
    bad = DecoratedRep.build(qp, {"1": 1, "2": 1, "3": 1}, ones)
    assert validate_rep(bad)
    good = DecoratedRep.build(qp, {"1": 1, "2": 1, "3": 1}, {"a": [[1]]})
    assert validate_rep(good) == []


def test_thin_f_polynomial_of_a_path_rep():
    qp = three_cycle()
    rep = DecoratedRep.build(qp, {"1": 1, "2": 1, "3": 0}, {"a": [[1]]})
    # subreps are closed under the arrow 1 -> 2
    assert sorted(thin_subrep_vectors(rep)) == [(0, 0, 0), (0, 1, 0), (1, 1, 0)]
    assert str(f_polynomial_thin(rep)) == "1 + X2 + X1*X2"


def test_f_polynomial_refuses_thick_reps():
    qp = zero_potential_qp(A3)
    rep = DecoratedRep.build(qp, {"1": 2})
    with pytest.raises(NotThin):
        f_polynomial_thin(rep)


def test_hom_is_additive_on_direct_sums():
    qp = three_cycle()
    m = DecoratedRep.simple(qp, "1")
    n = DecoratedRep.build(qp, {"1": 1, "2": 1}, {"a": [[1]]})
    total = direct_sum(m, n)
    expected = hom_dim(m, m) + hom_dim(m, n) + hom_dim(n, m) + hom_dim(n, n)
    assert hom_dim(total, total) == expected
    assert hom_dim(m, n) == 0
    assert hom_dim(n, m) == 1


def test_isomorphism_detection():
    qp = three_cycle()
    n = DecoratedRep.build(qp, {"1": 1, "2": 1}, {"a": [[1]]})
    scaled = DecoratedRep.build(qp, {"1": 1, "2": 1}, {"a": [[5]]})
    split_rep = DecoratedRep.build(qp, {"1": 1, "2": 1})
    assert is_isomorphic(n, scaled)
    assert not is_isomorphic(n, split_rep)


def test_json_round_trip():
    qp = three_cycle()
    rep = DecoratedRep.build(qp, {"1": 1, "2": 1}, {"a": [[3]]}, {"3": 2})
    assert DecoratedRep.from_json(rep.to_json()) == rep


@given(st.lists(st.sampled_from(["1", "2", "3"]), min_size=1, max_size=5), st.sampled_from(["1", "2", "3"]))
def test_mutations_of_negative_simples_stay_valid(path, start):
    rep = DecoratedRep.negative_simple(zero_potential_qp(A3), start)
    for vertex in path:
        rep = mutate_rep(rep, vertex)
        assert validate_rep(rep) == []
        assert e_invariant(rep) == 0


@given(st.lists(st.sampled_from(["1", "2", "3"]), max_size=4), st.sampled_from(["1", "2", "3"]))
def test_double_mutation_returns_the_same_invariants(path, vertex):
    rep = DecoratedRep.negative_simple(zero_potential_qp(A3), "1")
    for step in path:
        rep = mutate_rep(rep, step)
    back = mutate_rep(mutate_rep(rep, vertex), vertex)
    assert invariants(back) == invariants(rep)
    assert f_polynomial_thin(back).as_dict() == f_polynomial_thin(rep).as_dict()


@given(st.lists(st.sampled_from(["1", "2", "3"]), max_size=4))
def test_three_cycle_reps_mutate_validly(path):
    rep = DecoratedRep.negative_simple(three_cycle(), "3")
    for step in path:
        rep = mutate_rep(rep, step)
        assert validate_rep(rep) == []
