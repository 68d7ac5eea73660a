from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qpsl.catalog import markov_potential, markov_quiver, three_cycle_qp
from qpsl.errors import TwoCycleAtVertex
from qpsl.jacobian import jacobian_dim
from qpsl.path_algebra import AlgebraElement, Potential, Substitution, parse_potential
from qpsl.qp_calculus import QP, mutate_qp, premutate, split, verify_right_equivalence
from qpsl.quiver import Arrow, Quiver, matrix_of_quiver, mutate_quiver


def three_cycle():
    quiver, potential = three_cycle_qp()
    return QP(quiver, potential)


def combined_potential(result):
    """Reduced plus trivial part, both lifted to the premutation quiver."""
    quiver = result.source.quiver
    terms = list(result.reduced.potential.items()) + list(result.trivial.potential.items())
    return Potential(quiver, terms)


def identity_on_arrows(phi: Substitution) -> bool:
    quiver = phi.source
    return all(phi.image(a.id) == AlgebraElement.arrow(quiver, a.id) for a in quiver.arrows)


def test_three_cycle_mutation_kills_the_potential():
    result = mutate_qp(three_cycle(), "1")
    assert result.reduced.potential.is_zero()
    assert len(result.reduced.quiver.arrows) == 2
    assert sorted((a.tail, a.head) for a in result.reduced.quiver.arrows) == [("1", "3"), ("2", "1")]
    assert len(result.trivial.quiver.arrows) == 2


def test_premutation_adds_the_bracket_term():
    pre = premutate(three_cycle(), "2")
    assert len(pre.quiver.arrows) == 4
    # the new composite closes a 2-cycle with the untouched arrow
    assert len(pre.potential.degree_part(2)) == 1
    assert len(pre.potential.degree_part(3)) == 1


def test_premutation_refuses_two_cycles():
    quiver = Quiver(("1", "2"), (Arrow("a", "1", "2"), Arrow("b", "2", "1")))
    with pytest.raises(TwoCycleAtVertex):
        premutate(QP(quiver, parse_potential(quiver, "b.a")), "1")


def test_split_of_a_reduced_qp_is_trivial():
    qp = QP(markov_quiver(), markov_potential())
    result = split(qp)
    assert result.reduced == qp
    assert result.trivial.quiver.arrows == ()


def test_split_witness_and_inverse_on_markov_mutations():
    current = QP(markov_quiver(), markov_potential())
    for vertex in ("1", "2", "3", "1"):
        pre = premutate(current, vertex)
        result = split(pre)
        assert result.witness.apply(pre.potential) == combined_potential(result)
        assert identity_on_arrows(result.witness.compose(result.witness_inverse))
        assert identity_on_arrows(result.witness_inverse.compose(result.witness))
        current = result.reduced


def test_markov_mutations_keep_the_quiver():
    qp = QP(markov_quiver(), markov_potential())
    mutated = mutate_qp(qp, "2").reduced
    assert mutated.quiver.is_two_acyclic()
    assert matrix_of_quiver(mutated.quiver).entries == matrix_of_quiver(mutate_quiver(qp.quiver, "2")).entries


@given(st.lists(st.sampled_from(["1", "2", "3"]), min_size=1, max_size=4))
def test_mutated_quiver_matches_quiver_mutation(path):
    qp = three_cycle()
    for vertex in path:
        expected = matrix_of_quiver(mutate_quiver(qp.quiver, vertex)).entries
        qp = mutate_qp(qp, vertex).reduced
        assert matrix_of_quiver(qp.quiver).entries == expected


@given(st.sampled_from(["1", "2", "3"]))
def test_double_mutation_preserves_jacobian_dimension(vertex):
    qp = three_cycle()
    twice = mutate_qp(mutate_qp(qp, vertex).reduced, vertex).reduced
    assert jacobian_dim(twice).dimension == jacobian_dim(qp).dimension == 6


def test_right_equivalence_scaling():
    source = three_cycle()
    target = QP(source.quiver, source.potential.scale(Fraction(7)))
    quiver = source.quiver
    phi = Substitution(quiver, quiver, {"a": AlgebraElement.arrow(quiver, "a", 7)})
    assert verify_right_equivalence(phi, source, target)
    assert not verify_right_equivalence(Substitution.identity(quiver), source, target)


def test_qp_json_round_trip():
    qp = QP(markov_quiver(), markov_potential(), {"p1": Fraction(2, 3)})
    assert QP.from_json(qp.to_json()) == qp
