from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qpsl.catalog import (
    hexagon_fan,
    markov_potential,
    markov_quiver,
    once_punctured_digon,
    once_punctured_square,
    three_cycle_qp,
)
from qpsl.jacobian import (
    check_admissibility,
    default_max_degree,
    groebner,
    jacobian_dim,
    jacobian_system,
)
from qpsl.path_algebra import Potential, jacobian_relations
from qpsl.qp_calculus import QP, mutate_qp
from qpsl.surface import TaggedTriangulation, enumerate_flip_graph
from qpsl.surface_qp import potential_of_tagged

from oracles import jacobian_oracle, total, truncated_jacobian


def raw(qp: QP):
    arrows = {a.id: (a.tail, a.head) for a in qp.quiver.arrows}
    return arrows, qp.quiver.vertices, dict(qp.potential.items())


def oracle_matrix(qp: QP):
    dims = jacobian_oracle(*raw(qp))
    vertices = qp.quiver.vertices
    return [[dims.get((h, t), 0) for t in vertices] for h in vertices]


def three_cycle():
    quiver, potential = three_cycle_qp()
    return QP(quiver, potential)


def surface(base, weights=None):
    return potential_of_tagged(TaggedTriangulation.plain(base), weights)


# values frozen from the dense oracle in tests/oracles.py
FROZEN = [
    ("three-cycle", three_cycle, 6, [[1, 0, 1], [1, 1, 0], [0, 1, 1]]),
    ("hexagon-fan", lambda: surface(hexagon_fan()), 6, [[1, 0, 0], [1, 1, 0], [1, 1, 1]]),
    ("punctured-square", lambda: surface(once_punctured_square()), 12, None),
    ("punctured-digon", lambda: surface(once_punctured_digon()), 2, [[1, 0], [0, 1]]),
]


@pytest.mark.parametrize("name,build,dimension,bigraded", FROZEN, ids=[f[0] for f in FROZEN])
def test_frozen_dimensions(name, build, dimension, bigraded):
    summary = jacobian_dim(build())
    assert summary.status == "holds"
    assert summary.dimension == dimension
    if bigraded is not None:
        assert summary.bigraded_dims == bigraded


def test_oracle_reproduces_frozen_values():
    for _, build, dimension, _ in FROZEN:
        assert total(jacobian_oracle(*raw(build()))) == dimension


def test_three_cycle_nilpotency_index():
    summary = jacobian_dim(three_cycle())
    assert summary.nilpotency_index == 2
    assert summary.bigraded_multiset() == sorted([1, 0, 1, 1, 1, 0, 0, 1, 1])


def test_library_matches_oracle_on_flip_graphs():
    for start in (hexagon_fan(), once_punctured_square()):
        graph = enumerate_flip_graph(TaggedTriangulation.plain(start), 60)
        for node in graph.nodes:
            qp = potential_of_tagged(node)
            assert jacobian_dim(qp).bigraded_dims == oracle_matrix(qp)


def test_library_matches_oracle_on_mutated_qps():
    qp = surface(once_punctured_square())
    for vertex in qp.quiver.vertices:
        mutated = mutate_qp(qp, vertex).reduced
        assert jacobian_dim(mutated).bigraded_dims == oracle_matrix(mutated)


@given(st.fractions(min_value=-20, max_value=20).filter(lambda x: x != 0))
def test_punctured_square_dimension_ignores_the_weight(weight):
    summary = jacobian_dim(surface(once_punctured_square(), {"p1": weight}))
    assert summary.dimension == 12


def test_markov_is_not_certified():
    summary = jacobian_dim(QP(markov_quiver(), markov_potential()), 12)
    assert summary.status == "undetermined"
    assert summary.dimension is None


def test_zero_potential_on_a_cycle_is_infinite():
    quiver, _ = three_cycle_qp()
    summary = jacobian_dim(QP(quiver, Potential(quiver)), 10)
    assert summary.status == "undetermined"
    sizes = [total(truncated_jacobian(*raw(QP(quiver, Potential(quiver))), k)) for k in range(2, 6)]
    assert sizes == [6, 9, 12, 15]


def test_admissibility_report():
    assert check_admissibility(three_cycle()).status == "holds"
    report = check_admissibility(QP(markov_quiver(), markov_potential()), 12)
    assert report.status == "undetermined"
    assert report.finite_potential and report.two_acyclic
    assert not report.nilpotent


def test_normal_forms_vanish_on_relations():
    qp = surface(once_punctured_square())
    system = jacobian_system(qp)
    for relation in jacobian_relations(qp.potential).values():
        assert system.reduce_element(relation).is_zero()


def test_groebner_of_three_cycle_relations():
    quiver, potential = three_cycle_qp()
    system = groebner(quiver, list(jacobian_relations(potential).values()), 10)
    assert system.complete
    assert len(system.rules) == 3


def test_max_degree_environment_default(monkeypatch):
    monkeypatch.setenv("QPSL_MAX_DEGREE", "17")
    assert default_max_degree() == 17
    monkeypatch.delenv("QPSL_MAX_DEGREE")
    assert default_max_degree() == 40


def test_summary_json_shape():
    data = jacobian_dim(three_cycle()).to_json(verbose=True)
    assert data["dimension"] == 6
    assert data["status"] == "holds"
    assert "standard_paths" in data
