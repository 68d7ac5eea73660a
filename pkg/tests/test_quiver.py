import pytest
from hypothesis import given, strategies as st

from qpsl.catalog import hexagon_fan, markov_quiver, once_punctured_digon, once_punctured_square, polygon_fan
from qpsl.errors import TwoCycleAtVertex
from qpsl.quiver import (
    Arrow,
    ExchangeMatrix,
    Quiver,
    build_quivers,
    matrix_of_quiver,
    mutate_quiver,
    premutate_quiver,
    quiver_of_matrix,
)
from qpsl.surface import TaggedTriangulation, enumerate_flip_graph

from oracles import polygon_adjacent_pairs, polygon_triangulations


@st.composite
def skew_matrices(draw, max_size=4, bound=2):
    n = draw(st.integers(min_value=1, max_value=max_size))
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            value = draw(st.integers(min_value=-bound, max_value=bound))
            rows[i][j], rows[j][i] = value, -value
    return ExchangeMatrix(tuple(map(tuple, rows)))


def test_matrix_mutation_by_hand():
    a3 = ExchangeMatrix(((0, 1, 0), (-1, 0, 1), (0, -1, 0)))
    assert a3.mutate(1).entries == ((0, -1, 1), (1, 0, -1), (-1, 1, 0))


def test_principal_extension_shape():
    b = ExchangeMatrix(((0, 1), (-1, 0))).with_principal_coefficients()
    assert (b.n, b.r) == (2, 2)
    assert b.entries[2:] == ((1, 0), (0, 1))
    assert b.top().entries == ((0, 1), (-1, 0))


def test_non_skew_matrix_is_rejected():
    with pytest.raises(ValueError):
        ExchangeMatrix(((0, 1), (1, 0)))


@given(skew_matrices(), st.data())
def test_quiver_mutation_commutes_with_matrix_mutation(matrix, data):
    k = data.draw(st.integers(min_value=0, max_value=matrix.n - 1))
    quiver = quiver_of_matrix(matrix)
    mutated = mutate_quiver(quiver, quiver.vertices[k])
    assert matrix_of_quiver(mutated).entries == matrix.mutate(k).entries


@given(skew_matrices(), st.data())
def test_matrix_mutation_is_an_involution(matrix, data):
    k = data.draw(st.integers(min_value=0, max_value=matrix.n - 1))
    assert matrix.mutate(k).mutate(k) == matrix


@given(skew_matrices())
def test_matrix_quiver_round_trip(matrix):
    assert matrix_of_quiver(quiver_of_matrix(matrix)).entries == matrix.entries


def test_premutation_reverses_incident_arrows_and_adds_composites():
    quiver = Quiver(("1", "2", "3"), (Arrow("a", "1", "2"), Arrow("b", "2", "3")))
    pre, pairs = premutate_quiver(quiver, "2")
    ends = sorted((a.tail, a.head) for a in pre.arrows)
    assert ends == [("1", "3"), ("2", "1"), ("3", "2")]
    assert len(pairs) == 1


def test_mutation_refuses_two_cycles_at_the_vertex():
    quiver = Quiver(("1", "2"), (Arrow("a", "1", "2"), Arrow("b", "2", "1")))
    with pytest.raises(TwoCycleAtVertex):
        mutate_quiver(quiver, "1")


def test_markov_quiver_is_mutation_invariant():
    quiver = markov_quiver()
    for v in quiver.vertices:
        entries = matrix_of_quiver(mutate_quiver(quiver, v)).entries
        assert sorted(map(abs, sum(entries, ()))) == sorted(map(abs, sum(matrix_of_quiver(quiver).entries, ())))


def test_polygon_arrow_count_matches_oracle():
    graph = enumerate_flip_graph(TaggedTriangulation.plain(polygon_fan(7)), 100)
    expected = sorted(polygon_adjacent_pairs(t, 7) for t in polygon_triangulations(7))
    found = sorted(len(build_quivers(t.base)[0].arrows) for t in graph.nodes)
    assert found == expected


def test_surface_quivers_are_two_acyclic_with_small_entries():
    for start in (hexagon_fan(), once_punctured_square(), once_punctured_digon()):
        graph = enumerate_flip_graph(TaggedTriangulation.plain(start), 60)
        for node in graph.nodes:
            reduced, _, matrix = build_quivers(node.normalized().base)
            assert reduced.is_two_acyclic()
            assert max(abs(x) for row in matrix.entries for x in row) <= 2


def test_dot_output_mentions_every_arrow():
    quiver = markov_quiver()
    dot = quiver.to_dot()
    assert dot.startswith('digraph "Q" {')
    assert all(f'label="{a.id}"' in dot for a in quiver.arrows)
