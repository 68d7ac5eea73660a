from fractions import Fraction

import pytest

from qpsl.catalog import hexagon_fan, once_punctured_digon, once_punctured_square, square, three_punctured_hexagon
from qpsl.errors import MissingWeight
from qpsl.path_algebra import Potential, parse_potential
from qpsl.qp_calculus import QP, mutate_qp, verify_right_equivalence
from qpsl.surface import TaggedTriangulation, flip_tagged
from qpsl.surface_qp import (
    potential_of_ideal,
    potential_of_tagged,
    puncture_cycle,
    resolve_weights,
    search_right_equivalence,
    surface_qp,
    verify_flip_mutation,
)


def plain(base):
    return TaggedTriangulation.plain(base)


def test_square_has_a_single_vertex_and_no_potential():
    qp = potential_of_tagged(plain(square()))
    assert qp.quiver.vertices == ("a1",)
    assert qp.potential.is_zero()


def test_fan_triangulation_has_zero_potential():
    unreduced, reduced = potential_of_ideal(hexagon_fan())
    assert unreduced == reduced
    assert reduced.potential.is_zero()
    assert len(reduced.quiver.arrows) == 2


def test_punctured_square_potential_is_the_weighted_cycle():
    _, reduced = potential_of_ideal(once_punctured_square(), {"p1": 7})
    assert len(reduced.potential) == 1
    ((cycle, coefficient),) = reduced.potential.items()
    assert len(cycle) == 4
    assert coefficient == 7


def test_puncture_cycle_visits_every_radius():
    cycle = puncture_cycle(once_punctured_square(), "p1")
    assert len(cycle) == 4


def test_digon_quiver_has_no_arrows():
    qp = potential_of_tagged(plain(once_punctured_digon()))
    assert qp.quiver.arrows == ()


def test_weights_default_to_one_and_reject_gaps():
    base = three_punctured_hexagon().base
    assert resolve_weights(base, None) == {"p1": 1, "p2": 1, "p3": 1}
    with pytest.raises(MissingWeight):
        resolve_weights(base, {"p1": 2})
    with pytest.raises(ValueError):
        resolve_weights(base, {"p1": 2, "p2": 0, "p3": 1})


def test_self_folded_triangle_weight_enters_inverted():
    base = three_punctured_hexagon().base
    qp = surface_qp(base, {"p1": 1, "p2": 4, "p3": 1}).unreduced
    assert Fraction(-1, 4) in {c for _, c in qp.potential.items()}


def test_tagged_potential_uses_the_normalized_base():
    tau = three_punctured_hexagon()
    notched = TaggedTriangulation(tau.base, {"p1": 1, "p2": -1, "p3": 1})
    normalized = notched.normalized()
    assert normalized.eps == tau.eps
    assert normalized.base.loop_of_folded_side == {"a4": "a3"}
    assert potential_of_tagged(notched) == potential_of_tagged(normalized)


def test_search_finds_a_right_equivalence_for_a_punctured_flip():
    tau = plain(once_punctured_square())
    sigma = flip_tagged(tau, "a1")
    mutated = mutate_qp(potential_of_tagged(tau), "a1").reduced
    target = potential_of_tagged(sigma)
    phi = search_right_equivalence(target, mutated)
    assert phi is not None
    assert verify_right_equivalence(phi, target, mutated)


def test_search_reports_inequivalent_potentials():
    qp = potential_of_tagged(plain(once_punctured_square()))
    zero = QP(qp.quiver, Potential(qp.quiver))
    assert search_right_equivalence(qp, zero) is None


def test_flip_report_for_the_punctured_hexagon_loop():
    report = verify_flip_mutation(three_punctured_hexagon(), "a3", {"p1": 2, "p2": 3, "p3": 5})
    assert report.ok
    assert report.requiv == "found"
    assert report.stratum_change
    assert report.source_jacobian.dimension == report.target_jacobian.dimension == 98
    data = report.to_json()
    assert data["quiver_ok"] and data["jacobian_ok"]
