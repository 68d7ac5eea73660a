from qpsl.catalog import three_cycle_qp
from qpsl.cluster import enumerate_seeds
from qpsl.consistency import e_invariant_survey, fg_consistency, first_occurrences, reachable_reps, zero_potential_qp
from qpsl.qp_calculus import QP

A2 = ((0, 1), (-1, 0))
A3 = ((0, 1, 0), (-1, 0, 1), (0, -1, 0))


def test_first_occurrences_cover_the_non_initial_variables():
    assert len(first_occurrences(enumerate_seeds(A2).seeds)) == 3
    assert len(first_occurrences(enumerate_seeds(A3).seeds)) == 6


def test_fg_consistency_for_a2():
    report = fg_consistency(A2)
    assert report.ok
    assert len(report.records) == 3


def test_fg_consistency_for_the_cyclic_a3_seed():
    # the 3-cycle quiver is mutation equivalent to A3; its potential makes the reps nilpotent
    quiver, potential = three_cycle_qp()
    matrix = ((0, -1, 1), (1, 0, -1), (-1, 1, 0))
    report = fg_consistency(matrix, QP(quiver, potential))
    assert report.ok
    assert len(report.records) == 6


def test_reachable_reps_start_from_negative_simples():
    reps = reachable_reps(zero_potential_qp(A2), 0)
    assert len(reps) == 2
    assert all(rep.total_dim() == 0 for rep in reps)


def test_e_invariant_survey_on_a2():
    survey = e_invariant_survey(zero_potential_qp(A2), 3)
    assert survey.ok
    assert survey.subrep_checks > 0
