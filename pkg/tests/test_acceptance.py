"""Acceptance gate: one PASS/FAIL line per criterion.

Run under pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import functools
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from qpsl.catalog import (  # noqa: E402
    hexagon_fan,
    markov_potential,
    markov_quiver,
    once_punctured_digon,
    once_punctured_square,
)
from qpsl.cluster import (  # noqa: E402
    LaurentPoly,
    all_cluster_monomials,
    enumerate_seeds,
    independence_of,
    positive_decomposition,
    proper_laurent_sweep,
)
from qpsl.consistency import e_invariant_survey, fg_consistency, zero_potential_qp  # noqa: E402
from qpsl.hexagon import check_hexagon_example  # noqa: E402
from qpsl.jacobian import check_admissibility  # noqa: E402
from qpsl.path_algebra import AlgebraElement, Potential  # noqa: E402
from qpsl.qp_calculus import QP  # noqa: E402
from qpsl.surface import TaggedTriangulation, enumerate_flip_graph, flip_tagged  # noqa: E402
from qpsl.surface_qp import potential_of_tagged, verify_flip_mutation  # noqa: E402

A2 = ((0, 1), (-1, 0))
A3 = ((0, 1, 0), (-1, 0, 1), (0, -1, 0))
PUNCTURED_SQUARE = ((0, -1, 0, 1), (1, 0, -1, 0), (0, 1, 0, -1), (-1, 0, 1, 0))
FLIP_GRAPH_CAP = 60

RESULTS: dict[int, tuple[bool, str]] = {}


def record(number: int, ok: bool, detail: str) -> bool:
    RESULTS[number] = (ok, detail)
    return ok


@functools.lru_cache(maxsize=None)
def flip_graphs():
    return {
        "hexagon": enumerate_flip_graph(TaggedTriangulation.plain(hexagon_fan()), FLIP_GRAPH_CAP),
        "once-punctured square": enumerate_flip_graph(
            TaggedTriangulation.plain(once_punctured_square()), FLIP_GRAPH_CAP
        ),
    }


@functools.lru_cache(maxsize=None)
def flip_reports():
    reports = {}
    for name, graph in flip_graphs().items():
        reports[name] = [
            verify_flip_mutation(graph.nodes[edge.source], edge.arc, search=False) for edge in graph.edges
        ]
    return reports


def identity_on_arrows(phi) -> bool:
    return all(phi.image(a.id) == AlgebraElement.arrow(phi.source, a.id) for a in phi.source.arrows)


def splitting_is_correct(mutation) -> bool:
    splitting = mutation.splitting
    pre = mutation.premutation
    combined = Potential(
        pre.quiver, list(splitting.reduced.potential.items()) + list(splitting.trivial.potential.items())
    )
    return (
        splitting.witness.apply(pre.potential) == combined
        and identity_on_arrows(splitting.witness.compose(splitting.witness_inverse))
        and identity_on_arrows(splitting.witness_inverse.compose(splitting.witness))
    )


def planted(dictionary, coefficients):
    total = LaurentPoly.from_dict(dictionary[0].nvars, {})
    for coefficient, poly in zip(coefficients, dictionary):
        total = total + LaurentPoly.constant(poly.nvars, coefficient) * poly
    return total


def criterion_1() -> bool:
    start = time.perf_counter()
    check = check_hexagon_example({"p1": 2, "p2": 3, "p3": 5})
    elapsed = time.perf_counter() - start
    ok = check.ok and elapsed < 5
    return record(1, ok, f"hexagon example matches={check.ok} in {elapsed:.2f}s")


def criterion_2() -> bool:
    parts, ok = [], True
    for name, reports in flip_reports().items():
        good = sum(r.quiver_ok and r.jacobian_ok for r in reports)
        ok &= good == len(reports)
        parts.append(f"{name}: {len(flip_graphs()[name].nodes)} nodes, {good}/{len(reports)} edges agree")
    ok &= len(flip_graphs()["hexagon"].nodes) == 14
    return record(2, ok, "; ".join(parts))


def criterion_3() -> bool:
    certified = total = 0
    for graph in flip_graphs().values():
        for node in graph.nodes:
            total += 1
            certified += check_admissibility(potential_of_tagged(node), max_degree=40).status == "holds"
    markov = check_admissibility(QP(markov_quiver(), markov_potential()), max_degree=40)
    ok = certified == total and markov.status != "holds"
    return record(3, ok, f"{certified}/{total} surface QPs certified; Markov status {markov.status}")


def criterion_4() -> bool:
    checked = good = 0
    for reports in flip_reports().values():
        for report in reports:
            checked += 1
            good += splitting_is_correct(report.mutation)
    return record(4, good == checked, f"{good}/{checked} splittings verified")


def criterion_5() -> bool:
    parts, ok = [], True
    for name, matrix in (("A2", A2), ("A3", A3), ("once-punctured square", PUNCTURED_SQUARE)):
        sweep = proper_laurent_sweep(matrix, max_degree=3)
        ok &= sweep.ok and sweep.complete and not sweep.violations and sweep.checked > 0
        parts.append(f"{name}: {sweep.seeds} seeds, {sweep.checked} checks, {len(sweep.failures)} failures")
    return record(5, ok, "; ".join(parts))


def criterion_6() -> bool:
    parts, ok = [], True
    for name, matrix in (("A2", A2), ("A3", A3)):
        monomials = all_cluster_monomials(enumerate_seeds(matrix).seeds, 3)
        report = independence_of(monomials)
        ok &= report.full_rank
        parts.append(f"{name}: {len(monomials)} monomials full rank={report.full_rank}")
    dictionary = all_cluster_monomials(enumerate_seeds(A2).seeds, 2)
    planted_ok = True
    for weights in ((3, 0, 1, 0, 2), (1, 0, -2, 0, 1)):
        coefficients = tuple(weights) + (0,) * (len(dictionary) - len(weights))
        element = planted(dictionary, coefficients)
        found = positive_decomposition(element, dictionary)
        planted_ok &= found.coefficients == coefficients
        planted_ok &= found.nonnegative == all(c >= 0 for c in coefficients)
    ok &= planted_ok
    parts.append(f"planted decompositions recovered={planted_ok}")
    return record(6, ok, "; ".join(parts))


def criterion_7() -> bool:
    report = fg_consistency(A3)
    ok = report.ok and report.complete and len(report.records) == 6
    return record(7, ok, f"{len(report.records)} non-initial A3 variables, all agree={report.ok}")


def criterion_8() -> bool:
    parts, ok = [], True
    for name, matrix in (("A2", A2), ("A3", A3)):
        survey = e_invariant_survey(zero_potential_qp(matrix), 4)
        ok &= survey.ok and survey.subrep_checks > 0
        parts.append(
            f"{name}: {len(survey.reps)} reps, {survey.nonzero_e} with E != 0, "
            f"{survey.subrep_checks} subrep checks, {survey.subrep_failures} failures"
        )
    return record(8, ok, "; ".join(parts))


def criterion_9() -> bool:
    digon = enumerate_flip_graph(TaggedTriangulation.plain(once_punctured_digon()), FLIP_GRAPH_CAP)
    hexagon = flip_graphs()["hexagon"]
    uniform = {hexagon.degree(v) for v in range(len(hexagon.nodes))} == {3}
    involutive = all(
        flip_tagged(flip_tagged(node, arc), arc).canonical_key() == node.canonical_key()
        for graph in (digon, *flip_graphs().values())
        for node in graph.nodes
        for arc in node.arcs
    )
    ok = digon.is_cycle() and len(digon.nodes) == 4 and len(hexagon.nodes) == 14 and uniform and involutive
    return record(
        9,
        ok,
        f"digon 4-cycle={digon.is_cycle() and len(digon.nodes) == 4}; "
        f"hexagon {len(hexagon.nodes)} nodes degree 3={uniform}; flips involutive={involutive}",
    )


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9]


def format_line(number: int) -> str:
    ok, detail = RESULTS[number]
    return f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"


@pytest.mark.parametrize("number", range(1, 10))
def test_criterion(number):
    ok = CRITERIA[number - 1]()
    print(format_line(number))
    assert ok, format_line(number)


if __name__ == "__main__":
    outcomes = [check() for check in CRITERIA]
    for number in range(1, 10):
        print(format_line(number))
    sys.exit(0 if all(outcomes) else 1)
