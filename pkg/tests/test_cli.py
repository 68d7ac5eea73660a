import json
from fractions import Fraction

import pytest

from qpsl.cli import UsageError, parse_weights, run
from qpsl.cluster import Seed
from qpsl.surface import TaggedTriangulation


def run_json(capsys, *argv):
    code = run([*argv, "--format", "json"])
    return code, json.loads(capsys.readouterr().out)


def test_jacobian_of_the_three_cycle(capsys):
    code, data = run_json(capsys, "qp", "jacobian", "--example", "3cycle")
    assert code == 0
    assert data["dimension"] == 6


def test_surface_flip_output_loads_back(capsys):
    code, data = run_json(capsys, "surface", "flip", "--example", "hexagon", "--arc", "a1")
    assert code == 0
    flipped = TaggedTriangulation.from_json(data)
    assert len(flipped.base.arcs) == 3


def test_cluster_mutate_output_loads_back(capsys):
    code, data = run_json(capsys, "cluster", "mutate", "--example", "a3", "--path", "1,2")
    assert code == 0
    seed = Seed.from_json(data)
    assert [str(v) for v in seed.cluster][2] == "x3"


def test_markov_is_not_certified_admissible(capsys):
    code, data = run_json(capsys, "qp", "admissible", "--example", "markov", "--max-degree", "12")
    assert code == 1
    assert data["jacobian"]["status"] == "undetermined"


def test_unknown_example_is_a_usage_error(capsys):
    code, data = run_json(capsys, "qp", "jacobian", "--example", "nonsense")
    assert code == 2
    assert "error" in data


def test_bad_arguments_are_usage_errors(capsys):
    assert run(["surface", "flip", "--example", "hexagon"]) == 2
    assert run(["nonsense"]) == 2


def test_infinite_pattern_exceeds_the_budget(capsys):
    code, data = run_json(capsys, "cluster", "verify-laurent", "--example", "markov", "--max-seeds", "10")
    assert code == 3
    assert not data["complete"]


def test_laurent_sweep_on_a2(capsys):
    code, data = run_json(capsys, "cluster", "verify-laurent", "--example", "a2")
    assert code == 0
    assert data["ok"] and data["laurent_violations"] == []


def test_hexagon_example_command(capsys):
    code, data = run_json(capsys, "verify", "hexagon-example")
    assert code == 0
    assert data["ok"]


def test_single_flip_verification(capsys):
    code, data = run_json(capsys, "verify", "flip-mutation", "--example", "once-punctured-square", "--arc", "a1")
    assert code == 0


def test_text_output_is_not_json(capsys):
    assert run(["quiver", "build", "--example", "a3"]) == 0
    out = capsys.readouterr().out
    assert out.strip()
    with pytest.raises(json.JSONDecodeError):
        json.loads(out)


def test_parse_weights():
    assert parse_weights("p1=2,p2=3/4") == {"p1": 2, "p2": Fraction(3, 4)}
    with pytest.raises(UsageError):
        parse_weights("p1")
