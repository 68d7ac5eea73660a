"""Command-line interface.

Exit codes: 0 success, 1 a mathematical check failed, 2 usage or input
error, 3 a computation budget was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import catalog
from .cluster import (
    Seed,
    all_cluster_monomials,
    as_matrix,
    cluster_monomial,
    enumerate_seeds,
    exponent_vectors,
    format_laurent,
    mutate_along,
    parse_laurent,
    positive_decomposition,
    principal_fg,
    proper_laurent_sweep,
    rebase,
    formal_seed,
    independence_of,
)
from .consistency import fg_consistency, zero_potential_qp
from .errors import BudgetExceeded, LaurentViolation, QPSLError
from .hexagon import check_hexagon_example
from .jacobian import check_admissibility, jacobian_dim
from .qp_calculus import QP, mutate_qp
from .qp_reps import DecoratedRep, e_invariant, f_polynomial_thin, g_vector, mutate_rep, rep_along_path
from .quiver import ExchangeMatrix, Quiver, build_quivers, matrix_of_quiver, mutate_quiver, quiver_of_matrix
from .surface import (
    IdealTriangulation,
    TaggedTriangulation,
    enumerate_flip_graph,
    flip_tagged,
    validate,
)
from .surface_qp import potential_of_ideal, potential_of_tagged, verify_flip_mutation

OK, CHECK_FAILED, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


TRIANGULATIONS: dict[str, Callable[[], TaggedTriangulation]] = {
    "square": lambda: TaggedTriangulation.plain(catalog.square()),
    "pentagon": lambda: TaggedTriangulation.plain(catalog.polygon_fan(5)),
    "hexagon": lambda: TaggedTriangulation.plain(catalog.hexagon_fan()),
    "once-punctured-square": lambda: TaggedTriangulation.plain(catalog.once_punctured_square()),
    "once-punctured-digon": lambda: TaggedTriangulation.plain(catalog.once_punctured_digon()),
    "three-punctured-hexagon": catalog.three_punctured_hexagon,
}

MATRICES: dict[str, tuple[tuple[int, ...], ...]] = {
    "a2": ((0, 1), (-1, 0)),
    "a3": ((0, 1, 0), (-1, 0, 1), (0, -1, 0)),
    "once-punctured-square": ((0, -1, 0, 1), (1, 0, -1, 0), (0, 1, 0, -1), (-1, 0, 1, 0)),
    "markov": ((0, 2, -2), (-2, 0, 2), (2, -2, 0)),
}


def _named_qp(name: str) -> QP:
    if name == "3cycle":
        quiver, potential = catalog.three_cycle_qp()
        return QP(quiver, potential)
    if name == "markov":
        return QP(catalog.markov_quiver(), catalog.markov_potential())
    raise UsageError(f"unknown QP example {name!r}")


# input helpers --------------------------------------------------------------------------


def _read_json(source: str) -> Any:
    """A JSON literal or the path of a JSON file."""
    text = source.strip()
    if text[:1] in "[{":
        return json.loads(text)
    path = Path(source)
    if not path.exists():
        raise UsageError(f"no such file: {source}")
    return json.loads(path.read_text())


def parse_weights(text: str | None) -> dict[str, Fraction] | None:
    """``p1=2,p2=3/4``, a JSON object, or a JSON file."""
    if not text:
        return None
    stripped = text.strip()
    if stripped.startswith("{") or Path(stripped).exists():
        data = _read_json(stripped)
        return {str(p): Fraction(str(x)) for p, x in data.items()}
    weights = {}
    for item in stripped.split(","):
        if "=" not in item:
            raise UsageError(f"bad weight {item!r}, expected p=value")
        puncture, value = item.split("=", 1)
        weights[puncture.strip()] = Fraction(value.strip())
    return weights


def parse_int_list(text: str | None) -> tuple[int, ...]:
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def load_tagged(args) -> TaggedTriangulation:
    if getattr(args, "tri", None):
        return TaggedTriangulation.from_json(_read_json(args.tri))
    name = getattr(args, "example", None)
    if name in TRIANGULATIONS:
        return TRIANGULATIONS[name]()
    raise UsageError("give --tri FILE or --example with a triangulation name: " + ", ".join(TRIANGULATIONS))


def load_qp(args) -> QP:
    if getattr(args, "qp", None):
        data = _read_json(args.qp)
        qp = QP.from_json(data)
        weights = parse_weights(getattr(args, "weights", None))
        return QP(qp.quiver, qp.potential, weights or qp.weights)
    name = getattr(args, "example", None)
    if name in ("3cycle", "markov"):
        return _named_qp(name)
    if getattr(args, "matrix", None) or name in MATRICES:
        return zero_potential_qp(load_matrix(args))
    return potential_of_tagged(load_tagged(args), parse_weights(getattr(args, "weights", None)))


def load_quiver(args) -> Quiver:
    if getattr(args, "quiver", None):
        return Quiver.from_json(_read_json(args.quiver))
    if getattr(args, "qp", None) or getattr(args, "example", None) in ("3cycle", "markov"):
        return load_qp(args).quiver
    if getattr(args, "matrix", None) or getattr(args, "example", None) in MATRICES:
        return quiver_of_matrix(load_matrix(args).top())
    return build_quivers(load_tagged(args).normalized().base)[0]


def load_matrix(args) -> ExchangeMatrix:
    if getattr(args, "matrix", None):
        return ExchangeMatrix.from_json(_read_json(args.matrix))
    name = getattr(args, "example", None)
    if name in MATRICES:
        return ExchangeMatrix(MATRICES[name])
    if name in TRIANGULATIONS or getattr(args, "tri", None):
        return build_quivers(load_tagged(args).normalized().base)[2]
    raise UsageError("give --matrix FILE|JSON or --example with a matrix name: " + ", ".join(MATRICES))


def load_rep(args) -> DecoratedRep:
    if getattr(args, "rep", None):
        return DecoratedRep.from_json(_read_json(args.rep))
    if not args.negative_simple:
        raise UsageError("give --rep FILE, or a QP source with --negative-simple VERTEX")
    qp = load_qp(args)
    vertex = args.negative_simple
    if vertex not in qp.quiver.vertices:
        raise UsageError(f"unknown vertex {vertex!r}")
    return rep_along_path(qp, parse_int_list(args.path), vertex)


def _vertex(qp_or_quiver, label: str) -> str:
    vertices = qp_or_quiver.vertices
    if label in vertices:
        return label
    raise UsageError(f"unknown vertex {label!r}; vertices are {', '.join(vertices)}")


# output ---------------------------------------------------------------------------------


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _table(rows: list[dict]) -> list[str]:
    columns = list(dict.fromkeys(k for row in rows for k in row))
    cells = [[_scalar(row.get(c, "")) for c in columns] for row in rows]
    widths = [max(len(c), *(len(r[k]) for r in cells)) for k, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(v.ljust(w) for v, w in zip(r, widths)) for r in cells)
    return lines


def _scalar(value) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value, separators=(",", ":"))
    return str(value)


def render_text(report, indent: int = 0) -> str:
    pad = " " * indent
    if isinstance(report, str):
        return report.rstrip("\n")
    if isinstance(report, list):
        if report and all(isinstance(r, dict) for r in report):
            return "\n".join(pad + line for line in _table(report))
        return "\n".join(pad + _scalar(r) for r in report)
    lines = []
    for key, value in report.items():
        if isinstance(value, dict) and value:
            lines.append(f"{pad}{key}:")
            lines.append(render_text(value, indent + 2))
        elif isinstance(value, list) and value and all(isinstance(r, dict) for r in value):
            lines.append(f"{pad}{key}:")
            lines.append(render_text(value, indent + 2))
        else:
            lines.append(f"{pad}{key}: {_scalar(value)}")
    return "\n".join(lines)


def emit(report, fmt: str) -> None:
    if fmt == "json":
        if isinstance(report, str):
            report = {"text": report}
        print(json.dumps(_jsonable(report), indent=2, sort_keys=True))
    else:
        print(render_text(_jsonable(report)))


# surface --------------------------------------------------------------------------------


def cmd_surface_validate(args):
    try:
        tagged = load_tagged(args)
    except QPSLError as exc:
        return {"valid": False, "problems": [str(exc)]}, CHECK_FAILED
    problems = validate(tagged.base)
    report = {
        "valid": not problems,
        "problems": problems,
        "arcs": len(tagged.arcs),
        "punctures": list(tagged.surface.puncture_labels),
        "signature": tagged.signature(),
    }
    return report, OK if not problems else CHECK_FAILED


def cmd_surface_flip(args):
    flipped = flip_tagged(load_tagged(args), args.arc)
    return flipped.to_json(), OK


def cmd_surface_graph(args):
    graph = enumerate_flip_graph(load_tagged(args), args.max_nodes)
    degrees = [graph.degree(v) for v in range(len(graph.nodes))]
    involutive = all(
        flip_tagged(flip_tagged(graph.nodes[e.source], e.arc), e.arc).canonical_key()
        == graph.nodes[e.source].canonical_key()
        for e in graph.edges
    )
    report = {
        "nodes": len(graph.nodes),
        "edges": len(graph.edges),
        "degrees": sorted(set(degrees)),
        "is_cycle": graph.is_cycle(),
        "involutive": involutive,
    }
    if args.list_edges:
        report["edge_list"] = [{"source": e.source, "target": e.target, "arc": e.arc} for e in graph.edges]
    return report, OK if involutive else CHECK_FAILED


# quiver ---------------------------------------------------------------------------------


def cmd_quiver_build(args):
    if getattr(args, "matrix", None) or args.example in MATRICES:
        matrix = load_matrix(args)
        quiver = quiver_of_matrix(matrix.top())
        return {"quiver": quiver.to_json(), "matrix": matrix.to_json()}, OK
    reduced, unreduced, matrix = build_quivers(load_tagged(args).normalized().base)
    return {"quiver": reduced.to_json(), "unreduced": unreduced.to_json(), "matrix": matrix.to_json()}, OK


def cmd_quiver_mutate(args):
    quiver = load_quiver(args)
    mutated = mutate_quiver(quiver, _vertex(quiver, args.vertex))
    return {"quiver": mutated.to_json(), "matrix": matrix_of_quiver(mutated).to_json()}, OK


def cmd_quiver_dot(args):
    return load_quiver(args).to_dot(args.name), OK


# qp -------------------------------------------------------------------------------------


def cmd_qp_potential(args):
    weights = parse_weights(args.weights)
    if getattr(args, "qp", None) or args.example in ("3cycle", "markov"):
        qp = load_qp(args)
        return {"reduced": qp.to_json()}, OK
    tagged = load_tagged(args)
    unreduced, reduced = potential_of_ideal(tagged.normalized().base, weights)
    return {"unreduced": unreduced.to_json(), "reduced": reduced.to_json()}, OK


def cmd_qp_mutate(args):
    qp = load_qp(args)
    result = mutate_qp(qp, _vertex(qp.quiver, args.vertex))
    report = {"reduced": result.reduced.to_json(), "trivial": result.trivial.to_json()}
    if args.verbose:
        report["details"] = result.to_json()
    return report, OK


def _jacobian_code(summary) -> int:
    if summary.status == "holds":
        return OK
    return BUDGET if summary.reason.startswith("budget") else CHECK_FAILED


def cmd_qp_jacobian(args):
    summary = jacobian_dim(load_qp(args), args.max_degree)
    return summary.to_json(verbose=args.verbose), _jacobian_code(summary)


def cmd_qp_admissible(args):
    report = check_admissibility(load_qp(args), args.max_degree)
    return report.to_json(), OK if report.status == "holds" else _jacobian_code(report.summary)


# rep ------------------------------------------------------------------------------------


def cmd_rep_mutate(args):
    rep = load_rep(args)
    return mutate_rep(rep, _vertex(rep.qp.quiver, args.vertex)).to_json(), OK


def cmd_rep_gvector(args):
    rep = load_rep(args)
    return {"vertices": list(rep.qp.quiver.vertices), "g": list(g_vector(rep))}, OK


def cmd_rep_einv(args):
    value = e_invariant(load_rep(args))
    return {"E": value}, OK


def cmd_rep_fpoly(args):
    rep = load_rep(args)
    poly = f_polynomial_thin(rep)
    return {"F": str(poly), "terms": [[list(e), c] for e, c in poly.terms]}, OK


# cluster --------------------------------------------------------------------------------


def _seed_path(args) -> tuple[int, ...]:
    path = parse_int_list(args.path)
    matrix = load_matrix(args)
    if any(not 1 <= k <= matrix.n for k in path):
        raise UsageError(f"mutation indices must lie in 1..{matrix.n}")
    return path


def cmd_cluster_mutate(args):
    path = _seed_path(args)
    return mutate_along(Seed.initial(load_matrix(args)), path).to_json(), OK


def cmd_cluster_expand(args):
    matrix = load_matrix(args)
    target = mutate_along(Seed.initial(matrix), _seed_path(args))
    reference = mutate_along(Seed.initial(matrix), parse_int_list(args.from_path))
    expanded = rebase(reference, target)
    report = {"from": list(reference.path), "to": list(target.path), "cluster": [format_laurent(x) for x in expanded]}
    if args.monomial:
        exps = parse_int_list(args.monomial)
        if len(exps) != matrix.n:
            raise UsageError(f"monomial needs {matrix.n} exponents")
        report["monomial"] = format_laurent(cluster_monomial(expanded, exps))
    return report, OK


def cmd_cluster_fg(args):
    matrix = load_matrix(args)
    if not 1 <= args.index <= matrix.n:
        raise UsageError(f"--index must lie in 1..{matrix.n}")
    f_poly, g = principal_fg(matrix, _seed_path(args), args.index)
    return {"F": format_laurent(f_poly).replace("x", "y"), "g": list(g)}, OK


def cmd_cluster_verify_laurent(args):
    sweep = proper_laurent_sweep(load_matrix(args), args.degree, args.max_seeds)
    if not sweep.complete and not sweep.violations:
        return sweep.to_json(), BUDGET
    return sweep.to_json(), OK if sweep.ok else CHECK_FAILED


def _monomials(args):
    enumeration = enumerate_seeds(load_matrix(args), max_seeds=args.max_seeds)
    if not enumeration.complete:
        raise BudgetExceeded(f"more than {args.max_seeds} seeds")
    return all_cluster_monomials(enumeration.seeds, args.degree)


def cmd_cluster_verify_independence(args):
    report = independence_of(_monomials(args))
    return report.to_json(), OK if report.full_rank else CHECK_FAILED


def cmd_cluster_decompose(args):
    matrix = load_matrix(args)
    dictionary = _monomials(args)
    element = parse_laurent(args.element, matrix.n + matrix.r)
    decomposition = positive_decomposition(element, dictionary)
    terms = [
        {"monomial": format_laurent(m), "coefficient": str(c)}
        for m, c in zip(dictionary, decomposition.coefficients)
        if c
    ]
    report = {"nonnegative": decomposition.nonnegative, "terms": terms}
    return report, OK if decomposition.nonnegative else CHECK_FAILED


# verify ---------------------------------------------------------------------------------


def _flip_job(job):
    tagged, arc, weights, max_degree, node = job
    report = verify_flip_mutation(tagged, arc, weights, max_degree=max_degree)
    data = {"node": node, "arc": arc, "quiver_ok": report.quiver_ok, "jacobian_ok": report.jacobian_ok,
            "requiv": report.requiv, "stratum_change": report.stratum_change}
    return data, report.ok


def cmd_verify_flip_mutation(args):
    tagged = load_tagged(args)
    weights = parse_weights(args.weights)
    if args.arc:
        report = verify_flip_mutation(tagged, args.arc, weights, max_degree=args.max_degree)
        return report.to_json(), OK if report.ok else CHECK_FAILED
    graph = enumerate_flip_graph(tagged, args.max_nodes)
    jobs = [(graph.nodes[e.source], e.arc, weights, args.max_degree, e.source) for e in graph.edges]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_flip_job, jobs))
    else:
        results = [_flip_job(job) for job in jobs]
    rows = [row for row, _ in results]
    failed = sum(not ok for _, ok in results)
    report = {
        "nodes": len(graph.nodes),
        "edges": len(graph.edges),
        "failed": failed,
        "requiv_found": sum(r["requiv"] == "found" for r in rows),
    }
    if args.verbose:
        report["results"] = rows
    return report, OK if not failed else CHECK_FAILED


def cmd_verify_hexagon_example(args):
    check = check_hexagon_example(parse_weights(args.weights))
    return check.to_json(), OK if check.ok else CHECK_FAILED


def cmd_verify_fg_consistency(args):
    matrix = load_matrix(args) if (args.matrix or args.example) else ExchangeMatrix(MATRICES["a3"])
    qp = load_qp(args) if args.qp else None
    report = fg_consistency(matrix, qp, max_seeds=args.max_seeds)
    data = report.to_json()
    if not args.verbose:
        data.pop("records")
    if not report.complete:
        return data, BUDGET
    return data, OK if report.ok else CHECK_FAILED


# parser ---------------------------------------------------------------------------------


def _common(parser: argparse.ArgumentParser, *sources: str) -> None:
    parser.add_argument("--format", choices=("json", "text"), default="text")
    parser.add_argument("--example", help="named built-in input")
    parser.add_argument("--weights", help="puncture weights, e.g. p1=2,p2=3/4")
    parser.add_argument("--max-degree", type=int, default=None, help="Groebner degree bound")
    parser.add_argument("--verbose", action="store_true")
    for source in sources:
        parser.add_argument(f"--{source}", help=f"{source} as a JSON file or literal")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qpsl", description="Quivers with potentials of surface triangulations.")
    groups = parser.add_subparsers(dest="group", required=True)

    def command(group, name, handler, *sources, help=None):
        sub = group.add_parser(name, help=help)
        _common(sub, *sources)
        sub.set_defaults(handler=handler)
        return sub

    surface = groups.add_parser("surface").add_subparsers(dest="command", required=True)
    command(surface, "validate", cmd_surface_validate, "tri")
    command(surface, "flip", cmd_surface_flip, "tri").add_argument("--arc", required=True)
    graph = command(surface, "graph", cmd_surface_graph, "tri")
    graph.add_argument("--max-nodes", type=int, default=200)
    graph.add_argument("--list-edges", action="store_true")

    quiver = groups.add_parser("quiver").add_subparsers(dest="command", required=True)
    command(quiver, "build", cmd_quiver_build, "tri", "matrix")
    command(quiver, "mutate", cmd_quiver_mutate, "tri", "quiver", "qp", "matrix").add_argument("--vertex", required=True)
    command(quiver, "dot", cmd_quiver_dot, "tri", "quiver", "qp", "matrix").add_argument("--name", default="Q")

    qp = groups.add_parser("qp").add_subparsers(dest="command", required=True)
    command(qp, "potential", cmd_qp_potential, "tri", "qp")
    command(qp, "mutate", cmd_qp_mutate, "tri", "qp", "matrix").add_argument("--vertex", required=True)
    command(qp, "jacobian", cmd_qp_jacobian, "tri", "qp", "matrix")
    command(qp, "admissible", cmd_qp_admissible, "tri", "qp", "matrix")

    rep = groups.add_parser("rep").add_subparsers(dest="command", required=True)
    for name, handler in (
        ("mutate", cmd_rep_mutate),
        ("gvector", cmd_rep_gvector),
        ("einv", cmd_rep_einv),
        ("fpoly", cmd_rep_fpoly),
    ):
        sub = command(rep, name, handler, "rep", "tri", "qp", "matrix")
        sub.add_argument("--negative-simple", help="start from the negative simple at this vertex")
        sub.add_argument("--path", help="mutate the QP along these 1-based positions first")
        if name == "mutate":
            sub.add_argument("--vertex", required=True)

    cluster = groups.add_parser("cluster").add_subparsers(dest="command", required=True)
    command(cluster, "mutate", cmd_cluster_mutate, "matrix", "tri").add_argument("--path", default="")
    expand = command(cluster, "expand", cmd_cluster_expand, "matrix", "tri")
    expand.add_argument("--path", default="")
    expand.add_argument("--from-path", default="")
    expand.add_argument("--monomial", help="exponents of a cluster monomial of the target seed")
    fg = command(cluster, "fg", cmd_cluster_fg, "matrix", "tri")
    fg.add_argument("--path", default="")
    fg.add_argument("--index", type=int, required=True)
    for name, handler in (
        ("verify-laurent", cmd_cluster_verify_laurent),
        ("verify-independence", cmd_cluster_verify_independence),
        ("decompose", cmd_cluster_decompose),
    ):
        sub = command(cluster, name, handler, "matrix", "tri")
        sub.add_argument("--degree", type=int, default=3)
        sub.add_argument("--max-seeds", type=int, default=100)
        if name == "decompose":
            sub.add_argument("--element", required=True, help="Laurent polynomial such as 'x1^-1 + x2'")

    verify = groups.add_parser("verify").add_subparsers(dest="command", required=True)
    flip = command(verify, "flip-mutation", cmd_verify_flip_mutation, "tri")
    flip.add_argument("--arc", help="check one flip; default is every edge of the flip graph")
    flip.add_argument("--max-nodes", type=int, default=60)
    flip.add_argument("--jobs", type=int, default=1)
    command(verify, "hexagon-example", cmd_verify_hexagon_example).add_argument("--jobs", type=int, default=1)
    consistency = command(verify, "thm-fg-consistency", cmd_verify_fg_consistency, "matrix", "qp")
    consistency.add_argument("--max-seeds", type=int, default=200)
    consistency.add_argument("--jobs", type=int, default=1)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    fmt = args.format
    try:
        report, code = args.handler(args)
    except BudgetExceeded as exc:
        report, code = {"error": "budget exceeded", "detail": str(exc)}, BUDGET
    except LaurentViolation as exc:
        report, code = {"error": "Laurent violation", "detail": str(exc)}, CHECK_FAILED
    except (UsageError, QPSLError, KeyError, ValueError, json.JSONDecodeError) as exc:
        report, code = {"error": type(exc).__name__, "detail": str(exc)}, USAGE
    emit(report, fmt)
    return code


def main() -> None:
    sys.exit(run())


__all__ = ["run", "main", "build_parser", "parse_weights", "render_text"]
