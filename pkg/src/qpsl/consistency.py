"""Cross-checks between cluster combinatorics and decorated representations."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .cluster import Seed, as_matrix, enumerate_seeds, principal_fg
from .path_algebra import Potential
from .qp_calculus import QP
from .qp_reps import (
    DecoratedRep,
    e_invariant,
    f_polynomial_thin,
    g_vector,
    mutate_rep,
    rep_along_path,
    thin_subrep_vectors,
)
from .quiver import quiver_of_matrix


def zero_potential_qp(matrix) -> QP:
    """QP on the quiver of an acyclic (or tree-type) matrix with zero potential."""
    quiver = quiver_of_matrix(as_matrix(matrix).top())
    return QP(quiver, Potential(quiver))


def first_occurrences(seeds: list[Seed]) -> list[tuple[tuple[int, ...], int]]:
    """``(path, index)`` of the first seed holding each non-initial cluster variable."""
    initial = set(Seed.initial(seeds[0].matrix).cluster)
    seen = set()
    out = []
    for seed in seeds:
        for index, variable in enumerate(seed.cluster, start=1):
            if variable in initial or variable in seen:
                continue
            seen.add(variable)
            out.append((seed.path, index))
    return out


@dataclass
class FGRecord:
    path: tuple[int, ...]
    index: int
    cluster_f: dict
    cluster_g: tuple[int, ...]
    rep_f: dict
    rep_g: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.cluster_f == self.rep_f and self.cluster_g == self.rep_g

    def to_json(self) -> dict:
        def fmt(poly):
            return sorted([list(e), c] for e, c in poly.items())

        return {
            "path": list(self.path),
            "index": self.index,
            "F": fmt(self.cluster_f),
            "g": list(self.cluster_g),
            "rep_F": fmt(self.rep_f),
            "rep_g": list(self.rep_g),
            "ok": self.ok,
        }


@dataclass
class FGConsistency:
    records: list[FGRecord] = field(default_factory=list)
    complete: bool = True

    @property
    def ok(self) -> bool:
        return self.complete and all(r.ok for r in self.records)

    def to_json(self) -> dict:
        return {
            "variables": len(self.records),
            "complete": self.complete,
            "mismatches": sum(not r.ok for r in self.records),
            "ok": self.ok,
            "records": [r.to_json() for r in self.records],
        }


def fg_consistency(matrix, qp: QP | None = None, max_seeds: int = 200) -> FGConsistency:
    """Compare ``principal_fg`` with ``(f_polynomial_thin, g_vector)`` for every non-initial variable."""
    matrix = as_matrix(matrix).top()
    qp = qp or zero_potential_qp(matrix)
    enumeration = enumerate_seeds(matrix, max_seeds=max_seeds)
    report = FGConsistency(complete=enumeration.complete)
    vertices = qp.quiver.vertices
    for path, index in first_occurrences(enumeration.seeds):
        f_poly, g = principal_fg(matrix, path, index)
        rep = rep_along_path(qp, path, vertices[index - 1])
        report.records.append(
            FGRecord(path, index, f_poly.as_dict(), tuple(g), f_polynomial_thin(rep).as_dict(), g_vector(rep))
        )
    return report


@dataclass
class EInvariantSurvey:
    reps: list[DecoratedRep]
    nonzero_e: int
    subrep_checks: int
    subrep_failures: int
    skipped_nonthin: int

    @property
    def ok(self) -> bool:
        return self.nonzero_e == 0 and self.subrep_failures == 0

    def to_json(self) -> dict:
        return {
            "representations": len(self.reps),
            "nonzero_e": self.nonzero_e,
            "subrep_checks": self.subrep_checks,
            "subrep_failures": self.subrep_failures,
            "skipped_nonthin": self.skipped_nonthin,
            "ok": self.ok,
        }


def _rep_key(rep: DecoratedRep) -> tuple:
    matrices = tuple((a, tuple(map(tuple, m.to_lists()))) for a, m in rep.maps)
    return (rep.qp.quiver, rep.qp.potential, rep.dims, rep.decoration, matrices)


def reachable_reps(qp: QP, depth: int) -> list[DecoratedRep]:
    """Decorated reps obtained from negative simples by at most ``depth`` mutations."""
    start = [DecoratedRep.negative_simple(qp, v) for v in qp.quiver.vertices]
    found: dict[tuple, DecoratedRep] = {}
    queue = deque((rep, 0) for rep in start)
    for rep in start:
        found[_rep_key(rep)] = rep
    while queue:
        rep, level = queue.popleft()
        if level == depth:
            continue
        for vertex in rep.qp.quiver.vertices:
            nxt = mutate_rep(rep, vertex)
            key = _rep_key(nxt)
            if key not in found:
                found[key] = nxt
                queue.append((nxt, level + 1))
    return list(found.values())


def e_invariant_survey(qp: QP, depth: int) -> EInvariantSurvey:
    """``E = 0`` on every reachable rep, and ``e . g < 0`` on nonzero thin subreps of positive ones."""
    reps = reachable_reps(qp, depth)
    nonzero = checks = failures = skipped = 0
    for rep in reps:
        if e_invariant(rep) != 0:
            nonzero += 1
        if rep.total_dim() == 0 or any(rep.deco.values()):
            continue
        if not rep.is_thin():
            skipped += 1
            continue
        g = g_vector(rep)
        for e in thin_subrep_vectors(rep):
            if not any(e):
                continue
            checks += 1
            if sum(x * y for x, y in zip(e, g)) >= 0:
                failures += 1
    return EInvariantSurvey(reps, nonzero, checks, failures, skipped)


__all__ = [
    "zero_potential_qp",
    "first_occurrences",
    "FGRecord",
    "FGConsistency",
    "fg_consistency",
    "EInvariantSurvey",
    "reachable_reps",
    "e_invariant_survey",
]
