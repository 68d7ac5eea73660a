"""Quivers with potential attached to (tagged) triangulations.

Every interior triangle contributes its oriented 3-cycle, plus one variant
for each choice of enclosing loops replaced by their folded sides.  Every
puncture with at least two incident arcs contributes the cycle of corner
arrows winding around it, weighted by the puncture's weight.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from typing import Mapping, Union

from .errors import MissingWeight, PreconditionViolation
from .jacobian import JacobianSummary, jacobian_dim
from .path_algebra import AlgebraElement, Potential, Substitution
from .qp_calculus import QP, MutationResult, mutate_qp, split, verify_right_equivalence
from .quiver import Quiver, build_quivers, corner_arrow_id, matrix_of_quiver
from .surface import IdealTriangulation, TaggedTriangulation, flip_tagged

PunctureWeights = Mapping[str, Union[int, Fraction, str]]


def resolve_weights(triangulation: IdealTriangulation, weights: PunctureWeights | None) -> dict[str, Fraction]:
    """Weights for every puncture; all ones when ``weights`` is None."""
    punctures = triangulation.punctures
    if weights is None:
        return {p: Fraction(1) for p in punctures}
    resolved = {}
    for p in punctures:
        if p not in weights:
            raise MissingWeight(p)
        value = Fraction(str(weights[p])) if isinstance(weights[p], str) else Fraction(weights[p])
        if value == 0:
            raise ValueError(f"weight of {p} must be nonzero")
        resolved[p] = value
    return resolved


def _triangle_terms(triangulation: IdealTriangulation, weights: dict[str, Fraction]) -> dict[tuple, Fraction]:
    folded_of = triangulation.folded_side_of_loop
    enclosed = {loop: q for _, _, loop, q in triangulation.self_folded}
    terms: dict[tuple, Fraction] = {}
    for t, tri in enumerate(triangulation.triangles):
        if tri.is_self_folded or not all(triangulation.is_arc(s) for s in tri.sides):
            continue
        loops = [s for s in tri.sides if s in folded_of]
        if len(loops) == 3:
            raise PreconditionViolation(f"triangle {t} is bounded by three enclosing loops")
        for choice in product((False, True), repeat=len(loops)):
            replaced = {loop for loop, flag in zip(loops, choice) if flag}
            coef = Fraction(1)
            for loop in replaced:
                coef *= Fraction(-1) / weights[enclosed[loop]]
            arrows = {
                k: corner_arrow_id(t, k, tri.sides[k] in replaced, tri.sides[k - 1] in replaced)
                for k in range(3)
            }
            key = (arrows[1], arrows[2], arrows[0])
            terms[key] = terms.get(key, Fraction(0)) + coef
    return terms


def puncture_cycle(triangulation: IdealTriangulation, puncture: str) -> tuple[str, ...] | None:
    """Composition word of the corner arrows around ``puncture`` or None."""
    folded_of = triangulation.folded_side_of_loop
    if len(set(triangulation.arcs_at(puncture))) < 2:
        return None
    travel = []
    for t, k in triangulation.rotation[puncture]:
        tri = triangulation.triangles[t]
        if tri.is_self_folded:
            continue
        out_side, in_side = tri.sides[k], tri.sides[k - 1]
        travel.append(corner_arrow_id(t, k, out_side in folded_of, in_side in folded_of))
    if not travel:
        return None
    return tuple(reversed(travel))


def _puncture_terms(triangulation: IdealTriangulation, weights: dict[str, Fraction]) -> dict[tuple, Fraction]:
    terms: dict[tuple, Fraction] = {}
    for p in triangulation.punctures:
        cycle = puncture_cycle(triangulation, p)
        if cycle is not None:
            terms[cycle] = terms.get(cycle, Fraction(0)) + weights[p]
    return terms


@dataclass(frozen=True)
class SurfaceQP:
    """Unreduced and reduced QPs of an ideal triangulation."""

    triangulation: IdealTriangulation
    unreduced: QP
    reduced: QP
    splitting: object = field(repr=False, compare=False)


def surface_qp(triangulation: IdealTriangulation, weights: PunctureWeights | None = None) -> SurfaceQP:
    resolved = resolve_weights(triangulation, weights)
    _, unreduced_quiver, _ = build_quivers(triangulation)
    terms = _triangle_terms(triangulation, resolved)
    for key, coef in _puncture_terms(triangulation, resolved).items():
        terms[key] = terms.get(key, Fraction(0)) + coef
    potential = Potential(unreduced_quiver, terms)
    unreduced = QP(unreduced_quiver, potential, tuple(resolved.items()))
    splitting = split(unreduced)
    return SurfaceQP(triangulation, unreduced, splitting.reduced, splitting)


def potential_of_ideal(triangulation: IdealTriangulation, weights: PunctureWeights | None = None) -> tuple[QP, QP]:
    """``(unreduced, reduced)`` QPs of an ideal triangulation."""
    built = surface_qp(triangulation, weights)
    return built.unreduced, built.reduced


def potential_of_tagged(tagged: TaggedTriangulation, weights: PunctureWeights | None = None) -> QP:
    """Reduced QP of a tagged triangulation via its normalized ideal base."""
    return surface_qp(tagged.normalized().base, weights).reduced


# right-equivalence search ---------------------------------------------------

MAX_BIJECTIONS = 720
MAX_CORRECTIONS = 60


def _bijections(source: Quiver, target: Quiver):
    groups_s: dict[tuple[str, str], list[str]] = {}
    groups_t: dict[tuple[str, str], list[str]] = {}
    for a in source.arrows:
        groups_s.setdefault((a.tail, a.head), []).append(a.id)
    for a in target.arrows:
        groups_t.setdefault((a.tail, a.head), []).append(a.id)
    if {k: len(v) for k, v in groups_s.items()} != {k: len(v) for k, v in groups_t.items()}:
        return
    keys = sorted(groups_s)
    choices = [list(permutations(groups_t[k])) for k in keys]
    count = 0
    for combo in product(*choices):
        count += 1
        if count > MAX_BIJECTIONS:
            return
        yield {a: b for k, perm in zip(keys, combo) for a, b in zip(groups_s[k], perm)}


def _scalings(renamed: Potential, target: Potential) -> dict[str, Fraction]:
    """Arrow rescalings matching coefficients on the common support."""
    scale: dict[str, Fraction] = {}
    equations = [
        (cycle, target.coefficient(cycle) / coef)
        for cycle, coef in renamed.items()
        if target.coefficient(cycle)
    ]
    arrows = {a for cycle, _ in equations for a in cycle}
    while True:
        progress = False
        for cycle, ratio in equations:
            unknown = [a for a in set(cycle) if a not in scale]
            if len(unknown) != 1 or cycle.count(unknown[0]) != 1:
                continue
            known = Fraction(1)
            for a in cycle:
                if a in scale:
                    known *= scale[a]
            scale[unknown[0]] = ratio / known
            progress = True
        if progress:
            continue
        free = sorted(arrows - set(scale))
        if not free:
            break
        scale[free[0]] = Fraction(1)
    return scale


def _lowest_discrepancy(current: Potential, target: Potential):
    diff = target - current
    if diff.is_zero():
        return None
    return min(diff.items(), key=lambda kv: (len(kv[0]), kv[0]))


def _corrections(current: Potential, word: tuple[str, ...], quiver: Quiver):
    """Substitutions ``a -> a + w`` turning a term of ``current`` into ``word``."""
    n = len(word)
    seen = set()
    for cycle, _ in current.items():
        m = len(cycle)
        if m >= n:
            continue
        span = n - m + 1
        for shift in range(n):
            rot = word[shift:] + word[:shift]
            for pos in range(m):
                if rot[:pos] != cycle[:pos] or rot[pos + span:] != cycle[pos + 1:]:
                    continue
                arrow, replacement = cycle[pos], rot[pos:pos + span]
                if (arrow, replacement) in seen:
                    continue
                seen.add((arrow, replacement))
                yield arrow, replacement


def _single(quiver: Quiver, arrow: str, path: tuple[str, ...], coef: Fraction) -> Substitution:
    image = AlgebraElement.arrow(quiver, arrow) + AlgebraElement.path(quiver, path).scale(coef)
    return Substitution(quiver, quiver, {arrow: image})


def search_right_equivalence(source: QP, target: QP, max_length: int = 12) -> Substitution | None:
    """Best-effort search for a right-equivalence ``source -> target``.

    Tries arrow bijections respecting endpoints, rescales arrows to match
    common terms, then greedily applies unitriangular corrections
    ``a -> a + c w`` to remove the lowest remaining discrepancy.
    """
    if set(source.quiver.vertices) != set(target.quiver.vertices):
        return None
    tq = target.quiver
    for bijection in _bijections(source.quiver, tq):
        rename = Substitution(
            source.quiver, tq, {a: AlgebraElement.arrow(tq, b) for a, b in bijection.items()}
        )
        renamed = rename.apply(source.potential)
        scale = _scalings(renamed, target.potential)
        scaler = Substitution(
            tq, tq, {a: AlgebraElement.arrow(tq, a).scale(c) for a, c in scale.items() if c != 1}
        )
        phi = scaler.compose(rename)
        current = phi.apply(source.potential)
        for _ in range(MAX_CORRECTIONS):
            worst = _lowest_discrepancy(current, target.potential)
            if worst is None:
                return phi
            word, delta = worst
            if len(word) > max_length:
                break
            applied = False
            for arrow, path in _corrections(current, word, tq):
                probe = _single(tq, arrow, path, Fraction(1)).apply(current)
                rate = probe.coefficient(word) - current.coefficient(word)
                if not rate:
                    continue
                step = _single(tq, arrow, path, delta / rate)
                candidate = step.apply(current)
                following = _lowest_discrepancy(candidate, target.potential)
                if following is None or (len(following[0]), following[0]) > (len(word), word):
                    phi = step.compose(phi)
                    current = candidate
                    applied = True
                    break
            if not applied:
                break
        if current == target.potential and verify_right_equivalence(phi, source, target):
            return phi
    return None


@dataclass
class FlipReport:
    arc: str
    quiver_ok: bool
    jacobian_ok: bool
    requiv: str
    stratum_change: bool
    source_jacobian: JacobianSummary | None = None
    target_jacobian: JacobianSummary | None = None
    mutation: MutationResult | None = field(default=None, repr=False)
    target_qp: QP | None = field(default=None, repr=False)
    equivalence: Substitution | None = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return self.quiver_ok and self.jacobian_ok

    def to_json(self) -> dict:
        data = {
            "arc": self.arc,
            "quiver_ok": self.quiver_ok,
            "jacobian_ok": self.jacobian_ok,
            "requiv": self.requiv,
            "stratum_change": self.stratum_change,
        }
        if self.source_jacobian is not None:
            data["mutated_jacobian"] = self.source_jacobian.to_json()
        if self.target_jacobian is not None:
            data["flipped_jacobian"] = self.target_jacobian.to_json()
        if self.equivalence is not None:
            data["equivalence"] = self.equivalence.to_text()
        return data


def _summaries_agree(left: JacobianSummary, right: JacobianSummary) -> bool:
    if left.dimension is None or right.dimension is None:
        return False
    return left.dimension == right.dimension and left.bigraded_dims == right.bigraded_dims


def _stratum(tagged: TaggedTriangulation) -> dict[str, int]:
    return tagged.normalized().eps


def verify_flip_mutation(
    tagged: TaggedTriangulation,
    arc: str,
    weights: PunctureWeights | None = None,
    *,
    max_degree: int | None = None,
    search: bool = True,
) -> FlipReport:
    """Compare the QP of the flipped triangulation with the mutated QP."""
    source = potential_of_tagged(tagged, weights)
    flipped = flip_tagged(tagged, arc)
    target = potential_of_tagged(flipped, weights)
    mutation = mutate_qp(source, arc)
    mutated = mutation.reduced

    _, _, matrix_before = build_quivers(tagged.normalized().base)
    _, _, matrix_after = build_quivers(flipped.normalized().base)
    quiver_ok = (
        matrix_of_quiver(mutated.quiver) == matrix_of_quiver(target.quiver)
        and matrix_before.mutate(arc) == matrix_after
    )
    mutated_summary = jacobian_dim(mutated, max_degree)
    flipped_summary = jacobian_dim(target, max_degree)
    jacobian_ok = _summaries_agree(mutated_summary, flipped_summary)

    equivalence = None
    if not search:
        requiv = "not_searched"
    else:
        equivalence = search_right_equivalence(target, mutated)
        requiv = "found" if equivalence is not None else "not_found"
    return FlipReport(
        arc,
        quiver_ok,
        jacobian_ok,
        requiv,
        _stratum(tagged) != _stratum(flipped),
        mutated_summary,
        flipped_summary,
        mutation,
        target,
        equivalence,
    )


__all__ = [
    "PunctureWeights",
    "SurfaceQP",
    "FlipReport",
    "resolve_weights",
    "puncture_cycle",
    "surface_qp",
    "potential_of_ideal",
    "potential_of_tagged",
    "search_right_equivalence",
    "verify_flip_mutation",
]
