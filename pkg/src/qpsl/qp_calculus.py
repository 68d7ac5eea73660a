"""Quivers with potential: premutation, reduction and mutation.

Reduction follows a constructive splitting procedure.  The degree-two part of
the potential must consist of 2-cycles ``x_k a_k b_k`` on pairwise distinct
arrows.  Each round writes the rest of the potential as

    sum_k (a_k u_k + v_k b_k) + S'

with ``u_k`` free of every ``b`` arrow and ``v_k`` free of every ``a`` and ``b``
arrow, then substitutes ``a_k -> a_k - v_k / x_k`` and
``b_k -> b_k - u_k / x_k``.  The number of ``a`` arrows in the ``u`` parts drops
every round, so the procedure stops with a polynomial witness whose inverse
is polynomial too.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import NonTrivialDegree2, NormalFormViolation, RotationImpossible
from .path_algebra import (
    AlgebraElement,
    Idempotent,
    Potential,
    Substitution,
    format_coefficient,
    format_element,
    parse_potential,
)
from .quiver import Arrow, Quiver, composite_id, premutate_quiver, reversed_id

MAX_SPLIT_ROUNDS = 200


def _weights_tuple(weights) -> tuple[tuple[str, Fraction], ...]:
    items = weights.items() if isinstance(weights, Mapping) else (weights or ())
    return tuple(sorted((str(p), Fraction(x)) for p, x in items))


@dataclass(frozen=True)
class QP:
    """A quiver with a (canonical, finite) potential and puncture weights."""

    quiver: Quiver
    potential: Potential
    weights: tuple[tuple[str, Fraction], ...] = field(default=())

    def __post_init__(self) -> None:
        potential = self.potential
        if not isinstance(potential, Potential):
            potential = Potential(potential.quiver, potential.terms)
        if potential.quiver != self.quiver:
            raise ValueError("potential does not live on this quiver")
        object.__setattr__(self, "potential", potential)
        object.__setattr__(self, "weights", _weights_tuple(self.weights))

    @property
    def weight_map(self) -> dict[str, Fraction]:
        return dict(self.weights)

    def is_reduced(self) -> bool:
        return self.potential.degree_part(2).is_zero()

    def to_json(self) -> dict:
        return {
            "quiver": self.quiver.to_json(),
            "potential": format_element(self.potential),
            "weights": {p: format_coefficient(x) for p, x in self.weights},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "QP":
        quiver = Quiver.from_json(data["quiver"])
        potential = parse_potential(quiver, data.get("potential", "0"))
        weights = {p: Fraction(str(x)) for p, x in (data.get("weights") or {}).items()}
        return cls(quiver, potential, tuple(weights.items()))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def _rotate_off_vertex(quiver: Quiver, cycle: tuple[str, ...], vertex: str) -> tuple[str, ...]:
    """Least rotation whose base point (head of the first arrow) is not ``vertex``."""
    valid = []
    for k in range(len(cycle)):
        rot = cycle[k:] + cycle[:k]
        if quiver.arrow(rot[0]).head != vertex:
            valid.append(rot)
    if not valid:
        raise RotationImpossible(f"cycle {'.'.join(cycle)} only passes through {vertex}")
    return min(valid)


def premutate(qp: QP, vertex: str) -> QP:
    """Premutation: reverse arrows at ``vertex`` and add composite arrows.

    The new potential is ``[S] + sum b* a* [ab]`` where ``[S]`` replaces every
    hook through ``vertex`` by the corresponding composite arrow.
    """
    quiver = qp.quiver
    new_quiver, hooks = premutate_quiver(quiver, vertex)
    terms: dict = {}
    for cycle, coef in qp.potential.items():
        rot = _rotate_off_vertex(quiver, cycle, vertex)
        out: list[str] = []
        pos = 0
        while pos < len(rot):
            arrow = quiver.arrow(rot[pos])
            if arrow.tail == vertex:
                # rot[pos] leaves the vertex, rot[pos + 1] enters it
                out.append(composite_id(rot[pos], rot[pos + 1]))
                pos += 2
            else:
                out.append(rot[pos])
                pos += 1
        key = tuple(out)
        terms[key] = terms.get(key, Fraction(0)) + coef
    for outer, inner in hooks:
        key = (reversed_id(inner.id), reversed_id(outer.id), composite_id(outer.id, inner.id))
        terms[key] = terms.get(key, Fraction(0)) + 1
    return QP(new_quiver, Potential(new_quiver, terms), qp.weights)


@dataclass(frozen=True)
class TrivialPair:
    """A degree-two term ``coefficient * a.b`` of the potential."""

    a: str
    b: str
    coefficient: Fraction


@dataclass(frozen=True)
class SplitResult:
    """Reduced and trivial parts together with the right-equivalence used.

    ``witness`` maps the input potential to ``reduced + trivial`` (up to
    cyclic equivalence); ``witness_inverse`` is its two-sided inverse.
    """

    reduced: QP
    trivial: QP
    witness: Substitution
    witness_inverse: Substitution
    source: QP
    pairs: tuple[TrivialPair, ...] = ()
    rounds: int = 0

    def to_json(self) -> dict:
        return {
            "reduced": self.reduced.to_json(),
            "trivial": self.trivial.to_json(),
            "witness": self.witness.to_text(),
            "witness_inverse": self.witness_inverse.to_text(),
        }


def _degree_two_pairs(potential: Potential) -> list[tuple[tuple[str, str], Fraction]]:
    quiver = potential.quiver
    pairs = []
    used: dict[str, tuple[str, str]] = {}
    for cycle, coef in potential.degree_part(2).items():
        for arrow_id in cycle:
            if arrow_id in used:
                raise NonTrivialDegree2(
                    f"arrow {arrow_id} occurs in the 2-cycles {'.'.join(used[arrow_id])} and {'.'.join(cycle)}"
                )
            used[arrow_id] = cycle
        if quiver.arrow(cycle[0]).tail == quiver.arrow(cycle[0]).head:
            raise NonTrivialDegree2("loops cannot form trivial pairs")
        pairs.append((cycle, coef))
    return pairs


def _orient_pairs(potential: Potential, pairs) -> list[TrivialPair]:
    """Decide which arrow of each pair plays the role of ``a``.

    An arrow sharing a term with another pair arrow must be an ``a``; among
    free choices the composite (bracketed) arrow is preferred as ``b``.
    """
    pair_arrows = {x for cycle, _ in pairs for x in cycle}
    pair_cycles = {cycle for cycle, _ in pairs}
    forced: set[str] = set()
    for cycle, _ in potential.items():
        if cycle in pair_cycles:
            continue
        hits = [x for x in cycle if x in pair_arrows]
        if len(hits) >= 2:
            forced.update(hits)
    oriented = []
    for (x, y), coef in pairs:
        if x in forced and y in forced:
            raise NormalFormViolation(f"both {x} and {y} share terms with other trivial arrows")
        if y in forced:
            a, b = y, x
        elif x in forced:
            a, b = x, y
        elif x.startswith("[") and not y.startswith("["):
            a, b = y, x
        else:
            a, b = x, y
        oriented.append(TrivialPair(a, b, Fraction(coef)))
    return oriented


def _least_rotation_starting_in(cycle: tuple[str, ...], arrows: set[str]) -> tuple[str, ...]:
    return min(cycle[k:] + cycle[:k] for k in range(len(cycle)) if cycle[k] in arrows)


def _round_decomposition(potential: Potential, pairs: list[TrivialPair]):
    """Split ``potential`` into pair terms, ``u_k``, ``v_k`` and the remainder."""
    quiver = potential.quiver
    a_arrows = {p.a for p in pairs}
    b_arrows = {p.b for p in pairs}
    index_a = {p.a: k for k, p in enumerate(pairs)}
    index_b = {p.b: k for k, p in enumerate(pairs)}
    pair_keys = {min((p.a, p.b), (p.b, p.a)) for p in pairs}
    u_terms: list[dict] = [{} for _ in pairs]
    v_terms: list[dict] = [{} for _ in pairs]
    rest: dict = {}
    for cycle, coef in potential.items():
        if cycle in pair_keys:
            continue
        has_a = [x for x in cycle if x in a_arrows]
        has_b = [x for x in cycle if x in b_arrows]
        if not has_a and not has_b:
            rest[cycle] = coef
        elif has_b:
            if len(has_b) > 1 or has_a:
                raise NormalFormViolation(
                    f"term {'.'.join(cycle)} mixes a trivial arrow {has_b[0]} with other trivial arrows"
                )
            b = has_b[0]
            k = cycle.index(b)
            rot = cycle[k + 1:] + cycle[: k + 1]
            v = rot[:-1]
            v_terms[index_b[b]][v] = v_terms[index_b[b]].get(v, Fraction(0)) + coef
        else:
            rot = _least_rotation_starting_in(cycle, a_arrows)
            u = rot[1:]
            u_terms[index_a[rot[0]]][u] = u_terms[index_a[rot[0]]].get(u, Fraction(0)) + coef
    us = [AlgebraElement(quiver, t, check=False) for t in u_terms]
    vs = [AlgebraElement(quiver, t, check=False) for t in v_terms]
    return us, vs, Potential(quiver, rest, check=False)


def _round_inverse(quiver: Quiver, phi: Substitution, pairs: list[TrivialPair], us, vs) -> Substitution:
    images: dict[str, AlgebraElement] = {}
    for pair, u, v in zip(pairs, us, vs):
        inv_x = 1 / pair.coefficient
        images[pair.a] = AlgebraElement.arrow(quiver, pair.a) + v.scale(inv_x)
        correction = AlgebraElement.zero(quiver)
        term = u.scale(inv_x)
        sign = 1
        steps = 0
        while not term.is_zero():
            correction = correction + term.scale(sign)
            term = phi.apply(term) - term
            sign = -sign
            steps += 1
            if steps > MAX_SPLIT_ROUNDS:
                raise NormalFormViolation("inverse series does not terminate")
        images[pair.b] = AlgebraElement.arrow(quiver, pair.b) + correction
    return Substitution(quiver, quiver, images)


def split(qp: QP) -> SplitResult:
    """Separate a QP into its reduced and trivial parts."""
    quiver = qp.quiver
    potential = qp.potential
    identity = Substitution.identity(quiver)
    raw_pairs = _degree_two_pairs(potential)
    if not raw_pairs:
        empty = QP(Quiver(quiver.vertices), Potential(Quiver(quiver.vertices)), qp.weights)
        return SplitResult(qp, empty, identity, identity, qp)
    pairs = _orient_pairs(potential, raw_pairs)
    witness = identity
    inverse = identity
    current = potential
    rounds = 0
    while True:
        us, vs, rest = _round_decomposition(current, pairs)
        if all(u.is_zero() for u in us) and all(v.is_zero() for v in vs):
            break
        rounds += 1
        if rounds > MAX_SPLIT_ROUNDS:
            raise NormalFormViolation("splitting did not terminate")
        images = {}
        for pair, u, v in zip(pairs, us, vs):
            inv_x = 1 / pair.coefficient
            images[pair.a] = AlgebraElement.arrow(quiver, pair.a) - v.scale(inv_x)
            images[pair.b] = AlgebraElement.arrow(quiver, pair.b) - u.scale(inv_x)
        phi = Substitution(quiver, quiver, images)
        phi_inverse = _round_inverse(quiver, phi, pairs, us, vs)
        current = phi.apply(current)
        witness = phi.compose(witness)
        inverse = inverse.compose(phi_inverse)

    trivial_ids = {x for p in pairs for x in (p.a, p.b)}
    reduced_quiver = quiver.without_arrows(trivial_ids)
    reduced_terms = {c: x for c, x in rest.items()}
    reduced_potential = Potential(reduced_quiver, reduced_terms)
    trivial_quiver = Quiver(quiver.vertices, tuple(quiver.arrow(x) for x in sorted(trivial_ids)))
    trivial_potential = Potential(trivial_quiver, {(p.a, p.b): p.coefficient for p in pairs})

    # exact check: witness(S) equals reduced + trivial up to rotation
    combined = Potential(quiver, list(reduced_terms.items()) + [((p.a, p.b), p.coefficient) for p in pairs])
    if witness.apply(potential) != combined:
        raise NormalFormViolation("splitting witness does not produce the split potential")
    return SplitResult(
        QP(reduced_quiver, reduced_potential, qp.weights),
        QP(trivial_quiver, trivial_potential, qp.weights),
        witness,
        inverse,
        qp,
        tuple(pairs),
        rounds,
    )


def reduced_part(qp: QP) -> QP:
    return split(qp).reduced


@dataclass(frozen=True)
class MutationResult:
    """QP mutation at a vertex, keeping the premutation and its splitting."""

    vertex: str
    premutation: QP
    splitting: SplitResult

    @property
    def reduced(self) -> QP:
        return self.splitting.reduced

    @property
    def trivial(self) -> QP:
        return self.splitting.trivial

    @property
    def witness(self) -> Substitution:
        return self.splitting.witness

    @property
    def witness_inverse(self) -> Substitution:
        return self.splitting.witness_inverse

    def to_json(self) -> dict:
        data = self.splitting.to_json()
        data["vertex"] = self.vertex
        data["premutation"] = self.premutation.to_json()
        return data


def mutate_qp(qp: QP, vertex: str) -> MutationResult:
    premutation = premutate(qp, vertex)
    return MutationResult(vertex, premutation, split(premutation))


def verify_right_equivalence(phi: Substitution, source: QP, target: QP) -> bool:
    """``phi`` is an algebra isomorphism taking one potential to the other."""
    if phi.source != source.quiver or phi.target != target.quiver:
        return False
    if not phi.is_iso():
        return False
    return phi.apply(source.potential) == target.potential


__all__ = [
    "QP",
    "TrivialPair",
    "SplitResult",
    "MutationResult",
    "premutate",
    "split",
    "reduced_part",
    "mutate_qp",
    "verify_right_equivalence",
]
