"""Rewriting and Groebner bases for Jacobian ideals in the path algebra.

Words are tuples of arrow indices (positions in the global arrow order) and
are compared degree-lexicographically.  A rule ``L -> tail`` states that the
leading word ``L`` is congruent to a combination of smaller words.

Completion is two-sided Buchberger on overlaps, processed in order of overlap
length and truncated at ``max_degree``.  When every overlap between the
surviving rules has been resolved, the diamond lemma makes the system
confluent and the irreducible paths form an exact basis of the quotient.
"""

from __future__ import annotations

import heapq
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BudgetExceeded
from .path_algebra import AlgebraElement, Idempotent, jacobian_relations
from .quiver import Quiver

Word = tuple  # tuple[int, ...], never empty
Poly = dict  # dict[Word, Fraction]

DEFAULT_MAX_DEGREE = 40
DEFAULT_MAX_RULES = 20000
DEFAULT_MAX_OVERLAPS = 500000
DEFAULT_MAX_BASIS = 200000


def default_max_degree() -> int:
    value = os.environ.get("QPSL_MAX_DEGREE")
    return int(value) if value else DEFAULT_MAX_DEGREE


def _order_key(word: Word) -> tuple:
    return (len(word), word)


def _leading(poly: Poly) -> Word:
    return max(poly, key=_order_key)


class RewriteSystem:
    """A set of monic rewrite rules on the paths of a fixed quiver."""

    def __init__(self, quiver: Quiver, max_degree: int):
        self.quiver = quiver
        self.max_degree = max_degree
        self.arrow_ids = [a.id for a in quiver.arrows]
        self.index = {a: k for k, a in enumerate(self.arrow_ids)}
        self.heads = [quiver.arrow(a).head for a in self.arrow_ids]
        self.tails = [quiver.arrow(a).tail for a in self.arrow_ids]
        self.rules: dict[Word, Poly] = {}
        self.rule_lengths: dict[int, int] = {}
        self.complete = True
        self._cache: dict[Word, Poly] = {}

    # conversions ---------------------------------------------------------
    def to_poly(self, element: AlgebraElement) -> Poly:
        out: Poly = {}
        for key, coef in element.items():
            if isinstance(key, Idempotent):
                raise ValueError("relations with length-zero terms are not supported")
            out[tuple(self.index[x] for x in key)] = coef
        return out

    def to_element(self, poly: Poly) -> AlgebraElement:
        return AlgebraElement(
            self.quiver,
            {tuple(self.arrow_ids[i] for i in w): c for w, c in poly.items()},
            check=False,
        )

    def word_ids(self, word: Word) -> tuple[str, ...]:
        return tuple(self.arrow_ids[i] for i in word)

    # rules ------------------------------------------------------------------
    def _set_rule(self, lead: Word, tail: Poly) -> None:
        self.rules[lead] = tail
        self.rule_lengths[len(lead)] = self.rule_lengths.get(len(lead), 0) + 1
        self._cache.clear()

    def _drop_rule(self, lead: Word) -> Poly:
        tail = self.rules.pop(lead)
        n = len(lead)
        self.rule_lengths[n] -= 1
        if not self.rule_lengths[n]:
            del self.rule_lengths[n]
        self._cache.clear()
        return tail

    def find_reducer(self, word: Word) -> tuple[int, Word] | None:
        rules = self.rules
        n = len(word)
        for length in self.rule_lengths:
            if length > n:
                continue
            for start in range(n - length + 1):
                piece = word[start:start + length]
                if piece in rules:
                    return start, piece
        return None

    def is_reducible(self, word: Word) -> bool:
        return self.find_reducer(word) is not None

    def _reduce_word(self, word: Word) -> Poly:
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        hit = self.find_reducer(word)
        if hit is None:
            result = {word: Fraction(1)}
        else:
            start, lead = hit
            prefix, suffix = word[:start], word[start + len(lead):]
            expanded: Poly = {}
            for w, c in self.rules[lead].items():
                key = prefix + w + suffix
                expanded[key] = expanded.get(key, Fraction(0)) + c
            result = self.normal_form(expanded)
        self._cache[word] = result
        return result

    def normal_form(self, poly: Poly) -> Poly:
        """Fully reduced form; linear in ``poly``."""
        work: Poly = {w: c for w, c in poly.items() if c}
        out: Poly = {}
        heap = [(-len(w), tuple(-x for x in w), w) for w in work]
        heapq.heapify(heap)
        while heap:
            _, _, word = heapq.heappop(heap)
            coef = work.pop(word, None)
            if not coef:
                continue
            cached = self._cache.get(word)
            if cached is not None:
                for w, c in cached.items():
                    out[w] = out.get(w, Fraction(0)) + coef * c
                continue
            hit = self.find_reducer(word)
            if hit is None:
                out[word] = out.get(word, Fraction(0)) + coef
                continue
            start, lead = hit
            prefix, suffix = word[:start], word[start + len(lead):]
            for w, c in self.rules[lead].items():
                key = prefix + w + suffix
                if key in work:
                    work[key] += coef * c
                else:
                    work[key] = coef * c
                    heapq.heappush(heap, (-len(key), tuple(-x for x in key), key))
        return {w: c for w, c in out.items() if c}

    def reduce_element(self, element: AlgebraElement) -> AlgebraElement:
        return self.to_element(self.normal_form(self.to_poly(element)))

    # standard words -------------------------------------------------------------
    def _prefix_reducible(self, word: Word) -> bool:
        rules = self.rules
        return any(length <= len(word) and word[:length] in rules for length in self.rule_lengths)

    def standard_words(self, max_length: int, limit: int = DEFAULT_MAX_BASIS) -> tuple[dict[int, list], bool]:
        """Irreducible paths by length, up to ``max_length``.

        Returns the words grouped by length plus a flag telling whether some
        irreducible path of length ``max_length`` exists (the set may be
        infinite).  Idempotents are listed under length 0 as vertex labels.
        """
        by_length: dict[int, list] = {0: list(self.quiver.vertices)}
        out_of_head: dict[str, list[int]] = {}
        for k in range(len(self.arrow_ids)):
            # prepending arrow k to a word w requires tail(k) == head(w)
            out_of_head.setdefault(self.tails[k], []).append(k)
        layer: list[Word] = []
        for v in self.quiver.vertices:
            for k in out_of_head.get(v, []):
                w = (k,)
                if not self._prefix_reducible(w):
                    layer.append(w)
        total = len(by_length[0])
        length = 1
        while layer:
            by_length[length] = layer
            total += len(layer)
            if total > limit:
                raise BudgetExceeded(f"more than {limit} irreducible paths")
            if length >= max_length:
                return by_length, True
            nxt = []
            for w in layer:
                head = self.heads[w[0]]
                for k in out_of_head.get(head, []):
                    cand = (k,) + w
                    if not self._prefix_reducible(cand):
                        nxt.append(cand)
            layer = nxt
            length += 1
        return by_length, False


@dataclass(order=True)
class _Overlap:
    length: int
    serial: int
    left: Word = field(compare=False)
    right: Word = field(compare=False)
    shift: int = field(compare=False)


class _Completion:
    def __init__(
        self,
        system: RewriteSystem,
        max_rules: int = DEFAULT_MAX_RULES,
        max_overlaps: int = DEFAULT_MAX_OVERLAPS,
    ):
        self.system = system
        self.max_rules = max_rules
        self.max_overlaps = max_overlaps
        self.heap: list[_Overlap] = []
        self.serial = 0
        self.dropped: list[tuple[Word, Word]] = []
        self.processed = 0

    def add(self, poly: Poly) -> None:
        system = self.system
        pending = [poly]
        while pending:
            nf = system.normal_form(pending.pop())
            if not nf:
                continue
            lead = _leading(nf)
            scale = nf[lead]
            tail = {w: -c / scale for w, c in nf.items() if w != lead}
            # rules whose leading word contains the new one become redundant
            for old in [L for L in system.rules if len(L) >= len(lead) and _contains(L, lead)]:
                old_tail = system._drop_rule(old)
                requeue = {w: -c for w, c in old_tail.items()}
                requeue[old] = requeue.get(old, Fraction(0)) + 1
                pending.append(requeue)
            system._set_rule(lead, tail)
            if len(system.rules) > self.max_rules:
                raise BudgetExceeded(f"more than {self.max_rules} rewrite rules")
            self._queue_overlaps(lead)

    def _queue_overlaps(self, lead: Word) -> None:
        limit = self.system.max_degree
        for other in list(self.system.rules):
            for left, right in ((lead, other), (other, lead)) if other != lead else ((lead, lead),):
                for shift in range(1, len(left)):
                    overlap = len(left) - shift
                    if overlap >= len(right):
                        continue
                    if left[shift:] != right[:overlap]:
                        continue
                    total = shift + len(right)
                    if total > limit:
                        self.dropped.append((left, right))
                        continue
                    self.serial += 1
                    heapq.heappush(self.heap, _Overlap(total, self.serial, left, right, shift))

    def run(self) -> None:
        system = self.system
        while self.heap:
            item = heapq.heappop(self.heap)
            left, right = item.left, item.right
            if left not in system.rules or right not in system.rules:
                continue
            self.processed += 1
            if self.processed > self.max_overlaps:
                raise BudgetExceeded(f"more than {self.max_overlaps} overlaps")
            prefix = left[: item.shift]
            suffix = right[len(left) - item.shift:]
            spoly: Poly = {}
            for w, c in system.rules[right].items():
                key = prefix + w
                spoly[key] = spoly.get(key, Fraction(0)) + c
            for w, c in system.rules[left].items():
                key = w + suffix
                spoly[key] = spoly.get(key, Fraction(0)) - c
            self.add(spoly)
        system.complete = not any(l in system.rules and r in system.rules for l, r in self.dropped)


def _contains(word: Word, piece: Word) -> bool:
    n = len(piece)
    return any(word[i:i + n] == piece for i in range(len(word) - n + 1))


def groebner(
    quiver: Quiver,
    relations: Iterable[AlgebraElement],
    max_degree: int | None = None,
    *,
    max_rules: int = DEFAULT_MAX_RULES,
    max_overlaps: int = DEFAULT_MAX_OVERLAPS,
) -> RewriteSystem:
    """Truncated two-sided completion of ``relations``.

    ``system.complete`` is true when no overlap between surviving rules was
    skipped, in which case the system is confluent.
    """
    max_degree = default_max_degree() if max_degree is None else max_degree
    if max_degree < 2:
        raise ValueError("max_degree must be at least 2")
    system = RewriteSystem(quiver, max_degree)
    completion = _Completion(system, max_rules, max_overlaps)
    for rel in relations:
        completion.add(system.to_poly(rel))
    completion.run()
    return system


@dataclass
class JacobianSummary:
    """Dimension data of ``R<Q> / J0(S)``.

    ``bigraded_dims[i][j]`` counts irreducible paths from vertex ``j`` to
    vertex ``i`` (the dimension of ``e_i P e_j``).
    """

    vertices: tuple[str, ...]
    dimension: int | None
    nilpotency_index: int | None
    standard_paths: list = field(default_factory=list)
    bigraded_dims: list[list[int]] | None = None
    status: str = "undetermined"
    reason: str = ""

    @property
    def finite(self) -> bool:
        return self.dimension is not None

    def bigraded_multiset(self) -> list[int]:
        if self.bigraded_dims is None:
            return []
        return sorted(x for row in self.bigraded_dims for x in row)

    def to_json(self, verbose: bool = False) -> dict:
        data = {
            "dimension": self.dimension if self.dimension is not None else "undetermined",
            "nilpotency_index": self.nilpotency_index,
            "bigraded_dims": self.bigraded_dims,
            "status": self.status,
        }
        if self.reason:
            data["reason"] = self.reason
        if verbose:
            data["vertices"] = list(self.vertices)
            data["standard_paths"] = [
                f"e({p.vertex})" if isinstance(p, Idempotent) else ".".join(p) for p in self.standard_paths
            ]
        return data


def _span_step(system: RewriteSystem, basis: list[Poly], limit: int) -> list[Poly]:
    """Row-reduced basis of the span of ``NF(a . v)`` over arrows ``a``."""
    system_heads = system.heads
    candidates: list[Poly] = []
    n_arrows = len(system.arrow_ids)
    for vec in basis:
        for k in range(n_arrows):
            prod: Poly = {}
            for w, c in vec.items():
                if isinstance(w, str):
                    if system.tails[k] == w:
                        prod[(k,)] = prod.get((k,), Fraction(0)) + c
                elif system.tails[k] == system_heads[w[0]]:
                    key = (k,) + w
                    prod[key] = prod.get(key, Fraction(0)) + c
            if prod:
                nf = system.normal_form(prod)
                if nf:
                    candidates.append(nf)
    return _echelon(candidates, limit)


def _echelon(vectors: list[Poly], limit: int) -> list[Poly]:
    pivots: dict[Word, Poly] = {}
    for vec in vectors:
        vec = dict(vec)
        while vec:
            lead = _leading(vec)
            if lead in pivots:
                factor = vec[lead]
                for w, c in pivots[lead].items():
                    vec[w] = vec.get(w, Fraction(0)) - factor * c
                    if not vec[w]:
                        del vec[w]
                continue
            scale = vec[lead]
            pivots[lead] = {w: c / scale for w, c in vec.items()}
            if len(pivots) > limit:
                raise BudgetExceeded(f"span of dimension above {limit}")
            break
    return list(pivots.values())


def nilpotency_certificate(system: RewriteSystem, max_length: int, limit: int = DEFAULT_MAX_BASIS) -> int | None:
    """Least ``k <= max_length`` for which every length-``k`` path reduces to 0.

    Sound for any set of rules lying in the ideal: the spans track normal
    forms of ``a . v`` and vanish only if all length-``k`` paths lie in it.
    """
    basis: list[Poly] = [{v: Fraction(1)} for v in system.quiver.vertices]
    for k in range(1, max_length + 1):
        basis = _span_step(system, basis, limit)
        if not basis:
            return k
    return None


def _all_paths(quiver: Quiver, system: RewriteSystem, length: int) -> list[Word]:
    out_of_head: dict[str, list[int]] = {}
    for k in range(len(system.arrow_ids)):
        out_of_head.setdefault(system.tails[k], []).append(k)
    layer: list[Word] = [(k,) for k in range(len(system.arrow_ids))]
    for _ in range(length - 1):
        layer = [(k,) + w for w in layer for k in out_of_head.get(system.heads[w[0]], [])]
    return layer


def _summary_from_complete(system: RewriteSystem, max_degree: int) -> JacobianSummary:
    quiver = system.quiver
    words, unbounded = system.standard_words(max_degree)
    if unbounded:
        return JacobianSummary(
            quiver.vertices,
            None,
            None,
            status="undetermined",
            reason=f"irreducible paths of length {max_degree} remain",
        )
    index = quiver.vertex_index
    n = len(quiver.vertices)
    dims = [[0] * n for _ in range(n)]
    paths: list = []
    for v in words[0]:
        dims[index[v]][index[v]] += 1
        paths.append(Idempotent(v))
    for length in sorted(words):
        if length == 0:
            continue
        for w in words[length]:
            head = system.heads[w[0]]
            tail = system.tails[w[-1]]
            dims[index[head]][index[tail]] += 1
            paths.append(system.word_ids(w))
    nil = nilpotency_certificate(system, max_degree)
    summary = JacobianSummary(quiver.vertices, len(paths), nil, paths, dims)
    if nil is None:
        summary.status = "undetermined"
        summary.reason = "finite quotient but paths of every length up to the bound survive"
    else:
        summary.status = "holds"
    return summary


def jacobian_dim_of_relations(
    quiver: Quiver,
    relations: Sequence[AlgebraElement],
    max_degree: int | None = None,
) -> tuple[JacobianSummary, RewriteSystem | None]:
    max_degree = default_max_degree() if max_degree is None else max_degree
    try:
        system = groebner(quiver, relations, max_degree)
        if system.complete:
            return _summary_from_complete(system, max_degree), system
        k = nilpotency_certificate(system, max_degree)
        if k is None:
            return (
                JacobianSummary(quiver.vertices, None, None, reason="completion truncated, no nilpotency certificate"),
                system,
            )
        truncated = list(relations) + [
            AlgebraElement.path(quiver, system.word_ids(w)) for w in _all_paths(quiver, system, k)
        ]
        exact = groebner(quiver, truncated, max(2 * k, 2))
        if not exact.complete:
            return JacobianSummary(quiver.vertices, None, None, reason="truncated completion incomplete"), exact
        return _summary_from_complete(exact, max_degree), exact
    except BudgetExceeded as exc:
        return JacobianSummary(quiver.vertices, None, None, reason=f"budget exceeded: {exc}"), None


def jacobian_dim(qp, max_degree: int | None = None) -> JacobianSummary:
    """Jacobian-algebra summary of a QP (``qp.quiver``, ``qp.potential``)."""
    relations = [r for r in jacobian_relations(qp.potential).values() if not r.is_zero()]
    summary, _ = jacobian_dim_of_relations(qp.quiver, relations, max_degree)
    return summary


def jacobian_system(qp, max_degree: int | None = None) -> RewriteSystem:
    relations = [r for r in jacobian_relations(qp.potential).values() if not r.is_zero()]
    return groebner(qp.quiver, relations, max_degree)


@dataclass
class AdmissibilityReport:
    finite_potential: bool
    finite_dimensional: bool
    nilpotent: bool
    two_acyclic: bool
    summary: JacobianSummary

    @property
    def status(self) -> str:
        return "holds" if (self.finite_potential and self.finite_dimensional and self.nilpotent) else "undetermined"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "finite_potential": self.finite_potential,
            "finite_dimensional": self.finite_dimensional,
            "nilpotent": self.nilpotent,
            "non_degeneracy": "2-acyclic" if self.two_acyclic else "has 2-cycles",
            "jacobian": self.summary.to_json(),
        }


def check_admissibility(qp, max_degree: int | None = None) -> AdmissibilityReport:
    """Finite potential, finite-dimensional quotient, and a power of the arrow ideal inside J0.

    The last two together mean the incomplete quotient already equals the
    completed Jacobian algebra.
    """
    summary = jacobian_dim(qp, max_degree)
    return AdmissibilityReport(
        finite_potential=True,
        finite_dimensional=summary.dimension is not None,
        nilpotent=summary.nilpotency_index is not None,
        two_acyclic=qp.quiver.is_two_acyclic(),
        summary=summary,
    )


__all__ = [
    "RewriteSystem",
    "JacobianSummary",
    "AdmissibilityReport",
    "groebner",
    "jacobian_dim",
    "jacobian_dim_of_relations",
    "jacobian_system",
    "nilpotency_certificate",
    "check_admissibility",
    "default_max_degree",
    "DEFAULT_MAX_DEGREE",
]
