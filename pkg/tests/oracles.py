"""Independent reference computations used to freeze expected values.

Nothing here calls into the rewriting, flipping or mutation code of the
package; the oracles work from raw arrow tables and words.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

Word = tuple[str, ...]


def paths_by_endpoints(arrows: dict[str, tuple[str, str]], vertices, max_length: int):
    """All ``(word, head, tail)`` of length ``0 .. max_length``.

    Words are in composition order: the tail of each letter is the head of the next.
    """
    layers = [[((), v, v) for v in vertices]]
    if max_length >= 1:
        layers.append([((arrow,), a_head, a_tail) for arrow, (a_tail, a_head) in arrows.items()])
    for _ in range(max_length - 1):
        nxt = []
        for word, head, tail in layers[-1]:
            for arrow, (a_tail, a_head) in arrows.items():
                if arrows[word[-1]][0] == a_head:
                    nxt.append((word + (arrow,), head, a_tail))
        layers.append(nxt)
    return [item for layer in layers for item in layer]


def cyclic_derivatives(cycles: dict[Word, Fraction]) -> dict[str, dict[Word, Fraction]]:
    out: dict[str, dict[Word, Fraction]] = {}
    for cycle, coef in cycles.items():
        for k, letter in enumerate(cycle):
            rest = cycle[k + 1:] + cycle[:k]
            bucket = out.setdefault(letter, {})
            bucket[rest] = bucket.get(rest, 0) + Fraction(coef)
    return {a: {w: c for w, c in d.items() if c} for a, d in out.items()}


def _rank(rows: list[dict]) -> int:
    pivots: dict = {}
    rank = 0
    for row in rows:
        row = dict(row)
        while row:
            lead = min(row)
            if lead not in pivots:
                scale = row[lead]
                pivots[lead] = {k: v / scale for k, v in row.items()}
                rank += 1
                break
            factor = row[lead]
            for k, v in pivots[lead].items():
                value = row.get(k, 0) - factor * v
                if value:
                    row[k] = value
                else:
                    row.pop(k, None)
    return rank


def truncated_jacobian(arrows, vertices, cycles, cutoff: int) -> dict[tuple[str, str], int]:
    """Dimensions of ``e_head (R<Q> / (J + m^cutoff)) e_tail`` by dense elimination."""
    derivatives = cyclic_derivatives(cycles)
    paths = paths_by_endpoints(arrows, vertices, cutoff - 1)
    by_block: dict[tuple[str, str], list[Word]] = {}
    for word, head, tail in paths:
        by_block.setdefault((head, tail), []).append(word)
    relations = []
    for arrow, rel in derivatives.items():
        if not rel:
            continue
        a_tail, a_head = arrows[arrow]
        # the derivative at a runs from head(a) to tail(a)
        relations.append((rel, a_tail, a_head, min(len(w) for w in rel)))
    rows: dict[tuple[str, str], list[dict]] = {}
    left_paths = [(w, h, t) for w, h, t in paths]
    for rel, rel_head, rel_tail, shortest in relations:
        for p_word, p_head, p_tail in left_paths:
            if p_tail != rel_head or len(p_word) + shortest >= cutoff:
                continue
            for q_word, q_head, q_tail in left_paths:
                if q_head != rel_tail or len(p_word) + shortest + len(q_word) >= cutoff:
                    continue
                row = {}
                for word, coef in rel.items():
                    total = p_word + word + q_word
                    if len(total) < cutoff:
                        row[total] = row.get(total, 0) + coef
                row = {k: v for k, v in row.items() if v}
                if row:
                    rows.setdefault((p_head, q_tail), []).append(row)
    dims = {}
    for block, words in by_block.items():
        dims[block] = len(words) - _rank(rows.get(block, []))
    return dims


def jacobian_oracle(arrows, vertices, cycles, start: int = 2, stop: int = 16):
    """Stable truncated dimension, or ``None`` if it keeps growing up to ``stop``."""
    previous = truncated_jacobian(arrows, vertices, cycles, start)
    for cutoff in range(start + 1, stop + 1):
        current = truncated_jacobian(arrows, vertices, cycles, cutoff)
        if current == previous:
            return current
        previous = current
    return None


def total(dims: dict) -> int:
    return sum(dims.values())


# polygon triangulations ----------------------------------------------------------------


def _crosses(d1: tuple[int, int], d2: tuple[int, int]) -> bool:
    a, b = d1
    c, d = d2
    if len({a, b, c, d}) < 4:
        return False
    return (a < c < b) != (a < d < b)


def polygon_triangulations(points: int) -> list[frozenset]:
    diagonals = [(i, j) for i, j in combinations(range(points), 2) if (j - i) % points not in (1, points - 1)]
    size = points - 3
    out = []
    for choice in combinations(diagonals, size):
        if all(not _crosses(x, y) for x, y in combinations(choice, 2)):
            out.append(frozenset(choice))
    return out


def polygon_flip_graph(points: int) -> tuple[int, int, set[int]]:
    """Node count, undirected edge count and the set of node degrees."""
    nodes = polygon_triangulations(points)
    edges = 0
    degrees = {}
    for i, j in combinations(range(len(nodes)), 2):
        if len(nodes[i] ^ nodes[j]) == 2:
            edges += 1
            degrees[i] = degrees.get(i, 0) + 1
            degrees[j] = degrees.get(j, 0) + 1
    return len(nodes), edges, set(degrees.values())


def polygon_adjacent_pairs(triangulation: frozenset, points: int) -> int:
    """Pairs of diagonals bounding a common triangle; each one contributes an arrow of Q."""
    edges = set(triangulation) | {tuple(sorted((k, (k + 1) % points))) for k in range(points)}
    count = 0
    for a, b, c in combinations(range(points), 3):
        sides = [(a, b), (b, c), (a, c)]
        if all(s in edges for s in sides):
            inner = [s for s in sides if s in triangulation]
            count += len(inner) * (len(inner) - 1) // 2
    return count
