"""Quivers with named arrows, exchange matrices and quiver mutation.

Also builds the quivers attached to an ideal triangulation: the unreduced
quiver with one arrow per triangle corner, its 2-cycle-free quotient, and the
signed adjacency matrix.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

from .errors import TwoCycleAtVertex

if TYPE_CHECKING:  # pragma: no cover
    from .surface import IdealTriangulation

_FORBIDDEN_ID = re.compile(r"[\s.()]")


def _check_arrow_id(arrow_id: str) -> None:
    if not arrow_id or _FORBIDDEN_ID.search(arrow_id) or arrow_id[0] in "+-" or arrow_id == "*":
        raise ValueError(f"invalid arrow id {arrow_id!r}")


def _check_vertex(label: str) -> None:
    if not label or _FORBIDDEN_ID.search(label):
        raise ValueError(f"invalid vertex label {label!r}")


@dataclass(frozen=True, order=True)
class Arrow:
    id: str
    tail: str
    head: str

    def __post_init__(self) -> None:
        _check_arrow_id(self.id)


@dataclass(frozen=True)
class Quiver:
    """A finite loop-free quiver.

    ``vertices`` keep their given order (it fixes matrix indexing); ``arrows``
    are stored sorted by id, which is the global arrow order used for
    canonical rotations and Groebner orders.
    """

    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self) -> None:
        vertices = tuple(self.vertices)
        arrows = tuple(sorted(self.arrows, key=lambda a: a.id))
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "arrows", arrows)
        if len(set(vertices)) != len(vertices):
            raise ValueError("duplicate vertex labels")
        for v in vertices:
            _check_vertex(v)
        known = set(vertices)
        seen: set[str] = set()
        for arrow in arrows:
            if arrow.id in seen:
                raise ValueError(f"duplicate arrow id {arrow.id!r}")
            seen.add(arrow.id)
            if arrow.tail not in known or arrow.head not in known:
                raise ValueError(f"arrow {arrow.id!r} has an unknown endpoint")
            if arrow.tail == arrow.head:
                raise ValueError(f"arrow {arrow.id!r} is a loop")

    # lookups ------------------------------------------------------------
    @cached_property
    def _by_id(self) -> dict[str, Arrow]:
        return {a.id: a for a in self.arrows}

    @cached_property
    def arrow_order(self) -> dict[str, int]:
        """Position of each arrow id in the global order."""
        return {a.id: k for k, a in enumerate(self.arrows)}

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: k for k, v in enumerate(self.vertices)}

    def arrow(self, arrow_id: str) -> Arrow:
        try:
            return self._by_id[arrow_id]
        except KeyError:
            raise KeyError(f"no arrow {arrow_id!r}") from None

    def has_arrow(self, arrow_id: str) -> bool:
        return arrow_id in self._by_id

    def arrows_from(self, vertex: str) -> list[Arrow]:
        return [a for a in self.arrows if a.tail == vertex]

    def arrows_to(self, vertex: str) -> list[Arrow]:
        return [a for a in self.arrows if a.head == vertex]

    def arrows_between(self, tail: str, head: str) -> list[Arrow]:
        return [a for a in self.arrows if a.tail == tail and a.head == head]

    def has_two_cycle_at(self, vertex: str) -> bool:
        outgoing = {a.head for a in self.arrows_from(vertex)}
        return any(a.tail in outgoing for a in self.arrows_to(vertex))

    def is_two_acyclic(self) -> bool:
        pairs = {(a.tail, a.head) for a in self.arrows}
        return not any((h, t) in pairs for t, h in pairs)

    # derived quivers -------------------------------------------------------
    def without_arrows(self, arrow_ids: Iterable[str]) -> "Quiver":
        drop = set(arrow_ids)
        return Quiver(self.vertices, tuple(a for a in self.arrows if a.id not in drop))

    def with_arrows(self, extra: Iterable[Arrow]) -> "Quiver":
        return Quiver(self.vertices, self.arrows + tuple(extra))

    def relabel_vertices(self, mapping: Mapping[str, str]) -> "Quiver":
        rename = lambda v: mapping.get(v, v)  # noqa: E731
        return Quiver(
            tuple(rename(v) for v in self.vertices),
            tuple(Arrow(a.id, rename(a.tail), rename(a.head)) for a in self.arrows),
        )

    # serialization ---------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [[a.id, a.tail, a.head] for a in self.arrows],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Quiver":
        return cls(
            tuple(str(v) for v in data["vertices"]),
            tuple(Arrow(str(i), str(t), str(h)) for i, t, h in data["arrows"]),
        )

    def to_dot(self, name: str = "Q") -> str:
        lines = [f"digraph {json.dumps(name)} {{"]
        for v in self.vertices:
            lines.append(f"  {json.dumps(v)};")
        for a in self.arrows:
            lines.append(f"  {json.dumps(a.tail)} -> {json.dumps(a.head)} [label={json.dumps(a.id)}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def composite_id(outer: str, inner: str) -> str:
    """Name of the arrow replacing the hook ``outer . inner``."""
    return f"[{outer},{inner}]"


def reversed_id(arrow_id: str) -> str:
    return f"{arrow_id}*"


def premutate_quiver(quiver: Quiver, vertex: str) -> tuple[Quiver, list[tuple[Arrow, Arrow]]]:
    """Steps one and two of quiver mutation.

    Returns the new quiver and the list of hooks ``(outer, inner)`` at
    ``vertex`` (``inner`` enters the vertex, ``outer`` leaves it).
    """
    if vertex not in quiver.vertex_index:
        raise KeyError(f"no vertex {vertex!r}")
    if quiver.has_two_cycle_at(vertex):
        raise TwoCycleAtVertex(f"vertex {vertex!r} lies on a 2-cycle")
    incoming = quiver.arrows_to(vertex)
    outgoing = quiver.arrows_from(vertex)
    hooks = [(b, a) for b in outgoing for a in incoming]
    arrows = [a for a in quiver.arrows if vertex not in (a.tail, a.head)]
    arrows += [Arrow(composite_id(b.id, a.id), a.tail, b.head) for b, a in hooks]
    arrows += [Arrow(reversed_id(a.id), a.head, a.tail) for a in incoming + outgoing]
    return Quiver(quiver.vertices, tuple(arrows)), hooks


def two_cycle_pairs(quiver: Quiver) -> list[tuple[Arrow, Arrow]]:
    """A maximal set of disjoint 2-cycles, chosen greedily in (tail, head, id) order."""
    ordered = sorted(quiver.arrows, key=lambda a: (a.tail, a.head, a.id))
    used: set[str] = set()
    pairs = []
    for x in ordered:
        if x.id in used:
            continue
        for y in ordered:
            if y.id not in used and y.tail == x.head and y.head == x.tail:
                used.update((x.id, y.id))
                pairs.append((x, y))
                break
    return pairs


def cancel_two_cycles(quiver: Quiver) -> Quiver:
    drop = [a.id for pair in two_cycle_pairs(quiver) for a in pair]
    return quiver.without_arrows(drop)


def mutate_quiver(quiver: Quiver, vertex: str) -> Quiver:
    """Quiver mutation at ``vertex`` with deterministic arrow names."""
    premutated, _ = premutate_quiver(quiver, vertex)
    return cancel_two_cycles(premutated)


# ---------------------------------------------------------------------------
# exchange matrices


@dataclass(frozen=True)
class ExchangeMatrix:
    """Integer ``(n + r) x n`` matrix whose top ``n x n`` block is skew-symmetric.

    ``labels`` name the ``n`` mutable indices; ``frozen_labels`` name the
    extra ``r`` rows.
    """

    entries: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = field(default=())
    frozen_labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        entries = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", entries)
        n = len(entries[0]) if entries else len(self.labels)
        labels = tuple(self.labels) or tuple(str(k + 1) for k in range(n))
        r = len(entries) - n
        frozen = tuple(self.frozen_labels) or tuple(str(n + k + 1) for k in range(r))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "frozen_labels", frozen)
        if len(labels) != n or r < 0 or len(frozen) != r:
            raise ValueError("matrix shape does not match its labels")
        if any(len(row) != n for row in entries):
            raise ValueError("ragged matrix")
        for i in range(n):
            for j in range(n):
                if entries[i][j] != -entries[j][i]:
                    raise ValueError("top block is not skew-symmetric")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def r(self) -> int:
        return len(self.frozen_labels)

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        return self.entries[i][j]

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def top(self) -> "ExchangeMatrix":
        return ExchangeMatrix(self.entries[: self.n], self.labels)

    def with_principal_coefficients(self) -> "ExchangeMatrix":
        n = self.n
        identity = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        return ExchangeMatrix(
            self.entries[:n] + identity,
            self.labels,
            tuple(f"y{k + 1}" for k in range(n)),
        )

    def mutate(self, k: int | str) -> "ExchangeMatrix":
        """Matrix mutation at a column index (0-based) or label."""
        if isinstance(k, str):
            k = self.index(k)
        b = self.entries
        out = []
        for i, row in enumerate(b):
            new_row = []
            for j, value in enumerate(row):
                if i == k or j == k:
                    new_row.append(-value)
                else:
                    new_row.append(value + (abs(b[i][k]) * b[k][j] + b[i][k] * abs(b[k][j])) // 2)
            out.append(tuple(new_row))
        return ExchangeMatrix(tuple(out), self.labels, self.frozen_labels)

    def to_json(self) -> dict:
        data = {"labels": list(self.labels), "entries": [list(r) for r in self.entries]}
        if self.r:
            data["frozen_labels"] = list(self.frozen_labels)
        return data

    @classmethod
    def from_json(cls, data) -> "ExchangeMatrix":
        if isinstance(data, list):
            return cls(tuple(tuple(r) for r in data))
        return cls(
            tuple(tuple(r) for r in data["entries"]),
            tuple(data.get("labels", ())),
            tuple(data.get("frozen_labels", ())),
        )


def matrix_of_quiver(quiver: Quiver) -> ExchangeMatrix:
    """``b_ij`` = (arrows j -> i) - (arrows i -> j), indexed by vertex order."""
    index = quiver.vertex_index
    n = len(quiver.vertices)
    b = [[0] * n for _ in range(n)]
    for a in quiver.arrows:
        i, j = index[a.head], index[a.tail]
        b[i][j] += 1
        b[j][i] -= 1
    return ExchangeMatrix(tuple(tuple(r) for r in b), quiver.vertices)


def quiver_of_matrix(matrix: ExchangeMatrix) -> Quiver:
    """The 2-acyclic quiver with ``b_ij`` arrows from j to i when positive."""
    labels = matrix.labels
    arrows = []
    for i in range(matrix.n):
        for j in range(matrix.n):
            for k in range(max(0, matrix[i, j])):
                arrows.append(Arrow(f"{labels[j]}>{labels[i]}#{k + 1}", labels[j], labels[i]))
    return Quiver(labels, tuple(arrows))


# ---------------------------------------------------------------------------
# quivers of triangulations


@dataclass(frozen=True)
class CornerArrow:
    """An arrow of the unreduced quiver together with the corner it comes from.

    ``tail_folded`` / ``head_folded`` record whether the endpoint is the folded
    side standing in for an enclosing loop.
    """

    arrow: Arrow
    triangle: int
    corner: int
    tail_folded: bool
    head_folded: bool


def corner_arrow_id(triangle: int, corner: int, tail_folded: bool = False, head_folded: bool = False) -> str:
    base = f"t{triangle}c{corner}"
    if tail_folded or head_folded:
        base += ":" + ("f" if tail_folded else "l") + ("f" if head_folded else "l")
    return base


def corner_arrows(triangulation: "IdealTriangulation") -> list[CornerArrow]:
    """One arrow per corner of each non-self-folded triangle and per preimage pair.

    At corner ``k`` the arrow runs from (a preimage of) side ``k`` to (a
    preimage of) side ``k - 1``; a loop enclosing a self-folded triangle has
    two preimages, itself and its folded side.
    """
    folded_of = triangulation.folded_side_of_loop
    result = []
    for t, tri in enumerate(triangulation.triangles):
        if tri.is_self_folded:
            continue
        for k in range(3):
            out_side, in_side = tri.sides[k], tri.sides[k - 1]
            if not (triangulation.is_arc(out_side) and triangulation.is_arc(in_side)):
                continue
            tails = [(out_side, False)] + ([(folded_of[out_side], True)] if out_side in folded_of else [])
            heads = [(in_side, False)] + ([(folded_of[in_side], True)] if in_side in folded_of else [])
            for tail, tail_folded in tails:
                for head, head_folded in heads:
                    arrow = Arrow(corner_arrow_id(t, k, tail_folded, head_folded), tail, head)
                    result.append(CornerArrow(arrow, t, k, tail_folded, head_folded))
    return result


def build_quivers(triangulation: "IdealTriangulation") -> tuple[Quiver, Quiver, ExchangeMatrix]:
    """Return ``(Q, Q_hat, B)`` for an ideal triangulation.

    ``Q_hat`` has all corner arrows; ``B`` is its signed adjacency matrix and
    ``Q`` is ``Q_hat`` with 2-cycles cancelled.
    """
    vertices = triangulation.arcs
    unreduced = Quiver(vertices, tuple(c.arrow for c in corner_arrows(triangulation)))
    return cancel_two_cycles(unreduced), unreduced, matrix_of_quiver(unreduced)


__all__ = [
    "Arrow",
    "Quiver",
    "ExchangeMatrix",
    "CornerArrow",
    "composite_id",
    "reversed_id",
    "premutate_quiver",
    "two_cycle_pairs",
    "cancel_two_cycles",
    "mutate_quiver",
    "matrix_of_quiver",
    "quiver_of_matrix",
    "corner_arrow_id",
    "corner_arrows",
    "build_quivers",
]
