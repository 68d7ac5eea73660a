"""Bordered surfaces with marked points, ideal and tagged triangulations, flips.

A triangulation is stored as a list of oriented triangles.  Each triangle
lists its three sides counterclockwise together with the marked point at the
start of each side: side ``k`` runs from ``vertices[k]`` to
``vertices[k + 1]``.  Gluing is implicit: an arc label occurs in exactly two
side slots, a boundary segment in one.  A self-folded triangle is stored as
``(f, f, loop)`` with vertices ``(m, q, m)``, where ``q`` is the enclosed
puncture and ``m`` the base point of the loop.

Vertex labels are ``p<k>`` for punctures and ``m<k>`` for boundary marked
points; arc labels are ``a<k>`` and boundary segments ``b<k>``.
"""

from __future__ import annotations

import json
import re
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import BudgetExceeded, FoldedSideFlip, InvalidSurface, UnknownArc

_ARC = re.compile(r"^a(\d+)$")
_BOUNDARY = re.compile(r"^b(\d+)$")
_PUNCTURE = re.compile(r"^p\d+$")
_BOUNDARY_POINT = re.compile(r"^m\d+$")

Slot = tuple[int, int]  # (triangle index, side index)


def label_key(label: str) -> tuple[str, int, str]:
    """Natural sort key: ``a2`` before ``a10``."""
    match = re.match(r"^([A-Za-z]+)(\d+)$", label)
    if match:
        return (match.group(1), int(match.group(2)), "")
    return (label, -1, label)


def is_arc_label(label: str) -> bool:
    return bool(_ARC.match(label))


def is_boundary_label(label: str) -> bool:
    return bool(_BOUNDARY.match(label))


def is_puncture_label(label: str) -> bool:
    return bool(_PUNCTURE.match(label))


# ---------------------------------------------------------------------------
# surfaces


@dataclass(frozen=True)
class SurfaceSpec:
    """Genus, marked points per boundary component and number of punctures.

    ``allow_degenerate`` admits the once-punctured digon, which is excluded
    from the general theory but is the smallest surface with a self-folded
    triangle and a useful test case.
    """

    genus: int
    boundary_marked: tuple[int, ...]
    punctures: int
    allow_degenerate: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "boundary_marked", tuple(int(c) for c in self.boundary_marked))
        if self.genus < 0 or self.punctures < 0:
            raise InvalidSurface("genus and puncture count must be non-negative")
        if not self.boundary_marked:
            raise InvalidSurface("surfaces without boundary are not supported")
        if any(c < 1 for c in self.boundary_marked):
            raise InvalidSurface("every boundary component needs a marked point")
        if self.genus == 0 and len(self.boundary_marked) == 1:
            c = self.boundary_marked[0]
            if self.punctures == 0 and c <= 3:
                raise InvalidSurface(f"unpunctured {c}-gon is excluded")
            if self.punctures == 1 and c == 1:
                raise InvalidSurface("once-punctured monogon is excluded")
            if self.punctures == 1 and c == 2 and not self.allow_degenerate:
                raise InvalidSurface("once-punctured digon is excluded (pass allow_degenerate=True)")
        if self.rank < 1:
            raise InvalidSurface(f"rank {self.rank} < 1")

    @property
    def marked_on_boundary(self) -> int:
        return sum(self.boundary_marked)

    @property
    def rank(self) -> int:
        b = len(self.boundary_marked)
        return 6 * self.genus + 3 * b + 3 * self.punctures + self.marked_on_boundary - 6

    @property
    def triangle_count(self) -> int:
        return (2 * self.rank + self.marked_on_boundary) // 3

    @property
    def puncture_labels(self) -> tuple[str, ...]:
        return tuple(f"p{k + 1}" for k in range(self.punctures))

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "boundary_marked": list(self.boundary_marked),
            "punctures": self.punctures,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SurfaceSpec":
        g, bm, p = int(data["genus"]), tuple(data["boundary_marked"]), int(data["punctures"])
        return cls(g, bm, p, allow_degenerate=(g == 0 and bm == (2,) and p == 1))


def rank(spec: SurfaceSpec) -> int:
    return spec.rank


# ---------------------------------------------------------------------------
# triangles


@dataclass(frozen=True)
class Triangle:
    sides: tuple[str, str, str]
    vertices: tuple[str, str, str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sides", tuple(self.sides))
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if len(self.sides) != 3 or len(self.vertices) != 3:
            raise InvalidSurface("a triangle has three sides and three corners")

    @property
    def is_self_folded(self) -> bool:
        return len(set(self.sides)) < 3

    def rotated(self, shift: int) -> "Triangle":
        """Rotate so that old position ``shift`` becomes position 0."""
        shift %= 3
        return Triangle(self.sides[shift:] + self.sides[:shift], self.vertices[shift:] + self.vertices[:shift])

    def canonical(self) -> "Triangle":
        return min((self.rotated(k) for k in range(3)), key=lambda t: (t.sides, t.vertices))

    def folded_layout(self) -> "Triangle":
        """For a self-folded triangle, the rotation reading ``(f, f, loop)``."""
        for k in range(3):
            rot = self.rotated(k)
            if rot.sides[0] == rot.sides[1]:
                return rot
        raise ValueError("triangle is not self-folded")

    def relabeled(self, mapping: Mapping[str, str]) -> "Triangle":
        return Triangle(tuple(mapping.get(s, s) for s in self.sides), self.vertices)


# ---------------------------------------------------------------------------
# ideal triangulations


@dataclass(frozen=True, eq=False)
class IdealTriangulation:
    """An ideal triangulation as a list of glued oriented triangles.

    Equality ignores triangle order and rotation within a triangle.
    """

    surface: SurfaceSpec
    triangles: tuple[Triangle, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "triangles", tuple(self.triangles))

    @classmethod
    def checked(cls, surface: SurfaceSpec, triangles: Iterable[Triangle]) -> "IdealTriangulation":
        tri = cls(surface, tuple(triangles))
        problems = validate(tri)
        if problems:
            raise InvalidSurface("; ".join(problems))
        return tri

    # equality -------------------------------------------------------------
    @cached_property
    def _canonical_multiset(self) -> tuple:
        return tuple(sorted((t.canonical().sides, t.canonical().vertices) for t in self.triangles))

    def __eq__(self, other) -> bool:
        if not isinstance(other, IdealTriangulation):
            return NotImplemented
        return self.surface == other.surface and self._canonical_multiset == other._canonical_multiset

    def __hash__(self) -> int:
        return hash((self.surface, self._canonical_multiset))

    # labels ------------------------------------------------------------------
    @cached_property
    def slots(self) -> dict[str, list[Slot]]:
        out: dict[str, list[Slot]] = {}
        for t, tri in enumerate(self.triangles):
            for k, side in enumerate(tri.sides):
                out.setdefault(side, []).append((t, k))
        return out

    @cached_property
    def arcs(self) -> tuple[str, ...]:
        return tuple(sorted((s for s in self.slots if is_arc_label(s)), key=label_key))

    @cached_property
    def boundary_segments(self) -> tuple[str, ...]:
        return tuple(sorted((s for s in self.slots if is_boundary_label(s)), key=label_key))

    def is_arc(self, label: str) -> bool:
        return label in self.slots and is_arc_label(label)

    def twin(self, slot: Slot) -> Slot | None:
        t, k = slot
        label = self.triangles[t].sides[k]
        if not is_arc_label(label):
            return None
        others = [s for s in self.slots[label] if s != slot]
        return others[0] if others else None

    # self-folded triangles ---------------------------------------------------------
    @cached_property
    def self_folded(self) -> list[tuple[int, str, str, str]]:
        """``(triangle index, folded side, loop, enclosed puncture)`` records."""
        out = []
        for t, tri in enumerate(self.triangles):
            if tri.is_self_folded:
                lay = tri.folded_layout()
                out.append((t, lay.sides[0], lay.sides[2], lay.vertices[1]))
        return out

    @cached_property
    def folded_side_of_loop(self) -> dict[str, str]:
        return {loop: f for _, f, loop, _ in self.self_folded}

    @cached_property
    def loop_of_folded_side(self) -> dict[str, str]:
        return {f: loop for _, f, loop, _ in self.self_folded}

    @cached_property
    def puncture_at(self) -> dict[int, str]:
        return {t: q for t, _, _, q in self.self_folded}

    def pi(self, arc: str) -> str:
        """Send a folded side to its enclosing loop; other arcs are fixed."""
        return self.loop_of_folded_side.get(arc, arc)

    # vertices and rotations ----------------------------------------------------------
    def successor(self, corner: Slot) -> Slot | None:
        """Next corner counterclockwise around the same marked point."""
        t, k = corner
        return self.twin((t, (k - 1) % 3))

    def predecessor(self, corner: Slot) -> Slot | None:
        twin = self.twin(corner)
        if twin is None:
            return None
        return (twin[0], (twin[1] + 1) % 3)

    @cached_property
    def corner_orbits(self) -> list[tuple[tuple[Slot, ...], bool]]:
        """Corner classes in counterclockwise order, with a cyclic flag."""
        seen: set[Slot] = set()
        orbits = []
        corners = [(t, k) for t in range(len(self.triangles)) for k in range(3)]
        for start in corners:
            if start in seen:
                continue
            first = start
            guard = 0
            while True:
                prev = self.predecessor(first)
                guard += 1
                if prev is None or prev == start or guard > len(corners):
                    break
                first = prev
            cyclic = self.predecessor(first) is not None
            orbit = []
            cur: Slot | None = first
            while cur is not None and cur not in orbit and len(orbit) <= len(corners):
                orbit.append(cur)
                cur = self.successor(cur)
            if cyclic:
                pivot = orbit.index(min(orbit))
                orbit = orbit[pivot:] + orbit[:pivot]
            seen.update(orbit)
            orbits.append((tuple(orbit), cyclic))
        return orbits

    def corner_vertex(self, corner: Slot) -> str:
        t, k = corner
        return self.triangles[t].vertices[k]

    @cached_property
    def rotation(self) -> dict[str, tuple[Slot, ...]]:
        """Counterclockwise corner sequence at each marked point."""
        return {self.corner_vertex(orbit[0]): orbit for orbit, _ in self.corner_orbits}

    @cached_property
    def punctures(self) -> tuple[str, ...]:
        return tuple(sorted((v for v in self.rotation if is_puncture_label(v)), key=label_key))

    def arc_endpoints(self, arc: str) -> tuple[str, str]:
        t, k = self.slots[arc][0]
        tri = self.triangles[t]
        return tri.vertices[k], tri.vertices[(k + 1) % 3]

    def arcs_at(self, vertex: str) -> list[str]:
        """Arc labels around ``vertex`` in counterclockwise order (with repeats)."""
        out = []
        for t, k in self.rotation.get(vertex, ()):
            side = self.triangles[t].sides[k]
            if is_arc_label(side):
                out.append(side)
        return out

    # transformations -------------------------------------------------------
    def relabeled(self, mapping: Mapping[str, str]) -> "IdealTriangulation":
        return IdealTriangulation(self.surface, tuple(t.relabeled(mapping) for t in self.triangles))

    def with_triangles(self, triangles: Iterable[Triangle]) -> "IdealTriangulation":
        return IdealTriangulation(self.surface, tuple(triangles))

    # serialization ---------------------------------------------------------------
    def to_json(self) -> dict:
        triangles = []
        for t, tri in enumerate(self.triangles):
            record = {"sides": list(tri.sides), "vertices": list(tri.vertices), "self_folded": tri.is_self_folded}
            if t in self.puncture_at:
                record["puncture"] = self.puncture_at[t]
            triangles.append(record)
        return {"surface": self.surface.to_json(), "triangles": triangles}

    @classmethod
    def from_json(cls, data: Mapping) -> "IdealTriangulation":
        surface = SurfaceSpec.from_json(data["surface"])
        records = data["triangles"]
        if all("vertices" in r for r in records):
            triangles = [Triangle(tuple(r["sides"]), tuple(r["vertices"])) for r in records]
        else:
            triangles = _with_derived_vertices(surface, [tuple(r["sides"]) for r in records])
        tri = cls.checked(surface, triangles)
        for t, r in enumerate(records):
            if "self_folded" in r and bool(r["self_folded"]) != tri.triangles[t].is_self_folded:
                raise InvalidSurface(f"triangle {t}: self_folded flag disagrees with its sides")
            if r.get("puncture") is not None and tri.puncture_at.get(t) != r["puncture"]:
                raise InvalidSurface(f"triangle {t}: puncture label disagrees with the gluing")
        return tri


def _with_derived_vertices(surface: SurfaceSpec, sides: Sequence[tuple[str, str, str]]) -> list[Triangle]:
    """Assign vertex labels from the corner orbits of the gluing."""
    placeholder = IdealTriangulation(surface, tuple(Triangle(s, ("?", "?", "?")) for s in sides))
    names: dict[Slot, str] = {}
    puncture_count = 0
    for orbit, cyclic in sorted(placeholder.corner_orbits, key=lambda o: min(o[0])):
        if cyclic:
            puncture_count += 1
            name = f"p{puncture_count}"
        else:
            t, k = orbit[0]
            outgoing = placeholder.triangles[t].sides[k]
            match = _BOUNDARY.match(outgoing)
            if not match:
                raise InvalidSurface("cannot derive boundary point labels")
            name = f"m{match.group(1)}"
        for corner in orbit:
            names[corner] = name
    return [
        Triangle(s, tuple(names[(t, k)] for k in range(3)))
        for t, s in enumerate(sides)
    ]


def validate(triangulation: IdealTriangulation) -> list[str]:
    """List of violated invariants; empty when the triangulation is valid."""
    T = triangulation
    surface = T.surface
    problems: list[str] = []

    for t, tri in enumerate(T.triangles):
        for k, side in enumerate(tri.sides):
            if not (is_arc_label(side) or is_boundary_label(side)):
                problems.append(f"triangle {t} side {k}: label {side!r} is neither 'a<k>' nor 'b<k>'")
        for k, v in enumerate(tri.vertices):
            if not (_PUNCTURE.match(v) or _BOUNDARY_POINT.match(v)):
                problems.append(f"triangle {t} corner {k}: vertex label {v!r} is neither 'p<k>' nor 'm<k>'")
    if problems:
        return problems

    for label, slots in sorted(T.slots.items(), key=lambda kv: label_key(kv[0])):
        expected = 2 if is_arc_label(label) else 1
        if len(slots) != expected:
            kind = "arc" if expected == 2 else "boundary segment"
            problems.append(f"{kind} {label} occupies {len(slots)} slots at {slots} (degree != {expected})")
    n, c, t = len(T.arcs), len(T.boundary_segments), len(T.triangles)
    if n != surface.rank:
        problems.append(f"{n} arcs but the surface has rank {surface.rank}")
    if c != surface.marked_on_boundary:
        problems.append(f"{c} boundary segments but {surface.marked_on_boundary} boundary marked points")
    if 3 * t != 2 * n + c:
        problems.append(f"triangle count mismatch: 3*{t} != 2*{n} + {c}")
    if problems:
        return problems

    for t_idx, tri in enumerate(T.triangles):
        if not tri.is_self_folded:
            continue
        lay = tri.folded_layout()
        f, loop = lay.sides[0], lay.sides[2]
        if not is_arc_label(f) or not is_arc_label(loop):
            problems.append(f"triangle {t_idx}: self-folded triangle must consist of two arcs")
            continue
        m1, q, m2 = lay.vertices
        if m1 != m2:
            problems.append(f"triangle {t_idx}: loop {loop} does not start and end at one point")
        if not is_puncture_label(q) or q == m1:
            problems.append(f"triangle {t_idx}: folded side {f} must end at an enclosed puncture")

    for label in T.arcs:
        (t1, k1), (t2, k2) = T.slots[label]
        a = T.triangles[t1]
        b = T.triangles[t2]
        forward = (a.vertices[k1], a.vertices[(k1 + 1) % 3])
        backward = (b.vertices[(k2 + 1) % 3], b.vertices[k2])
        if forward != backward:
            problems.append(f"arc {label}: endpoints {forward} and {backward} of its two slots disagree")
    for label in T.boundary_segments:
        (t1, k1), = T.slots[label]
        if not _BOUNDARY_POINT.match(T.triangles[t1].vertices[k1]):
            problems.append(f"boundary segment {label} starts at non-boundary point {T.triangles[t1].vertices[k1]}")
    if problems:
        return problems

    seen_labels: dict[str, int] = {}
    puncture_orbits = boundary_orbits = 0
    for idx, (orbit, cyclic) in enumerate(T.corner_orbits):
        names = {T.corner_vertex(c) for c in orbit}
        if len(names) != 1:
            problems.append(f"corners {list(orbit)} form one marked point but carry labels {sorted(names)}")
            continue
        name = names.pop()
        if name in seen_labels:
            problems.append(f"vertex label {name} is used by two distinct marked points")
        seen_labels[name] = idx
        if cyclic:
            puncture_orbits += 1
            if not is_puncture_label(name):
                problems.append(f"interior marked point labelled {name} (expected 'p<k>')")
        else:
            boundary_orbits += 1
            if not _BOUNDARY_POINT.match(name):
                problems.append(f"boundary marked point labelled {name} (expected 'm<k>')")
    if puncture_orbits != surface.punctures:
        problems.append(f"{puncture_orbits} punctures found, surface has {surface.punctures}")
    if boundary_orbits != surface.marked_on_boundary:
        problems.append(f"{boundary_orbits} boundary points found, surface has {surface.marked_on_boundary}")

    start_of: dict[str, str] = {}
    end_of: dict[str, str] = {}
    for label in T.boundary_segments:
        (t1, k1), = T.slots[label]
        tri = T.triangles[t1]
        start_of[label] = tri.vertices[k1]
        end_of[label] = tri.vertices[(k1 + 1) % 3]
    by_start = {v: s for s, v in start_of.items()}
    remaining = set(T.boundary_segments)
    lengths = []
    while remaining:
        seg = min(remaining, key=label_key)
        length = 0
        while seg in remaining:
            remaining.discard(seg)
            length += 1
            seg = by_start.get(end_of[seg], "")
        lengths.append(length)
    if sorted(lengths) != sorted(surface.boundary_marked):
        problems.append(f"boundary cycles have lengths {sorted(lengths)}, expected {sorted(surface.boundary_marked)}")

    reached = {0}
    frontier = [0]
    while frontier:
        t_idx = frontier.pop()
        for k in range(3):
            twin = T.twin((t_idx, k))
            if twin is not None and twin[0] not in reached:
                reached.add(twin[0])
                frontier.append(twin[0])
    if len(reached) != len(T.triangles):
        problems.append("triangles do not form a connected surface")

    euler = (surface.marked_on_boundary + surface.punctures) - (n + c) + t
    expected_euler = 2 - 2 * surface.genus - len(surface.boundary_marked)
    if euler != expected_euler:
        problems.append(f"Euler characteristic {euler} != {expected_euler}")
    return problems


def flip_ideal(triangulation: IdealTriangulation, arc: str) -> IdealTriangulation:
    """Replace ``arc`` by the other diagonal of the quadrilateral around it.

    The new arc keeps the old label.  The same local rewrite covers flipping
    the loop of a self-folded triangle and flips that create one.
    """
    T = triangulation
    if not T.is_arc(arc):
        raise UnknownArc(arc)
    (t1, k1), (t2, k2) = T.slots[arc]
    if t1 == t2:
        raise FoldedSideFlip(f"{arc} is the folded side of a self-folded triangle")
    first = T.triangles[t1].rotated(k1)
    second = T.triangles[t2].rotated(k2)
    _, x, y = first.sides
    A, B, C = first.vertices
    _, z, w = second.sides
    D = second.vertices[2]
    replacement = {
        t1: Triangle((y, z, arc), (C, A, D)),
        t2: Triangle((w, x, arc), (D, B, C)),
    }
    triangles = [replacement.get(t, tri) for t, tri in enumerate(T.triangles)]
    triangles = [tri.folded_layout() if tri.is_self_folded else tri for tri in triangles]
    return T.with_triangles(triangles)


# ---------------------------------------------------------------------------
# tagged triangulations

PLAIN = "plain"
NOTCHED = "notched"


@dataclass(frozen=True)
class TaggedArc:
    """Endpoints of a tagged arc with the tag at each end (sorted)."""

    ends: tuple[tuple[str, str], tuple[str, str]]


@dataclass(frozen=True, eq=False)
class TaggedTriangulation:
    """A tagged triangulation encoded by its ideal triangulation and signs.

    Each label of ``base`` names one tagged arc: a folded side names the arc
    itself, its enclosing loop names the same curve with the opposite tag at
    the enclosed puncture.
    """

    base: IdealTriangulation
    epsilon: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        eps = self.epsilon.items() if isinstance(self.epsilon, Mapping) else self.epsilon
        eps = tuple(sorted(((str(p), int(s)) for p, s in eps), key=lambda ps: label_key(ps[0])))
        object.__setattr__(self, "epsilon", eps)
        if any(s not in (1, -1) for _, s in eps):
            raise InvalidSurface("epsilon takes values +1 and -1")
        expected = set(self.base.surface.puncture_labels)
        if {p for p, _ in eps} != expected:
            raise InvalidSurface(f"epsilon must be defined exactly on {sorted(expected)}")

    @classmethod
    def plain(cls, base: IdealTriangulation) -> "TaggedTriangulation":
        return cls(base, tuple((p, 1) for p in base.surface.puncture_labels))

    @property
    def eps(self) -> dict[str, int]:
        return dict(self.epsilon)

    @property
    def arcs(self) -> tuple[str, ...]:
        return self.base.arcs

    @property
    def surface(self) -> SurfaceSpec:
        return self.base.surface

    def signature(self) -> dict[str, int]:
        enclosed = {q for _, _, _, q in self.base.self_folded}
        return {p: (0 if p in enclosed else s) for p, s in self.epsilon}

    def normalized(self) -> "TaggedTriangulation":
        """Same tagged triangulation with sign +1 at every signature-zero puncture."""
        eps = self.eps
        swap: dict[str, str] = {}
        for _, f, loop, q in self.base.self_folded:
            if eps[q] == -1:
                swap[f], swap[loop] = loop, f
                eps[q] = 1
        if not swap:
            return self
        return TaggedTriangulation(self.base.relabeled(swap), tuple(eps.items()))

    def tagged_arc(self, label: str) -> TaggedArc:
        base = self.base
        if not base.is_arc(label):
            raise UnknownArc(label)
        eps = self.eps

        def tag(point: str, flip: bool = False) -> str:
            if not is_puncture_label(point):
                return PLAIN
            sign = -eps[point] if flip else eps[point]
            return PLAIN if sign == 1 else NOTCHED

        if label in base.folded_side_of_loop:
            q = next(p for _, _, loop, p in base.self_folded if loop == label)
            m = base.arc_endpoints(label)[0]
            ends = sorted([(m, tag(m)), (q, tag(q, flip=True))])
        else:
            u, w = base.arc_endpoints(label)
            ends = sorted([(u, tag(u)), (w, tag(w))])
        return TaggedArc((ends[0], ends[1]))

    def tagged_arcs(self) -> dict[str, TaggedArc]:
        return {a: self.tagged_arc(a) for a in self.arcs}

    def canonical_key(self) -> tuple:
        """A key identifying the triangulation up to relabeling of arcs."""
        norm = self.normalized()
        return (canonical_form(norm.base), norm.epsilon)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TaggedTriangulation):
            return NotImplemented
        a, b = self.normalized(), other.normalized()
        return a.base == b.base and a.epsilon == b.epsilon

    def __hash__(self) -> int:
        norm = self.normalized()
        return hash((norm.base, norm.epsilon))

    def to_json(self) -> dict:
        data = self.base.to_json()
        data["epsilon"] = dict(self.epsilon)
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> "TaggedTriangulation":
        base = IdealTriangulation.from_json(data)
        eps = data.get("epsilon") or {p: 1 for p in base.surface.puncture_labels}
        return cls(base, tuple(eps.items()))


def signature(tagged: TaggedTriangulation) -> dict[str, int]:
    return tagged.signature()


def flip_tagged(tagged: TaggedTriangulation, arc: str) -> TaggedTriangulation:
    """Flip one tagged arc, keeping its label.

    At a folded side ``f`` enclosed by loop ``l`` at puncture ``q`` the labels
    of ``f`` and ``l`` are exchanged and the sign at ``q`` reversed (this
    leaves the tagged arcs unchanged), after which the label ``f`` sits on the
    loop and an ordinary flip applies.  The result is normalized.
    """
    base = tagged.base
    if not base.is_arc(arc):
        raise UnknownArc(arc)
    eps = tagged.eps
    if arc in base.loop_of_folded_side:
        loop = base.loop_of_folded_side[arc]
        q = next(p for _, f, _, p in base.self_folded if f == arc)
        base = base.relabeled({arc: loop, loop: arc})
        eps[q] = -eps[q]
    flipped = TaggedTriangulation(flip_ideal(base, arc), tuple(eps.items()))
    return flipped.normalized()


# ---------------------------------------------------------------------------
# canonical forms and flip graphs


def canonical_form(triangulation: IdealTriangulation) -> tuple:
    """Triangles relabeled and ordered by a traversal from segment ``b1``.

    Two triangulations with the same vertex labels have equal canonical forms
    exactly when they differ by a renaming of arcs.
    """
    T = triangulation
    start_label = min(T.boundary_segments, key=label_key)
    (t0, k0), = T.slots[start_label]
    names: dict[str, str] = {}
    order: list[Triangle] = []
    visited = {t0}
    queue = deque([(t0, k0)])
    while queue:
        t, entry = queue.popleft()
        tri = T.triangles[t].rotated(entry)
        for side in tri.sides:
            if is_arc_label(side) and side not in names:
                names[side] = f"a{len(names) + 1}"
        order.append(tri)
        for k in range(3):
            twin = T.twin((t, (entry + k) % 3))
            if twin is not None and twin[0] not in visited:
                visited.add(twin[0])
                queue.append(twin)
    return tuple((tuple(names.get(s, s) for s in tri.sides), tri.vertices) for tri in order)


@dataclass(frozen=True)
class FlipEdge:
    source: int
    target: int
    arc: str


@dataclass
class FlipGraph:
    nodes: list[TaggedTriangulation]
    edges: list[FlipEdge]

    def neighbors(self, node: int) -> list[int]:
        return [e.target for e in self.edges if e.source == node]

    def degree(self, node: int) -> int:
        return len(set(self.neighbors(node)))

    def is_cycle(self) -> bool:
        if len(self.nodes) < 3:
            return False
        if any(self.degree(v) != 2 for v in range(len(self.nodes))):
            return False
        seen = {0}
        frontier = [0]
        while frontier:
            v = frontier.pop()
            for w in self.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        return len(seen) == len(self.nodes)


def enumerate_flip_graph(start: TaggedTriangulation, max_nodes: int) -> FlipGraph:
    """Breadth-first closure of ``start`` under tagged flips.

    Nodes are identified up to renaming of arcs (see :func:`canonical_form`),
    which is the right notion for disks with at most one puncture.
    """
    if max_nodes < 1:
        raise ValueError("max_nodes must be positive")
    start = start.normalized()
    nodes = [start]
    index = {start.canonical_key(): 0}
    edges: list[FlipEdge] = []
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for arc in nodes[v].arcs:
            neighbor = flip_tagged(nodes[v], arc)
            key = neighbor.canonical_key()
            if key not in index:
                if len(nodes) >= max_nodes:
                    raise BudgetExceeded(f"flip graph has more than {max_nodes} nodes")
                index[key] = len(nodes)
                nodes.append(neighbor)
                queue.append(index[key])
            edges.append(FlipEdge(v, index[key], arc))
    return FlipGraph(nodes, edges)


def load_triangulation(text: str) -> TaggedTriangulation:
    return TaggedTriangulation.from_json(json.loads(text))


__all__ = [
    "SurfaceSpec",
    "Triangle",
    "IdealTriangulation",
    "TaggedTriangulation",
    "TaggedArc",
    "FlipEdge",
    "FlipGraph",
    "rank",
    "validate",
    "flip_ideal",
    "flip_tagged",
    "signature",
    "canonical_form",
    "enumerate_flip_graph",
    "load_triangulation",
    "label_key",
    "is_arc_label",
    "is_boundary_label",
    "is_puncture_label",
]
