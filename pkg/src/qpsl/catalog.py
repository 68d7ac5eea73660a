"""Named triangulations and quivers with potential used in examples and tests."""

from __future__ import annotations

from .path_algebra import Potential, parse_potential
from .quiver import Arrow, Quiver
from .surface import IdealTriangulation, SurfaceSpec, TaggedTriangulation, Triangle


def _polygon_fan(points: int) -> IdealTriangulation:
    """Unpunctured ``points``-gon with every diagonal at ``m1``."""
    surface = SurfaceSpec(0, (points,), 0)
    m = [f"m{k}" for k in range(1, points + 1)]
    diagonals = [f"a{k}" for k in range(1, points - 2)]
    triangles = []
    for k in range(1, points - 1):
        left = "b1" if k == 1 else diagonals[k - 2]
        right = f"b{points}" if k == points - 2 else diagonals[k - 1]
        if k == 1:
            triangles.append(Triangle(("b1", "b2", diagonals[0]), (m[0], m[1], m[2])))
        elif k == points - 2:
            triangles.append(Triangle((left, f"b{points - 1}", f"b{points}"), (m[0], m[k], m[k + 1])))
        else:
            triangles.append(Triangle((left, f"b{k + 1}", right), (m[0], m[k], m[k + 1])))
    return IdealTriangulation.checked(surface, triangles)


def hexagon_fan() -> IdealTriangulation:
    """Unpunctured hexagon, diagonals ``a1 = m1m3``, ``a2 = m1m4``, ``a3 = m1m5``."""
    return _polygon_fan(6)


def square() -> IdealTriangulation:
    """Unpunctured square with the diagonal ``a1 = m1m3``."""
    return _polygon_fan(4)


def polygon_fan(points: int) -> IdealTriangulation:
    return _polygon_fan(points)


def once_punctured_square() -> IdealTriangulation:
    """Four radii ``a_k`` from ``m_k`` to the puncture ``p1``."""
    surface = SurfaceSpec(0, (4,), 1)
    triangles = [
        Triangle((f"b{k}", f"a{k % 4 + 1}", f"a{k}"), (f"m{k}", f"m{k % 4 + 1}", "p1"))
        for k in range(1, 5)
    ]
    return IdealTriangulation.checked(surface, triangles)


def once_punctured_digon() -> IdealTriangulation:
    """Radius ``a1`` from ``m1`` to ``p1`` enclosed by the loop ``a2`` at ``m1``."""
    surface = SurfaceSpec(0, (2,), 1, allow_degenerate=True)
    triangles = [
        Triangle(("a1", "a1", "a2"), ("m1", "p1", "m1")),
        Triangle(("a2", "b1", "b2"), ("m1", "m1", "m2")),
    ]
    return IdealTriangulation.checked(surface, triangles)


# Roles of the arcs in the three-punctured hexagon triangulation: two arcs
# between p1 and p3, the loop at p3 around p2 and its folded side, fans of
# four arcs at p1 and at p3.
HEXAGON_ROLES = {
    "K": "a1",
    "L": "a2",
    "lambda": "a3",
    "X": "a4",
    "P1": "a5",
    "P2": "a6",
    "P3": "a7",
    "P4": "a8",
    "R1": "a9",
    "R2": "a10",
    "R3": "a11",
    "R4": "a12",
}


def three_punctured_hexagon() -> TaggedTriangulation:
    """Hexagon with punctures ``p1, p2, p3`` and a self-folded triangle at ``p2``."""
    r = HEXAGON_ROLES
    surface = SurfaceSpec(0, (6,), 3)
    triangles = [
        Triangle((r["lambda"], r["lambda"], r["X"]), ("p3", "p2", "p3")),
        Triangle((r["K"], r["X"], r["L"]), ("p1", "p3", "p3")),
        Triangle((r["R4"], r["K"], r["P1"]), ("m1", "p3", "p1")),
        Triangle((r["L"], r["R1"], r["P4"]), ("p1", "p3", "m4")),
        Triangle((r["P1"], r["P2"], "b6"), ("m1", "p1", "m6")),
        Triangle((r["P2"], r["P3"], "b5"), ("m6", "p1", "m5")),
        Triangle((r["P3"], r["P4"], "b4"), ("m5", "p1", "m4")),
        Triangle((r["R1"], r["R2"], "b3"), ("m4", "p3", "m3")),
        Triangle((r["R2"], r["R3"], "b2"), ("m3", "p3", "m2")),
        Triangle((r["R3"], r["R4"], "b1"), ("m2", "p3", "m1")),
    ]
    return TaggedTriangulation.plain(IdealTriangulation.checked(surface, triangles))


def three_cycle_qp() -> tuple[Quiver, Potential]:
    q = Quiver(("1", "2", "3"), (Arrow("a", "1", "2"), Arrow("b", "2", "3"), Arrow("c", "3", "1")))
    return q, parse_potential(q, "c.b.a")


def markov_quiver() -> Quiver:
    return Quiver(
        ("1", "2", "3"),
        (
            Arrow("a1", "1", "2"),
            Arrow("a2", "1", "2"),
            Arrow("b1", "2", "3"),
            Arrow("b2", "2", "3"),
            Arrow("c1", "3", "1"),
            Arrow("c2", "3", "1"),
        ),
    )


def markov_potential() -> Potential:
    q = markov_quiver()
    return parse_potential(q, "c1.b1.a1 + c2.b2.a2")


__all__ = [
    "hexagon_fan",
    "square",
    "polygon_fan",
    "once_punctured_square",
    "once_punctured_digon",
    "three_punctured_hexagon",
    "HEXAGON_ROLES",
    "three_cycle_qp",
    "markov_quiver",
    "markov_potential",
]
