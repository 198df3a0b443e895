"""Small posets and diagrams shared by several test modules."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from limkit.diagram import AbDiagram
from limkit.exactalg import IntMatrix, PresentedGroup
from limkit.poset import GradedPoset


def cycle_poset() -> GradedPoset:
    """Two minima under two maxima; the nerve is a circle."""
    return GradedPoset(
        (("a", 0), ("b", 0), ("c", 1), ("d", 1)),
        (("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")),
    )


def cone_poset() -> GradedPoset:
    p = cycle_poset()
    return GradedPoset(p.objects + (("e", 2),), p.cover_arrows + (("c", "e"), ("d", "e")))


def pushout_poset() -> GradedPoset:
    """``a <- b -> c`` with ``b`` initial."""
    return GradedPoset((("b", 0), ("a", 1), ("c", 1)), (("b", "a"), ("b", "c")))


def pullback_poset() -> GradedPoset:
    """``a -> b <- c`` with ``b`` terminal and decreasing degree."""
    return GradedPoset((("a", 1), ("c", 1), ("b", 0)), (("a", "b"), ("c", "b")), "decreasing")


def telescope_poset(n: int) -> GradedPoset:
    names = [f"t{k}" for k in range(n)]
    return GradedPoset(tuple((x, k) for k, x in enumerate(names)), tuple(zip(names, names[1:])))


def free_diagram(base: GradedPoset, ranks: dict, maps: dict) -> AbDiagram:
    return AbDiagram.free(base, ranks, maps)


def pushout_2_1() -> AbDiagram:
    """``F(b) = Z`` mapping by 2 to ``a`` and by 1 to ``c``."""
    return AbDiagram.free(pushout_poset(), {"a": 1, "b": 1, "c": 1}, {("b", "a"): [[2]], ("b", "c"): [[1]]})


def pullback_example() -> AbDiagram:
    vals = {
        "a": PresentedGroup.free(1),
        "c": PresentedGroup.free(2),
        "b": PresentedGroup(2, IntMatrix.from_columns([[0, 2]], 2)),
    }
    maps = {("a", "b"): IntMatrix.from_rows([[1], [1]]), ("c", "b"): IntMatrix.identity(2)}
    return AbDiagram(pullback_poset(), vals, maps)


def telescope_example(n: int = 4, factor: int = 2) -> AbDiagram:
    p = telescope_poset(n)
    return AbDiagram.free(p, {x: 1 for x in p.names}, {a: [[factor]] for a in p.cover_arrows})


def face_poset(facets: Iterable[Sequence[int]]) -> GradedPoset:
    """Faces of a simplicial complex with arrows from a face to its codimension-one faces.

    This is the opposite of the (simplex-like) face poset, so degrees
    decrease along arrows and vertices are the maximal elements.
    """
    faces: set[tuple[int, ...]] = set()
    for f in facets:
        f = tuple(sorted(f))
        for k in range(1, len(f) + 1):
            faces.update(combinations(f, k))
    order = sorted(faces, key=lambda s: (-len(s), s))
    name = lambda s: "v" + "_".join(map(str, s))  # noqa: E731
    objs = tuple((name(s), len(s) - 1) for s in order)
    arrows = tuple((name(s), name(s[:i] + s[i + 1 :])) for s in order if len(s) > 1 for i in range(len(s)))
    return GradedPoset(objs, arrows, "decreasing")


RP2 = [(0, 1, 3), (1, 2, 3), (0, 2, 4), (2, 3, 4), (0, 3, 5), (3, 4, 5), (1, 4, 5), (0, 1, 4), (1, 2, 5), (0, 2, 5)]
TORUS = [(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)] + [(i, (i + 2) % 7, (i + 3) % 7) for i in range(7)]

def simplexlike_zoo() -> dict[str, GradedPoset]:
    """Opposites of simplex-like posets with a range of cohomology."""
    return {
        "point": face_poset([(0,)]),
        "edge": face_poset([(0, 1)]),
        "triangle": face_poset([(0, 1, 2)]),
        "tetrahedron": face_poset([(0, 1, 2, 3)]),
        "two points": face_poset([(0,), (1,)]),
        "circle": face_poset([(0, 1), (1, 2), (2, 3), (0, 3)]),
        "hollow triangle": face_poset([(0, 1), (1, 2), (0, 2)]),
        "sphere": face_poset([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]),
        "projective plane": face_poset(RP2),
        "torus": face_poset(TORUS),
        "wedge of circles": face_poset([(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)]),
    }
