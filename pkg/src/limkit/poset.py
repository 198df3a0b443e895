"""Finite graded posets stored through their cover arrows.

A :class:`GradedPoset` keeps its objects in declaration order together with
an integer degree for each, and only the covering arrows.  Arbitrary arrows
are recovered as directed paths, which is legitimate because in a graded
poset every arrow factors through degree-one steps.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Literal, Sequence

from .errors import InvalidInput, UnknownObject

Orientation = Literal["increasing", "decreasing"]
Side = Literal["under", "over"]


@dataclass(frozen=True)
class GradedPoset:
    """A finite poset given by cover arrows and a degree function.

    ``orientation`` says whether the degree grows (``"increasing"``) or
    drops (``"decreasing"``) along arrows.  Degrees are shifted on
    construction so that the smallest one is 0.
    """

    objects: tuple[tuple[str, int], ...]
    cover_arrows: tuple[tuple[str, str], ...] = ()
    orientation: Orientation = "increasing"

    def __post_init__(self) -> None:
        objs = tuple((str(n), int(d)) for n, d in self.objects)
        names = [n for n, _ in objs]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise InvalidInput(f"duplicate object names: {dup}")
        if objs:
            low = min(d for _, d in objs)
            objs = tuple((n, d - low) for n, d in objs)
        known = set(names)
        arrows = tuple((str(a), str(b)) for a, b in self.cover_arrows)
        for a, b in arrows:
            for x in (a, b):
                if x not in known:
                    raise UnknownObject(f"arrow {a} -> {b} mentions unknown object {x}")
        if self.orientation not in ("increasing", "decreasing"):
            raise InvalidInput(f"orientation must be increasing or decreasing, not {self.orientation!r}")
        object.__setattr__(self, "objects", objs)
        object.__setattr__(self, "cover_arrows", arrows)

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_arrows(
        cls,
        names: Sequence[str],
        arrows: Iterable[tuple[str, str]],
        orientation: Orientation = "increasing",
    ) -> "GradedPoset":
        """Build a poset, computing the degree function from the arrows.

        Raises :class:`InvalidInput` when no degree function exists.
        """
        arrows = list(arrows)
        degs, conflicts = _solve_degrees(list(names), arrows, 1 if orientation == "increasing" else -1)
        if conflicts:
            raise InvalidInput("no degree function exists", conflicts)
        return cls(tuple((n, degs[n]) for n in names), tuple(arrows), orientation)

    # -- basic queries --------------------------------------------------------

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.objects)

    @cached_property
    def index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.names)}

    @cached_property
    def _deg(self) -> dict[str, int]:
        return dict(self.objects)

    def __len__(self) -> int:
        return len(self.objects)

    def __contains__(self, name: object) -> bool:
        return name in self._deg

    def deg(self, name: str) -> int:
        self._require(name)
        return self._deg[name]

    def _require(self, name: str) -> None:
        if name not in self._deg:
            raise UnknownObject(f"unknown object {name!r}")

    @property
    def sign(self) -> int:
        return 1 if self.orientation == "increasing" else -1

    @cached_property
    def successors(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {n: [] for n in self.names}
        for a, b in self.cover_arrows:
            if b not in out[a]:
                out[a].append(b)
        return {n: tuple(sorted(v, key=self.index.__getitem__)) for n, v in out.items()}

    @cached_property
    def predecessors(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {n: [] for n in self.names}
        for a, b in self.cover_arrows:
            if a not in out[b]:
                out[b].append(a)
        return {n: tuple(sorted(v, key=self.index.__getitem__)) for n, v in out.items()}

    @cached_property
    def _up(self) -> dict[str, frozenset[str]]:
        return {n: frozenset(_reach(n, self.successors)) for n in self.names}

    @cached_property
    def _down(self) -> dict[str, frozenset[str]]:
        return {n: frozenset(_reach(n, self.predecessors)) for n in self.names}

    def above(self, name: str) -> frozenset[str]:
        """Objects ``i != name`` with an arrow ``name -> i``."""
        self._require(name)
        return self._up[name]

    def below(self, name: str) -> frozenset[str]:
        """Objects ``i != name`` with an arrow ``i -> name``."""
        self._require(name)
        return self._down[name]

    def leq(self, a: str, b: str) -> bool:
        """True when there is an arrow ``a -> b`` (identities included)."""
        return a == b or b in self.above(a)

    def sort_key(self, name: str) -> int:
        return self.index[name]

    def ordered(self, names: Iterable[str]) -> list[str]:
        return sorted(names, key=self.index.__getitem__)

    def objects_of_degree(self, d: int) -> list[str]:
        return [n for n, e in self.objects if e == d]

    @property
    def max_degree(self) -> int:
        return max((d for _, d in self.objects), default=-1)

    @cached_property
    def degree_one_arrows(self) -> tuple[tuple[str, str], ...]:
        """Cover arrows without repetition, ordered by source then target."""
        seen = dict.fromkeys(self.cover_arrows)
        return tuple(sorted(seen, key=lambda ab: (self.index[ab[0]], self.index[ab[1]])))

    def sources(self) -> list[str]:
        return [n for n in self.names if not self.predecessors[n]]

    def sinks(self) -> list[str]:
        return [n for n in self.names if not self.successors[n]]

    def initial_object(self) -> str | None:
        for n in self.names:
            if len(self._up[n]) == len(self) - 1:
                return n
        return None

    def terminal_object(self) -> str | None:
        for n in self.names:
            if len(self._down[n]) == len(self) - 1:
                return n
        return None

    @cached_property
    def longest_chain(self) -> int:
        """Number of arrows in the longest strictly increasing chain."""
        if not self.objects:
            return -1
        return max(
            (abs(self._deg[b] - self._deg[a]) for a in self.names for b in self._up[a]), default=0
        )

    # -- derived posets -------------------------------------------------------

    def induced(self, members: Iterable[str]) -> "GradedPoset":
        """Full subposet on ``members`` with its own Hasse diagram."""
        keep = set(members)
        for m in keep:
            self._require(m)
        order = self.ordered(keep)
        arrows = []
        for a in order:
            ups = self._up[a] & keep
            for b in self.ordered(ups):
                if not any(b in self._up[c] for c in ups if c != b):
                    arrows.append((a, b))
        return GradedPoset(tuple((n, self._deg[n]) for n in order), tuple(arrows), self.orientation)

    def opposite(self) -> "GradedPoset":
        """Reverse every arrow; the degree function is kept, so the orientation flips."""
        flip: Orientation = "decreasing" if self.orientation == "increasing" else "increasing"
        return GradedPoset(self.objects, tuple((b, a) for a, b in self.cover_arrows), flip)

    def slice(
        self,
        i0: str,
        side: Side = "under",
        starred: bool = False,
        degree_filter: Iterable[int] | None = None,
    ) -> "Slice":
        """``(i0 ↓ P)`` for ``side="under"`` and ``(P ↓ i0)`` for ``side="over"``."""
        self._require(i0)
        if side == "under":
            mem = set(self._up[i0])
        elif side == "over":
            mem = set(self._down[i0])
        else:
            raise ValueError(f"side must be 'under' or 'over', not {side!r}")
        if not starred:
            mem.add(i0)
        if degree_filter is not None:
            allowed = set(degree_filter)
            mem = {m for m in mem if self._deg[m] in allowed}
        order = self.ordered(mem)
        return Slice(i0, side, starred, tuple((m, self._deg[m]) for m in order), self)

    def under(self, i0: str, degree: int | None = None, starred: bool = True) -> list[str]:
        """Names in ``(i0↓P)``, starred by default, optionally of one degree."""
        return list(self.slice(i0, "under", starred, None if degree is None else {degree}).names)

    # -- connectivity and shape -----------------------------------------------

    def connected_components(self) -> list[list[str]]:
        adj: dict[str, set[str]] = {n: set() for n in self.names}
        for a, b in self.cover_arrows:
            adj[a].add(b)
            adj[b].add(a)
        seen: set[str] = set()
        comps = []
        for n in self.names:
            if n in seen:
                continue
            comp = _reach(n, adj) | {n}
            seen |= comp
            comps.append(self.ordered(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.connected_components()) == 1

    def is_tree(self) -> bool:
        """The undirected cover graph has no cycle (forests and the empty poset qualify)."""
        edges = {frozenset(e) for e in self.cover_arrows}
        return len(edges) == len(self) - len(self.connected_components())

    def is_rooted_tree(self) -> bool:
        return self.is_tree() and self.initial_object() is not None

    def is_simplex_like(self) -> tuple[bool, dict[str, dict[str, frozenset[str]]]]:
        """Check that every ``(P↓p)`` is the poset of nonempty subsets of a finite set.

        The witness sends each ``p`` to the isomorphism ``q -> {minimal objects below q}``.
        """
        witness: dict[str, dict[str, frozenset[str]]] = {}
        for p in self.names:
            over = set(self._down[p]) | {p}
            atoms = [q for q in over if not (self._down[q] & over)]
            iso = {q: frozenset(a for a in atoms if a == q or a in self._down[q]) for q in over}
            if len(over) != 2 ** len(atoms) - 1 or len(set(iso.values())) != len(over):
                return False, witness
            for q in over:
                for r in over:
                    if (q == r or r in self._up[q]) != (iso[q] <= iso[r]):
                        return False, witness
            witness[p] = iso
        return True, witness

    def validate(self) -> list[str]:
        """All violated invariants as readable strings; empty when valid."""
        problems: list[str] = []
        seen: set[tuple[str, str]] = set()
        for a, b in self.cover_arrows:
            if (a, b) in seen:
                problems.append(f"duplicate arrow {a} -> {b}")
            seen.add((a, b))
            if a == b:
                problems.append(f"loop arrow at {a}")
            elif self._deg[b] - self._deg[a] != self.sign:
                problems.append(
                    f"arrow {a} -> {b} joins degrees {self._deg[a]} and {self._deg[b]}"
                    f" but the orientation is {self.orientation}"
                )
        cyc = _find_cycle(self.names, self.successors)
        if cyc:
            problems.append("directed cycle through " + " -> ".join(cyc))
        _, conflicts = _solve_degrees(list(self.names), list(self.cover_arrows), self.sign)
        problems.extend(conflicts)
        return problems

    def is_valid(self) -> bool:
        return not self.validate()

    # -- dunder ---------------------------------------------------------------

    def __str__(self) -> str:
        objs = ", ".join(f"{n}:{d}" for n, d in self.objects)
        arrs = ", ".join(f"{a}->{b}" for a, b in self.cover_arrows)
        return f"GradedPoset({self.orientation}; {objs}; {arrs})"


@dataclass(frozen=True)
class Slice:
    """Members of ``(i0↓P)`` or ``(P↓i0)`` with their inherited degrees."""

    base: str
    side: Side
    starred: bool
    members: tuple[tuple[str, int], ...]
    parent: GradedPoset = field(repr=False, compare=False)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self.names

    def poset(self) -> GradedPoset:
        return self.parent.induced(self.names)

    def is_connected(self) -> bool:
        return len(self.poset().connected_components()) == 1


# ---------------------------------------------------------------------------
# core(P)
# ---------------------------------------------------------------------------


def core_stages(p: GradedPoset) -> list[tuple[GradedPoset, list[str]]]:
    """Successive applications of the source-removal step.

    Returns pairs ``(poset before the step, removed sources)`` for every step
    that removed something.
    """
    stages = []
    cur = p
    while True:
        removable = []
        for s in cur.sources():
            up = cur.slice(s, "under", starred=True)
            if len(up) == 0 or up.is_connected():
                removable.append(s)
        if not removable:
            return stages
        stages.append((cur, removable))
        cur = cur.induced(set(cur.names) - set(removable))


def core(p: GradedPoset) -> GradedPoset:
    """Remove sources whose starred under-slice is empty or connected, until stable."""
    stages = core_stages(p)
    if not stages:
        return p
    last, removed = stages[-1]
    return last.induced(set(last.names) - set(removed))


# ---------------------------------------------------------------------------
# Standard posets
# ---------------------------------------------------------------------------


def simplex_name(seq: Sequence[int]) -> str:
    return "[" + ",".join(str(x) for x in seq) + "]"


def delta_poset(n: int) -> GradedPoset:
    """``Δ_n``: increasing sequences in ``{0..n}``, arrows drop one entry.

    Degree is length minus one and decreases along arrows; the top object
    ``[0,...,n]`` has degree ``n``.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    seqs = [c for k in range(n + 1, 0, -1) for c in combinations(range(n + 1), k)]
    objs = tuple((simplex_name(c), len(c) - 1) for c in seqs)
    arrows = tuple(
        (simplex_name(c), simplex_name(c[:i] + c[i + 1 :])) for c in seqs if len(c) > 1 for i in range(len(c))
    )
    return GradedPoset(objs, arrows, "decreasing")


def simplex_poset(n: int) -> GradedPoset:
    """Face poset of the ``n``-simplex (the opposite of :func:`delta_poset`)."""
    return delta_poset(n).opposite()


def disjoint_union(a: GradedPoset, b: GradedPoset, tags: tuple[str, str] = ("L.", "R.")) -> GradedPoset:
    """Disjoint union; names are prefixed with ``tags`` to keep them distinct."""
    if a.orientation != b.orientation:
        raise InvalidInput("cannot join posets with different orientations")
    ta, tb = tags
    objs = tuple((ta + n, d) for n, d in a.objects) + tuple((tb + n, d) for n, d in b.objects)
    arrows = tuple((ta + x, ta + y) for x, y in a.cover_arrows) + tuple((tb + x, tb + y) for x, y in b.cover_arrows)
    return GradedPoset(objs, arrows, a.orientation)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _reach(start: str, adj: dict[str, Iterable[str]]) -> set[str]:
    seen: set[str] = set()
    stack = list(adj[start])
    while stack:
        x = stack.pop()
        if x in seen or x == start:
            continue
        seen.add(x)
        stack.extend(adj[x])
    return seen


def _find_cycle(names: Sequence[str], succ: dict[str, tuple[str, ...]]) -> list[str] | None:
    color = dict.fromkeys(names, 0)
    parent: dict[str, str] = {}
    for root in names:
        if color[root]:
            continue
        stack = [(root, iter(succ[root]))]
        color[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[node] = 2
                stack.pop()
            elif color[nxt] == 0:
                color[nxt] = 1
                parent[nxt] = node
                stack.append((nxt, iter(succ[nxt])))
            elif color[nxt] == 1:
                cyc = [node]
                while cyc[-1] != nxt:
                    cyc.append(parent[cyc[-1]])
                return list(reversed(cyc)) + [nxt]
    return None


def _solve_degrees(
    names: list[str], arrows: list[tuple[str, str]], step: int
) -> tuple[dict[str, int], list[str]]:
    """Assign degrees so each arrow changes degree by ``step``; report conflicts."""
    adj: dict[str, list[tuple[str, int]]] = {n: [] for n in names}
    for a, b in arrows:
        adj[a].append((b, step))
        adj[b].append((a, -step))
    degs: dict[str, int] = {}
    conflicts: list[str] = []
    for root in names:
        if root in degs:
            continue
        degs[root] = 0
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y, w in adj[x]:
                want = degs[x] + w
                if y not in degs:
                    degs[y] = want
                    queue.append(y)
                elif degs[y] != want:
                    msg = f"unequal chain lengths: paths disagree on the degree of {y} relative to {root}"
                    if msg not in conflicts:
                        conflicts.append(msg)
    if degs:
        low = min(degs.values())
        degs = {n: d - low for n, d in degs.items()}
    return degs, conflicts
