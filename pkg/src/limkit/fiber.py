"""Homology of the homotopy fiber of ``hocolim BG -> BG_0``.

A :class:`GroupDiagram` is a functor from a graded poset to finite groups
together with a monic cone ``τ`` into a finite group ``G_0``.  Over a
contractible base, ``H_j(F) = lim_{j-1} H`` for ``j >= 2`` where
``H(i) = ker(Z[G_0] -> Z[G_0/τ_i(G_i)])``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Mapping, Sequence

from .derived import derived_direct_limits, homology
from .diagram import AbDiagram
from .errors import ConeNotMonic, InvalidInput, NotContractibleEvidence
from .exactalg import FgAbGroup, IntMatrix, LatticeSolver, invariant_diagonal, rank
from .poset import GradedPoset
from .webb import FiniteGroup, Subgroup

Hom = tuple[int, ...]


def _is_hom(src: FiniteGroup, dst: FiniteGroup, f: Hom) -> bool:
    if len(f) != src.order or any(not 0 <= x < dst.order for x in f):
        return False
    return all(f[src.mul(a, b)] == dst.mul(f[a], f[b]) for a in range(src.order) for b in range(src.order))


@dataclass(frozen=True, eq=False)
class GroupDiagram:
    """Groups on objects, homomorphisms on cover arrows and a cone into ``g0``."""

    base: GradedPoset
    groups: Mapping[str, FiniteGroup]
    maps: Mapping[tuple[str, str], Hom]
    g0: FiniteGroup
    cone: Mapping[str, Hom]

    def problems(self) -> list[str]:
        out = []
        for n in self.base.names:
            if n not in self.groups:
                out.append(f"no group given for {n}")
            if n not in self.cone:
                out.append(f"no cone map given for {n}")
        if out:
            return out
        for (a, b) in self.base.degree_one_arrows:
            f = self.maps.get((a, b))
            if f is None:
                out.append(f"no homomorphism given for {a} -> {b}")
            elif not _is_hom(self.groups[a], self.groups[b], f):
                out.append(f"{a} -> {b} is not a homomorphism")
        for n in self.base.names:
            if not _is_hom(self.groups[n], self.g0, self.cone[n]):
                out.append(f"cone map at {n} is not a homomorphism")
        if out:
            return out
        for (a, b) in self.base.degree_one_arrows:
            f, ta, tb = self.maps[(a, b)], self.cone[a], self.cone[b]
            if any(tb[f[x]] != ta[x] for x in range(len(f))):
                out.append(f"cone does not commute on {a} -> {b}")
        return out

    def validate(self) -> None:
        """Raise on malformed data; raise :class:`ConeNotMonic` if some ``τ_i`` is not injective.

        With a monic commuting cone every ``G(α)`` equals ``τ_j^{-1} τ_i``,
        so path independence needs no separate check.
        """
        problems = self.problems()
        if problems:
            raise InvalidInput("invalid group diagram", problems)
        bad = [n for n in self.base.names if len(set(self.cone[n])) != self.groups[n].order]
        if bad:
            raise ConeNotMonic(f"cone is not injective at {bad}")

    def image(self, n: str) -> Subgroup:
        return frozenset(self.cone[n])

    @classmethod
    def from_subgroups(cls, base: GradedPoset, g0: FiniteGroup, subs: Mapping[str, Sequence[int]]) -> "GroupDiagram":
        """Subgroups of ``g0`` with inclusions as maps and as cone."""
        groups, emb = {}, {}
        for n in base.names:
            h = sorted(g0.closure(subs.get(n, ())))
            idx = {x: k for k, x in enumerate(h)}
            table = tuple(tuple(idx[g0.mul(a, b)] for b in h) for a in h)
            groups[n] = FiniteGroup(table, idx[g0.identity], n, tuple(g0.label(x) for x in h))
            emb[n] = tuple(h)
        maps = {}
        for a, b in base.degree_one_arrows:
            pos = {x: k for k, x in enumerate(emb[b])}
            if not set(emb[a]) <= set(pos):
                raise InvalidInput(f"subgroup at {a} is not contained in the subgroup at {b}")
            maps[(a, b)] = tuple(pos[x] for x in emb[a])
        return cls(base, groups, maps, g0, emb)


# ---------------------------------------------------------------------------
# Contractibility of the base
# ---------------------------------------------------------------------------


Evidence = Literal["certified", "assumed"]


def check_contractible_base(p: GradedPoset, assume: bool = False) -> Evidence:
    """``certified`` with an initial or terminal object; otherwise acyclicity is checked and ``assume`` required."""
    if p.initial_object() is not None or p.terminal_object() is not None:
        return "certified"
    h = homology(p)
    if h[0] != FgAbGroup(1, ()) or any(not g.is_zero for g in h[1:]):
        raise NotContractibleEvidence(f"base has homology {[str(g) for g in h]}")
    if not assume:
        raise NotContractibleEvidence("base is acyclic but has no cone point; pass assume=True to proceed")
    return "assumed"


# ---------------------------------------------------------------------------
# The functor H
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HFunctor:
    """``H`` as a free diagram; ``bases[i]`` are columns in ``Z[G_0]`` (one row per element)."""

    diagram: AbDiagram
    bases: Mapping[str, IntMatrix]
    labels: Mapping[str, tuple[tuple[int, int], ...]]
    coset_reps: Mapping[str, tuple[int, ...]]

    def rank(self, n: str) -> int:
        return self.diagram.ngens(n)


def coset_representatives(g0: FiniteGroup, h: Subgroup) -> tuple[int, ...]:
    """One representative per left coset ``x·h``: the identity for ``h`` itself, else the smallest index."""
    seen: set[int] = set()
    reps = []
    for x in [g0.identity] + [y for y in range(g0.order) if y != g0.identity]:
        if x in seen:
            continue
        coset = {g0.mul(x, y) for y in h}
        seen |= coset
        reps.append(x)
    return tuple(reps)


def _h_basis(g0: FiniteGroup, h: Subgroup) -> tuple[IntMatrix, tuple[tuple[int, int], ...], tuple[int, ...]]:
    reps = coset_representatives(g0, h)
    cols, labels = [], []
    nontriv = sorted(x for x in h if x != g0.identity)
    for r in reps:
        for x in nontriv:
            v = [0] * g0.order
            v[g0.mul(r, x)] += 1
            v[r] -= 1
            cols.append(v)
            labels.append((r, x))
    m = IntMatrix.from_columns(cols, g0.order) if cols else IntMatrix.zeros(g0.order, 0)
    return m, tuple(labels), reps


def _coset_map(g0: FiniteGroup, h: Subgroup, reps: Sequence[int]) -> IntMatrix:
    """``Z[G_0] -> Z[G_0/h]`` sending ``x`` to its coset."""
    which = {}
    for k, r in enumerate(reps):
        for y in h:
            which[g0.mul(r, y)] = k
    rows = [[1 if which[x] == k else 0 for x in range(g0.order)] for k in range(len(reps))]
    return IntMatrix.from_rows(rows, g0.order)


def build_H(gd: GroupDiagram) -> HFunctor:
    gd.validate()
    g0 = gd.g0
    bases, labels, reps = {}, {}, {}
    for n in gd.base.names:
        h = gd.image(n)
        m, lab, rp = _h_basis(g0, h)
        want = g0.order - g0.order // len(h)
        if m.cols != want or rank(m) != want:
            raise AssertionError(f"H({n}) basis has the wrong rank")
        if any(d != 1 for d in invariant_diagonal(m)):
            raise AssertionError(f"H({n}) basis does not span a saturated lattice")
        if not (_coset_map(g0, h, rp) @ m).is_zero():
            raise AssertionError(f"H({n}) basis is not in the kernel of the coset map")
        bases[n], labels[n], reps[n] = m, lab, rp
    maps = {}
    for a, b in gd.base.degree_one_arrows:
        x = LatticeSolver(bases[b]).solve_columns(bases[a])
        if x is None:
            raise AssertionError(f"H({a}) is not contained in H({b})")
        maps[(a, b)] = x
    diag = AbDiagram.free(gd.base, {n: bases[n].cols for n in gd.base.names}, maps)
    return HFunctor(diag, bases, labels, reps)


# ---------------------------------------------------------------------------
# Fiber homology
# ---------------------------------------------------------------------------


NOT_COMPUTED = "not computed"


@dataclass(frozen=True, eq=False)
class FiberReport:
    evidence: Evidence
    h: HFunctor
    homology: Mapping[int, FgAbGroup]
    pi1: str
    pi0: str


def _terminal_cone_data(gd: GroupDiagram) -> tuple[str, str]:
    t = gd.base.terminal_object()
    if t is None:
        return NOT_COMPUTED, NOT_COMPUTED
    # The colimit is G(t), and τ_t is injective.
    index = gd.g0.order // gd.groups[t].order
    return "trivial", f"{index} point(s)"


def fiber_homology(gd: GroupDiagram, j_max: int | None = None, assume_contractible: bool = False) -> FiberReport:
    """``H_j(F) = lim_{j-1} H`` for ``2 <= j <= j_max``."""
    evidence = check_contractible_base(gd.base, assume_contractible)
    h = build_H(gd)
    lims = derived_direct_limits(h.diagram)
    j_max = j_max if j_max is not None else len(lims) + 1
    out = {}
    for j in range(2, j_max + 1):
        out[j] = lims[j - 1] if j - 1 < len(lims) else FgAbGroup(0, ())
    pi1, pi0 = _terminal_cone_data(gd)
    return FiberReport(evidence, h, out, pi1, pi0)


# ---------------------------------------------------------------------------
# Worked examples
# ---------------------------------------------------------------------------


def libman_poset() -> GradedPoset:
    """Product of the pushout shape ``c <- a -> b`` with itself."""
    arms = {"a": ("b", "c")}
    objs, arrows = [], []
    for x in "abc":
        for y in "abc":
            objs.append((f"({x},{y})", (x != "a") + (y != "a")))
    for x in "abc":
        for y in "abc":
            for x2 in arms.get(x, ()):
                arrows.append((f"({x},{y})", f"({x2},{y})"))
            for y2 in arms.get(y, ()):
                arrows.append((f"({x},{y})", f"({x},{y2})"))
    return GradedPoset(tuple(objs), tuple(arrows), "increasing")


def libman_example(g0: FiniteGroup) -> GroupDiagram:
    """Trivial group at ``(a,a)`` and ``G_0`` everywhere else, identities as maps."""
    p = libman_poset()
    everything = tuple(range(g0.order))
    return GroupDiagram.from_subgroups(p, g0, {n: (() if n == "(a,a)" else everything) for n in p.names})


def pushout_poset() -> GradedPoset:
    return GradedPoset((("a", 0), ("b", 1), ("c", 1)), (("a", "b"), ("a", "c")), "increasing")


def whitehead_example(g0: FiniteGroup, a: Sequence[int], b: Sequence[int], c: Sequence[int]) -> GroupDiagram:
    """Pushout ``G(b) <- G(a) -> G(c)`` of subgroups of ``g0`` (``a`` inside both)."""
    return GroupDiagram.from_subgroups(pushout_poset(), g0, {"a": a, "b": b, "c": c})


def telescope_example(g0: FiniteGroup, chain: Sequence[Sequence[int]]) -> GroupDiagram:
    """A finite increasing chain of subgroups ``G_1 <= G_2 <= ...``."""
    names = [f"t{k}" for k in range(len(chain))]
    p = GradedPoset(tuple((n, k) for k, n in enumerate(names)), tuple(zip(names, names[1:])), "increasing")
    return GroupDiagram.from_subgroups(p, g0, dict(zip(names, chain)))
