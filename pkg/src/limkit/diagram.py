"""Diagrams of finitely generated abelian groups over graded posets.

An :class:`AbDiagram` assigns a :class:`PresentedGroup` to every object and an
integer matrix (acting on generators) to every cover arrow.  Composite maps
are derived from cover paths; :func:`validate_diagram` checks they are well
defined.  This module also hosts the structural objects ``Coker(i0)`` and
``ker(i0)``, the projectivity and injectivity predicates and the ``F'``,
``ker'`` constructions used for dimension shifting.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from .errors import InvalidInput, NotMonic, UnknownObject
from .exactalg import (
    FgAbGroup,
    IntMatrix,
    LatticeSolver,
    PresentedGroup,
    Subquotient,
    block_diag,
    cokernel,
    cycle_lattice,
    hstack,
    image_basis,
    lattice_contains,
    vstack,
)
from .poset import GradedPoset

Arrow = tuple[str, str]


@dataclass(frozen=True, eq=False)
class AbDiagram:
    """A functor ``P -> Ab`` given on objects and cover arrows."""

    base: GradedPoset
    values: Mapping[str, PresentedGroup]
    maps: Mapping[Arrow, IntMatrix] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", dict(self.values))
        object.__setattr__(self, "maps", dict(self.maps))
        for name in self.values:
            if name not in self.base:
                raise UnknownObject(f"value given for unknown object {name!r}")
        for a, b in self.maps:
            if (a, b) not in set(self.base.cover_arrows):
                raise UnknownObject(f"map given for {a} -> {b}, which is not a cover arrow")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def constant(cls, base: GradedPoset, group: FgAbGroup = FgAbGroup(1)) -> "AbDiagram":
        """Constant diagram; ``constant(P)`` is ``c_Z``."""
        g = PresentedGroup.from_group(group)
        ident = IntMatrix.identity(g.ngens)
        return cls(base, {n: g for n in base.names}, {a: ident for a in base.degree_one_arrows})

    @classmethod
    def free(cls, base: GradedPoset, ranks: Mapping[str, int], maps: Mapping[Arrow, Sequence[Sequence[int]] | IntMatrix]) -> "AbDiagram":
        """Free-valued diagram from ranks and nested-list matrices."""
        vals = {n: PresentedGroup.free(ranks.get(n, 0)) for n in base.names}
        mats = {}
        for (a, b) in base.degree_one_arrows:
            m = maps.get((a, b))
            if m is None:
                mats[(a, b)] = IntMatrix.zeros(vals[b].ngens, vals[a].ngens)
            elif isinstance(m, IntMatrix):
                mats[(a, b)] = m
            else:
                mats[(a, b)] = IntMatrix.from_rows(m, vals[a].ngens) if m else IntMatrix.zeros(vals[b].ngens, vals[a].ngens)
        return cls(base, vals, mats)

    # -- access ---------------------------------------------------------------

    def value(self, name: str) -> PresentedGroup:
        if name not in self.base:
            raise UnknownObject(f"unknown object {name!r}")
        return self.values.get(name, PresentedGroup.free(0))

    def ngens(self, name: str) -> int:
        return self.value(name).ngens

    def rel(self, name: str) -> IntMatrix:
        return self.value(name).relations

    def group(self, name: str) -> FgAbGroup:
        return self.value(name).group()

    def cover_map(self, a: str, b: str) -> IntMatrix:
        m = self.maps.get((a, b))
        if m is None:
            return IntMatrix.zeros(self.ngens(b), self.ngens(a))
        return m

    @cached_property
    def _composites(self) -> dict[Arrow, IntMatrix]:
        return {}

    def map(self, i: str, j: str) -> IntMatrix:
        """Matrix of ``F(i -> j)``, composed along the first available cover path."""
        if i == j:
            return IntMatrix.identity(self.ngens(i))
        cache = self._composites
        hit = cache.get((i, j))
        if hit is not None:
            return hit
        if j not in self.base.above(i):
            raise InvalidInput(f"no arrow {i} -> {j}")
        for s in self.base.successors[i]:
            if s == j or j in self.base.above(s):
                m = self.map(s, j) @ self.cover_map(i, s)
                cache[(i, j)] = m
                return m
        raise AssertionError("unreachable: reachability without a first step")

    def restrict(self, sub: GradedPoset) -> "AbDiagram":
        """Restriction to a full subposet whose covers are arrows of the base."""
        vals = {n: self.value(n) for n in sub.names}
        maps = {(a, b): self.map(a, b) for a, b in sub.degree_one_arrows}
        return AbDiagram(sub, vals, maps)

    def is_free(self) -> bool:
        return all(self.value(n).relations.is_zero() for n in self.base.names)

    def total_rank(self) -> int:
        return sum(self.ngens(n) for n in self.base.names)

    def __repr__(self) -> str:
        vals = ", ".join(f"{n}={self.group(n)}" for n in self.base.names)
        return f"AbDiagram({vals})"


@dataclass(frozen=True, eq=False)
class NatTransform:
    """Natural transformation given by one matrix per object."""

    source: AbDiagram
    target: AbDiagram
    components: Mapping[str, IntMatrix]

    def component(self, name: str) -> IntMatrix:
        m = self.components.get(name)
        if m is None:
            return IntMatrix.zeros(self.target.ngens(name), self.source.ngens(name))
        return m

    def violations(self) -> list[str]:
        """Naturality squares that fail, compared modulo the target relations."""
        out = []
        for a, b in self.source.base.degree_one_arrows:
            lhs = self.target.cover_map(a, b) @ self.component(a)
            rhs = self.component(b) @ self.source.cover_map(a, b)
            if not _equal_mod(lhs, rhs, self.target.rel(b)):
                out.append(f"naturality square at {a} -> {b} does not commute")
        return out

    def is_natural(self) -> bool:
        return not self.violations()

    def is_monic(self) -> bool:
        for n in self.source.base.names:
            src, tgt = self.source.value(n), self.target.value(n)
            cyc = cycle_lattice(self.component(n), tgt.relations)
            if not lattice_contains(src.relations, cyc):
                return False
        return True

    def is_epic(self) -> bool:
        for n in self.source.base.names:
            tgt = self.target.value(n)
            span = hstack([self.component(n), tgt.relations], tgt.ngens)
            if not lattice_contains(span, IntMatrix.identity(tgt.ngens)):
                return False
        return True


def _equal_mod(a: IntMatrix, b: IntMatrix, rel: IntMatrix) -> bool:
    diff = a - b
    if diff.is_zero():
        return True
    if rel.cols == 0:
        return False
    return lattice_contains(rel, diff)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate_diagram(f: AbDiagram) -> list[str]:
    """Shapes, relation preservation and path independence; empty list when valid."""
    base = f.base
    problems = [f"base poset: {p}" for p in base.validate()]
    if problems:
        return problems
    for a, b in base.degree_one_arrows:
        m = f.cover_map(a, b)
        if m.shape != (f.ngens(b), f.ngens(a)):
            problems.append(
                f"map {a} -> {b} has shape {m.shape}, expected {(f.ngens(b), f.ngens(a))}"
            )
    if problems:
        return problems
    for a, b in base.degree_one_arrows:
        img = f.cover_map(a, b) @ f.rel(a)
        if not img.is_zero() and not lattice_contains(f.rel(b), img):
            problems.append(f"map {a} -> {b} does not send relations of {a} into relations of {b}")
    if problems:
        return problems
    # Path independence, by induction on the length of the arrow.
    for i in base.names:
        targets = sorted(base.above(i), key=lambda j: abs(base.deg(j) - base.deg(i)))
        for j in targets:
            firsts = [s for s in base.successors[i] if s == j or j in base.above(s)]
            ref = f.map(firsts[0], j) @ f.cover_map(i, firsts[0])
            for s in firsts[1:]:
                other = f.map(s, j) @ f.cover_map(i, s)
                if not _equal_mod(ref, other, f.rel(j)):
                    problems.append(
                        f"composites {i} -> {firsts[0]} -> {j} and {i} -> {s} -> {j} differ"
                    )
    return problems


# ---------------------------------------------------------------------------
# Coker(i0), Im(i0), ker(i0)
# ---------------------------------------------------------------------------


def _incoming(f: AbDiagram, i0: str) -> list[IntMatrix]:
    return [f.cover_map(s, i0) for s in f.base.predecessors[i0]]


def im_object(f: AbDiagram, i0: str) -> IntMatrix:
    """Basis of the lattice ``Im(i0) + relations`` in the generators of ``F(i0)``."""
    n = f.ngens(i0)
    return image_basis(hstack([f.rel(i0)] + _incoming(f, i0), n))


def coker_object(f: AbDiagram, i0: str) -> FgAbGroup:
    """``Coker(i0) = F(i0) / Im(i0)`` in canonical form."""
    n = f.ngens(i0)
    return cokernel(hstack([f.rel(i0)] + _incoming(f, i0), n))


def ker_object(f: AbDiagram, i0: str) -> IntMatrix:
    """Basis of ``{x : F(a) x = 0 for every outgoing cover a}`` (lattice containing the relations)."""
    n = f.ngens(i0)
    outs = f.base.successors[i0]
    if not outs:
        return IntMatrix.identity(n)
    stacked = vstack([f.cover_map(i0, t) for t in outs], n)
    rel = block_diag([f.rel(t) for t in outs])
    return cycle_lattice(stacked, rel)


def ker_group(f: AbDiagram, i0: str) -> FgAbGroup:
    return Subquotient(f.ngens(i0), ker_object(f, i0), f.rel(i0)).group()


def ker_injective(g: FgAbGroup) -> bool:
    """Injectivity of a finitely generated abelian group: only the zero group qualifies."""
    return g.is_zero


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a structural predicate; ``unchecked`` lists skipped objects."""

    ok: bool
    witness: str | None = None
    unchecked: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    @property
    def status(self) -> str:
        if not self.ok:
            return "false"
        return "true" if not self.unchecked else "not checked"


def _indegree_cap(cap: int | None) -> int | None:
    if cap is not None:
        return cap
    env = os.environ.get("LIMKIT_MAX_INDEGREE")
    return int(env) if env else None


def _degree_d_below(base: GradedPoset, i0: str, d: int) -> list[str]:
    return [i for i in base.ordered(base.below(i0)) if abs(base.deg(i0) - base.deg(i)) == d]


def _degree_d_above(base: GradedPoset, i0: str, d: int) -> list[str]:
    return [i for i in base.ordered(base.above(i0)) if abs(base.deg(i) - base.deg(i0)) == d]


def check_pseudo_projective(f: AbDiagram, d: int, max_indegree: int | None = None) -> CheckResult:
    """``d``-pseudo-projectivity.

    For each ``i0`` the whole family of degree-``d`` sources is tested at
    once; an element of the kernel for a subfamily extends by zero to the
    full family, so this covers every subfamily.
    """
    if d <= 0:
        return CheckResult(True)
    cap = _indegree_cap(max_indegree)
    skipped = []
    for i0 in f.base.names:
        srcs = _degree_d_below(f.base, i0, d)
        if not srcs:
            continue
        if cap is not None and len(srcs) > cap:
            skipped.append(i0)
            continue
        sizes = [f.ngens(s) for s in srcs]
        kern = cycle_lattice(hstack([f.map(s, i0) for s in srcs], f.ngens(i0)), f.rel(i0))
        off = 0
        for s, k in zip(srcs, sizes):
            block = kern.select_rows(list(range(off, off + k)))
            off += k
            if block.cols and not lattice_contains(im_object(f, s), block):
                return CheckResult(
                    False,
                    f"degree {d}: an element of ker(sum of F(i -> {i0})) has component at {s} outside Im({s})",
                )
    return CheckResult(True, None, tuple(skipped))


def check_pseudo_injective(f: AbDiagram, d: int, max_outdegree: int | None = None) -> CheckResult:
    """``d``-pseudo-injectivity: ``F(i0) -> prod_j ker(i_j)`` hits every family of kernel elements."""
    if d <= 0:
        return CheckResult(True)
    cap = _indegree_cap(max_outdegree)
    skipped = []
    for i0 in f.base.names:
        tgts = _degree_d_above(f.base, i0, d)
        if not tgts:
            continue
        if cap is not None and len(tgts) > cap:
            skipped.append(i0)
            continue
        n0 = f.ngens(i0)
        stacked = vstack([f.map(i0, t) for t in tgts], n0)
        system = hstack([stacked, block_diag([f.rel(t) for t in tgts])], stacked.rows)
        solver = LatticeSolver(system)
        off = 0
        for t in tgts:
            kb = ker_object(f, t)
            for c in range(kb.cols):
                rhs = [0] * stacked.rows
                rhs[off : off + f.ngens(t)] = kb.column(c)
                if not solver.contains(rhs):
                    return CheckResult(
                        False, f"degree {d}: a kernel element at {t} is not reached from {i0} jointly"
                    )
            off += f.ngens(t)
    return CheckResult(True, None, tuple(skipped))


def _all_degrees(f: AbDiagram) -> range:
    return range(1, f.base.longest_chain + 1)


def is_pseudo_projective(f: AbDiagram, max_indegree: int | None = None) -> CheckResult:
    for d in _all_degrees(f):
        r = check_pseudo_projective(f, d, max_indegree)
        if not r.ok:
            return r
    return CheckResult(True)


def is_pseudo_injective(f: AbDiagram, max_outdegree: int | None = None) -> CheckResult:
    for d in _all_degrees(f):
        r = check_pseudo_injective(f, d, max_outdegree)
        if not r.ok:
            return r
    return CheckResult(True)


def check_pre_projective(f: AbDiagram) -> CheckResult:
    """Every ``Coker(i0)`` is free and the diagram is pseudo-projective."""
    for i0 in f.base.names:
        c = coker_object(f, i0)
        if not c.is_free:
            return CheckResult(False, f"Coker({i0}) = {c} is not free")
    return is_pseudo_projective(f)


# ---------------------------------------------------------------------------
# Sub- and quotient diagrams
# ---------------------------------------------------------------------------


def subdiagram(g: AbDiagram, lattices: Mapping[str, IntMatrix]) -> tuple[AbDiagram, NatTransform]:
    """Sub-functor cut out by lattices ``L_i`` (each containing the relations of ``G(i)``).

    Returns the presented sub-diagram (generators are lattice bases) and its
    inclusion into ``g``.
    """
    vals: dict[str, PresentedGroup] = {}
    bases: dict[str, IntMatrix] = {}
    for n in g.base.names:
        pres, b = Subquotient(g.ngens(n), lattices[n], g.rel(n)).as_presented()
        vals[n] = pres
        bases[n] = b
    maps = {}
    for a, b in g.base.degree_one_arrows:
        img = g.cover_map(a, b) @ bases[a]
        coords = LatticeSolver(bases[b]).solve_columns(img)
        if coords is None:
            raise InvalidInput(f"lattice at {a} is not mapped into the lattice at {b}")
        maps[(a, b)] = coords
    sub = AbDiagram(g.base, vals, maps)
    return sub, NatTransform(sub, g, bases)


def quotient_diagram(g: AbDiagram, kill: Mapping[str, IntMatrix]) -> tuple[AbDiagram, NatTransform]:
    """Quotient of ``g`` by the subgroups generated by ``kill[i]``, with the projection."""
    vals = {
        n: PresentedGroup(g.ngens(n), hstack([g.rel(n), kill.get(n, IntMatrix.zeros(g.ngens(n), 0))], g.ngens(n)))
        for n in g.base.names
    }
    q = AbDiagram(g.base, vals, dict(g.maps))
    return q, NatTransform(g, q, {n: IntMatrix.identity(g.ngens(n)) for n in g.base.names})


# ---------------------------------------------------------------------------
# F' for direct limits
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ShortExact:
    """``0 -> sub -> mid -> quo -> 0`` with the two transformations."""

    sub: AbDiagram
    mid: AbDiagram
    quo: AbDiagram
    inc: NatTransform
    proj: NatTransform


def _summands(base: GradedPoset, i0: str, side: str) -> list[str]:
    rel = base.below(i0) if side == "below" else base.above(i0)
    return base.ordered(set(rel) | {i0})


def _offsets(f: AbDiagram, names: Sequence[str]) -> dict[str, int]:
    out, off = {}, 0
    for n in names:
        out[n] = off
        off += f.ngens(n)
    return out


def build_F_prime_direct(f: AbDiagram) -> tuple[AbDiagram, NatTransform, AbDiagram]:
    """``F'(i0) = ⊕_{i -> i0} F(i)`` with ``π: F' => F`` and ``K1 = ker π``.

    Returns ``(F', π, K1)``; :func:`f_prime_direct_sequence` also returns the
    inclusion of ``K1``.
    """
    seq = f_prime_direct_sequence(f)
    return seq.mid, seq.proj, seq.sub


def f_prime_direct_sequence(f: AbDiagram) -> ShortExact:
    base = f.base
    summ = {i0: _summands(base, i0, "below") for i0 in base.names}
    offs = {i0: _offsets(f, summ[i0]) for i0 in base.names}
    vals = {
        i0: PresentedGroup(sum(f.ngens(i) for i in summ[i0]), block_diag([f.rel(i) for i in summ[i0]]))
        for i0 in base.names
    }
    maps = {}
    for a, b in base.degree_one_arrows:
        rows, cols = vals[b].ngens, vals[a].ngens
        m = [[0] * cols for _ in range(rows)]
        for i in summ[a]:
            for k in range(f.ngens(i)):
                m[offs[b][i] + k][offs[a][i] + k] = 1
        maps[(a, b)] = IntMatrix.from_rows(m, cols) if rows else IntMatrix.zeros(0, cols)
    fp = AbDiagram(base, vals, maps)
    pi = {i0: hstack([f.map(i, i0) for i in summ[i0]], f.ngens(i0)) for i0 in base.names}
    proj = NatTransform(fp, f, pi)
    lat = {i0: cycle_lattice(pi[i0], f.rel(i0)) for i0 in base.names}
    k1, inc = subdiagram(fp, lat)
    return ShortExact(k1, fp, f, inc, proj)


# ---------------------------------------------------------------------------
# F' and ker' for inverse limits
# ---------------------------------------------------------------------------


def f_prime_inverse_sequence(f: AbDiagram) -> ShortExact:
    """``0 -> F -> F' -> C_F -> 0`` with ``F'(i0) = ⊕_{i0 -> i} F(i)``."""
    base = f.base
    summ = {i0: _summands(base, i0, "above") for i0 in base.names}
    offs = {i0: _offsets(f, summ[i0]) for i0 in base.names}
    vals = {
        i0: PresentedGroup(sum(f.ngens(i) for i in summ[i0]), block_diag([f.rel(i) for i in summ[i0]]))
        for i0 in base.names
    }
    maps = {}
    for a, b in base.degree_one_arrows:
        rows, cols = vals[b].ngens, vals[a].ngens
        m = [[0] * cols for _ in range(rows)]
        for i in summ[b]:
            for k in range(f.ngens(i)):
                m[offs[b][i] + k][offs[a][i] + k] = 1
        maps[(a, b)] = IntMatrix.from_rows(m, cols) if rows else IntMatrix.zeros(0, cols)
    fp = AbDiagram(base, vals, maps)
    lam = {i0: vstack([f.map(i0, i) for i in summ[i0]], f.ngens(i0)) for i0 in base.names}
    inc = NatTransform(f, fp, lam)
    c, proj = quotient_diagram(fp, lam)
    return ShortExact(f, fp, c, inc, proj)


def default_sections(f: AbDiagram) -> dict[str, IntMatrix | None]:
    """Identity where ``ker(i) = F(i)``, zero elsewhere (``None`` marks zero)."""
    out: dict[str, IntMatrix | None] = {}
    for i in f.base.names:
        n = f.ngens(i)
        kb = ker_object(f, i)
        full = lattice_contains(kb, IntMatrix.identity(n))
        out[i] = IntMatrix.identity(n) if full else None
    return out


def build_ker_prime_inverse(
    f: AbDiagram,
    section_choice: Mapping[str, IntMatrix | None] | None = None,
) -> tuple[AbDiagram, NatTransform, AbDiagram]:
    """``ker'(i0) = ⊕_{i0 -> i} ker(i)`` with ``λ: F => ker'`` and ``C1 = coker λ``.

    ``section_choice[i]`` is a matrix ``F(i) -> F(i)`` (ambient generators)
    whose image lies in ``ker(i)``; ``None`` means the zero map.  Raises
    :class:`NotMonic` when the resulting ``λ`` is not a monomorphism.
    """
    seq = ker_prime_inverse_sequence(f, section_choice)
    return seq.mid, seq.inc, seq.quo


def ker_prime_inverse_sequence(
    f: AbDiagram, section_choice: Mapping[str, IntMatrix | None] | None = None
) -> ShortExact:
    base = f.base
    secs = dict(default_sections(f))
    if section_choice is not None:
        secs.update(section_choice)
    kpres: dict[str, PresentedGroup] = {}
    kbasis: dict[str, IntMatrix] = {}
    for i in base.names:
        pres, b = Subquotient(f.ngens(i), ker_object(f, i), f.rel(i)).as_presented()
        kpres[i], kbasis[i] = pres, b
    summ = {i0: _summands(base, i0, "above") for i0 in base.names}
    offs = {}
    for i0 in base.names:
        o, off = {}, 0
        for i in summ[i0]:
            o[i] = off
            off += kpres[i].ngens
        offs[i0] = o
    vals = {
        i0: PresentedGroup(sum(kpres[i].ngens for i in summ[i0]), block_diag([kpres[i].relations for i in summ[i0]]))
        for i0 in base.names
    }
    maps = {}
    for a, b in base.degree_one_arrows:
        rows, cols = vals[b].ngens, vals[a].ngens
        m = [[0] * cols for _ in range(rows)]
        for i in summ[b]:
            for k in range(kpres[i].ngens):
                m[offs[b][i] + k][offs[a][i] + k] = 1
        maps[(a, b)] = IntMatrix.from_rows(m, cols) if rows else IntMatrix.zeros(0, cols)
    kp = AbDiagram(base, vals, maps)
    # s_i expressed in ker(i)-basis coordinates
    sec_coords: dict[str, IntMatrix] = {}
    for i in base.names:
        s = secs.get(i)
        if s is None:
            sec_coords[i] = IntMatrix.zeros(kpres[i].ngens, f.ngens(i))
            continue
        c = LatticeSolver(kbasis[i]).solve_columns(s)
        if c is None:
            raise InvalidInput(f"section at {i} does not land in ker({i})")
        sec_coords[i] = c
    lam = {
        i0: vstack([sec_coords[i] @ f.map(i0, i) for i in summ[i0]], f.ngens(i0)) for i0 in base.names
    }
    inc = NatTransform(f, kp, lam)
    if not inc.is_monic():
        raise NotMonic("λ: F => ker' is not a monomorphism for the chosen sections")
    c, proj = quotient_diagram(kp, lam)
    return ShortExact(f, kp, c, inc, proj)


# ---------------------------------------------------------------------------
# colimit and limit
# ---------------------------------------------------------------------------


def _layout(f: AbDiagram) -> dict[str, int]:
    return _offsets(f, f.base.names)


def colimit_presentation(f: AbDiagram) -> Subquotient:
    """``colim F`` as ``⊕F(i)`` modulo relations and ``F(a)x - x`` for every cover arrow."""
    off = _layout(f)
    n = f.total_rank()
    cols = []
    for a, b in f.base.degree_one_arrows:
        m = f.cover_map(a, b)
        for k in range(f.ngens(a)):
            c = [0] * n
            c[off[a] + k] -= 1
            for r in range(f.ngens(b)):
                c[off[b] + r] += m[r, k]
            cols.append(c)
    rel = block_diag([f.rel(i) for i in f.base.names])
    return Subquotient(n, IntMatrix.identity(n), hstack([rel, IntMatrix.from_columns(cols, n)], n))


def limit_presentation(f: AbDiagram) -> Subquotient:
    """``lim F`` as compatible families in ``⊕F(i)`` modulo relations."""
    off = _layout(f)
    n = f.total_rank()
    blocks = []
    tgt_rels = []
    for a, b in f.base.degree_one_arrows:
        m = f.cover_map(a, b)
        rows = []
        for r in range(f.ngens(b)):
            row = [0] * n
            for k in range(f.ngens(a)):
                row[off[a] + k] += m[r, k]
            row[off[b] + r] -= 1
            rows.append(row)
        blocks.append(IntMatrix.from_rows(rows, n) if rows else IntMatrix.zeros(0, n))
        tgt_rels.append(f.rel(b))
    rel = block_diag([f.rel(i) for i in f.base.names])
    if not blocks:
        return Subquotient(n, IntMatrix.identity(n), rel)
    diff = vstack(blocks, n)
    lat = cycle_lattice(diff, block_diag(tgt_rels))
    return Subquotient(n, hstack([lat, rel], n), rel)


def colimit(f: AbDiagram) -> FgAbGroup:
    return colimit_presentation(f).group()


def limit(f: AbDiagram) -> FgAbGroup:
    return limit_presentation(f).group()
