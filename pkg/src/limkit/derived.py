"""Higher direct and inverse limits through normalized Moore complexes.

For a diagram ``F`` over a finite poset, the nondegenerate ``n``-simplices
of the nerve are the strictly increasing chains ``σ0 < ... < σn``.  The chain
complex has ``C_n = ⊕ F(σ0)`` and computes ``lim_*``; the cochain complex has
``C^n = ∏ F(σn)`` and computes ``lim^*``.

Besides the direct computation this module implements the dimension-shift
recursions (``K_j`` and ``C_j``) and the description of ``lim_1`` by flows on
degree-one arrows, including the reduction of a flow to the core.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Literal, Mapping, Sequence

from .diagram import (
    AbDiagram,
    colimit_presentation,
    f_prime_direct_sequence,
    f_prime_inverse_sequence,
    limit_presentation,
)
from .errors import DimensionMismatch, InvalidInput
from .exactalg import (
    FgAbGroup,
    IntMatrix,
    LatticeSolver,
    PresentedGroup,
    block_diag,
    check_composition,
    cycle_lattice,
    hstack,
    induced_cokernel,
    induced_kernel,
    lattice_quotient,
    presented_homology,
)
from .poset import GradedPoset, core_stages

Chain = tuple[str, ...]


# ---------------------------------------------------------------------------
# Chains of the nerve
# ---------------------------------------------------------------------------


def nerve_chains(p: GradedPoset, n_max: int | None = None) -> list[list[Chain]]:
    """Strictly increasing chains grouped by length, lexicographic in declaration order."""
    top = p.longest_chain if n_max is None else n_max
    out: list[list[Chain]] = [[] for _ in range(max(top, 0) + 1)]
    if not len(p):
        return out

    def extend(ch: Chain) -> None:
        out[len(ch) - 1].append(ch)
        if len(ch) - 1 == top:
            return
        for nxt in p.ordered(p.above(ch[-1])):
            extend(ch + (nxt,))

    for start in p.names:
        extend((start,))
    return out


# ---------------------------------------------------------------------------
# Complexes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """A finite (co)chain complex whose terms are presented groups.

    ``kind == "chain"``: ``diffs[n]`` maps degree ``n`` to ``n-1``.
    ``kind == "cochain"``: ``diffs[n]`` maps degree ``n`` to ``n+1``.
    ``bases[n]`` lists the chains indexing the summands of degree ``n`` and
    ``offsets[n][σ]`` is the first generator of the summand of ``σ``.
    """

    kind: Literal["chain", "cochain"]
    bases: tuple[tuple[Chain, ...], ...]
    terms: tuple[PresentedGroup, ...]
    diffs: tuple[IntMatrix, ...]
    offsets: tuple[dict[Chain, int], ...]
    sizes: tuple[dict[Chain, int], ...]

    @property
    def top(self) -> int:
        return len(self.terms) - 1

    @property
    def step(self) -> int:
        return -1 if self.kind == "chain" else 1

    def rank(self, n: int) -> int:
        return self.terms[n].ngens if 0 <= n <= self.top else 0

    def rel(self, n: int) -> IntMatrix:
        if 0 <= n <= self.top:
            return self.terms[n].relations
        return IntMatrix.zeros(0, 0)

    def diff_from(self, n: int) -> IntMatrix:
        """Differential leaving degree ``n`` (zero map when it leaves the range)."""
        if 0 <= n <= self.top:
            return self.diffs[n]
        tgt = n + self.step
        return IntMatrix.zeros(self.rank(tgt), 0)

    def diff_into(self, n: int) -> IntMatrix:
        src = n - self.step
        if 0 <= src <= self.top:
            return self.diffs[src]
        return IntMatrix.zeros(self.rank(n), 0)

    def check(self) -> None:
        """Raise unless every composite of consecutive differentials vanishes."""
        for n in range(self.top + 1):
            nxt = n + self.step
            if 0 <= nxt <= self.top:
                check_composition(self.diffs[n], self.diffs[nxt], self.rel(nxt + self.step) if 0 <= nxt + self.step <= self.top else None)

    def homology(self, n: int) -> FgAbGroup:
        if not 0 <= n <= self.top:
            return FgAbGroup()
        return presented_homology(self.diff_into(n), self.diff_from(n), self.rel(n), self.rel(n + self.step))

    def all_homology(self) -> list[FgAbGroup]:
        return [self.homology(n) for n in range(self.top + 1)]


def moore_chain_complex(f: AbDiagram, n_max: int | None = None) -> ChainComplex:
    """Normalized chain complex ``C_n = ⊕_σ F(σ0)`` with ``d = Σ (-1)^i d_i``."""
    return _moore(f, n_max, "chain")


def moore_cochain_complex(f: AbDiagram, n_max: int | None = None) -> ChainComplex:
    """Normalized cochain complex ``C^n = ∏_σ F(σn)``."""
    return _moore(f, n_max, "cochain")


def _moore(f: AbDiagram, n_max: int | None, kind: str) -> ChainComplex:
    chains = nerve_chains(f.base, n_max)
    while len(chains) > 1 and not chains[-1]:
        chains.pop()
    pick = (lambda ch: ch[0]) if kind == "chain" else (lambda ch: ch[-1])
    offsets, sizes, terms = [], [], []
    for level in chains:
        off, sz, o = {}, {}, 0
        for ch in level:
            off[ch] = o
            sz[ch] = f.ngens(pick(ch))
            o += sz[ch]
        offsets.append(off)
        sizes.append(sz)
        terms.append(PresentedGroup(o, block_diag([f.rel(pick(ch)) for ch in level]) if level else IntMatrix.zeros(0, 0)))
    diffs = []
    top = len(chains) - 1
    for n, level in enumerate(chains):
        if kind == "chain":
            tgt_n = n - 1
            if tgt_n < 0:
                diffs.append(IntMatrix.zeros(0, terms[0].ngens))
                continue
            m = [[0] * terms[n].ngens for _ in range(terms[tgt_n].ngens)]
            for ch in level:
                c0 = offsets[n][ch]
                for i in range(n + 1):
                    face = ch[:i] + ch[i + 1 :]
                    r0 = offsets[tgt_n][face]
                    sgn = -1 if i % 2 else 1
                    if i == 0:
                        blk = f.map(ch[0], ch[1])
                        for r in range(blk.rows):
                            for k in range(blk.cols):
                                if blk[r, k]:
                                    m[r0 + r][c0 + k] += sgn * blk[r, k]
                    else:
                        for k in range(sizes[n][ch]):
                            m[r0 + k][c0 + k] += sgn
            diffs.append(IntMatrix.from_rows(m, terms[n].ngens) if m else IntMatrix.zeros(0, terms[n].ngens))
        else:
            tgt_n = n + 1
            if tgt_n > top:
                diffs.append(IntMatrix.zeros(0, terms[n].ngens))
                continue
            m = [[0] * terms[n].ngens for _ in range(terms[tgt_n].ngens)]
            for tau in chains[tgt_n]:
                r0 = offsets[tgt_n][tau]
                for i in range(tgt_n + 1):
                    face = tau[:i] + tau[i + 1 :]
                    c0 = offsets[n][face]
                    sgn = -1 if i % 2 else 1
                    if i == tgt_n:
                        blk = f.map(tau[-2], tau[-1])
                        for r in range(blk.rows):
                            for k in range(blk.cols):
                                if blk[r, k]:
                                    m[r0 + r][c0 + k] += sgn * blk[r, k]
                    else:
                        for k in range(sizes[tgt_n][tau]):
                            m[r0 + k][c0 + k] += sgn
            diffs.append(IntMatrix.from_rows(m, terms[n].ngens) if m else IntMatrix.zeros(0, terms[n].ngens))
    return ChainComplex(
        kind,  # type: ignore[arg-type]
        tuple(tuple(level) for level in chains),
        tuple(terms),
        tuple(diffs),
        tuple(offsets),
        tuple(sizes),
    )


def derived_direct_limits(f: AbDiagram) -> list[FgAbGroup]:
    """``[lim_0 F, lim_1 F, ..., lim_N F]`` with ``N`` the longest chain length."""
    return moore_chain_complex(f).all_homology()


def derived_inverse_limits(f: AbDiagram) -> list[FgAbGroup]:
    """``[lim^0 F, ..., lim^N F]``."""
    return moore_cochain_complex(f).all_homology()


def cohomology(p: GradedPoset) -> list[FgAbGroup]:
    """Integral cohomology of the nerve, ``H^n(P) = lim^n c_Z``."""
    return derived_inverse_limits(AbDiagram.constant(p))


def homology(p: GradedPoset) -> list[FgAbGroup]:
    """Integral homology of the nerve, ``H_n(P) = lim_n c_Z``."""
    return derived_direct_limits(AbDiagram.constant(p))


# ---------------------------------------------------------------------------
# Dimension shifting
# ---------------------------------------------------------------------------


def k_functors(f: AbDiagram, j: int) -> list[AbDiagram]:
    """``[K_0 = F, K_1, ..., K_j]`` with ``K_{m+1} = ker(K_m' -> K_m)``."""
    out = [f]
    for _ in range(j):
        out.append(f_prime_direct_sequence(out[-1]).sub)
    return out


def k_sequence(f: AbDiagram, j: int) -> FgAbGroup:
    """``lim_j F`` computed as ``lim_1 K_{j-1} = ker(colim K_j -> colim K_{j-1}')``.

    Only ordinary colimits are computed, which makes this an independent
    route to the Moore-complex answer.
    """
    if j < 0:
        raise ValueError("j must be nonnegative")
    if j == 0:
        return colimit_presentation(f).group()
    g = f
    for _ in range(j - 1):
        g = f_prime_direct_sequence(g).sub
    seq = f_prime_direct_sequence(g)
    inc = block_diag([seq.inc.component(n) for n in f.base.names])
    return induced_kernel(inc, colimit_presentation(seq.sub), colimit_presentation(seq.mid))


def c_functors(f: AbDiagram, j: int) -> list[AbDiagram]:
    """``[C_0 = F, C_1, ..., C_j]`` with ``C_{m+1} = coker(C_m -> C_m')``."""
    out = [f]
    for _ in range(j):
        out.append(f_prime_inverse_sequence(out[-1]).quo)
    return out


def c_sequence(f: AbDiagram, j: int) -> FgAbGroup:
    """``lim^j F`` computed as ``lim^1 C_{j-1} = coker(lim C_{j-1}' -> lim C_j)``."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    if j == 0:
        return limit_presentation(f).group()
    g = f
    for _ in range(j - 1):
        g = f_prime_inverse_sequence(g).quo
    seq = f_prime_inverse_sequence(g)
    proj = block_diag([seq.proj.component(n) for n in f.base.names])
    return induced_cokernel(proj, limit_presentation(seq.mid), limit_presentation(seq.quo))


# ---------------------------------------------------------------------------
# Flows
# ---------------------------------------------------------------------------

Flow = dict[tuple[str, str], tuple[int, ...]]


@dataclass(frozen=True, eq=False)
class FlowSpace:
    """Coordinates for flows: one block ``F(source)`` per degree-one arrow."""

    diagram: AbDiagram

    @cached_property
    def arrows(self) -> tuple[tuple[str, str], ...]:
        return self.diagram.base.degree_one_arrows

    @cached_property
    def offsets(self) -> dict[tuple[str, str], int]:
        out, o = {}, 0
        for a in self.arrows:
            out[a] = o
            o += self.diagram.ngens(a[0])
        return out

    @property
    def dim(self) -> int:
        return sum(self.diagram.ngens(a) for a, _ in self.arrows)

    def to_vector(self, x: Mapping[tuple[str, str], Sequence[int]]) -> tuple[int, ...]:
        v = [0] * self.dim
        for arr, val in x.items():
            if arr not in self.offsets:
                raise InvalidInput(f"{arr[0]} -> {arr[1]} is not a degree-one arrow")
            n = self.diagram.ngens(arr[0])
            if len(val) != n:
                raise DimensionMismatch(f"flow value on {arr} has length {len(val)}, expected {n}")
            o = self.offsets[arr]
            v[o : o + n] = [int(t) for t in val]
        return tuple(v)

    def from_vector(self, v: Sequence[int]) -> Flow:
        out: Flow = {}
        for arr in self.arrows:
            o = self.offsets[arr]
            val = tuple(v[o : o + self.diagram.ngens(arr[0])])
            if any(val):
                out[arr] = val
        return out

    @cached_property
    def balance(self) -> IntMatrix:
        """Inflow minus outflow at every object, as a matrix on flow coordinates."""
        f = self.diagram
        names = f.base.names
        row_off, o = {}, 0
        for n in names:
            row_off[n] = o
            o += f.ngens(n)
        m = [[0] * self.dim for _ in range(o)]
        for (a, b) in self.arrows:
            c0 = self.offsets[(a, b)]
            blk = f.cover_map(a, b)
            for r in range(blk.rows):
                for k in range(blk.cols):
                    m[row_off[b] + r][c0 + k] += blk[r, k]
            for k in range(f.ngens(a)):
                m[row_off[a] + k][c0 + k] -= 1
        return IntMatrix.from_rows(m, self.dim) if m else IntMatrix.zeros(0, self.dim)

    @cached_property
    def object_relations(self) -> IntMatrix:
        f = self.diagram
        return block_diag([f.rel(n) for n in f.base.names])

    @cached_property
    def arrow_relations(self) -> IntMatrix:
        f = self.diagram
        return block_diag([f.rel(a) for a, _ in self.arrows]) if self.arrows else IntMatrix.zeros(0, 0)

    @cached_property
    def trivial_flows(self) -> IntMatrix:
        """Span of minimal trivial flows that are supported on degree-one arrows.

        Minimal trivial flows live on all arrows (``x`` on ``a``, ``-x`` on
        ``b∘a``, ``F(a)x`` on ``b``); the ones we want are the elements of
        their span (plus relations) whose coordinates on longer arrows vanish.
        """
        f = self.diagram
        p = f.base
        pairs = [(a, b) for a in p.names for b in p.ordered(p.above(a))]
        off, o = {}, 0
        for pr in pairs:
            off[pr] = o
            o += f.ngens(pr[0])
        gens: list[list[int]] = []
        for ch in nerve_chains(p, 2)[2] if p.longest_chain >= 2 else []:
            i0, i1, i2 = ch
            fa = f.map(i0, i1)
            for k in range(f.ngens(i0)):
                c = [0] * o
                c[off[(i0, i1)] + k] += 1
                c[off[(i0, i2)] + k] -= 1
                for r in range(fa.rows):
                    c[off[(i1, i2)] + r] += fa[r, k]
                gens.append(c)
        for pr in pairs:
            rel = f.rel(pr[0])
            for j in range(rel.cols):
                c = [0] * o
                c[off[pr] : off[pr] + rel.rows] = rel.column(j)
                gens.append(c)
        if not gens:
            return IntMatrix.zeros(self.dim, 0)
        g = IntMatrix.from_columns(gens, o)
        deg1 = set(self.arrows)
        long_rows = [off[pr] + k for pr in pairs if pr not in deg1 for k in range(f.ngens(pr[0]))]
        short_rows = [off[pr] + k for pr in self.arrows for k in range(f.ngens(pr[0]))]
        combos = cycle_lattice(g.select_rows(long_rows), IntMatrix.zeros(len(long_rows), 0))
        return g.select_rows(short_rows) @ combos

    @cached_property
    def flow_lattice(self) -> IntMatrix:
        return cycle_lattice(self.balance, self.object_relations)


def is_flow(f: AbDiagram, x: Mapping[tuple[str, str], Sequence[int]]) -> bool:
    """Inflow equals outflow at every object (modulo relations)."""
    fs = FlowSpace(f)
    bal = fs.balance.apply(fs.to_vector(x))
    if not any(bal):
        return True
    rel = fs.object_relations
    return rel.cols > 0 and LatticeSolver(rel).contains(bal)


def lim1_via_flows(f: AbDiagram) -> FgAbGroup:
    """``lim_1 F`` as flows modulo trivial flows supported in degree one."""
    fs = FlowSpace(f)
    return lattice_quotient(fs.flow_lattice, hstack([fs.trivial_flows, fs.arrow_relations], fs.dim))


def same_lim1_class(f: AbDiagram, x: Mapping, y: Mapping) -> bool:
    """Whether two flows represent the same element of ``lim_1 F``."""
    fs = FlowSpace(f)
    vx, vy = fs.to_vector(x), fs.to_vector(y)
    diff = tuple(a - b for a, b in zip(vx, vy))
    if not any(diff):
        return True
    gens = hstack([fs.trivial_flows, fs.arrow_relations], fs.dim)
    return gens.cols > 0 and LatticeSolver(gens).contains(diff)


def reduce_flow_to_core(f: AbDiagram, x: Mapping[tuple[str, str], Sequence[int]]) -> Flow:
    """An equivalent flow supported on arrows of ``core(P)``.

    Sources removed by the core construction have a connected (or empty)
    starred under-slice.  The mass leaving such a source is pushed along
    undirected paths inside the slice onto a single arrow, where it sums to
    zero; each push adds a minimal trivial flow, so the class is unchanged.
    """
    if not is_flow(f, x):
        raise InvalidInput("input is not a flow")
    fs = FlowSpace(f)
    cur: dict[tuple[str, str], list[int]] = {a: list(v) for a, v in fs.from_vector(fs.to_vector(x)).items()}

    def get(arr: tuple[str, str]) -> list[int]:
        if arr not in cur:
            cur[arr] = [0] * f.ngens(arr[0])
        return cur[arr]

    def add(arr: tuple[str, str], vec: Sequence[int], sgn: int) -> None:
        tgt = get(arr)
        for k, v in enumerate(vec):
            tgt[k] += sgn * v

    for poset, removed in core_stages(f.base):
        for i0 in removed:
            outs = list(poset.successors[i0])
            if not outs:
                continue
            star = outs[0]
            slice_names = set(poset.above(i0))
            for u in outs[1:]:
                mass = list(get((i0, u)))
                if not any(mass):
                    continue
                path = _undirected_path(poset, slice_names, u, star)
                # generalized-flow entries on (i0, v) for v in the slice
                for v, w in zip(path, path[1:]):
                    if w in poset.successors[v]:
                        add((v, w), f.map(i0, v).apply(mass), -1)
                    else:
                        add((w, v), f.map(i0, w).apply(mass), +1)
                add((i0, u), mass, -1)
                add((i0, star), mass, +1)
            # what is left on (i0, star) is the total outflow: zero modulo relations
            left = get((i0, star))
            if any(left) and not f.value(i0).is_zero_element(left):
                raise AssertionError("outflow of a source did not vanish")
            cur[(i0, star)] = [0] * f.ngens(i0)
    return {a: tuple(v) for a, v in cur.items() if any(v)}


def _undirected_path(p: GradedPoset, allowed: set[str], start: str, goal: str) -> list[str]:
    prev = {start: start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        if v == goal:
            break
        for w in list(p.successors[v]) + list(p.predecessors[v]):
            if w in allowed and w not in prev:
                prev[w] = v
                queue.append(w)
    if goal not in prev:
        raise InvalidInput(f"no path from {start} to {goal} inside the slice")
    path = [goal]
    while path[-1] != start:
        path.append(prev[path[-1]])
    return path[::-1]
