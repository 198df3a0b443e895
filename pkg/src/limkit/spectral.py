"""Spectral sequences of the eight chain-filtrations of the Moore complexes.

Each variant filters the normalized chain complex (``lim_*``) or cochain
complex (``lim^*``) by the degree of the first or last object of a chain.
Pages are computed exactly from the filtered lattices:

``E_r^s = Z_r^s / (Z_{r-1}^{s-1} + d Z_{r-1}^{s+r-1})`` with
``Z_r^s = {x in F_s : dx in F_{s-r}}``,

where ``s`` indexes an increasing filtration preserved by ``d``.  Relations
of the diagram values sit in single chains, so "modulo relations" is handled
blockwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

from .derived import ChainComplex, moore_chain_complex, moore_cochain_complex
from .diagram import AbDiagram
from .errors import InvalidInput, UnboundedFiltration
from .exactalg import (
    FgAbGroup,
    IntMatrix,
    LatticeSolver,
    PresentedGroup,
    cycle_lattice,
    hstack,
    image_basis,
    lattice_contains,
    lattice_quotient,
    presented_homology,
)


@dataclass(frozen=True)
class Variant:
    """One row of the table of filtrations."""

    row: int
    complex: Literal["chain", "cochain"]
    orientation: Literal["increasing", "decreasing"]
    end: Literal["first", "last"]
    relation: Literal["<=", ">="]

    def describe(self) -> str:
        obj = "σ0" if self.end == "first" else "σn"
        kind = "C_*" if self.complex == "chain" else "C^*"
        return f"row {self.row}: {kind}, {self.orientation} degree, deg({obj}) {self.relation} p"


VARIANTS: dict[int, Variant] = {
    1: Variant(1, "chain", "decreasing", "last", ">="),
    2: Variant(2, "chain", "decreasing", "first", "<="),
    3: Variant(3, "chain", "increasing", "last", "<="),
    4: Variant(4, "chain", "increasing", "first", ">="),
    5: Variant(5, "cochain", "decreasing", "last", "<="),
    6: Variant(6, "cochain", "decreasing", "first", ">="),
    7: Variant(7, "cochain", "increasing", "last", ">="),
    8: Variant(8, "cochain", "increasing", "first", "<="),
}


@dataclass(frozen=True, eq=False)
class FilteredComplex:
    """A Moore complex with a filtration value ``key`` on every basis chain.

    ``s = sign * key`` is the increasing filtration index: ``F_s`` is spanned
    by the chains with index at most ``s``.
    """

    diagram: AbDiagram
    complex: ChainComplex
    variant: Variant
    keys: tuple[dict[tuple[str, ...], int], ...]
    sign: int

    @property
    def levels(self) -> list[int]:
        """Filtration values ``p`` (in the variant's own convention) that occur."""
        return sorted({k for level in self.keys for k in level.values()})

    def s_of(self, n: int, chain: tuple[str, ...]) -> int:
        return self.sign * self.keys[n][chain]

    @property
    def s_range(self) -> tuple[int, int]:
        vals = [self.sign * k for level in self.keys for k in level.values()]
        if not vals:
            return (0, 0)
        return (min(vals), max(vals))

    def generator_levels(self, n: int) -> list[int]:
        """Filtration index ``s`` of every generator of degree ``n``."""
        if not 0 <= n <= self.complex.top:
            return []
        out = [0] * self.complex.rank(n)
        for ch, o in self.complex.offsets[n].items():
            for k in range(self.complex.sizes[n][ch]):
                out[o + k] = self.s_of(n, ch)
        return out


def _variant_degree(diagram: AbDiagram, v: Variant) -> dict[str, int]:
    base = diagram.base
    if base.orientation == v.orientation:
        return {n: base.deg(n) for n in base.names}
    top = base.max_degree
    return {n: top - base.deg(n) for n in base.names}


def build_filtered(f: AbDiagram, variant: int | Variant) -> FilteredComplex:
    """Filter the appropriate Moore complex according to a table row (1..8)."""
    v = VARIANTS[variant] if isinstance(variant, int) else variant
    if v.row not in VARIANTS:
        raise InvalidInput(f"unknown variant {variant}")
    cx = moore_chain_complex(f) if v.complex == "chain" else moore_cochain_complex(f)
    deg = _variant_degree(f, v)
    pick = 0 if v.end == "first" else -1
    keys = tuple({ch: deg[ch[pick]] for ch in level} for level in cx.bases)
    sign = 1 if v.relation == "<=" else -1
    fc = FilteredComplex(f, cx, v, keys, sign)
    _assert_filtered(fc)
    return fc


def _assert_filtered(fc: FilteredComplex) -> None:
    cx = fc.complex
    for n in range(cx.top + 1):
        tgt = n + cx.step
        if not 0 <= tgt <= cx.top:
            continue
        src_lv, tgt_lv = fc.generator_levels(n), fc.generator_levels(tgt)
        d = cx.diffs[n]
        for j in range(d.cols):
            for i in range(d.rows):
                if d[i, j] and tgt_lv[i] > src_lv[j]:
                    raise InvalidInput(f"{fc.variant.describe()} is not preserved by the differential")


# ---------------------------------------------------------------------------
# Pages
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Entry:
    """``E_r^s`` in total degree ``n`` as a presented group on a lattice basis."""

    basis: IntMatrix  # columns in ambient coordinates of degree n
    group: PresentedGroup

    @property
    def value(self) -> FgAbGroup:
        return self.group.group()


@dataclass(frozen=True, eq=False)
class Page:
    """Page ``r``; ``entries[(p, q)]`` uses display indices ``p = key``, ``q = n - p``."""

    r: int
    entries: dict[tuple[int, int], FgAbGroup]
    raw: dict[tuple[int, int], Entry] = field(repr=False)  # keyed by (s, n)
    differentials: dict[tuple[int, int], IntMatrix] = field(repr=False)  # (s, n) -> matrix of d_r
    step: int = field(default=-1, repr=False)  # total-degree shift of d_r

    def differentials_vanish(self) -> bool:
        """Every ``d_r`` induces the zero map (matrices are compared modulo target relations)."""
        for (s, n), d in self.differentials.items():
            if d.is_zero():
                continue
            tgt = self.raw.get((s - self.r, n + self.step))
            if tgt is None or not lattice_contains(tgt.group.relations, d):
                return False
        return True

    def total_degree(self, n: int) -> list[FgAbGroup]:
        return [g for (p, q), g in sorted(self.entries.items()) if p + q == n]

    def nonzero(self) -> dict[tuple[int, int], FgAbGroup]:
        return {k: g for k, g in self.entries.items() if not g.is_zero}

    def grid(self) -> str:
        """Text grid: rows are ``q`` (descending), columns are ``p``."""
        if not self.entries:
            return f"E_{self.r}: empty"
        ps = sorted({p for p, _ in self.entries})
        qs = sorted({q for _, q in self.entries}, reverse=True)
        cells = {k: str(g) for k, g in self.entries.items()}
        width = max([len(c) for c in cells.values()] + [3])
        lines = [f"E_{self.r}"]
        for q in qs:
            lines.append(f"q={q:>3} | " + "  ".join(cells.get((p, q), ".").rjust(width) for p in ps))
        lines.append("        " + "  ".join(f"p={p}".rjust(width) for p in ps))
        return "\n".join(lines)


class _PageEngine:
    """Lattice computations shared by all pages of one filtered complex."""

    INF = 10**9

    def __init__(self, fc: FilteredComplex) -> None:
        self.fc = fc
        self.cx = fc.complex
        self.levels = {n: fc.generator_levels(n) for n in range(self.cx.top + 1)}
        lo, hi = fc.s_range
        self.bottom, self.top = lo - 1, hi
        self._z: dict[tuple[int, int, int], IntMatrix] = {}

    def rank(self, n: int) -> int:
        return self.cx.rank(n)

    def inside(self, n: int, s: int) -> list[int]:
        return [i for i, lv in enumerate(self.levels.get(n, [])) if lv <= s]

    def project(self, n: int, s: int, m: IntMatrix) -> IntMatrix:
        keep = set(self.inside(n, s))
        rows = [list(m.row(i)) if i in keep else [0] * m.cols for i in range(m.rows)]
        return IntMatrix.from_rows(rows, m.cols) if rows else IntMatrix.zeros(0, m.cols)

    def embed(self, n: int, idx: list[int], m: IntMatrix) -> IntMatrix:
        full = [[0] * m.cols for _ in range(self.rank(n))]
        for k, i in enumerate(idx):
            full[i] = list(m.row(k))
        return IntMatrix.from_rows(full, m.cols) if full else IntMatrix.zeros(0, m.cols)

    def clamp(self, s: int) -> int:
        return max(self.bottom, min(self.top, s))

    def Z(self, n: int, s: int, bound: int) -> IntMatrix:
        """Generators (ambient columns) of ``{x in F_s : dx in F_bound + relations}``."""
        s, bound = self.clamp(s), self.clamp(bound)
        key = (n, s, bound)
        hit = self._z.get(key)
        if hit is not None:
            return hit
        idx = self.inside(n, s)
        tgt = n + self.cx.step
        if bound >= s or not 0 <= tgt <= self.cx.top:
            out = self.embed(n, idx, IntMatrix.identity(len(idx)))
        else:
            d = self.cx.diff_from(n).select_columns(idx)
            outside = [i for i, lv in enumerate(self.levels[tgt]) if lv > bound]
            rel = self.cx.rel(tgt).select_rows(outside)
            out = self.embed(n, idx, cycle_lattice(d.select_rows(outside), rel))
        self._z[key] = out
        return out

    def relations_in(self, n: int, s: int) -> IntMatrix:
        rel = self.cx.rel(n)
        keep = set(self.inside(n, s))
        cols = [j for j in range(rel.cols) if all(i in keep for i, x in enumerate(rel.column(j)) if x)]
        return rel.select_columns(cols)

    def numerator(self, n: int, s: int, r: int) -> IntMatrix:
        return self.Z(n, s, s - r if r < self.INF else self.bottom)

    def denominators(self, n: int, s: int, r: int) -> IntMatrix:
        src = n - self.cx.step
        finite = r < self.INF
        parts = [self.Z(n, s - 1, s - r if finite else self.bottom), self.relations_in(n, s)]
        if 0 <= src <= self.cx.top:
            zin = self.Z(src, s + r - 1 if finite else self.top, s)
            parts.append(self.project(n, s, self.cx.diff_from(src) @ zin))
        return hstack(parts, self.rank(n))

    def entry(self, n: int, s: int, r: int) -> Entry:
        basis = image_basis(self.numerator(n, s, r))
        coords = LatticeSolver(basis).solve_columns(self.denominators(n, s, r))
        if coords is None:
            raise AssertionError("page denominator escapes the cycle lattice")
        return Entry(basis, PresentedGroup(basis.cols, coords))

    def differential(self, n: int, s: int, r: int, src: Entry, tgt: Entry) -> IntMatrix:
        """Matrix of ``d_r: E_r^s(n) -> E_r^{s-r}(n+step)`` on the entry bases."""
        tn = n + self.cx.step
        if not 0 <= tn <= self.cx.top:
            return IntMatrix.zeros(0, src.basis.cols)
        img = self.project(tn, s - r, self.cx.diff_from(n) @ src.basis)
        coords = LatticeSolver(tgt.basis).solve_columns(img)
        if coords is None:
            raise AssertionError("d_r leaves the target cycle lattice")
        return coords


def _page(engine: _PageEngine, r: int) -> Page:
    fc = engine.fc
    lo, hi = fc.s_range
    raw: dict[tuple[int, int], Entry] = {}
    for n in range(engine.cx.top + 1):
        for s in range(lo, hi + 1):
            raw[(s, n)] = engine.entry(n, s, r)
    diffs: dict[tuple[int, int], IntMatrix] = {}
    if r < engine.INF:
        for (s, n), e in raw.items():
            tn, ts = n + engine.cx.step, s - r
            if (ts, tn) in raw:
                diffs[(s, n)] = engine.differential(n, s, r, e, raw[(ts, tn)])
            else:
                diffs[(s, n)] = IntMatrix.zeros(0, e.basis.cols)
    entries = {}
    for (s, n), e in raw.items():
        p = fc.sign * s
        entries[(p, n - p)] = e.value
    return Page(r, entries, raw, diffs, engine.cx.step)


def pages(fc: FilteredComplex, r_max: int | None = None) -> list[Page]:
    """Pages ``E_1, E_2, ...`` up to ``r_max`` or up to the collapse page.

    Filtrations of finite posets are bounded: with ``s`` ranging over an
    interval of length ``L`` every ``d_r`` with ``r > L`` vanishes, so the
    sequence collapses by page ``L + 1 <= N + 2`` for a longest chain of
    length ``N``.
    """
    lo, hi = fc.s_range
    if hi - lo > 10**4:
        raise UnboundedFiltration("filtration range is too large to be bounded in practice")
    engine = _PageEngine(fc)
    bound = hi - lo + 1
    last = bound if r_max is None else min(r_max, bound)
    out = [_page(engine, r) for r in range(1, max(last, 1) + 1)]
    if r_max is None:
        while len(out) > 1 and out[-2].differentials_vanish():
            out.pop()
    return out


def collapse_page(fc: FilteredComplex) -> int:
    """Smallest ``r`` with ``d_k = 0`` for every ``k >= r``."""
    return pages(fc)[-1].r


def e_infinity(fc: FilteredComplex) -> Page:
    """``E_∞ = G_s / G_{s-1}`` with ``G_s`` the image of ``H(F_s)`` in ``H(C)``."""
    return _page(_PageEngine(fc), _PageEngine.INF)


def page_homology(page: Page, step: int) -> dict[tuple[int, int], FgAbGroup]:
    """``H(E_r, d_r)`` keyed by ``(s, n)``; should equal ``E_{r+1}``."""
    r = page.r
    out = {}
    for (s, n), e in page.raw.items():
        d_out = page.differentials[(s, n)]
        tgt = page.raw.get((s - r, n + step))
        src_key = (s + r, n - step)
        src = page.raw.get(src_key)
        d_in = page.differentials[src_key] if src is not None else IntMatrix.zeros(e.basis.cols, 0)
        r_out = tgt.group.relations if tgt is not None else IntMatrix.zeros(0, 0)
        out[(s, n)] = presented_homology(d_in, d_out, e.group.relations, r_out)
    return out


def raw_values(page: Page) -> dict[tuple[int, int], FgAbGroup]:
    return {k: e.value for k, e in page.raw.items()}


# ---------------------------------------------------------------------------
# Convergence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DegreeReport:
    n: int
    target: FgAbGroup
    rank_sum: int
    torsion_product: int
    subquotients_match: bool

    @property
    def ranks_ok(self) -> bool:
        return self.rank_sum == self.target.free_rank

    @property
    def torsion_ok(self) -> bool:
        return self.torsion_product == self.target.torsion_order

    @property
    def torsion_divides(self) -> bool:
        return self.torsion_product % self.target.torsion_order == 0


@dataclass(frozen=True)
class ConvergenceReport:
    variant: Variant
    degrees: tuple[DegreeReport, ...]

    @property
    def ok(self) -> bool:
        """Rank sums and torsion-order products agree in every total degree."""
        return all(d.ranks_ok and d.torsion_ok for d in self.degrees)

    @property
    def exact_ok(self) -> bool:
        """Ranks agree and each ``E_∞`` entry is the matching filtration quotient of the target."""
        return all(d.ranks_ok and d.subquotients_match and d.torsion_divides for d in self.degrees)

    @property
    def mismatches(self) -> list[str]:
        out = []
        for d in self.degrees:
            if not d.ranks_ok:
                out.append(f"n={d.n}: E_inf rank sum {d.rank_sum} vs target rank {d.target.free_rank}")
            if not d.torsion_ok:
                out.append(
                    f"n={d.n}: E_inf torsion product {d.torsion_product} vs target torsion order {d.target.torsion_order}"
                )
            if not d.subquotients_match:
                out.append(f"n={d.n}: E_inf entries differ from the filtration quotients of the target")
        return out


def check_weak_convergence(fc: FilteredComplex, target: list[FgAbGroup]) -> ConvergenceReport:
    """Compare ``E_∞`` with the target along each total degree.

    Besides the rank and torsion-order bookkeeping, every ``E_∞`` entry is
    compared with ``G_s / G_{s-1}`` where ``G_s = (Z ∩ F_s + B) / B`` is
    computed inside the full homology.
    """
    engine = _PageEngine(fc)
    einf = _page(engine, engine.INF)
    lo, hi = fc.s_range
    cx = fc.complex
    reports = []
    for n in range(max(cx.top, len(target) - 1) + 1):
        tgt = target[n] if n < len(target) else FgAbGroup()
        vals = [einf.raw[(s, n)].value for s in range(lo, hi + 1)] if n <= cx.top else []
        rank_sum = sum(v.free_rank for v in vals)
        tors = 1
        for v in vals:
            tors *= v.torsion_order
        sub_ok = True
        if n <= cx.top:
            bnd = hstack(
                [cx.diff_into(n), cx.rel(n)], cx.rank(n)
            )
            for s in range(lo, hi + 1):
                upper = hstack([engine.Z(n, s, engine.bottom), bnd], cx.rank(n))
                lower = hstack([engine.Z(n, s - 1, engine.bottom), bnd], cx.rank(n))
                if lattice_quotient(upper, lower) != einf.raw[(s, n)].value:
                    sub_ok = False
        reports.append(DegreeReport(n, tgt, rank_sum, tors, sub_ok))
    return ConvergenceReport(fc.variant, tuple(reports))
