"""Covering families, the ``F_p`` tower and acyclicity certificates.

Everything here lives on a bounded above graded poset with *decreasing*
degree: arrows lower the degree and every maximal element (an object with
no outgoing arrow) has degree 0.  ``(i0↓P)_p`` denotes the objects ``i``
with an arrow ``i0 -> i`` (identity included) and ``deg(i) = p``.

The tower starts at ``F_0 = c_Z`` and is continued through the short exact
sequences ``0 -> F_p -> ker'_{F_p} -> F_{p+1} -> 0``.  ``F_{p+1}(i0)`` is
stored on the basis given by the section ``δ``: the components of
``ker'(i0)`` outside ``J^{i0}_p``.  Basis labels are chains
``(i_p, ..., i_0)`` of objects of degrees ``p, ..., 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .derived import cohomology
from .diagram import (
    AbDiagram,
    CheckResult,
    NatTransform,
    ShortExact,
    build_ker_prime_inverse,
    ker_group,
    limit,
    limit_presentation,
)
from .errors import InvalidInput, NotSimplexLike
from .exactalg import (
    FgAbGroup,
    IntMatrix,
    LatticeSolver,
    Subquotient,
    determinant,
    image_basis,
    induced_cokernel,
    induced_kernel,
    invariant_diagonal,
    lattice_quotient,
    rank,
    vstack,
)
from .poset import GradedPoset, delta_poset, simplex_name

Label = tuple[str, ...]


# ---------------------------------------------------------------------------
# Preconditions and R numbers
# ---------------------------------------------------------------------------


def bounded_above_problems(p: GradedPoset) -> list[str]:
    """Reasons why ``p`` is not a decreasing poset with all maximal elements in degree 0."""
    out = []
    if p.orientation != "decreasing":
        out.append("poset must have decreasing degree")
    for n in p.names:
        if not p.successors[n] and p.deg(n) != 0:
            out.append(f"maximal element {n} has degree {p.deg(n)}, expected 0")
    return out


def require_bounded_above(p: GradedPoset) -> None:
    problems = bounded_above_problems(p)
    if problems:
        raise InvalidInput("poset does not satisfy the finiteness assumptions", problems)


def layer(p: GradedPoset, i0: str, q: int) -> list[str]:
    """``(i0↓P)_q`` in declaration order (``i0`` itself when ``q = deg(i0)``)."""
    return p.ordered(n for n in set(p.above(i0)) | {i0} if p.deg(n) == q)


@dataclass(frozen=True)
class RTable:
    """``values[i][q] = R^i_q`` for ``0 <= q <= deg(i)``."""

    base: GradedPoset
    values: Mapping[str, tuple[int, ...]]

    def __call__(self, i: str, q: int) -> int:
        row = self.values[i]
        if not 0 <= q < len(row):
            raise InvalidInput(f"R^{i}_{q} is only defined for 0 <= q <= deg({i})")
        return row[q]

    def rows(self) -> list[tuple[str, tuple[int, ...]]]:
        return [(n, tuple(self.values[n])) for n in self.base.names]


def compute_R(p: GradedPoset) -> RTable:
    """``R^i_0 = 1`` and ``R^{i0}_q = Σ_{i in (i0↓P)_{q-1}} R^i_{q-1} - R^{i0}_{q-1}``."""
    require_bounded_above(p)
    vals: dict[str, list[int]] = {n: [1] for n in p.names}
    for q in range(1, p.max_degree + 1):
        for n in p.names:
            if p.deg(n) >= q:
                s = sum(vals[i][q - 1] for i in layer(p, n, q - 1))
                vals[n].append(s - vals[n][q - 1])
    return RTable(p, {n: tuple(v) for n, v in vals.items()})


def delta_R(q: int, p: int) -> int:
    """Closed form of ``R^i_p`` on ``Δ_n`` for ``deg(i) = q``."""
    from math import comb

    return sum((-1) ** (p - l) * comb(q + 1, l) for l in range(p + 1))


# ---------------------------------------------------------------------------
# p-condensed functors
# ---------------------------------------------------------------------------


def check_p_condensed(f: AbDiagram, p: int) -> CheckResult:
    """``F(i) = 0`` below degree ``p`` and ``ker_F(i) = 0`` above degree ``p``."""
    base = f.base
    for n in base.names:
        d = base.deg(n)
        if d < p and not f.group(n).is_zero:
            return CheckResult(False, f"F({n}) = {f.group(n)} is nonzero in degree {d} < {p}")
        if d > p and not ker_group(f, n).is_zero:
            return CheckResult(False, f"ker_F({n}) = {ker_group(f, n)} is nonzero in degree {d} > {p}")
    return CheckResult(True)


@dataclass(frozen=True)
class CondenseStep:
    ker_prime: AbDiagram
    lam: NatTransform
    quotient: AbDiagram
    iso_to_local_limit: Mapping[str, bool]

    @property
    def next_condensed(self) -> bool:
        """``G`` is ``(p+1)``-condensed exactly when every local map is an isomorphism."""
        return all(self.iso_to_local_limit.values())


def local_limit_map(f: AbDiagram, i0: str) -> tuple[IntMatrix, Subquotient, Subquotient]:
    """``F(i0) -> lim over (i0↓P)_*`` as a matrix between subquotients."""
    base = f.base
    sub = base.induced(base.above(i0))
    rf = f.restrict(sub)
    target = limit_presentation(rf)
    m = vstack([f.map(i0, n) for n in sub.names], f.ngens(i0)) if sub.names else IntMatrix.zeros(0, f.ngens(i0))
    source = Subquotient(f.ngens(i0), IntMatrix.identity(f.ngens(i0)), f.rel(i0))
    return m, source, target


def condense_step(f: AbDiagram, p: int) -> CondenseStep:
    """``0 -> F -> ker'_F -> G -> 0`` for a ``p``-condensed ``F``."""
    res = check_p_condensed(f, p)
    if not res:
        raise InvalidInput(f"functor is not {p}-condensed: {res.witness}")
    kp, lam, g = build_ker_prime_inverse(f)
    report = {}
    for i0 in f.base.names:
        if f.base.deg(i0) > p + 1:
            m, a, b = local_limit_map(f, i0)
            report[i0] = induced_kernel(m, a, b).is_zero and induced_cokernel(m, a, b).is_zero
    return CondenseStep(kp, lam, g, report)


# ---------------------------------------------------------------------------
# Covering families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoveringFamily:
    """``sets[i0][q] = J^{i0}_q`` for ``0 <= q <= deg(i0)``."""

    base: GradedPoset
    sets: Mapping[str, tuple[tuple[str, ...], ...]]

    def J(self, i0: str, q: int) -> tuple[str, ...]:
        row = self.sets.get(i0, ())
        return row[q] if 0 <= q < len(row) else ()

    @classmethod
    def from_mapping(cls, base: GradedPoset, data: Mapping[str, Mapping[int, Sequence[str]]]) -> "CoveringFamily":
        sets = {}
        for n in base.names:
            row = data.get(n, {})
            sets[n] = tuple(tuple(base.ordered(row.get(q, ()))) for q in range(base.deg(n) + 1))
        return cls(base, sets)

    def to_mapping(self) -> dict[str, dict[int, list[str]]]:
        return {n: {q: list(s) for q, s in enumerate(row)} for n, row in self.sets.items()}


def validate_covering(p: GradedPoset, fam: CoveringFamily) -> list[str]:
    """Violations of the covering and inheritance conditions; empty when valid."""
    out = bounded_above_problems(p)
    for i0 in p.names:
        d = p.deg(i0)
        row = fam.sets.get(i0)
        if row is None or len(row) != d + 1:
            out.append(f"J^{i0} must list one subset for each 0 <= p <= {d}")
            continue
        for q in range(d + 1):
            extra = set(row[q]) - set(layer(p, i0, q))
            if extra:
                out.append(f"J^{i0}_{q} contains {sorted(extra)} outside (i0↓P)_{q}")
        if tuple(row[d]) != (i0,):
            out.append(f"J^{i0}_{d} must be {{{i0}}}")
        for q in range(d):
            covered: set[str] = set()
            for i in row[q + 1]:
                covered |= set(layer(p, i, q))
            missing = set(layer(p, i0, q)) - covered
            if missing:
                out.append(f"covering fails at {i0}, p={q}: {sorted(missing)} not reached from J^{i0}_{q + 1}")
            for i in row[q + 1]:
                if i not in fam.sets or len(fam.sets[i]) <= q:
                    continue
                if not set(fam.sets[i][q]) <= set(row[q]):
                    out.append(f"inheritance fails: J^{i}_{q} is not contained in J^{i0}_{q}")
    return out


def check_adequate(p: GradedPoset, fam: CoveringFamily, r: RTable | None = None) -> CheckResult:
    """A valid family with connected ``(i0↓P)_*`` for ``deg >= 2`` and ``R^{i0}_q = Σ_{J^{i0}_q} R^i_q``."""
    problems = validate_covering(p, fam)
    if problems:
        return CheckResult(False, problems[0])
    r = r or compute_R(p)
    for i0 in p.names:
        d = p.deg(i0)
        if d >= 2 and not p.induced(p.above(i0)).is_connected():
            return CheckResult(False, f"(i0↓P)_* is disconnected for i0={i0}")
        for q in range(d):
            lhs = r(i0, q)
            rhs = sum(r(i, q) for i in fam.J(i0, q))
            if lhs != rhs:
                return CheckResult(False, f"R^{i0}_{q} = {lhs} but the J-sum is {rhs}")
    return CheckResult(True)


def delta_covering_family(n: int) -> tuple[GradedPoset, CoveringFamily]:
    """The family on ``Δ_n`` of sequences whose largest entry is the largest entry of ``i0``."""
    p = delta_poset(n)
    seqs = {simplex_name(s): s for s in _sequences(n)}
    sets = {}
    for name in p.names:
        top = seqs[name]
        row = []
        for q in range(len(top)):
            row.append(tuple(p.ordered(simplex_name(s) for s in _subsequences(top, q + 1) if s[-1] == top[-1])))
        sets[name] = tuple(row)
    return p, CoveringFamily(p, sets)


def _sequences(n: int) -> list[tuple[int, ...]]:
    from itertools import combinations

    return [c for k in range(1, n + 2) for c in combinations(range(n + 1), k)]


def _subsequences(seq: tuple[int, ...], k: int) -> list[tuple[int, ...]]:
    from itertools import combinations

    return list(combinations(seq, k))


def simplexlike_covering_family(p_op: GradedPoset, order: Sequence[str] | None = None) -> CoveringFamily:
    """Family on ``P^op`` for a simplex-like ``P``, from a total order on degree-0 objects.

    Each ``(i0↓P^op)`` is identified with the nonempty subsets of its
    degree-0 objects; ``J^{i0}_q`` collects the ``q``-faces containing the
    largest vertex of ``i0``.
    """
    require_bounded_above(p_op)
    ok, _ = p_op.opposite().is_simplex_like()
    if not ok:
        raise NotSimplexLike("the opposite poset is not simplex-like")
    verts = p_op.objects_of_degree(0)
    order = list(order) if order is not None else verts
    if sorted(order) != sorted(verts):
        raise InvalidInput("order must list every degree-0 object exactly once")
    rank_of = {v: k for k, v in enumerate(order)}

    def top_vertex(i: str) -> str:
        return max(layer(p_op, i, 0), key=rank_of.__getitem__)

    sets = {}
    for i0 in p_op.names:
        t = top_vertex(i0)
        sets[i0] = tuple(
            tuple(j for j in layer(p_op, i0, q) if top_vertex(j) == t) for q in range(p_op.deg(i0) + 1)
        )
    return CoveringFamily(p_op, sets)


# ---------------------------------------------------------------------------
# The F_p tower
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Tower:
    """``functors[p] = F_p`` with bases, and ``steps[p]`` the sequence ``F_p -> ker' -> F_{p+1}``."""

    base: GradedPoset
    family: CoveringFamily
    functors: tuple[AbDiagram, ...]
    bases: tuple[Mapping[str, tuple[Label, ...]], ...]
    steps: tuple[ShortExact, ...] = field(repr=False)

    def dims(self, q: int) -> dict[str, int]:
        return {n: self.functors[q].ngens(n) for n in self.base.names}

    def dims_match(self, r: RTable) -> list[str]:
        out = []
        for q, f in enumerate(self.functors):
            for n in self.base.names:
                want = r(n, q) if self.base.deg(n) >= q else 0
                if f.ngens(n) != want:
                    out.append(f"dim F_{q}({n}) = {f.ngens(n)} but R = {want}")
        return out


def _unimodular_inverse(m: IntMatrix, where: str) -> IntMatrix:
    if m.rows != m.cols or abs(determinant(m)) != 1:
        raise InvalidInput(f"restriction to J is not an isomorphism at {where}; the family is not adequate")
    inv = LatticeSolver(m).solve_columns(IntMatrix.identity(m.rows))
    assert inv is not None
    return inv


def _tower_step(p: GradedPoset, fam: CoveringFamily, f: AbDiagram, basis: Mapping[str, tuple[Label, ...]], q: int):
    names = p.names
    summ = {i0: layer(p, i0, q) for i0 in names}
    offs: dict[str, dict[str, int]] = {}
    for i0 in names:
        o, k = {}, 0
        for i in summ[i0]:
            o[i] = k
            k += f.ngens(i)
        offs[i0] = o
    kdim = {i0: sum(f.ngens(i) for i in summ[i0]) for i0 in names}

    kmaps = {}
    for a, b in p.degree_one_arrows:
        m = [[0] * kdim[a] for _ in range(kdim[b])]
        for i in summ[b]:
            for t in range(f.ngens(i)):
                m[offs[b][i] + t][offs[a][i] + t] = 1
        kmaps[(a, b)] = IntMatrix.from_rows(m, kdim[a]) if m else IntMatrix.zeros(0, kdim[a])
    kp = AbDiagram.free(p, kdim, kmaps)

    lam = {
        i0: vstack([f.map(i0, i) for i in summ[i0]], f.ngens(i0)) if summ[i0] else IntMatrix.zeros(0, f.ngens(i0))
        for i0 in names
    }

    pi: dict[str, IntMatrix] = {}
    delta: dict[str, IntMatrix] = {}
    nbasis: dict[str, tuple[Label, ...]] = {}
    for i0 in names:
        if p.deg(i0) <= q:
            pi[i0] = IntMatrix.zeros(0, kdim[i0])
            delta[i0] = IntMatrix.zeros(kdim[i0], 0)
            nbasis[i0] = ()
            continue
        J = list(fam.J(i0, q))
        rest = [i for i in summ[i0] if i not in J]
        jrows = [offs[i0][i] + t for i in J for t in range(f.ngens(i))]
        rrows = [offs[i0][i] + t for i in rest for t in range(f.ngens(i))]
        tau = _unimodular_inverse(lam[i0].select_rows(jrows), i0)
        ident = IntMatrix.identity(kdim[i0])
        section = lam[i0] @ tau @ ident.select_rows(jrows)
        pi[i0] = (ident - section).select_rows(rrows)
        delta[i0] = ident.select_columns(rrows)
        nbasis[i0] = tuple((i,) + lab for i in rest for lab in basis[i])

    ndim = {i0: len(nbasis[i0]) for i0 in names}
    nmaps = {}
    for a, b in p.degree_one_arrows:
        if p.deg(b) <= q:
            nmaps[(a, b)] = IntMatrix.zeros(0, ndim[a])
        else:
            nmaps[(a, b)] = pi[b] @ kmaps[(a, b)] @ delta[a]
    g = AbDiagram.free(p, ndim, nmaps)
    seq = ShortExact(f, kp, g, NatTransform(f, kp, lam), NatTransform(kp, g, pi))
    return g, nbasis, seq


def build_Fp_tower(p: GradedPoset, fam: CoveringFamily, p_max: int | None = None) -> Tower:
    """``F_0 = c_Z, F_1, ...`` up to ``p_max`` (default: the top degree)."""
    require_bounded_above(p)
    problems = validate_covering(p, fam)
    if problems:
        raise InvalidInput("not a covering family", problems)
    top = p.max_degree if p_max is None else min(p_max, p.max_degree)
    f = AbDiagram.constant(p)
    basis: dict[str, tuple[Label, ...]] = {n: ((),) for n in p.names}
    functors, bases, steps = [f], [basis], []
    for q in range(top):
        f, basis, seq = _tower_step(p, fam, f, basis, q)
        functors.append(f)
        bases.append(basis)
        steps.append(seq)
    return Tower(p, fam, tuple(functors), tuple(bases), tuple(steps))


def lim_Fp_skeleton(p: GradedPoset, tower: Tower, q: int) -> FgAbGroup:
    """``lim F_q`` computed on the objects of degree ``q`` and ``q+1`` only.

    The full limit is computed as well and the two must agree.
    """
    f = tower.functors[q]
    sub = p.induced(n for n in p.names if p.deg(n) in (q, q + 1))
    small = limit(f.restrict(sub))
    full = limit(f)
    if small != full:
        raise AssertionError(f"skeleton limit {small} differs from full limit {full}")
    return small


# ---------------------------------------------------------------------------
# Global families and the long exact tail
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GlobalFamily:
    """``sets[q] = K_q``, a subset of the degree-``q`` objects."""

    base: GradedPoset
    sets: Mapping[int, tuple[str, ...]]

    def K(self, q: int) -> tuple[str, ...]:
        return tuple(self.sets.get(q, ()))

    @classmethod
    def from_mapping(cls, base: GradedPoset, data: Mapping[int, Sequence[str]]) -> "GlobalFamily":
        return cls(base, {q: tuple(base.ordered(v)) for q, v in data.items()})


class _LimitData:
    """``lim F_q`` as a lattice in ``⊕_i F_q(i)`` (all values are free)."""

    def __init__(self, f: AbDiagram) -> None:
        self.f = f
        self.names = list(f.base.names)
        self.offsets: dict[str, int] = {}
        k = 0
        for n in self.names:
            self.offsets[n] = k
            k += f.ngens(n)
        self.ambient = k
        self.basis = image_basis(limit_presentation(f).sub)

    def rows_of(self, objs: Sequence[str]) -> list[int]:
        return [self.offsets[n] + t for n in objs for t in range(self.f.ngens(n))]


def _is_pure(m: IntMatrix) -> bool:
    return all(d == 1 for d in invariant_diagonal(m))


def _omega(tower: Tower, q: int, cols_from: Sequence[str]) -> IntMatrix:
    """``∏_{cols_from} F_{q-1}(i) -> ⊕_k F_q(k)`` through ``lim ker'`` and ``π``."""
    p = tower.base
    prev = tower.functors[q - 1]
    cur = tower.functors[q]
    pi = tower.steps[q - 1].proj
    col_off, c = {}, 0
    for i in cols_from:
        col_off[i] = c
        c += prev.ngens(i)
    blocks = []
    for k in p.names:
        summ = layer(p, k, q - 1)
        m = [[0] * c for _ in range(cur.ngens(k))]
        comp = pi.component(k)
        o = 0
        for i in summ:
            w = prev.ngens(i)
            if i in col_off:
                for r in range(cur.ngens(k)):
                    for t in range(w):
                        m[r][col_off[i] + t] = comp[r, o + t]
            o += w
        blocks.append(IntMatrix.from_rows(m, c) if m else IntMatrix.zeros(0, c))
    return vstack(blocks, c)


def validate_global(p: GradedPoset, tower: Tower, fam: GlobalFamily) -> list[str]:
    """Monomorphism and purity conditions of a global covering family."""
    out = []
    for q, ks in fam.sets.items():
        bad = [k for k in ks if p.deg(k) != q]
        if bad:
            out.append(f"K_{q} contains objects of the wrong degree: {bad}")
    if out:
        return out
    for q in range(len(tower.functors)):
        lim = _LimitData(tower.functors[q])
        restr = lim.basis.select_rows(lim.rows_of(fam.K(q)))
        mono = rank(restr) == lim.basis.cols
        if q == 0:
            if not (mono and _is_pure(restr)):
                out.append("lim F_0 -> ∏_{K_0} F_0 is not a pure monomorphism")
            continue
        if not mono:
            out.append(f"lim F_{q} -> ∏_{{K_{q}}} F_{q} is not a monomorphism")
        rest = [i for i in p.objects_of_degree(q - 1) if i not in fam.K(q - 1)]
        om = _omega(tower, q, rest).select_rows(lim.rows_of(fam.K(q)))
        if not _is_pure(om):
            out.append(f"∏ F_{q - 1} over Ob_{q - 1} \\ K_{q - 1} -> ∏_{{K_{q}}} F_{q} is not pure")
    return out


def check_global_adequate(p: GradedPoset, fam: GlobalFamily, r: RTable | None = None) -> CheckResult:
    """``Σ_{Ob_{q-1}} R_{q-1} = Σ_{K_{q-1}} R_{q-1} + Σ_{K_q} R_q`` for ``q >= 1``."""
    r = r or compute_R(p)
    for q in range(1, p.max_degree + 2):
        lhs = sum(r(i, q - 1) for i in p.objects_of_degree(q - 1))
        rhs = sum(r(i, q - 1) for i in fam.K(q - 1)) + sum(r(i, q) for i in fam.K(q))
        if lhs != rhs:
            return CheckResult(False, f"counting identity fails at p={q}: {lhs} != {rhs}")
    return CheckResult(True)


@dataclass(frozen=True)
class Certificate:
    verdict: str  # "acyclic" | "not-acyclic"
    k0: int
    components: int
    h0_rank: int | None

    @property
    def acyclic(self) -> bool:
        return self.verdict == "acyclic"


def acyclicity_certificate(p: GradedPoset, fam: CoveringFamily, glob: GlobalFamily, tower: Tower | None = None) -> Certificate:
    """Decide acyclicity from ``|K_0|`` once both families are checked."""
    r = compute_R(p)
    adequate = check_adequate(p, fam, r)
    if not adequate:
        raise InvalidInput("covering family is not adequate", [str(adequate.witness)])
    tower = tower or build_Fp_tower(p, fam)
    problems = validate_global(p, tower, glob)
    if problems:
        raise InvalidInput("not a global covering family", problems)
    gl = check_global_adequate(p, glob, r)
    if not gl:
        raise InvalidInput("global covering family is not adequate", [str(gl.witness)])
    k0 = len(glob.K(0))
    comps = len(p.connected_components())
    ok = k0 == comps
    return Certificate("acyclic" if ok else "not-acyclic", k0, comps, k0 if ok else None)


def cohomology_from_tower(tower: Tower) -> list[FgAbGroup]:
    """``H^0 = lim F_0`` and ``H^q = coker(lim ker'_{F_{q-1}} -> lim F_q)`` for ``q >= 1``."""
    p = tower.base
    out = [limit(tower.functors[0])]
    for q in range(1, len(tower.functors)):
        lim = _LimitData(tower.functors[q])
        om = _omega(tower, q, p.objects_of_degree(q - 1))
        out.append(lattice_quotient(lim.basis, om))
    return out


def lim_ker_prime_rank(tower: Tower, q: int) -> int:
    """Rank of ``lim ker'_{F_q}``; equals ``Σ_{Ob_q} dim F_q(i)``."""
    return limit(tower.steps[q].mid).free_rank


def euler_characteristic(p: GradedPoset, r: RTable | None = None, simplex_like: bool = False) -> int:
    """``Σ_q (-1)^q Σ_{i in Ob_q} R^i_q``; for simplex-like posets every ``R^i_{deg i}`` is 1."""
    if simplex_like:
        return sum((-1) ** p.deg(n) for n in p.names)
    r = r or compute_R(p)
    return sum((-1) ** p.deg(n) * r(n, p.deg(n)) for n in p.names)


def euler_from_cohomology(p: GradedPoset) -> int:
    return sum((-1) ** q * g.free_rank for q, g in enumerate(cohomology(p)))
