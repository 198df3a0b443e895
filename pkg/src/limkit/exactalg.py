"""Exact integer linear algebra.

Everything here works over the integers with Python's arbitrary precision
``int``.  The central routines are

* :func:`smith_normal_form`, with unimodular transforms ``d = u @ m @ v``;
* a column-echelon reduction used for kernels, images and lattice membership;
* :class:`FgAbGroup`, the canonical form of a finitely generated abelian group;
* :class:`PresentedGroup` and :func:`presented_homology`, which handle chain
  complexes whose terms carry relations (torsion values of a diagram).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence

from .errors import CompositionNotZero, DimensionMismatch

Vector = tuple[int, ...]


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, row-major, immutable."""

    rows: int
    cols: int
    entries: tuple[int, ...] = field(repr=False)

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            return cls(0, ncols or 0, ())
        width = len(rows[0])
        if ncols is not None and ncols != width:
            raise DimensionMismatch("declared column count disagrees with rows")
        for r in rows:
            if len(r) != width:
                raise DimensionMismatch("ragged rows")
        return cls(len(rows), width, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        for c in columns:
            if len(c) != nrows:
                raise DimensionMismatch("column length disagrees with row count")
        ncols = len(columns)
        return cls(
            nrows, ncols, tuple(int(columns[j][i]) for i in range(nrows) for j in range(ncols))
        )

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "IntMatrix":
        n = len(values)
        return cls(n, n, tuple(values[i] if i == j else 0 for i in range(n) for j in range(n)))

    # -- access ---------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return self.entries[j :: self.cols] if self.cols else ()

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def to_columns(self) -> list[list[int]]:
        return [list(self.column(j)) for j in range(self.cols)]

    def is_zero(self) -> bool:
        return not any(self.entries)

    # -- arithmetic -----------------------------------------------------------

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        ocols = [other.column(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            nz = [(k, a) for k, a in enumerate(r) if a]
            for c in ocols:
                out.append(sum(a * c[k] for k, a in nz))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def apply(self, vec: Sequence[int]) -> Vector:
        """Matrix times column vector."""
        if len(vec) != self.cols:
            raise DimensionMismatch(f"vector of length {len(vec)} for {self.shape} matrix")
        nz = [(k, v) for k, v in enumerate(vec) if v]
        return tuple(sum(self.entries[i * self.cols + k] * v for k, v in nz) for i in range(self.rows))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot subtract {other.shape} from {self.shape}")
        return IntMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix.from_rows(self.to_columns(), self.rows) if self.cols else IntMatrix.zeros(0, self.rows)

    def select_rows(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix(len(idx), self.cols, tuple(x for i in idx for x in self.row(i)))

    def select_columns(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix(
            self.rows, len(idx), tuple(self.entries[i * self.cols + j] for i in range(self.rows) for j in idx)
        )

    def __repr__(self) -> str:
        return f"IntMatrix({self.to_rows()!r})" if self.rows else f"IntMatrix.zeros(0, {self.cols})"


def hstack(blocks: Sequence[IntMatrix], rows: int | None = None) -> IntMatrix:
    """Concatenate matrices side by side.  ``rows`` is needed when ``blocks`` is empty."""
    if not blocks:
        return IntMatrix.zeros(rows or 0, 0)
    n = blocks[0].rows
    if rows is not None and rows != n or any(b.rows != n for b in blocks):
        raise DimensionMismatch("hstack blocks have different row counts")
    out: list[int] = []
    for i in range(n):
        for b in blocks:
            out.extend(b.row(i))
    return IntMatrix(n, sum(b.cols for b in blocks), tuple(out))


def vstack(blocks: Sequence[IntMatrix], cols: int | None = None) -> IntMatrix:
    """Stack matrices vertically.  ``cols`` is needed when ``blocks`` is empty."""
    if not blocks:
        return IntMatrix.zeros(0, cols or 0)
    n = blocks[0].cols
    if cols is not None and cols != n or any(b.cols != n for b in blocks):
        raise DimensionMismatch("vstack blocks have different column counts")
    return IntMatrix(sum(b.rows for b in blocks), n, tuple(x for b in blocks for x in b.entries))


def block_diag(blocks: Sequence[IntMatrix]) -> IntMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            out[r0 + i][c0 : c0 + b.cols] = b.row(i)
        r0 += b.rows
        c0 += b.cols
    return IntMatrix(rows, cols, tuple(x for r in out for x in r))


def determinant(m: IntMatrix) -> int:
    """Fraction-free (Bareiss) determinant of a square matrix."""
    if m.rows != m.cols:
        raise DimensionMismatch("determinant of a non-square matrix")
    n = m.rows
    a = m.to_rows()
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


# ---------------------------------------------------------------------------
# Column echelon form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Echelon:
    """Column echelon data: ``E = M @ V`` with ``V`` unimodular.

    The first ``rank`` columns of ``E`` are lower-echelon with pivots in rows
    ``pivots``; the remaining columns are zero, so the matching columns of
    ``V`` form a basis of ``ker M``.
    """

    columns: list[list[int]]  # columns of E
    transform: list[list[int]] | None  # columns of V
    rank: int
    pivots: list[int]


def _col_echelon(m: IntMatrix, track: bool = True) -> _Echelon:
    nrows, ncols = m.rows, m.cols
    cols = m.to_columns()
    vcols = [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)] if track else None
    r = 0
    pivots: list[int] = []

    def axpy(dst: int, src: int, q: int) -> None:
        # column dst -= q * column src
        cd, cs = cols[dst], cols[src]
        for i in range(nrows):
            if cs[i]:
                cd[i] -= q * cs[i]
        if vcols is not None:
            vd, vs = vcols[dst], vcols[src]
            for i in range(ncols):
                if vs[i]:
                    vd[i] -= q * vs[i]

    def swap(a: int, b: int) -> None:
        cols[a], cols[b] = cols[b], cols[a]
        if vcols is not None:
            vcols[a], vcols[b] = vcols[b], vcols[a]

    for i in range(nrows):
        if r == ncols:
            break
        while True:
            nz = [j for j in range(r, ncols) if cols[j][i]]
            if not nz:
                break
            swap(r, min(nz, key=lambda j: abs(cols[j][i])))
            if len(nz) == 1:
                break
            p = cols[r][i]
            for j in range(r + 1, ncols):
                if cols[j][i]:
                    axpy(j, r, cols[j][i] // p)
        if r < ncols and cols[r][i]:
            if cols[r][i] < 0:
                cols[r] = [-x for x in cols[r]]
                if vcols is not None:
                    vcols[r] = [-x for x in vcols[r]]
            pivots.append(i)
            r += 1
    return _Echelon(cols, vcols, r, pivots)


def rank(m: IntMatrix) -> int:
    return _col_echelon(m, track=False).rank


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Basis of the integer kernel ``{x : m x = 0}``, as columns."""
    e = _col_echelon(m)
    assert e.transform is not None
    return IntMatrix.from_columns(e.transform[e.rank :], m.cols)


def image_basis(m: IntMatrix) -> IntMatrix:
    """Basis of the lattice spanned by the columns of ``m``, as columns."""
    e = _col_echelon(m, track=False)
    return IntMatrix.from_columns(e.columns[: e.rank], m.rows)


def solve_in_lattice(m: IntMatrix, b: Sequence[int]) -> Vector | None:
    """Return an integer ``x`` with ``m x = b``, or ``None`` if none exists."""
    if len(b) != m.rows:
        raise DimensionMismatch(f"right-hand side of length {len(b)} for {m.shape} matrix")
    return _solve_with(_col_echelon(m), m.rows, m.cols, b)


def _solve_with(e: _Echelon, nrows: int, ncols: int, b: Sequence[int]) -> Vector | None:
    res = list(b)
    y = [0] * e.rank
    for k, row in enumerate(e.pivots):
        col = e.columns[k]
        q, rem = divmod(res[row], col[row])
        if rem:
            return None
        if q:
            y[k] = q
            for i in range(nrows):
                if col[i]:
                    res[i] -= q * col[i]
    if any(res):
        return None
    assert e.transform is not None
    x = [0] * ncols
    for k in range(e.rank):
        if y[k]:
            v = e.transform[k]
            for i in range(ncols):
                if v[i]:
                    x[i] += y[k] * v[i]
    return tuple(x)


class LatticeSolver:
    """Repeated membership queries against one matrix, reusing its echelon form."""

    def __init__(self, m: IntMatrix) -> None:
        self.matrix = m
        self._ech = _col_echelon(m)

    def solve(self, b: Sequence[int]) -> Vector | None:
        if len(b) != self.matrix.rows:
            raise DimensionMismatch("right-hand side has the wrong length")
        return _solve_with(self._ech, self.matrix.rows, self.matrix.cols, b)

    def contains(self, b: Sequence[int]) -> bool:
        return self.solve(b) is not None

    def solve_columns(self, b: IntMatrix) -> IntMatrix | None:
        """Solve ``m X = b`` column by column; ``None`` if any column fails."""
        out = []
        for j in range(b.cols):
            x = self.solve(b.column(j))
            if x is None:
                return None
            out.append(x)
        return IntMatrix.from_columns(out, self.matrix.cols)


def lattice_contains(gens: IntMatrix, vectors: IntMatrix) -> bool:
    """True when every column of ``vectors`` lies in the span of ``gens``."""
    s = LatticeSolver(gens)
    return all(s.contains(vectors.column(j)) for j in range(vectors.cols))


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SnfResult:
    """``d = u @ m @ v`` with ``u``, ``v`` unimodular and ``d`` diagonal."""

    d: IntMatrix
    u: IntMatrix
    v: IntMatrix
    rank: int

    @property
    def diagonal(self) -> list[int]:
        return [self.d[i, i] for i in range(self.rank)]


def _snf_core(m: IntMatrix, track: bool) -> tuple[list[list[int]], list[list[int]] | None, list[list[int]] | None, int]:
    nr, nc = m.rows, m.cols
    a = m.to_rows()
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)] if track else None
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)] if track else None

    def row_op(dst: int, src: int, q: int) -> None:  # row dst -= q*row src
        ad, as_ = a[dst], a[src]
        for j in range(nc):
            if as_[j]:
                ad[j] -= q * as_[j]
        if u is not None:
            ud, us = u[dst], u[src]
            for j in range(nr):
                if us[j]:
                    ud[j] -= q * us[j]

    def col_op(dst: int, src: int, q: int) -> None:  # col dst -= q*col src
        for row in a:
            if row[src]:
                row[dst] -= q * row[src]
        if v is not None:
            for row in v:
                if row[src]:
                    row[dst] -= q * row[src]

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        if u is not None:
            u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        if v is not None:
            for row in v:
                row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, bi, bj = best
        swap_rows(t, bi)
        swap_cols(t, bj)
        while True:
            p = a[t][t]
            for i in range(t + 1, nr):
                if a[i][t]:
                    row_op(i, t, a[i][t] // p)
            for j in range(t + 1, nc):
                if a[t][j]:
                    col_op(j, t, a[t][j] // p)
            cand = [(abs(a[i][t]), i, t) for i in range(t + 1, nr) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t + 1, nc) if a[t][j]]
            if cand:
                _, bi, bj = min(cand)
                swap_rows(t, bi)
                swap_cols(t, bj)
                continue
            if p in (1, -1):
                break
            bad = next(
                (i for i in range(t + 1, nr) if any(a[i][j] % p for j in range(t + 1, nc))), None
            )
            if bad is None:
                break
            row_op(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if u is not None:
                u[t] = [-x for x in u[t]]
        t += 1
    return a, u, v, t


def smith_normal_form(m: IntMatrix) -> SnfResult:
    """Smith normal form with unimodular transforms, ``d = u @ m @ v``.

    Pivots are chosen with minimal absolute value; a pivot that fails to
    divide the rest of the matrix absorbs an offending row, so the diagonal
    comes out as a divisibility chain directly.

    >>> smith_normal_form(IntMatrix.from_rows([[2, 4], [6, 8]])).diagonal
    [2, 4]
    """
    a, u, v, r = _snf_core(m, track=True)
    assert u is not None and v is not None
    return SnfResult(
        IntMatrix.from_rows(a, m.cols), IntMatrix.from_rows(u, m.rows), IntMatrix.from_rows(v, m.cols), r
    )


def invariant_diagonal(m: IntMatrix) -> list[int]:
    """Nonzero Smith diagonal of ``m`` without computing transforms."""
    a, _, _, r = _snf_core(m, track=False)
    return [a[i][i] for i in range(r)]


# ---------------------------------------------------------------------------
# Abelian groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class FgAbGroup:
    """Canonical finitely generated abelian group ``Z^r + Z/d1 + ... + Z/dk``.

    Invariant factors satisfy ``d1 | d2 | ...`` and are all at least 2.
    """

    free_rank: int = 0
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        facs = tuple(int(d) for d in self.invariant_factors)
        if any(d < 2 for d in facs):
            raise ValueError(f"invariant factors must be at least 2: {facs}")
        if any(facs[i + 1] % facs[i] for i in range(len(facs) - 1)):
            raise ValueError(f"invariant factors do not form a divisibility chain: {facs}")
        object.__setattr__(self, "invariant_factors", facs)

    @classmethod
    def from_orders(cls, free_rank: int, orders: Iterable[int]) -> "FgAbGroup":
        """Normalize an arbitrary direct sum ``Z^r + Z/n1 + Z/n2 + ...``."""
        orders = [abs(int(n)) for n in orders]
        free_rank += sum(1 for n in orders if n == 0)
        diag = [n for n in orders if n > 1]
        return cls.from_diagonal(free_rank, diag)

    @classmethod
    def from_diagonal(cls, free_rank: int, diag: Sequence[int]) -> "FgAbGroup":
        if not diag:
            return cls(free_rank, ())
        facs = invariant_diagonal(IntMatrix.diagonal(list(diag)))
        return cls(free_rank, tuple(d for d in facs if d > 1))

    @property
    def torsion_order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def is_free(self) -> bool:
        return not self.invariant_factors

    @property
    def num_generators(self) -> int:
        return self.free_rank + len(self.invariant_factors)

    def __add__(self, other: "FgAbGroup") -> "FgAbGroup":
        return FgAbGroup.from_orders(
            self.free_rank + other.free_rank, self.invariant_factors + other.invariant_factors
        )

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.invariant_factors), "text": str(self)}


ZERO = FgAbGroup()
Z = FgAbGroup(1)


def cokernel(m: IntMatrix) -> FgAbGroup:
    """Canonical form of ``Z^rows / im(m)``."""
    diag = invariant_diagonal(m)
    return FgAbGroup(m.rows - len(diag), tuple(d for d in diag if d > 1))


def _check_pair(d_in: IntMatrix, d_out: IntMatrix) -> None:
    if d_in.rows != d_out.cols:
        raise DimensionMismatch(
            f"incoming map lands in rank {d_in.rows} but outgoing map starts at rank {d_out.cols}"
        )
    if not (d_out @ d_in).is_zero():
        raise CompositionNotZero("d_out @ d_in is not zero")


def homology_at(d_in: IntMatrix, d_out: IntMatrix) -> FgAbGroup:
    """``ker(d_out) / im(d_in)`` for free terms.

    Since ``ker(d_out)`` is a saturated sublattice containing ``im(d_in)``,
    the torsion comes straight from the Smith diagonal of ``d_in``.
    """
    _check_pair(d_in, d_out)
    diag = invariant_diagonal(d_in)
    free = d_in.rows - rank(d_out) - len(diag)
    return FgAbGroup(free, tuple(d for d in diag if d > 1))


def lattice_quotient(sub: IntMatrix, gens: IntMatrix) -> FgAbGroup:
    """``L / M`` where ``L`` is spanned by the columns of ``sub`` and ``M ⊆ L`` by ``gens``."""
    basis = image_basis(sub)
    coords = LatticeSolver(basis).solve_columns(gens)
    if coords is None:
        raise DimensionMismatch("generators do not lie in the ambient lattice")
    return cokernel(coords)


# ---------------------------------------------------------------------------
# Presented groups and their complexes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PresentedGroup:
    """``Z^ngens / im(relations)``; ``relations`` has ``ngens`` rows."""

    ngens: int
    relations: IntMatrix

    def __post_init__(self) -> None:
        if self.relations.rows != self.ngens:
            raise DimensionMismatch("relation matrix rows must equal the generator count")

    @classmethod
    def free(cls, n: int) -> "PresentedGroup":
        return cls(n, IntMatrix.zeros(n, 0))

    @classmethod
    def from_group(cls, g: FgAbGroup) -> "PresentedGroup":
        """Standard presentation: free generators first, then one per torsion factor."""
        n = g.num_generators
        cols = []
        for k, d in enumerate(g.invariant_factors):
            c = [0] * n
            c[g.free_rank + k] = d
            cols.append(c)
        return cls(n, IntMatrix.from_columns(cols, n))

    @property
    def is_free_presentation(self) -> bool:
        return self.relations.is_zero()

    def group(self) -> FgAbGroup:
        return cokernel(self.relations)

    def is_zero_element(self, x: Sequence[int]) -> bool:
        if self.relations.is_zero():
            return not any(x)
        return solve_in_lattice(self.relations, x) is not None

    def __str__(self) -> str:
        return str(self.group())


def presented_homology(d_in: IntMatrix, d_out: IntMatrix, r_mid: IntMatrix, r_out: IntMatrix) -> FgAbGroup:
    """Homology at the middle term of ``A -> B -> C`` with relation matrices.

    The middle term is ``Z^n / im(r_mid)`` and the target is ``Z^m / im(r_out)``.
    Cycles are ``{x : d_out x in im(r_out)}``; boundaries are
    ``im(d_in) + im(r_mid)``.
    """
    n = d_out.cols
    if d_in.rows != n or r_mid.rows != n or r_out.rows != d_out.rows:
        raise DimensionMismatch("presented complex shapes do not match")
    if r_mid.is_zero() and r_out.is_zero():
        return homology_at(d_in, d_out)
    cyc = cycle_lattice(d_out, r_out)
    bnd = hstack([d_in, r_mid], n)
    return lattice_quotient(cyc, bnd)


def cycle_lattice(d_out: IntMatrix, r_out: IntMatrix) -> IntMatrix:
    """Basis (columns) of ``{x : d_out x in im(r_out)}``."""
    n = d_out.cols
    if r_out.is_zero():
        return kernel_basis(d_out)
    k = kernel_basis(hstack([d_out, r_out], d_out.rows))
    proj = k.select_rows(list(range(n)))
    return image_basis(proj)


def check_composition(d_in: IntMatrix, d_out: IntMatrix, r_out: IntMatrix | None = None) -> None:
    """Raise unless ``d_out @ d_in`` is zero (modulo ``r_out`` when given)."""
    if d_in.rows != d_out.cols:
        raise DimensionMismatch("consecutive differentials do not compose")
    comp = d_out @ d_in
    if r_out is None or r_out.is_zero():
        if not comp.is_zero():
            raise CompositionNotZero("d_out @ d_in is not zero")
    elif not lattice_contains(r_out, comp):
        raise CompositionNotZero("d_out @ d_in does not vanish modulo relations")


@dataclass(frozen=True)
class Subquotient:
    """``L / N`` inside ``Z^ambient``; columns of ``sub`` span ``L``, of ``rel`` span ``N ⊆ L``."""

    ambient: int
    sub: IntMatrix
    rel: IntMatrix

    def __post_init__(self) -> None:
        if self.sub.rows != self.ambient or self.rel.rows != self.ambient:
            raise DimensionMismatch("subquotient generators live in the wrong ambient rank")

    @classmethod
    def of(cls, g: PresentedGroup) -> "Subquotient":
        return cls(g.ngens, IntMatrix.identity(g.ngens), g.relations)

    def group(self) -> FgAbGroup:
        return lattice_quotient(self.sub, self.rel)

    def basis(self) -> IntMatrix:
        return image_basis(self.sub)

    def as_presented(self) -> tuple[PresentedGroup, IntMatrix]:
        """A presentation on a basis of ``L``, plus that basis (columns in the ambient)."""
        b = self.basis()
        coords = LatticeSolver(b).solve_columns(self.rel)
        if coords is None:
            raise DimensionMismatch("relations do not lie in the lattice")
        return PresentedGroup(b.cols, coords), b


def induced_kernel(f: IntMatrix, a: Subquotient, b: Subquotient) -> FgAbGroup:
    """Kernel of the map ``a -> b`` induced by ``f`` on ambient lattices."""
    fl = f @ a.sub
    cyc = cycle_lattice(fl, b.rel)
    return lattice_quotient(hstack([a.sub @ cyc, a.rel], a.ambient), a.rel)


def induced_cokernel(f: IntMatrix, a: Subquotient, b: Subquotient) -> FgAbGroup:
    """Cokernel of the map ``a -> b`` induced by ``f`` on ambient lattices."""
    return lattice_quotient(b.sub, hstack([f @ a.sub, b.rel], b.ambient))


def induced_image(f: IntMatrix, a: Subquotient, b: Subquotient) -> FgAbGroup:
    """Image of the map ``a -> b`` induced by ``f``."""
    return lattice_quotient(hstack([f @ a.sub, b.rel], b.ambient), b.rel)
