from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from limkit.errors import CompositionNotZero, DimensionMismatch
from limkit.exactalg import (
    FgAbGroup,
    IntMatrix,
    LatticeSolver,
    PresentedGroup,
    Subquotient,
    cokernel,
    determinant,
    hstack,
    homology_at,
    image_basis,
    induced_cokernel,
    induced_image,
    induced_kernel,
    invariant_diagonal,
    kernel_basis,
    lattice_quotient,
    rank,
    smith_normal_form,
    solve_in_lattice,
    vstack,
)


@st.composite
def matrices(draw, max_dim=4, bound=6):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    vals = draw(st.lists(st.integers(-bound, bound), min_size=r * c, max_size=r * c))
    return IntMatrix(r, c, tuple(vals))


def _minor_gcd(m: IntMatrix, k: int) -> int:
    """gcd of all k x k minors (independent of the elimination code)."""
    from math import gcd

    g = 0
    for rows in itertools.combinations(range(m.rows), k):
        for cols in itertools.combinations(range(m.cols), k):
            g = gcd(g, determinant(m.select_rows(rows).select_columns(cols)))
    return g


class TestIntMatrix:
    def test_shape_check(self):
        with pytest.raises(DimensionMismatch):
            IntMatrix(2, 2, (1, 2, 3))

    def test_product(self):
        a = IntMatrix.from_rows([[1, 2], [3, 4]])
        b = IntMatrix.from_rows([[0, 1], [1, 0]])
        assert (a @ b).to_rows() == [[2, 1], [4, 3]]
        assert a.apply([1, 1]) == (3, 7)

    def test_product_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            IntMatrix.zeros(2, 3) @ IntMatrix.zeros(2, 3)

    def test_stacking(self):
        a = IntMatrix.identity(2)
        assert hstack([a, a]).shape == (2, 4)
        assert vstack([a, a]).shape == (4, 2)
        assert hstack([], 3).shape == (3, 0)

    @given(matrices())
    def test_transpose_involution(self, m):
        assert m.T.T == m

    def test_determinant(self):
        assert determinant(IntMatrix.from_rows([[2, 1], [7, 4]])) == 1
        assert determinant(IntMatrix.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, 10]])) == -3


class TestSmith:
    @given(matrices())
    def test_transform_identity(self, m):
        s = smith_normal_form(m)
        assert s.u @ m @ s.v == s.d
        assert abs(determinant(s.u)) == 1
        assert abs(determinant(s.v)) == 1

    @given(matrices())
    def test_diagonal_is_a_divisibility_chain(self, m):
        d = smith_normal_form(m).diagonal
        assert all(x > 0 for x in d)
        assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
        off = [m_ for (i, j), m_ in _entries(smith_normal_form(m).d) if i != j]
        assert not any(off)

    @given(matrices(max_dim=3, bound=5))
    def test_diagonal_matches_minor_gcds(self, m):
        d = invariant_diagonal(m)
        assert len(d) == rank(m)
        prod = 1
        for k, x in enumerate(d, start=1):
            prod *= x
            assert _minor_gcd(m, k) == prod

    def test_known_example(self):
        assert invariant_diagonal(IntMatrix.from_rows([[2, 4], [6, 8]])) == [2, 4]
        assert invariant_diagonal(IntMatrix.diagonal([4, 6])) == [2, 12]


def _entries(m: IntMatrix):
    for i in range(m.rows):
        for j in range(m.cols):
            yield (i, j), m[i, j]


class TestLattices:
    @given(matrices())
    def test_kernel_basis(self, m):
        k = kernel_basis(m)
        assert (m @ k).is_zero()
        assert k.cols == m.cols - rank(m)
        # saturated: the kernel basis has trivial Smith diagonal
        assert all(d == 1 for d in invariant_diagonal(k))

    @given(matrices(), st.lists(st.integers(-4, 4), min_size=4, max_size=4))
    def test_solve_roundtrip(self, m, coeffs):
        x = coeffs[: m.cols]
        b = m.apply(x)
        sol = solve_in_lattice(m, b)
        assert sol is not None
        assert m.apply(sol) == b

    def test_solve_outside_lattice(self):
        m = IntMatrix.from_rows([[2], [0]])
        assert solve_in_lattice(m, [1, 0]) is None
        assert not LatticeSolver(m).contains([1, 0])
        assert LatticeSolver(m).contains([4, 0])

    @given(matrices())
    def test_image_basis_spans_same_lattice(self, m):
        b = image_basis(m)
        assert b.cols == rank(m)
        s = LatticeSolver(b)
        assert s.solve_columns(m) is not None
        assert LatticeSolver(m).solve_columns(b) is not None


class TestGroups:
    @pytest.mark.parametrize(
        "g, text",
        [
            (FgAbGroup(), "0"),
            (FgAbGroup(1), "Z"),
            (FgAbGroup(2), "Z^2"),
            (FgAbGroup(0, (2,)), "Z/2"),
            (FgAbGroup(1, (2, 6)), "Z + Z/2 + Z/6"),
        ],
    )
    def test_str(self, g, text):
        assert str(g) == text

    def test_normalization(self):
        assert FgAbGroup.from_orders(0, [2, 3]) == FgAbGroup(0, (6,))
        assert FgAbGroup.from_orders(0, [0, 1, 4, 6]) == FgAbGroup(1, (2, 12))
        with pytest.raises(ValueError):
            FgAbGroup(0, (2, 3))
        with pytest.raises(ValueError):
            FgAbGroup(0, (1,))

    def test_json(self):
        assert FgAbGroup(1, (2,)).to_json() == {"free_rank": 1, "torsion": [2], "text": "Z + Z/2"}

    @given(st.integers(0, 3), st.lists(st.integers(0, 12), max_size=4))
    def test_orders_are_preserved(self, r, orders):
        g = FgAbGroup.from_orders(r, orders)
        assert g.free_rank == r + orders.count(0)
        prod = 1
        for n in orders:
            if n:
                prod *= n
        assert g.torsion_order == prod

    def test_cokernel(self):
        assert cokernel(IntMatrix.from_rows([[2, 0], [0, 3], [0, 0]])) == FgAbGroup(1, (6,))
        assert cokernel(IntMatrix.zeros(2, 0)) == FgAbGroup(2)

    def test_homology_at(self):
        d_in = IntMatrix.from_rows([[2], [0]])
        d_out = IntMatrix.from_rows([[0, 1]])
        assert homology_at(d_in, d_out) == FgAbGroup(0, (2,))
        with pytest.raises(CompositionNotZero):
            homology_at(IntMatrix.from_rows([[1], [1]]), d_out)

    def test_presented(self):
        g = PresentedGroup.from_group(FgAbGroup(1, (4,)))
        assert g.group() == FgAbGroup(1, (4,))
        assert g.is_zero_element([0, 4])
        assert not g.is_zero_element([0, 2])
        assert not g.is_zero_element([1, 0])

    def test_lattice_quotient(self):
        sub = IntMatrix.from_rows([[1, 0], [0, 1], [0, 0]])
        gens = IntMatrix.from_rows([[2], [2], [0]])
        assert lattice_quotient(sub, gens) == FgAbGroup(1, (2,))


class TestInducedMaps:
    def test_multiplication_by_two_on_z4(self):
        z4 = Subquotient.of(PresentedGroup.from_group(FgAbGroup(0, (4,))))
        f = IntMatrix.from_rows([[2]])
        assert induced_kernel(f, z4, z4) == FgAbGroup(0, (2,))
        assert induced_image(f, z4, z4) == FgAbGroup(0, (2,))
        assert induced_cokernel(f, z4, z4) == FgAbGroup(0, (2,))

    @given(st.integers(1, 12), st.integers(1, 12), st.integers(-12, 12))
    def test_cyclic_maps(self, m, n, k):
        # Z/m -> Z/n, 1 -> k, is well defined iff n | k*m.
        if (k * m) % n:
            return
        a = Subquotient.of(PresentedGroup(1, IntMatrix.from_rows([[m]])))
        b = Subquotient.of(PresentedGroup(1, IntMatrix.from_rows([[n]])))
        f = IntMatrix.from_rows([[k]])
        ker, im, cok = induced_kernel(f, a, b), induced_image(f, a, b), induced_cokernel(f, a, b)
        assert ker.torsion_order * im.torsion_order == m
        assert im.torsion_order * cok.torsion_order == n
