from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from limkit.derived import derived_direct_limits
from limkit.diagram import is_pseudo_projective
from limkit.errors import ConeNotMonic, InvalidInput, NotContractibleEvidence
from limkit.exactalg import FgAbGroup, rank
from limkit.fiber import (
    NOT_COMPUTED,
    GroupDiagram,
    build_H,
    check_contractible_base,
    coset_representatives,
    fiber_homology,
    libman_example,
    libman_poset,
    pushout_poset,
    telescope_example,
    whitehead_example,
)
from limkit.poset import GradedPoset
from limkit.webb import builtin_group, cyclic

from shapes import cycle_poset

ZERO = FgAbGroup()


def one_object(g0, sub):
    p = GradedPoset((("x", 0),))
    return GroupDiagram.from_subgroups(p, g0, {"x": sub})


class TestBase:
    def test_certified(self):
        assert check_contractible_base(libman_poset()) == "certified"
        assert check_contractible_base(pushout_poset()) == "certified"

    def test_cycle_is_rejected(self):
        with pytest.raises(NotContractibleEvidence):
            check_contractible_base(cycle_poset())
        with pytest.raises(NotContractibleEvidence):
            check_contractible_base(cycle_poset(), assume=True)

    def test_acyclic_without_cone_point_needs_assumption(self):
        # a zig-zag a < b > c < d is contractible but has no initial or terminal object
        p = GradedPoset((("a", 0), ("b", 1), ("c", 0), ("d", 1)), (("a", "b"), ("c", "b"), ("c", "d")))
        with pytest.raises(NotContractibleEvidence):
            check_contractible_base(p)
        assert check_contractible_base(p, assume=True) == "assumed"


class TestH:
    def test_whole_group(self):
        g0 = builtin_group("S3")
        h = build_H(one_object(g0, range(6)))
        assert h.rank("x") == 5
        assert h.coset_reps["x"] == (g0.identity,)

    def test_trivial_group(self):
        h = build_H(one_object(builtin_group("S3"), ()))
        assert h.rank("x") == 0

    def test_libman_ranks(self):
        h = build_H(libman_example(cyclic(2)))
        assert {n: h.rank(n) for n in libman_poset().names} == {
            n: (0 if n == "(a,a)" else 1) for n in libman_poset().names
        }

    @pytest.mark.parametrize("name", ["S3", "D8", "A4"])
    def test_rank_formula_and_exactness(self, name):
        g0 = builtin_group(name)
        for sub in g0.subgroups:
            h = build_H(one_object(g0, sorted(sub)))
            cosets = g0.order // len(sub)
            assert h.rank("x") == g0.order - cosets
            assert len(coset_representatives(g0, sub)) == cosets
            # columns sum to zero on each coset, so the augmentation vanishes
            basis = h.bases["x"]
            assert all(sum(basis.column(j)) == 0 for j in range(basis.cols))
            assert rank(basis) + cosets == g0.order

    def test_maps_are_inclusions(self):
        h = build_H(libman_example(builtin_group("S3")))
        for (a, b), m in h.diagram.maps.items():
            assert h.bases[b] @ m == h.bases[a]

    def test_cone_not_monic(self):
        g0 = cyclic(2)
        p = GradedPoset((("x", 0),))
        gd = GroupDiagram(p, {"x": cyclic(2)}, {}, g0, {"x": (0, 0)})
        with pytest.raises(ConeNotMonic):
            build_H(gd)

    def test_malformed_diagram(self):
        g0 = cyclic(3)
        p = GradedPoset((("x", 0),))
        gd = GroupDiagram(p, {"x": cyclic(2)}, {}, g0, {"x": (0, 1)})
        with pytest.raises(InvalidInput):
            gd.validate()

    def test_subgroups_must_nest(self):
        g0 = builtin_group("S3")
        subs = sorted(s for s in g0.subgroups if len(s) == 2)
        with pytest.raises(InvalidInput):
            GroupDiagram.from_subgroups(
                GradedPoset((("x", 0), ("y", 1)), (("x", "y"),)), g0, {"x": sorted(subs[0]), "y": sorted(subs[1])}
            )


class TestFiberHomology:
    @pytest.mark.parametrize("name", ["C2", "C3", "S3", "C4"])
    def test_libman(self, name):
        g0 = builtin_group(name)
        rep = fiber_homology(libman_example(g0), j_max=4)
        assert rep.homology[2] == FgAbGroup(g0.order - 1)
        assert rep.homology[3] == ZERO and rep.homology[4] == ZERO
        assert rep.evidence == "certified"

    @pytest.mark.parametrize("name", ["S3", "D8", "Q8"])
    def test_whitehead(self, name):
        g0 = builtin_group(name)
        for b in g0.subgroups:
            for c in g0.subgroups:
                rep = fiber_homology(whitehead_example(g0, sorted(b & c), sorted(b), sorted(c)))
                assert all(g.is_zero for g in rep.homology.values())

    def test_telescope(self):
        g0 = cyclic(8)
        chain = [[0], [0, 4], [0, 2, 4, 6], list(range(8))]
        rep = fiber_homology(telescope_example(g0, chain), j_max=4)
        assert all(g.is_zero for g in rep.homology.values())
        assert rep.pi1 == "trivial" and rep.pi0 == "1 point(s)"

    def test_pi_data_without_terminal_object(self):
        rep = fiber_homology(libman_example(cyclic(2)))
        assert rep.pi1 == NOT_COMPUTED and rep.pi0 == NOT_COMPUTED

    def test_terminal_object_index(self):
        g0 = builtin_group("S3")
        rep = fiber_homology(telescope_example(g0, [[0], sorted(next(s for s in g0.subgroups if len(s) == 3))]))
        assert rep.pi0 == "2 point(s)"

    def test_matches_direct_limits(self):
        gd = libman_example(builtin_group("S3"))
        rep = fiber_homology(gd, j_max=5)
        lims = derived_direct_limits(rep.h.diagram)
        for j, g in rep.homology.items():
            assert g == (lims[j - 1] if j - 1 < len(lims) else ZERO)


@settings(max_examples=25)
@given(st.sampled_from(["S3", "D8", "A4", "Q8"]), st.data())
def test_pseudo_projective_h_has_no_fiber_homology(name, data):
    g0 = builtin_group(name)
    subs = g0.subgroups
    b = data.draw(st.sampled_from(subs))
    c = data.draw(st.sampled_from(subs))
    a = data.draw(st.sampled_from([s for s in subs if s <= (b & c)]))
    rep = fiber_homology(whitehead_example(g0, sorted(a), sorted(b), sorted(c)))
    if is_pseudo_projective(rep.h.diagram):
        assert all(g.is_zero for g in rep.homology.values())
