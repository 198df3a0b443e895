from __future__ import annotations

import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from limkit.derived import (
    FlowSpace,
    c_sequence,
    cohomology,
    derived_direct_limits,
    derived_inverse_limits,
    homology,
    is_flow,
    k_functors,
    k_sequence,
    lim1_via_flows,
    moore_chain_complex,
    moore_cochain_complex,
    reduce_flow_to_core,
    same_lim1_class,
)
from limkit.diagram import AbDiagram, is_pseudo_injective, is_pseudo_projective
from limkit.errors import InvalidInput
from limkit.exactalg import FgAbGroup, IntMatrix, block_diag, presented_homology
from limkit.fiber import build_H, libman_example
from limkit.poset import GradedPoset, core, delta_poset, simplex_poset
from limkit.webb import builtin_group

from randgen import random_diagram, random_poset
from shapes import cone_poset, cycle_poset, pullback_example, pullback_poset, pushout_2_1

Z, ZERO = FgAbGroup(1), FgAbGroup()


def _pad(groups, n):
    return list(groups) + [ZERO] * (n - len(groups))


# ---------------------------------------------------------------------------
# unnormalized oracle (test-only, degree capped)
# ---------------------------------------------------------------------------


def _weak_chains(p: GradedPoset, n: int) -> list[tuple[str, ...]]:
    out = []
    for seq in product(p.names, repeat=n + 1):
        if all(a == b or p.leq(a, b) for a, b in zip(seq, seq[1:])):
            out.append(seq)
    return out


def _unnormalized(f: AbDiagram, kind: str, top: int) -> list[FgAbGroup]:
    """Homology of the full simplicial replacement, degrees 0..top-1."""
    p = f.base
    chains = [_weak_chains(p, n) for n in range(top + 1)]
    at = (lambda s: s[0]) if kind == "chain" else (lambda s: s[-1])

    def offsets(n):
        out, o = {}, 0
        for s in chains[n]:
            out[s] = o
            o += f.ngens(at(s))
        return out, o

    offs = [offsets(n) for n in range(top + 1)]
    rels = [block_diag([f.rel(at(s)) for s in chains[n]]) if chains[n] else IntMatrix.zeros(0, 0) for n in range(top + 1)]

    def chain_d(n):  # C_n -> C_{n-1}
        (src, ns), (dst, nd) = offs[n], offs[n - 1]
        m = [[0] * ns for _ in range(nd)]
        for s in chains[n]:
            for i in range(n + 1):
                face = s[:i] + s[i + 1 :]
                mat = f.map(s[0], s[1]) if i == 0 else IntMatrix.identity(f.ngens(s[0]))
                for r in range(mat.rows):
                    for c in range(mat.cols):
                        m[dst[face] + r][src[s] + c] += (-1) ** i * mat[r, c]
        return IntMatrix.from_rows(m, ns)

    def cochain_d(n):  # C^n -> C^{n+1}
        (src, ns), (dst, nd) = offs[n], offs[n + 1]
        m = [[0] * ns for _ in range(nd)]
        for t in chains[n + 1]:
            for i in range(n + 2):
                face = t[:i] + t[i + 1 :]
                mat = f.map(t[n], t[n + 1]) if i == n + 1 else IntMatrix.identity(f.ngens(t[-1]))
                for r in range(mat.rows):
                    for c in range(mat.cols):
                        m[dst[t] + r][src[face] + c] += (-1) ** i * mat[r, c]
        return IntMatrix.from_rows(m, ns)

    out = []
    for n in range(top):
        if kind == "chain":
            d_in = chain_d(n + 1)
            d_out = chain_d(n) if n > 0 else IntMatrix.zeros(0, offs[0][1])
            r_out = rels[n - 1] if n > 0 else IntMatrix.zeros(0, 0)
        else:
            d_in = cochain_d(n - 1) if n > 0 else IntMatrix.zeros(offs[0][1], 0)
            d_out = cochain_d(n)
            r_out = rels[n + 1]
        out.append(presented_homology(d_in, d_out, rels[n], r_out))
    return out


@settings(max_examples=15)
@given(st.integers(0, 10_000))
def test_normalization_agrees_with_unnormalized(seed):
    rng = random.Random(seed)
    f = random_diagram(rng, random_poset(rng, max_objects=4), max_rank=1)
    assert _unnormalized(f, "chain", 3) == _pad(derived_direct_limits(f), 3)[:3]
    assert _unnormalized(f, "cochain", 3) == _pad(derived_inverse_limits(f), 3)[:3]


def test_unnormalized_oracle_on_cycle():
    assert _unnormalized(AbDiagram.constant(cycle_poset()), "chain", 2) == [Z, Z]


# ---------------------------------------------------------------------------
# Moore complexes
# ---------------------------------------------------------------------------


def test_simplex_face_poset_ranks():
    cx = moore_chain_complex(AbDiagram.constant(simplex_poset(2)))
    assert [cx.rank(n) for n in range(3)] == [7, 12, 6]
    cx.check()


def test_pushout_complex_shape():
    cx = moore_chain_complex(pushout_2_1())
    assert len(cx.bases[0]) == 3 and len(cx.bases[1]) == 2


def test_one_object():
    p = GradedPoset((("x", 0),))
    assert moore_chain_complex(AbDiagram.constant(p)).top == 0
    assert moore_cochain_complex(AbDiagram.constant(p)).top == 0


@given(st.integers(0, 10_000))
def test_d_squared_is_zero(seed):
    rng = random.Random(seed)
    f = random_diagram(rng, random_poset(rng, max_objects=6))
    moore_chain_complex(f).check()
    moore_cochain_complex(f).check()


# ---------------------------------------------------------------------------
# limits
# ---------------------------------------------------------------------------


def test_cycle_has_lim1():
    assert derived_direct_limits(AbDiagram.constant(cycle_poset()))[1] == Z
    assert homology(cycle_poset()) == [Z, Z]
    assert cohomology(cycle_poset()) == [Z, Z]


def test_cone_is_acyclic():
    assert _pad(homology(cone_poset()), 3) == [Z, ZERO, ZERO]


def test_pullback_direct_limits():
    f = pullback_example()
    lims = derived_direct_limits(f)
    assert lims[0] == f.group("b") and all(g.is_zero for g in lims[1:])


def test_pushout_inverse_limits():
    f = pushout_2_1()
    lims = derived_inverse_limits(f)
    assert lims[0] == f.group("b") and all(g.is_zero for g in lims[1:])


def test_monic_pushout_has_no_lim1():
    assert _pad(derived_direct_limits(pushout_2_1()), 2)[1] == ZERO


def test_simplex_constant_inverse_limits():
    lims = derived_inverse_limits(AbDiagram.constant(delta_poset(2)))
    assert lims[0] == Z and all(g.is_zero for g in lims[1:])


def test_two_points():
    assert derived_inverse_limits(AbDiagram.constant(GradedPoset((("x", 0), ("y", 0)))))[0] == FgAbGroup(2)


# ---------------------------------------------------------------------------
# dimension shifting
# ---------------------------------------------------------------------------


def test_libman_k2_vanishes():
    h = build_H(libman_example(builtin_group("C3"))).diagram
    k2 = k_functors(h, 2)[2]
    assert all(k2.group(n).is_zero for n in h.base.names)
    assert k_sequence(h, 2) == ZERO


def test_c_sequence_examples():
    f = AbDiagram.free(pullback_poset(), {"a": 2, "b": 1, "c": 1}, {("a", "b"): [[1, 1]], ("c", "b"): [[1]]})
    assert c_sequence(f, 1) == ZERO
    assert c_sequence(AbDiagram.constant(GradedPoset((("x", 0),))), 2) == ZERO
    assert c_sequence(AbDiagram.constant(cycle_poset().opposite()), 1) == Z


@settings(max_examples=25)
@given(st.integers(0, 10_000))
def test_shift_sequences_agree_with_moore(seed):
    rng = random.Random(seed)
    f = random_diagram(rng, random_poset(rng, max_objects=5))
    direct, inverse = derived_direct_limits(f), derived_inverse_limits(f)
    for j in range(3):
        assert k_sequence(f, j) == _pad(direct, 3)[j]
        assert c_sequence(f, j) == _pad(inverse, 3)[j]


@settings(max_examples=25)
@given(st.integers(0, 10_000))
def test_pseudo_projective_and_injective_are_acyclic(seed):
    rng = random.Random(seed)
    f = random_diagram(rng, random_poset(rng, max_objects=5))
    if is_pseudo_projective(f):
        assert all(g.is_zero for g in derived_direct_limits(f)[1:])
    if is_pseudo_injective(f):
        assert all(g.is_zero for g in derived_inverse_limits(f)[1:])


# ---------------------------------------------------------------------------
# flows
# ---------------------------------------------------------------------------


CYCLE_FLOW = {("a", "c"): (3,), ("a", "d"): (-3,), ("b", "c"): (-3,), ("b", "d"): (3,)}


def test_cycle_flow():
    f = AbDiagram.constant(cycle_poset())
    assert is_flow(f, CYCLE_FLOW)
    assert is_flow(f, {})
    assert not is_flow(f, {("a", "c"): (1,)})
    assert lim1_via_flows(f) == Z
    assert not same_lim1_class(f, CYCLE_FLOW, {})


def test_cone_flows_are_trivial():
    f = AbDiagram.constant(cone_poset())
    assert lim1_via_flows(f) == ZERO
    assert same_lim1_class(f, CYCLE_FLOW, {})
    assert reduce_flow_to_core(f, CYCLE_FLOW) == {}


def test_reduction_rejects_non_flows():
    with pytest.raises(InvalidInput):
        reduce_flow_to_core(AbDiagram.constant(cycle_poset()), {("a", "c"): (1,)})


def test_five_object_core_support():
    p = GradedPoset(
        (("x", 0), ("a", 1), ("b", 1), ("c", 2), ("d", 2)),
        (("x", "a"), ("x", "b"), ("a", "c"), ("a", "d"), ("b", "c")),
    )
    f = AbDiagram.constant(p)
    x = {("x", "a"): (1,), ("x", "b"): (-1,), ("a", "c"): (1,), ("b", "c"): (-1,)}
    assert is_flow(f, x)
    y = reduce_flow_to_core(f, x)
    assert same_lim1_class(f, x, y)
    assert all(arr in {("a", "c"), ("a", "d")} for arr in y)


@settings(max_examples=25)
@given(st.integers(0, 10_000), st.lists(st.integers(-3, 3), min_size=12, max_size=12))
def test_reduction_preserves_class(seed, coeffs):
    rng = random.Random(seed)
    f = random_diagram(rng, random_poset(rng, max_objects=6))
    fs = FlowSpace(f)
    lat = fs.flow_lattice
    vec = [sum(c * lat[i, j] for j, c in enumerate(coeffs[: lat.cols])) for i in range(lat.rows)]
    x = fs.from_vector(vec)
    y = reduce_flow_to_core(f, x)
    keep = set(core(f.base).names)
    assert same_lim1_class(f, x, y)
    assert all(a in keep and b in keep for a, b in y)
    assert lim1_via_flows(f) == _pad(derived_direct_limits(f), 2)[1]
