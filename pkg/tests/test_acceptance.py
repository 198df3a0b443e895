"""The ten acceptance criteria, each at its stated tolerance.

Each criterion is a function returning ``(ok, detail)``.  The pytest
wrappers record the outcome for the terminal summary and then assert it.
Running this file directly prints one PASS/FAIL line per criterion.
"""

from __future__ import annotations

import random
import sys
import time
from math import comb

import pytest

from limkit.covering import (
    build_Fp_tower,
    check_adequate,
    cohomology_from_tower,
    compute_R,
    delta_covering_family,
    euler_characteristic,
    simplexlike_covering_family,
    validate_covering,
)
from limkit.derived import (
    FlowSpace,
    c_sequence,
    cohomology,
    derived_direct_limits,
    derived_inverse_limits,
    k_sequence,
    lim1_via_flows,
    reduce_flow_to_core,
    same_lim1_class,
)
from limkit.diagram import AbDiagram, is_pseudo_injective, is_pseudo_projective
from limkit.exactalg import FgAbGroup
from limkit.fiber import fiber_homology, libman_example, whitehead_example
from limkit.poset import core
from limkit.spectral import VARIANTS, build_filtered, check_weak_convergence
from limkit.webb import builtin_group, webb_verify

from randgen import random_diagram, random_poset
from shapes import (
    cone_poset,
    cycle_poset,
    pullback_example,
    pullback_poset,
    pushout_2_1,
    pushout_poset,
    simplexlike_zoo,
    telescope_example,
)

SEED = 20240601
ZERO = FgAbGroup()


def _all_zero(groups) -> bool:
    return all(g.is_zero for g in groups)


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------


def criterion_1() -> tuple[bool, str]:
    t = time.perf_counter()
    lims = derived_direct_limits(AbDiagram.constant(cycle_poset()))
    dt = time.perf_counter() - t
    ok = lims[1] == FgAbGroup(1) and dt < 1.0
    return ok, f"lim_1(c_Z) on the cycle = {lims[1]} in {dt:.3f}s"


def criterion_2() -> tuple[bool, str]:
    rng = random.Random(SEED + 2)
    t = time.perf_counter()
    bad = []
    for k in range(20):
        f = random_diagram(rng, pushout_poset())
        lims = derived_inverse_limits(f)
        if lims[0] != f.group("b") or not _all_zero(lims[1:]):
            bad.append(f"pushout #{k}: {[str(x) for x in lims]} vs F(b)={f.group('b')}")
        g = random_diagram(rng, pullback_poset())
        lims = derived_direct_limits(g)
        if lims[0] != g.group("b") or not _all_zero(lims[1:]):
            bad.append(f"pullback #{k}: {[str(x) for x in lims]} vs F(b)={g.group('b')}")
    dt = time.perf_counter() - t
    ok = not bad and dt < 5.0
    return ok, f"20 pushout + 20 pullback diagrams in {dt:.2f}s" + (f"; {bad[0]}" if bad else "")


def _nontrivial(f: AbDiagram) -> bool:
    return f.total_rank() > 0 and f.base.longest_chain >= 1 and len(f.base.degree_one_arrows) >= 2


def criterion_3() -> tuple[bool, str]:
    rng = random.Random(SEED + 3)
    t = time.perf_counter()
    proj = inj = tries = 0
    bad = []
    while (proj < 100 or inj < 100) and tries < 20000:
        tries += 1
        f = random_diagram(rng, random_poset(rng, max_objects=6))
        if not _nontrivial(f):
            continue
        if proj < 100 and is_pseudo_projective(f):
            proj += 1
            lims = derived_direct_limits(f)
            if not _all_zero(lims[1:]):
                bad.append(f"pseudo-projective with lim_* = {[str(x) for x in lims]}")
        if inj < 100 and is_pseudo_injective(f):
            inj += 1
            lims = derived_inverse_limits(f)
            if not _all_zero(lims[1:]):
                bad.append(f"pseudo-injective with lim^* = {[str(x) for x in lims]}")
    dt = time.perf_counter() - t
    ok = proj == 100 and inj == 100 and not bad and dt < 60.0
    return ok, f"{proj} pseudo-projective, {inj} pseudo-injective ({tries} sampled) in {dt:.1f}s" + (
        f"; {bad[0]}" if bad else ""
    )


def criterion_4() -> tuple[bool, str]:
    rng = random.Random(SEED + 4)
    bad = []
    for k in range(50):
        f = random_diagram(rng, random_poset(rng, max_objects=5))
        direct, inverse = derived_direct_limits(f), derived_inverse_limits(f)
        for j in range(4):
            want_d = direct[j] if j < len(direct) else ZERO
            want_i = inverse[j] if j < len(inverse) else ZERO
            if k_sequence(f, j) != want_d:
                bad.append(f"#{k} k_sequence j={j}")
            if c_sequence(f, j) != want_i:
                bad.append(f"#{k} c_sequence j={j}")
    return not bad, "50 diagrams, j <= 3" + (f"; mismatches: {bad[:3]}" if bad else "")


def criterion_5() -> tuple[bool, str]:
    rng = random.Random(SEED + 5)
    bad = []
    for k in range(50):
        f = random_diagram(rng, random_poset(rng, max_objects=6))
        lims = derived_direct_limits(f)
        if lim1_via_flows(f) != (lims[1] if len(lims) > 1 else ZERO):
            bad.append(f"#{k} lim1 mismatch")
            continue
        fs = FlowSpace(f)
        lat = fs.flow_lattice
        if lat.cols == 0:
            continue
        coeffs = [rng.randint(-3, 3) for _ in range(lat.cols)]
        vec = [sum(c * lat[i, j] for j, c in enumerate(coeffs)) for i in range(lat.rows)]
        x = fs.from_vector(vec)
        y = reduce_flow_to_core(f, x)
        keep = set(core(f.base).names)
        if not same_lim1_class(f, x, y):
            bad.append(f"#{k} class changed")
        if any(a not in keep or b not in keep for a, b in y):
            bad.append(f"#{k} support leaves the core")
    return not bad, "50 diagrams: flows vs Moore lim_1, core reduction" + (f"; {bad[:3]}" if bad else "")


def _ch2_examples() -> list[tuple[str, AbDiagram]]:
    return [
        ("pushout", pushout_2_1()),
        ("pullback", pullback_example()),
        ("telescope", telescope_example(4, 2)),
        ("cycle", AbDiagram.constant(cycle_poset())),
        ("cone", AbDiagram.constant(cone_poset())),
    ]


def criterion_6() -> tuple[bool, str]:
    rng = random.Random(SEED + 6)
    cases = _ch2_examples() + [(f"random #{k}", random_diagram(rng, random_poset(rng, max_objects=5))) for k in range(20)]
    failures = []
    for name, f in cases:
        direct, inverse = derived_direct_limits(f), derived_inverse_limits(f)
        for row, v in VARIANTS.items():
            fc = build_filtered(f, row)
            rep = check_weak_convergence(fc, direct if v.complex == "chain" else inverse)
            if not rep.ok:
                failures.append(f"{name} row {row}: {rep.mismatches[0]}")
    detail = f"{len(cases)} diagrams x 8 variants, {len(failures)} literal mismatches"
    if failures:
        detail += f"; first: {failures[0]}"
    return not failures, detail


def criterion_7() -> tuple[bool, str]:
    bad = []
    for n in range(5):
        p, fam = delta_covering_family(n)
        if validate_covering(p, fam):
            bad.append(f"n={n} invalid")
        if not check_adequate(p, fam):
            bad.append(f"n={n} not adequate")
        r = compute_R(p)
        for i in p.names:
            q = p.deg(i)
            for k in range(q + 1):
                want = sum((-1) ** (k - l) * comb(q + 1, l) for l in range(k + 1))
                if r(i, k) != want:
                    bad.append(f"n={n} R^{i}_{k}={r(i, k)} != {want}")
        tower = build_Fp_tower(p, fam)
        bad += [f"n={n} {m}" for m in tower.dims_match(r)]
    return not bad, "Δ_0..Δ_4: valid, adequate, binomial R, tower dims" + (f"; {bad[:3]}" if bad else "")


def criterion_8() -> tuple[bool, str]:
    zoo = list(simplexlike_zoo().items())[:10]
    bad = []
    for name, p in zoo:
        fam = simplexlike_covering_family(p)
        tower = build_Fp_tower(p, fam)
        direct = cohomology(p)
        from_tower = cohomology_from_tower(tower)
        if from_tower != direct[: len(from_tower)] or not _all_zero(direct[len(from_tower) :]):
            bad.append(f"{name}: tower {[str(x) for x in from_tower]} vs {[str(x) for x in direct]}")
        chi = sum((-1) ** k * g.free_rank for k, g in enumerate(direct))
        if euler_characteristic(p) != chi or euler_characteristic(p, simplex_like=True) != chi:
            bad.append(f"{name}: euler")
    return not bad, f"{len(zoo)} simplex-like posets" + (f"; {bad[:2]}" if bad else "")


WEBB_CASES = [("S3", 2), ("S3", 3), ("D8", 2), ("Q8", 2), ("A4", 2), ("S4", 2)]


def criterion_9() -> tuple[bool, str]:
    t = time.perf_counter()
    bad = []
    for name, p in WEBB_CASES:
        r = webb_verify(builtin_group(name), p)
        h = r.cochain_cohomology
        if not (
            r.k_sizes[0] == 1
            and r.psi.ok
            and r.certificate.acyclic
            and h[0] == FgAbGroup(1)
            and _all_zero(h[1:])
            and r.ok
        ):
            bad.append(f"{name},{p}")
    dt = time.perf_counter() - t
    ok = not bad and dt < 300
    return ok, f"{len(WEBB_CASES)} (G,p) pairs in {dt:.1f}s" + (f"; failing: {bad}" if bad else "")


def criterion_10() -> tuple[bool, str]:
    t = time.perf_counter()
    bad = []
    for name in ("C2", "C3", "S3"):
        g0 = builtin_group(name)
        h = fiber_homology(libman_example(g0)).homology
        if h[2] != FgAbGroup(g0.order - 1) or not h[3].is_zero:
            bad.append(f"Libman {name}: H2={h[2]}, H3={h[3]}")
    count = 0
    for name in ("S3", "D8", "A4"):
        g0 = builtin_group(name)
        subs = g0.subgroups
        for b in subs:
            for c in subs:
                gd = whitehead_example(g0, sorted(b & c), sorted(b), sorted(c))
                h = fiber_homology(gd).homology
                count += 1
                if not _all_zero(h.values()):
                    bad.append(f"Whitehead {name}")
    dt = time.perf_counter() - t
    ok = not bad and dt < 30
    return ok, f"Libman for C2, C3, S3 and {count} Whitehead pushouts in {dt:.1f}s" + (f"; {bad[:2]}" if bad else "")


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 11)}


# ---------------------------------------------------------------------------
# pytest wrappers
# ---------------------------------------------------------------------------


def _run(n: int) -> None:
    from conftest import ACCEPTANCE

    ok, detail = CRITERIA[n]()
    ACCEPTANCE[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 7, 8, 9, 10])
def test_criterion(n):
    _run(n)


@pytest.mark.xfail(
    strict=True,
    reason=(
        "E_inf torsion orders need not multiply to the target torsion order: the pushout "
        "b -> a (x2), b -> c (x1) has lim_0 = Z but E_inf = Z and Z/2 in rows 1 and 3; "
        "recorded in the decisions ledger"
    ),
)
def test_criterion_6_literal_torsion_products():
    _run(6)


if __name__ == "__main__":
    failed = 0
    for n, fn in CRITERIA.items():
        ok, detail = fn()
        failed += not ok
        print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    sys.exit(1 if failed else 0)
