"""``limkit`` command line.

Exit codes: 0 success, 1 domain error (including failed validation),
2 usage error.  ``FILE`` may be a path or ``example:NAME`` for a bundled
input (see ``limkit examples``).
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from typing import Any, Callable, Sequence

from . import covering, derived, diagram, spectral, webb
from .errors import InvalidInput, LimkitError
from .fiber import fiber_homology
from .poset import core_stages
from .textformat import InputDocument, build_group, parse
from .webb import builtin_group

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class Report:
    """Collects lines for text mode and a dict for JSON mode."""

    def __init__(self) -> None:
        self.lines: list[str] = []
        self.data: dict[str, Any] = {}

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def put(self, key: str, value: Any) -> None:
        self.data[key] = value


# ---------------------------------------------------------------------------
# Input helpers
# ---------------------------------------------------------------------------


def example_names() -> list[str]:
    return sorted(p.name[:-3] for p in (resources.files("limkit") / "data").iterdir() if p.name.endswith(".lk"))


def read_input(ref: str) -> str:
    if ref.startswith("example:"):
        name = ref.split(":", 1)[1]
        path = resources.files("limkit") / "data" / f"{name}.lk"
        if not path.is_file():
            raise InvalidInput(f"no bundled example {name!r}; available: {', '.join(example_names())}")
        return path.read_text(encoding="utf-8")
    with open(ref, encoding="utf-8") as fh:
        return fh.read()


def load(ref: str) -> InputDocument:
    return parse(read_input(ref))


def _gj(x) -> dict:
    return x.to_json()


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_validate(args, rep: Report) -> int:
    doc = load(args.file)
    problems: list[str] = []
    if doc.sections == ["group"]:
        g = build_group(doc.group)
        rep.put("sections", doc.sections)
        rep.put("group_order", g.order)
        rep.put("violations", problems)
        rep.line(f"ok: group of order {g.order}")
        return EXIT_OK
    p = doc.poset()
    problems += p.validate()
    if not problems and "diagram" in doc.sections:
        problems += diagram.validate_diagram(doc.diagram(p))
    if not problems and "group-diagram" in doc.sections:
        gd = doc.group_diagram(p)
        problems += gd.problems()
        if not problems:
            gd.validate()
    if not problems and "covering" in doc.sections:
        fam = doc.covering_family(p)
        problems += covering.validate_covering(p, fam)
        if not problems:
            ad = covering.check_adequate(p, fam)
            rep.line(f"covering family adequate: {'yes' if ad else 'no (' + str(ad.witness) + ')'}")
            rep.put("covering_adequate", bool(ad))
    rep.put("sections", doc.sections)
    rep.put("violations", problems)
    if problems:
        rep.line("invalid:")
        rep.lines += [f"  {x}" for x in problems]
        return EXIT_DOMAIN
    rep.line(f"ok: {len(p)} objects, sections {', '.join(doc.sections)}")
    return EXIT_OK


def cmd_limits(args, rep: Report) -> int:
    doc = load(args.file)
    f = doc.diagram()
    inverse = args.inverse
    vals = derived.derived_inverse_limits(f) if inverse else derived.derived_direct_limits(f)
    if args.max_degree is not None:
        vals = vals[: args.max_degree + 1]
    sym = "^" if inverse else "_"
    for k, g in enumerate(vals):
        rep.line(f"lim{sym}{k} = {g}")
    rep.put("kind", "inverse" if inverse else "direct")
    rep.put("values", [_gj(g) for g in vals])
    return EXIT_OK


def cmd_check(args, rep: Report) -> int:
    doc = load(args.file)
    f = doc.diagram()
    if args.pseudo_projective:
        name, res = "pseudo-projective", diagram.is_pseudo_projective(f)
    elif args.pseudo_injective:
        name, res = "pseudo-injective", diagram.is_pseudo_injective(f)
    elif args.pre_projective:
        name, res = "pre-projective", diagram.check_pre_projective(f)
    else:
        name, res = f"{args.p_condensed}-condensed", covering.check_p_condensed(f, args.p_condensed)
    status = getattr(res, "status", "true" if res else "false")
    text = {"true": "yes", "false": "no", "not checked": "not checked"}[status]
    extra = f" ({res.witness})" if res.witness else ""
    if getattr(res, "unchecked", ()):
        extra += f" [unchecked: {', '.join(res.unchecked)}]"
    rep.line(f"{name}: {text}{extra}")
    rep.put("property", name)
    rep.put("status", status)
    rep.put("witness", res.witness)
    return EXIT_OK


def cmd_spectral(args, rep: Report) -> int:
    doc = load(args.file)
    f = doc.diagram()
    fc = spectral.build_filtered(f, args.variant)
    rep.line(fc.variant.describe())
    ps = spectral.pages(fc, args.pages)
    out_pages = []
    for pg in ps:
        rep.line(pg.grid())
        out_pages.append({"r": pg.r, "entries": {f"{p},{q}": _gj(g) for (p, q), g in sorted(pg.entries.items())}})
    inf = spectral.e_infinity(fc)
    rep.line("E_inf:")
    rep.line(inf.grid().replace(f"E_{inf.r}", "E_inf", 1))
    target = derived.derived_direct_limits(f) if fc.variant.complex == "chain" else derived.derived_inverse_limits(f)
    conv = spectral.check_weak_convergence(fc, target)
    sym = "_" if fc.variant.complex == "chain" else "^"
    rep.line("target: " + ", ".join(f"lim{sym}{k} = {g}" for k, g in enumerate(target)))
    rep.line(f"rank sums and torsion orders match: {'yes' if conv.ok else 'no'}")
    rep.line(f"E_inf equals the filtration quotients: {'yes' if conv.exact_ok else 'no'}")
    for m in conv.mismatches:
        rep.line(f"  {m}")
    rep.put("variant", args.variant)
    rep.put("pages", out_pages)
    rep.put("e_infinity", {f"{p},{q}": _gj(g) for (p, q), g in sorted(inf.entries.items())})
    rep.put("target", [_gj(g) for g in target])
    rep.put("literal_match", conv.ok)
    rep.put("exact_match", conv.exact_ok)
    return EXIT_OK


def cmd_cohomology(args, rep: Report) -> int:
    doc = load(args.file)
    p = doc.poset()
    h = derived.cohomology(p)
    for k, g in enumerate(h):
        rep.line(f"H^{k} = {g}")
    chi = sum((-1) ** k * g.free_rank for k, g in enumerate(h))
    rep.line(f"euler characteristic = {chi}")
    rep.put("cohomology", [_gj(g) for g in h])
    rep.put("euler", chi)
    fam_doc = load(args.family) if args.family else (doc if "covering" in doc.sections else None)
    glob_doc = load(args.global_file) if args.global_file else (doc if "global" in doc.sections else None)
    if covering.bounded_above_problems(p):
        if fam_doc or glob_doc:
            raise InvalidInput("families need a decreasing poset with maximal elements in degree 0", covering.bounded_above_problems(p))
        return EXIT_OK
    if fam_doc is not None:
        fam = fam_doc.covering_family(p)
        source = "given"
    else:
        try:
            fam = covering.simplexlike_covering_family(p)
            source = "simplex-like construction"
        except LimkitError:
            return EXIT_OK
    tower = covering.build_Fp_tower(p, fam)
    ht = covering.cohomology_from_tower(tower)
    agree = [str(x) for x in ht] == [str(x) for x in h[: len(ht)]]
    rep.line(f"covering family ({source}); H^* from the F_p tower: " + ", ".join(str(x) for x in ht))
    rep.line(f"tower agrees with cochain cohomology: {'yes' if agree else 'no'}")
    rep.put("tower_cohomology", [_gj(g) for g in ht])
    rep.put("tower_agrees", agree)
    if glob_doc is not None:
        cert = covering.acyclicity_certificate(p, fam, glob_doc.global_family(p), tower)
        rep.line(f"certificate: {cert.verdict}, |K0|={cert.k0}, components={cert.components}")
        rep.put("certificate", {"verdict": cert.verdict, "k0": cert.k0, "components": cert.components, "h0_rank": cert.h0_rank})
    return EXIT_OK


def _resolve_group(ref: str):
    try:
        return builtin_group(ref)
    except InvalidInput:
        doc = load(ref)
        if doc.group is None:
            raise InvalidInput(f"{ref} has no [group] section") from None
        return build_group(doc.group, ref)


def cmd_webb(args, rep: Report) -> int:
    g = _resolve_group(args.group)
    r = webb.webb_verify(g, args.prime)
    verdict = r.certificate.verdict
    rep.line(f"{r.group} at p={r.prime}: |S|={r.sylow_order}")
    rep.line(f"objects per degree: {list(r.objects_per_degree)}")
    rep.line(f"|K_n|: {list(r.k_sizes)}")
    rep.line(f"psi bijection: {'verified' if r.psi.ok else 'FAILED'}")
    rep.line("cochain cohomology: " + ", ".join(str(x) for x in r.cochain_cohomology))
    rep.line(f"{verdict}, |K0|={r.k_sizes[0]}")
    rep.put("group", r.group)
    rep.put("prime", r.prime)
    rep.put("sylow_order", r.sylow_order)
    rep.put("objects_per_degree", list(r.objects_per_degree))
    rep.put("k_sizes", list(r.k_sizes))
    rep.put("psi_ok", r.psi.ok)
    rep.put("verdict", verdict)
    rep.put("cohomology", [_gj(x) for x in r.cochain_cohomology])
    return EXIT_OK if r.ok else EXIT_DOMAIN


def cmd_fiber(args, rep: Report) -> int:
    doc = load(args.file)
    g0 = builtin_group(args.g0) if args.g0 else None
    gd = doc.group_diagram(g0=g0)
    r = fiber_homology(gd, args.max_degree, assume_contractible=args.assume_contractible)
    rep.line(f"base: {r.evidence} contractible")
    rep.line("H ranks: " + ", ".join(f"{n}={r.h.rank(n)}" for n in gd.base.names))
    for j, v in r.homology.items():
        rep.line(f"H_{j}(F) = {v}")
    rep.line(f"pi_1(F): {r.pi1}")
    rep.line(f"pi_0(F): {r.pi0}")
    rep.put("evidence", r.evidence)
    rep.put("h_ranks", {n: r.h.rank(n) for n in gd.base.names})
    rep.put("homology", {str(j): _gj(v) for j, v in r.homology.items()})
    rep.put("pi1", r.pi1)
    rep.put("pi0", r.pi0)
    return EXIT_OK


def cmd_core(args, rep: Report) -> int:
    p = load(args.file).poset()
    stages = core_stages(p)
    removed = [n for _, rm in stages for n in rm]
    kept = [n for n in p.names if n not in removed]
    for k, (_, rm) in enumerate(stages, start=1):
        rep.line(f"step {k}: removed {' '.join(rm)}")
    rep.line(f"core: {' '.join(kept) if kept else '(empty)'}")
    rep.put("steps", [rm for _, rm in stages])
    rep.put("core", kept)
    return EXIT_OK


def cmd_euler(args, rep: Report) -> int:
    p = load(args.file).poset()
    h = derived.cohomology(p)
    chi = sum((-1) ** k * g.free_rank for k, g in enumerate(h))
    rep.line(f"from cohomology: {chi}")
    rep.put("from_cohomology", chi)
    if not covering.bounded_above_problems(p):
        r = covering.compute_R(p)
        viaR = covering.euler_characteristic(p, r)
        rep.line(f"from R numbers: {viaR}")
        rep.put("from_R", viaR)
        if p.opposite().is_simplex_like()[0]:
            viaS = covering.euler_characteristic(p, simplex_like=True)
            rep.line(f"from object counts: {viaS}")
            rep.put("from_object_counts", viaS)
    return EXIT_OK


def cmd_examples(args, rep: Report) -> int:
    names = example_names()
    rep.lines += names
    rep.put("examples", names)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="limkit", description="Higher limits of diagrams over graded posets.")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help_: str, needs_file: bool = True) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        if needs_file:
            sp.add_argument("file", help="input path or example:NAME")
        sp.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
        return sp

    add("validate", cmd_validate, "parse and validate an input file")
    sp = add("limits", cmd_limits, "derived direct or inverse limits")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--direct", action="store_true", default=True)
    g.add_argument("--inverse", action="store_true")
    sp.add_argument("--max-degree", type=int)
    sp = add("check", cmd_check, "structural properties of a diagram")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--pseudo-projective", action="store_true")
    g.add_argument("--pseudo-injective", action="store_true")
    g.add_argument("--pre-projective", action="store_true")
    g.add_argument("--p-condensed", type=int, metavar="P")
    sp = add("spectral", cmd_spectral, "pages of the first-filtration spectral sequence")
    sp.add_argument("--variant", type=int, choices=range(1, 9), required=True)
    sp.add_argument("--pages", type=int, metavar="R")
    sp = add("cohomology", cmd_cohomology, "cohomology, tower cross-check and acyclicity certificate")
    sp.add_argument("--family", metavar="FILE")
    sp.add_argument("--global", dest="global_file", metavar="FILE")
    sp = add("webb", cmd_webb, "normal-chain orbit poset acyclicity for a finite group", needs_file=False)
    sp.add_argument("--group", required=True, help="builtin name (C4, D8, Q8, S4, A4, ...) or a file")
    sp.add_argument("--prime", type=int, required=True)
    sp = add("fiber", cmd_fiber, "homology of the homotopy fiber of a group diagram")
    sp.add_argument("--g0", help="builtin group used when the file has no g0")
    sp.add_argument("--max-degree", type=int)
    sp.add_argument("--assume-contractible", action="store_true")
    add("core", cmd_core, "the core of a poset")
    add("euler", cmd_euler, "Euler characteristic")
    add("examples", cmd_examples, "list bundled inputs", needs_file=False)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    rep = Report()
    try:
        code = args.fn(args, rep)
    except (LimkitError, OSError) as exc:
        detail = getattr(exc, "violations", [])
        if args.format == "json":
            print(json.dumps({"error": type(exc).__name__, "message": str(exc), "violations": detail}))
        else:
            print(f"error: {exc}", file=sys.stderr)
            for v in detail:
                print(f"  {v}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.format == "json":
        print(json.dumps({"command": args.command, "exit": code, **rep.data}, indent=2, sort_keys=True))
    else:
        print("\n".join(rep.lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
