"""Command-line front end.

    quotsing analyze GROUP.json [--degree-cap N] [--json | --text] [--workers K]
    quotsing invariants GROUP.json --max-degree D [--json]
    quotsing verify-identities [--case all|lift1|lift2|lift3|cone|splitting|induced]
    quotsing catalog list
    quotsing catalog build NAME [-o FILE]
    quotsing catalog fixtures DIR

Exit codes: 0 success, 1 input error (or failed identity), 2 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable

from . import catalog
from .group import GroupOrderCapExceeded
from .invariants import Status, decide_polynomiality, invariant_space, minimal_generators
from .lift_identities import IdentityCheck, IdentityReport, verify_lift_identities
from .poly import Multipoly, act
from .singularity import Verdict, analyze, main_gen_pipeline

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2


def _cap(value: str):
    if value == "auto":
        return "auto"
    try:
        cap = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("degree cap must be a positive integer or 'auto'")
    if cap < 1:
        raise argparse.ArgumentTypeError("degree cap must be positive")
    return cap


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def _report_text(r: dict) -> str:
    lines = [
        f"verdict: {r['verdict']}",
        f"group_order: {r['group_order']}",
        f"h_order: {r['h_order']}",
        f"gp_order: {r['gp_order']}",
        f"origin: {r['origin']['status']} degrees={r['origin']['generator_degrees']}"
        f" evidence={r['origin']['evidence']}",
    ]
    for g in r["origin"]["generators"]:
        lines.append(f"  {g}")
    lines.append("fixators:")
    for f in r["fixators"]:
        lines.append(f"  {f['subspace_basis']} order={f['fixator_order']}"
                     f" {f['polynomiality']} degrees={f['generator_degrees']}")
    if r["witness"] is not None:
        lines.append(f"witness: {r['witness']}")
    red = r["reduction"]
    if red:
        lines.append(f"reduction: |H|={red['h_order']} |G/H|={red['quotient_order']}"
                     f" p_divides={red['p_divides_quotient']} V/H={red['vh_smooth']}"
                     f" prediction_holds={red['prediction_holds']}")
        for w in red["witnesses"]:
            lines.append(f"  witness: {w}")
    km = r["kemper_malle"]
    if km:
        lines.append(f"kemper_malle: condition={km['condition']}"
                     f" invariants_polynomial={km['invariants_polynomial']}"
                     f" consistent={km['consistent']}")
    case = r["case"]
    if case:
        lines.append(f"case: {case['case']} transvective_quotient={case['transvective_quotient']}")
        for k, v in case["steps"].items():
            lines.append(f"  {k}: {v}")
        for f in case["failures"]:
            lines.append(f"  failure: {f}")
    else:
        lines.append("case: null")
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    G = catalog.load_group(args.path, workers=args.workers)
    report = analyze(G, args.degree_cap, workers=args.workers)
    data = report.to_json()
    print(_report_text(data) if args.text else _dump(data))
    return EXIT_INCONCLUSIVE if report.verdict is Verdict.INCONCLUSIVE else EXIT_OK


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------

def cmd_invariants(args) -> int:
    G = catalog.load_group(args.path)
    dims = [invariant_space(G, d).shape[0] for d in range(args.max_degree + 1)]
    gens = minimal_generators(G, max(args.max_degree, 1))
    data = {
        "group_order": G.order,
        "dims": dims,
        "generators": [{"degree": d, "polynomial": str(g)} for d, g in gens.generators],
        "complete": gens.complete,
    }
    if args.json:
        print(_dump(data))
    else:
        print(f"group_order: {G.order}")
        print(f"dims: {dims}")
        for g in data["generators"]:
            print(f"  degree {g['degree']}: {g['polynomial']}")
        print(f"complete: {gens.complete}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# identity replay
# ---------------------------------------------------------------------------

def _flag(report: IdentityReport, case: str, name: str, ok: bool):
    report.checks.append(IdentityCheck(case, name, {}, None, None, bool(ok)))


def cone_checks() -> IdentityReport:
    rep = IdentityReport()
    G = catalog.quadratic_cone_example()
    H = catalog.unipotent_line_group()
    F = G.field
    _flag(rep, "cone", "|G| = 6", G.order == 6)
    _flag(rep, "cone", "|H| = 3", H.order == 3)
    vh = decide_polynomiality(H)
    _flag(rep, "cone", "V/H smooth with degrees (1, 3)", vh.is_polynomial and vh.degrees == [1, 3])
    x, y = Multipoly.variables(F, 2)
    f1 = x * (x + y) * (x + 2 * y)
    t = H.generators[0]
    _flag(rep, "cone", "f1 = x(x+y)(x+2y) is H-invariant", act(t, f1) == f1)
    _flag(rep, "cone", "f2 = y is H-invariant", act(t, y) == y)
    s = next(g for g in G.generators if g.entries == (2, 0, 0, 2))
    _flag(rep, "cone", "s: f1 -> -f1", act(s, f1) == -f1)
    _flag(rep, "cone", "s: f2 -> -f2", act(s, y) == -y)
    vg = decide_polynomiality(G)
    _flag(rep, "cone", "V/G singular at the origin, degrees (2, 4, 6)",
          vg.status is Status.NOT_POLYNOMIAL and vg.degrees == [2, 4, 6])
    return rep


def _extension_report(name: str, what: str) -> IdentityReport:
    rep = IdentityReport()
    rec = main_gen_pipeline(catalog.build(name))
    tag = name
    if what == "splitting":
        st = rec.steps
        _flag(rep, "splitting", f"{tag}: transvection lifts found", st.get("lifts_found"))
        _flag(rep, "splitting", f"{tag}: |N| |C| = |G|", st.get("order_product_matches"))
        _flag(rep, "splitting", f"{tag}: N and C intersect trivially",
              st.get("trivial_intersection"))
        _flag(rep, "splitting", f"{tag}: kernel degree product = |N|",
              st.get("kernel_degree_product") == st.get("kernel_order"))
    else:
        ind = rec.induced
        _flag(rep, "induced", f"{tag}: induced action is linear", ind is not None and ind.linear)
        _flag(rep, "induced", f"{tag}: induced action is decomposable",
              ind is not None and ind.decomposable)
        _flag(rep, "induced", f"{tag}: (V/N)/H smooth",
              ind is not None and ind.induced_verdict is not None
              and ind.induced_verdict.is_polynomial)
        _flag(rep, "induced", f"{tag}: V/G smooth", rec.smooth is True)
    return rep


CASES: dict[str, Callable[[], IdentityReport]] = {
    "lift1": lambda: verify_lift_identities(1),
    "lift2": lambda: verify_lift_identities(2),
    "lift3": lambda: verify_lift_identities(3),
    "cone": cone_checks,
    "splitting": lambda: _merge(_extension_report("ext-case3-sl2-3", "splitting"),
                                _extension_report("ext-case2-dual-sl2-3", "splitting")),
    "induced": lambda: _merge(_extension_report("ext-case3-sl2-3", "induced"),
                              _extension_report("ext-case2-dual-sl2-3", "induced")),
}


def _merge(*reports: IdentityReport) -> IdentityReport:
    out = IdentityReport()
    for r in reports:
        out.extend(r)
    return out


def cmd_verify(args) -> int:
    names = list(CASES) if args.case == "all" else [args.case]
    ok = True
    for name in names:
        rep = CASES[name]()
        print(rep.summary())
        req = rep.required
        print(f"== {name}: {sum(c.passed for c in req)}/{len(req)} required checks pass")
        ok = ok and rep.passed
    return EXIT_OK if ok else EXIT_INPUT


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in catalog.names():
            print(name)
        return EXIT_OK
    if args.action == "build":
        if not args.name:
            raise catalog.GroupDefinitionError("catalog build needs a NAME")
        text = _dump(catalog.group_to_json(catalog.build(args.name), args.name))
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)
        return EXIT_OK
    if not args.name:
        raise catalog.GroupDefinitionError("catalog fixtures needs a DIR")
    for p in catalog.write_fixtures(args.name):
        print(p)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quotsing", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="classify V/G for a group-definition file")
    a.add_argument("path")
    a.add_argument("--degree-cap", type=_cap, default="auto")
    fmt = a.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", default=True)
    fmt.add_argument("--text", action="store_true")
    a.add_argument("--workers", type=int, default=1)
    a.set_defaults(func=cmd_analyze)

    i = sub.add_parser("invariants", help="graded invariant dimensions and minimal generators")
    i.add_argument("path")
    i.add_argument("--max-degree", type=int, required=True)
    i.add_argument("--json", action="store_true")
    i.set_defaults(func=cmd_invariants)

    v = sub.add_parser("verify-identities", help="replay the exact matrix identities")
    v.add_argument("--case", choices=["all", *CASES], default="all")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("catalog", help="list or export named groups")
    c.add_argument("action", choices=["list", "build", "fixtures"])
    c.add_argument("name", nargs="?")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_catalog)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (catalog.GroupDefinitionError, catalog.UnsupportedGroupError, FileNotFoundError,
            GroupOrderCapExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
