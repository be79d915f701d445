"""Command-line front end.

Every subcommand prints a short human summary and, with ``--out``, writes a
JSON report whose layout is described by ``schema/report.schema.json``.
Exit status: 0 when every asserted flag holds, 1 when one fails, 2 for bad
arguments or a cap violation.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import sys
from pathlib import Path

from . import klein, s6_outer, staudt
from .finite_field import DEFAULT_FIELD_CAP, Field, FieldError
from .perm_group import DEFAULT_FACTORIAL_CAP, DEFAULT_ORDER_CAP, GroupError
from .projective_space import DEFAULT_POINT_CAP, ProjSpace, SpaceError

log = logging.getLogger("kleingeom")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class Summary:
    def __init__(self, stream=None):
        self.stream = stream or sys.stdout

    def __call__(self, msg: str = "") -> None:
        print(msg, file=self.stream)


def dump_report(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _field(args) -> Field:
    return Field(args.p, args.k, cap=args.max_field)


def _pass_word(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


# -- subcommands ---------------------------------------------------------------
# Each returns (report dict, passed).

def cmd_field(args, say):
    F = _field(args)
    auts = F.automorphisms()
    say(f"GF({F.q}) = GF({F.p})[x] / modulus {F.modulus} (low degree first)")
    say(f"automorphisms: {len(auts)} (Frobenius powers j = 0..{F.k - 1})")
    if F.q <= 16:
        say("multiplication table:")
        for row in F.mul_table:
            say("  " + " ".join(f"{x:2d}" for x in row))
    doc = {
        "report": "field", "version": klein.REPORT_VERSION, "field": F.to_dict(), "q": F.q,
        "add": F.add_table, "mul": F.mul_table, "inv": F.inv_table,
        "automorphisms": [{"frobenius_exponent": h.j, "table": list(h.table)} for h in auts],
        "passed": True,
    }
    return doc, True


def cmd_space(args, say):
    S = ProjSpace(_field(args), args.n, cap=args.max_points)
    patch = S.affine_patch()
    say(f"{S.label}: {len(S)} points, {len(S.lines)} lines, "
        f"{len(patch)} affine + {len(patch.infinity)} at infinity")
    doc = {
        "report": "space", "version": klein.REPORT_VERSION, "label": S.label,
        "field": S.field.to_dict(), "n": S.n, "point_count": len(S),
        "points": [list(v) for v in S.points],
        "lines": [sorted(L) for L in S.lines] if S.n >= 2 else [sorted(S.lines[0])],
        "affine_points": list(patch.affine_points), "infinity": sorted(patch.infinity),
        "passed": True,
    }
    return doc, True


def cmd_group(args, say):
    F = _field(args)
    caps = dict(matrix_cap=args.max_matrices, order_cap=args.max_order, point_cap=args.max_points)
    if args.which == "aff":
        geom = klein.affine_geometry(F, args.n, **caps)
        G = geom.G
    else:
        geom = klein.projective_geometry(F, args.n, **caps)
        G = geom.G if args.which == "pgl" else geom.staudt_group
    say(f"{args.which} on {geom.label}: degree {G.degree}, order {G.order}, "
        f"{len(G.generators)} generators")
    doc = {"report": "group", "version": klein.REPORT_VERSION, "group": args.which,
           "geometry": geom.describe(), **G.to_dict(), "passed": True}
    return doc, True


def _projective(args):
    return klein.projective_geometry(_field(args), args.n, matrix_cap=args.max_matrices,
                                     order_cap=args.max_order, point_cap=args.max_points)


def cmd_lemma1(args, say):
    rep = klein.verify_lemma1(_projective(args))
    say(f"lemma1 on {rep.geometry['label']}: {rep.triples} triples, "
        f"{rep.collinear} collinear, agreement {rep.agreements}/{rep.triples} "
        f"-> {_pass_word(rep.passed)}")
    return rep.to_dict(args.timings), rep.passed


def _say_verification(say, rep):
    o = rep.normalizer_order
    say(f"{rep.campaign} on {rep.geometry['label']} ({rep.strategy}): "
        f"|G| = {rep.structural_order}, |reference| = {rep.reference_order}, "
        f"|N| = {o if o is not None else 'n/a'}")
    for name, ok in sorted(rep.flags.items()):
        say(f"  {name}: {ok}")
    if rep.sampling:
        say(f"  sampling: {rep.sampling}")
    if rep.note:
        say(f"  note: {rep.note}")
    say(f"  -> {_pass_word(rep.passed)}" + ("" if rep.asserted else " (not asserted)"))


def cmd_theorem1(args, say):
    rep = klein.automorphism_group(_projective(args), args.strategy, samples=args.samples,
                                   seed=args.seed, factorial_cap=args.max_factorial,
                                   jobs=args.jobs)
    _say_verification(say, rep)
    return rep.to_dict(args.timings), rep.passed


def cmd_affine(args, say):
    rep = klein.verify_theorem_affine(_field(args), args.n, factorial_cap=args.max_factorial,
                                      jobs=args.jobs, matrix_cap=args.max_matrices,
                                      order_cap=args.max_order)
    _say_verification(say, rep)
    return rep.to_dict(args.timings), rep.passed


def cmd_lemma2(args, say):
    rep = klein.verify_lemma2_campaign(_field(args))
    say(f"lemma2 on {rep.geometry['label']}: {rep.checked} Staudt projectivities, "
        f"Frobenius exponents {dict(sorted(rep.frobenius_counts.items()))}, "
        f"{len(rep.failures)} failures")
    if rep.negative_flags is not None:
        say(f"  negative case {rep.negative_witness}: {rep.negative_flags}")
    if rep.note:
        say(f"  note: {rep.note}")
    say(f"  -> {_pass_word(rep.passed)}")
    return rep.to_dict(args.timings), rep.passed


def cmd_collineations(args, say):
    geom = _projective(args)
    found = staudt.collineations_backtrack(geom.space)
    reference = geom.staudt_group
    same = set(found) == reference.elements
    decomposed = sum(staudt.decompose_staudt(geom.space, g) is not None for g in found)
    ok = same and decomposed == len(found)
    say(f"collineations of {geom.label}: {len(found)} found, |PGammaL| = {reference.order}, "
        f"equal: {same}, decomposed {decomposed}/{len(found)} -> {_pass_word(ok)}")
    doc = {"report": "collineations", "version": klein.REPORT_VERSION,
           "geometry": geom.describe(), "collineations": len(found),
           "reference_order": reference.order,
           "flags": {"equals_reference": same, "all_decompose": decomposed == len(found)},
           "passed": ok}
    return doc, ok


def cmd_s6_outer(args, say):
    rep = s6_outer.build_outer_automorphism()
    s6_outer.verify_outer(rep)
    say(f"S6 outer automorphism from P1(F5): |PGL| = {rep.pgl.order}, "
        f"{len(rep.conjugates)} conjugates")
    for name, ok in sorted(rep.flags.items()):
        say(f"  {name}: {ok}")
    w = rep.witnesses
    say(f"  F{tuple(w['transposition'])} = {tuple(w['transposition_image'])}, "
        f"cycle type {tuple(w['transposition_image_cycle_type'])}")
    say(f"  -> {_pass_word(rep.passed)}")
    return rep.to_dict(args.timings), rep.passed


def _suite_plan(quick: bool, slow: bool, samples: int):
    """(name, argv) for every campaign run by ``all``."""
    plan = [
        ("s6-outer", ["s6-outer"]),
        ("theorem1 P1(F5)", ["theorem1", "5", "1", "1"]),
        ("theorem1 P1(F4)", ["theorem1", "2", "2", "1"]),
        ("theorem1 P1(F7)", ["theorem1", "7", "1", "1"]),
        ("theorem1 P2(F2)", ["theorem1", "2", "1", "2"]),
    ]
    if not quick:
        plan.append(("theorem1 P1(F8)", ["theorem1", "2", "3", "1"]))
    if slow:
        plan.append(("theorem1 P1(F9)", ["theorem1", "3", "2", "1"]))
    plan += [
        ("theorem1 P2(F4) sampled",
         ["theorem1", "2", "2", "2", "--strategy", "sampled", "--samples", str(samples)]),
        ("lemma1 P2(F2)", ["lemma1", "2", "1", "2"]),
        ("lemma1 P2(F3)", ["lemma1", "3", "1", "2"]),
        ("lemma1 P1(F5)", ["lemma1", "5", "1", "1"]),
    ]
    plan += [(f"lemma2 F{p ** k}", ["lemma2", str(p), str(k)])
             for p, k in [(2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]]
    plan += [
        ("affine A1(F4)", ["affine", "2", "2", "1"]),
        ("affine A2(F3)", ["affine", "3", "1", "2"]),
        ("affine A1(F5)", ["affine", "5", "1", "1"]),
        ("affine A2(F2)", ["affine", "2", "1", "2"]),
        ("collineations P2(F2)", ["collineations", "2", "1", "2"]),
    ]
    return plan


def cmd_all(args, say):
    samples = args.samples if args.samples is not None else (10**4 if args.quick else 10**5)
    parser = build_parser()
    campaigns = []
    ok_all = True
    for name, argv in _suite_plan(args.quick, args.slow, samples):
        sub = parser.parse_args(argv + ["--jobs", str(args.jobs), "--seed", str(args.seed)]
                                + (["--timings"] if args.timings else []))
        doc, ok = sub.func(sub, Summary(io.StringIO()))
        ok_all &= ok
        say(f"[{_pass_word(ok)}] {name}")
        campaigns.append({"name": name, "argv": argv, "passed": ok, "report": doc})
    say(f"suite: {sum(c['passed'] for c in campaigns)}/{len(campaigns)} campaigns passed")
    doc = {"report": "suite", "version": klein.REPORT_VERSION, "quick": args.quick,
           "campaigns": campaigns, "passed": ok_all}
    return doc, ok_all


# -- parser ----------------------------------------------------------------

def _common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--out", type=Path, help="write the JSON report here")
    sp.add_argument("--timings", action="store_true",
                    help="include wall-clock durations in the report (breaks byte-stability)")
    sp.add_argument("--max-field", type=int, default=DEFAULT_FIELD_CAP)
    sp.add_argument("--max-points", type=int, default=DEFAULT_POINT_CAP)
    sp.add_argument("--max-matrices", type=int, default=staudt.DEFAULT_MATRIX_CAP)
    sp.add_argument("--max-order", type=int, default=DEFAULT_ORDER_CAP)
    sp.add_argument("--max-factorial", type=int, default=DEFAULT_FACTORIAL_CAP)
    sp.add_argument("--jobs", type=int, default=1, help="worker processes for S_m scans")
    sp.add_argument("--seed", type=int, default=0)


def _pk(sp, with_n=True):
    sp.add_argument("p", type=int, help="characteristic")
    sp.add_argument("k", type=int, help="extension degree")
    if with_n:
        sp.add_argument("n", type=int, help="projective dimension")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kleingeom",
        description="Klein geometries over finite fields and their automorphism groups.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("field", help="field tables and automorphisms")
    _pk(sp, with_n=False)
    sp.set_defaults(func=cmd_field)

    sp = sub.add_parser("space", help="point census of P_n(F_q)")
    _pk(sp)
    sp.set_defaults(func=cmd_space)

    sp = sub.add_parser("group", help="PGL, PGammaL or the affine group as permutations")
    _pk(sp)
    sp.add_argument("which", choices=["pgl", "pgammal", "aff"])
    sp.set_defaults(func=cmd_group)

    sp = sub.add_parser("lemma1", help="H-set collinearity against the rank oracle")
    _pk(sp)
    sp.set_defaults(func=cmd_lemma1)

    sp = sub.add_parser("theorem1", help="normalizer of PGL versus the Staudt group")
    _pk(sp)
    sp.add_argument("--strategy", choices=["brute", "sampled"], default="brute")
    sp.add_argument("--samples", type=int, default=10**5)
    sp.set_defaults(func=cmd_theorem1)

    sp = sub.add_parser("affine", help="normalizer of the affine group")
    _pk(sp)
    sp.set_defaults(func=cmd_affine)

    sp = sub.add_parser("lemma2", help="field automorphism extraction on the projective line")
    _pk(sp, with_n=False)
    sp.set_defaults(func=cmd_lemma2)

    sp = sub.add_parser("collineations", help="all collineations by search, against PGammaL")
    _pk(sp)
    sp.set_defaults(func=cmd_collineations)

    sp = sub.add_parser("s6-outer", help="outer automorphism of S6 from P1(F5)")
    sp.set_defaults(func=cmd_s6_outer)

    sp = sub.add_parser("all", help="run the whole verification suite")
    sp.add_argument("--quick", action="store_true",
                    help="skip P1(F8) brute force and use 10^4 samples")
    sp.add_argument("--slow", action="store_true", help="add the P1(F9) brute-force gate")
    sp.add_argument("--samples", type=int, default=None)
    sp.set_defaults(func=cmd_all)

    for sp in sub.choices.values():
        _common(sp)
    return parser


def main(argv=None, stdout=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    say = Summary(stdout)
    try:
        doc, ok = args.func(args, say)
    except (FieldError, SpaceError, GroupError, staudt.StaudtError) as exc:
        print(f"kleingeom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out is not None:
        args.out.write_text(dump_report(doc))
        log.info("report written to %s", args.out)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
