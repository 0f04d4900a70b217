"""Command-line frontend.

Exit codes: 0 = positive verdict, 1 = negative verdict, 2 = usage or
parse error, 3 = inconclusive / resource limits.  ``--report PATH``
writes a JSON report, a CSV table and a PNG drawing sharing PATH's stem.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import generators, structures
from .containment import INCONCLUSIVE, NO, YES, decide_containment
from .entailment import (
    ENTAILS,
    NOT_ENTAILS,
    build_truncation,
    decide_entailment,
    skolemize,
)
from .errors import ParseError, QcspError, ResourceLimitError
from .game import evaluate
from .hom import find_majority_polymorphism, find_surjective_hom, orbit_count
from .qcore import find_qcore
from .sentences import parse_sentence, propagate_equalities
from .structures import product, structure_to_dict

EXIT_POSITIVE = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3


def _load_structure(path):
    with open(path, encoding="utf-8") as fh:
        return structures.loads(fh.read())


def _load_sentence(path):
    with open(path, encoding="utf-8") as fh:
        return parse_sentence(fh.read())


def _emit(args, payload, text):
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _witness_rows(witness, a, b):
    na, nb = a.element_names(), b.element_names()
    return [(x, na[x], witness.mapping[x], nb[witness.mapping[x]])
            for x in range(a.size)]


def _write_report(path, payload, rows, figures):
    stem = os.path.splitext(path)[0]
    with open(stem + ".json", "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
    with open(stem + ".csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        for row in rows:
            writer.writerow(row)
    from .viz import draw_structure

    for suffix, structure, title in figures:
        draw_structure(structure, f"{stem}{suffix}.png", title=title)


def _maybe_figure(args, structure, title=""):
    if getattr(args, "figure", None):
        from .viz import draw_structure

        draw_structure(structure, args.figure, title=title)


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_eval(args):
    a = _load_structure(args.structure)
    s = _load_sentence(args.sentence)
    result = evaluate(a, s)
    _maybe_figure(args, a)
    _emit(args, {"truth": result.truth, "states": result.states},
          "true" if result.truth else "false")
    return EXIT_POSITIVE if result.truth else EXIT_NEGATIVE


def _cmd_contain(args):
    a = _load_structure(args.a)
    b = _load_structure(args.b)
    bound = args.bound
    if bound is not None and bound not in ("orbit", "cardinality"):
        bound = int(bound)
    verdict = decide_containment(a, b, cap=args.cap, bound_override=bound)
    payload = {
        "outcome": verdict.outcome, "r": verdict.r, "bound": verdict.bound,
        "bound_kind": verdict.bound_kind, "reason": verdict.reason,
    }
    lines = [f"{verdict.outcome}" + (f" (r={verdict.r})" if verdict.r else "")]
    rows = [("outcome", verdict.outcome), ("r", verdict.r),
            ("bound", verdict.bound), ("bound_kind", verdict.bound_kind)]
    if verdict.witness is not None and args.witness:
        payload["witness"] = list(verdict.witness.mapping)
        lines.append("surjection from the power (element -> image):")
        nb = b.element_names()
        for x, v in enumerate(verdict.witness.mapping):
            lines.append(f"  {x} -> {nb[v]}")
    if args.report:
        wrows = rows + [("map", x, v) for x, v in
                        enumerate(verdict.witness.mapping if verdict.witness else ())]
        _write_report(args.report, payload, wrows,
                      [("-a", a, "left structure"), ("-b", b, "right structure")])
    _emit(args, payload, "\n".join(lines))
    if verdict.outcome == YES:
        return EXIT_POSITIVE
    if verdict.outcome == NO:
        return EXIT_NEGATIVE
    return EXIT_INCONCLUSIVE


def _cmd_entail(args):
    phi = _load_sentence(args.phi)
    psi = _load_sentence(args.psi)
    info = {}
    verdict = decide_entailment(phi, psi, max_terms=args.max_terms,
                                max_states=args.max_states, report=info)
    if args.trace and info.get("path") == "game" and "rank" in info:
        body = propagate_equalities(phi) if phi.has_equality() else phi
        t = build_truncation(skolemize(body), info["l"], info["rank"],
                             max_terms=args.max_terms)
        print(structures.dumps(t.to_structure(), name="truncation"),
              file=sys.stderr)
    _emit(args, {"verdict": verdict, **info}, verdict)
    if verdict == ENTAILS:
        return EXIT_POSITIVE
    if verdict == NOT_ENTAILS:
        return EXIT_NEGATIVE
    return EXIT_INCONCLUSIVE


def _cmd_qcore(args):
    a = _load_structure(args.structure)
    report = find_qcore(a)
    payload = {
        "inconclusive": report.inconclusive,
        "kept_elements": list(report.kept_elements),
        "is_induced": report.is_induced,
        "reason": report.reason,
    }
    if report.core is not None:
        payload["core"] = structure_to_dict(report.core, name="qcore")
        payload["minimality"] = [
            {"weakening": desc, "outcome": v.outcome}
            for desc, v in report.minimality
        ]
    text = ("inconclusive: " + report.reason if report.inconclusive and report.core is None
            else structures.dumps(report.core, name="qcore"))
    if args.report:
        rows = [("kept_element", x) for x in report.kept_elements]
        rows += [("weakening", desc, v.outcome) for desc, v in report.minimality]
        figures = [("-input", a, "input")]
        if report.core is not None:
            figures.append(("-core", report.core, "q-core"))
        _write_report(args.report, payload, rows, figures)
    _emit(args, payload, text)
    return EXIT_INCONCLUSIVE if report.core is None else EXIT_POSITIVE


def _cmd_surhom(args):
    a = _load_structure(args.a)
    b = _load_structure(args.b)
    witness = find_surjective_hom(a, b)
    payload = {"found": witness is not None}
    text = "found" if witness else "none"
    if witness and args.witness:
        payload["witness"] = list(witness.mapping)
        text += "\n" + "\n".join(
            f"  {name_a} -> {name_b}"
            for _, name_a, _, name_b in _witness_rows(witness, a, b)
        )
    _emit(args, payload, text)
    return EXIT_POSITIVE if witness else EXIT_NEGATIVE


def _cmd_product(args):
    a = _load_structure(args.a)
    b = _load_structure(args.b)
    p = product(a, b)
    text = structures.dumps(p, name="product")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    _maybe_figure(args, p, title="product")
    return EXIT_POSITIVE


def _cmd_gen(args):
    params = []
    for p in args.params:
        if p in ("reflexive", "irreflexive"):
            params.append(p == "reflexive")
        elif p.isdigit():
            params.append(int(p))
        else:
            params.append(p)
    a = generators.generate(args.family, *params)
    text = structures.dumps(a, name=f"{args.family}")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    _maybe_figure(args, a, title=args.family)
    return EXIT_POSITIVE


def _cmd_orbits(args):
    a = _load_structure(args.structure)
    n = orbit_count(a, args.k)
    _emit(args, {"orbits": n}, str(n))
    return EXIT_POSITIVE


def _cmd_majority(args):
    a = _load_structure(args.structure)
    witness = find_majority_polymorphism(a)
    payload = {"found": witness is not None}
    if witness and args.witness:
        payload["witness"] = list(witness.mapping)
    _emit(args, payload, "found" if witness else "none")
    return EXIT_POSITIVE if witness else EXIT_NEGATIVE


# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qcsp",
        description="Containment, entailment and q-cores for positive Horn logic",
    )
    parser.add_argument("--seed", type=int, help="reserved; the core paths are deterministic")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a sentence on a structure")
    p.add_argument("structure")
    p.add_argument("sentence")
    p.add_argument("--json", action="store_true")
    p.add_argument("--figure")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("contain", help="decide containment of pH theories")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--witness", action="store_true")
    p.add_argument("--bound", help="orbit | cardinality | explicit integer")
    p.add_argument("--cap", type=int, help="largest exponent to probe")
    p.add_argument("--json", action="store_true")
    p.add_argument("--report", help="write PATH.json/.csv/.png artifacts")
    p.set_defaults(func=_cmd_contain)

    p = sub.add_parser("entail", help="decide entailment between pH sentences")
    p.add_argument("phi")
    p.add_argument("psi")
    p.add_argument("--max-terms", type=int, default=10**5)
    p.add_argument("--max-states", type=int, default=10**7)
    p.add_argument("--trace", action="store_true",
                   help="dump the deciding truncation to stderr")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_entail)

    p = sub.add_parser("qcore", help="compute a q-core")
    p.add_argument("structure")
    p.add_argument("--report", help="write PATH.json/.csv/.png artifacts")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_qcore)

    p = sub.add_parser("surhom", help="search for a surjective homomorphism")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--witness", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_surhom)

    p = sub.add_parser("product", help="direct product of two structures")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-o", "--output")
    p.add_argument("--figure")
    p.set_defaults(func=_cmd_product)

    p = sub.add_parser("gen", help="generate a named structure family member")
    p.add_argument("family")
    p.add_argument("params", nargs="*")
    p.add_argument("-o", "--output")
    p.add_argument("--figure")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("orbits", help="orbit count of k-tuples under automorphisms")
    p.add_argument("structure")
    p.add_argument("k", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_orbits)

    p = sub.add_parser("majority", help="search for a majority polymorphism")
    p.add_argument("structure")
    p.add_argument("--witness", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_majority)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_POSITIVE
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error at position {exc.position}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (QcspError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
