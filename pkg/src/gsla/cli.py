"""Command-line front end.

Subcommands: verify, loop-build, decompose, recognize, schur, weyl,
mod-verify, mod-recognize, catalog.  Exit codes: 0 positive verdict,
1 negative verdict, 2 invalid input, 3 inconclusive.  Reports are
deterministic: identical inputs and flags produce byte-identical JSON.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import catalog as cat
from .errors import GslaError, InputError, NonSplit, NoSuchRoot
from .fields import Cyclotomic, PrimeField, Rationals
from .gradedmod import (
    graded_simple_module_check,
    reconstruct_module,
    schur_report,
    weyl_decompose,
)
from .jsonio import (
    algebra_from_json,
    algebra_to_json,
    field_from_json,
    loop_from_json,
    matrix_to_json,
    module_from_json,
    module_to_json,
)
from .loopalg import loop_algebra, loop_ideal_decomposition, recognize

VERSION = "0.1.0"

EXIT_POSITIVE = 0
EXIT_NEGATIVE = 1
EXIT_INVALID = 2
EXIT_INCONCLUSIVE = 3


def _load_json(spec):
    if spec == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(spec) as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError("$", f"cannot read {spec}: {exc}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("$", f"not valid JSON: {exc}")


def _emit(doc, args, human_lines=None):
    if getattr(args, "json", False) or human_lines is None:
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        for line in human_lines:
            sys.stdout.write(line + "\n")


def _report(command, args, verdict, certificates, extra=None):
    doc = {
        "format": 1,
        "tool_version": VERSION,
        "command": command,
        "verdict": verdict,
        "certificates": certificates,
        "seed": getattr(args, "seed", 0),
        "caps": {
            "probes": getattr(args, "probes", None),
            "max_subsets": getattr(args, "max_subsets", None),
        },
    }
    if extra:
        doc.update(extra)
    return doc


def _first_failure(certificates):
    for c in certificates:
        if not c.get("pass", True):
            return c.get("name", "unknown")
    return None


def _field_arg(text):
    parts = text.split(":")
    if parts[0] == "rationals":
        return Rationals()
    if parts[0] == "cyclotomic" and len(parts) == 2:
        return Cyclotomic(int(parts[1]))
    if parts[0] == "prime" and len(parts) == 2:
        return PrimeField(int(parts[1]))
    raise InputError("--field", f"cannot parse field spec {text!r}")


CATALOG = {}


def _register_catalog():
    from .groups import FinAbGroup, full_subgroup, subgroup_generate

    def entry(name, kind, default_field, builder):
        CATALOG[name] = (kind, default_field, builder)

    entry("sl2", "algebra", "rationals", lambda f: (cat.sl2(f), None))
    entry("sl3", "algebra", "rationals", lambda f: (cat.sl_n(f, 3), None))
    entry("pauli-sl2", "algebra", "rationals", lambda f: (cat.pauli_sl2(f), None))
    entry("pair-algebra", "algebra", "rationals", lambda f: (cat.pair_algebra(f), None))

    def loop_z2z2_sl2(f):
        group = FinAbGroup((2,))
        L = loop_algebra(group, full_subgroup(group), cat.sl2_graded_by(f, group, full_subgroup(group), "trivial"))
        return L.underlying, L

    entry("loop-z2-z2-sl2", "algebra", "cyclotomic:2", loop_z2z2_sl2)

    def loop_klein(f):
        group = FinAbGroup((2, 2))
        P = subgroup_generate(group, [(1, 1)])
        base = cat.sl2_graded_by(f, group, P, "cartan", (0, 1))
        L = loop_algebra(group, P, base)
        return L.underlying, L

    entry("loop-klein-diag-sl2", "algebra", "cyclotomic:4", loop_klein)

    def example0(f):
        if not isinstance(f, PrimeField):
            raise InputError("--field", "example0 needs a prime field")
        L = cat.example0_algebra(f.p)
        return L.underlying, L

    entry("example0", "algebra", "prime:3", example0)
    entry("matrix2-module", "module", "cyclotomic:4", lambda f: (cat.matrix2_module(f), None))
    entry("ex1-module", "module", "cyclotomic:4", lambda f: (cat.ex1_module(f)[1], None))

    def ex1_loop(f):
        M = cat.ex1_loop_module(f)
        return M.underlying, M

    entry("ex1-loop-module", "module", "cyclotomic:4", ex1_loop)
    entry("pair-module-10", "module", "cyclotomic:4", lambda f: (cat.pair_module(f, 1, 0), None))
    entry("symmetric-l11", "module", "cyclotomic:4", lambda f: (cat.symmetric_graded_L(f, 1), None))


_register_catalog()


def cmd_catalog(args):
    if args.name not in CATALOG:
        raise InputError("name", f"unknown catalog entry {args.name!r}; "
                                 f"choices: {', '.join(sorted(CATALOG))}")
    kind, default_field, builder = CATALOG[args.name]
    field = _field_arg(args.field or default_field)
    obj, loop = builder(field)
    if kind == "algebra":
        doc = algebra_to_json(obj, loop)
    else:
        doc = module_to_json(obj, loop)
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.output and args.output != "-":
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_POSITIVE


def cmd_verify(args):
    g = algebra_from_json(_load_json(args.input))
    rep = g.verify()
    certs = [
        {"name": "antisymmetry", "pass": not rep.antisymmetry, "witness": rep.antisymmetry[:3]},
        {"name": "jacobi", "pass": not rep.jacobi, "witness": rep.jacobi[:3]},
        {"name": "grading", "pass": not rep.grading, "witness": rep.grading[:3]},
    ]
    verdict = "pass" if rep.passed else "fail"
    doc = _report("verify", args, verdict, certs, {
        "minimal": rep.minimal,
        "noncommutative": rep.noncommutative,
        "first_failed": _first_failure(certs),
    })
    _emit(doc, args, [f"verify: {verdict} (minimal grading: {rep.minimal})"])
    return EXIT_POSITIVE if rep.passed else EXIT_NEGATIVE


def cmd_mod_verify(args):
    W = module_from_json(_load_json(args.input))
    rep = W.verify()
    certs = [
        {"name": "action_law", "pass": not rep.action_failures, "witness": rep.action_failures[:3]},
        {"name": "grading", "pass": not rep.grading_failures, "witness": rep.grading_failures[:3]},
        {"name": "nontrivial_action", "pass": rep.nontrivial, "witness": []},
    ]
    verdict = "pass" if rep.passed else "fail"
    doc = _report("mod-verify", args, verdict, certs, {"first_failed": _first_failure(certs)})
    _emit(doc, args, [f"mod-verify: {verdict}"])
    return EXIT_POSITIVE if rep.passed else EXIT_NEGATIVE


def cmd_loop_build(args):
    d = _load_json(args.input)
    base = algebra_from_json(d)
    if base.modulus.is_trivial() and not args.untwisted:
        raise InputError("$.modulus", "base algebra must carry its Q/P grading modulus "
                                      "(or pass --untwisted for P = Q)")
    from .groups import full_subgroup

    P = full_subgroup(base.group) if args.untwisted else base.modulus
    L = loop_algebra(base.group, P, base)
    doc = algebra_to_json(L.underlying, L)
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return EXIT_POSITIVE


def cmd_decompose(args):
    d = _load_json(args.input)
    L = loop_from_json(d)
    certs = []
    if L is None:
        g = algebra_from_json(d)
        rec = recognize(g, seed=args.seed, probes=args.probes, cap=args.max_subsets)
        certs.extend(rec.certificates)
        L = rec.loop
    try:
        pieces = loop_ideal_decomposition(L, seed=args.seed)
    except (NoSuchRoot,) as exc:
        certs.append({"name": "root_of_unity", "pass": False, "witness": str(exc)})
        doc = _report("decompose", args, "fail", certs,
                      {"first_failed": "root_of_unity", "error": str(exc)})
        _emit(doc, args, [f"decompose: fail ({exc})"])
        return EXIT_NEGATIVE
    certs.append({"name": "orbit_decomposition", "pass": True,
                  "witness": {"ideal_count": len(pieces), "dims": [J.dim for J, _, _ in pieces]}})
    doc = _report("decompose", args, "pass", certs, {
        "ideal_count": len(pieces),
        "ideal_dims": [J.dim for J, _, _ in pieces],
    })
    _emit(doc, args, [f"decompose: pass ({len(pieces)} ideals, dims "
                      f"{[J.dim for J, _, _ in pieces]})"])
    return EXIT_POSITIVE


def cmd_recognize(args):
    g = algebra_from_json(_load_json(args.input))
    rec = recognize(g, seed=args.seed, probes=args.probes, cap=args.max_subsets)
    doc = _report("recognize", args, "pass" if rec.passed() else "fail", rec.certificates, {
        "P_generators": [list(x) for x in rec.subgroup.generators],
        "P_order": rec.subgroup.order,
        "untwisted": rec.subgroup.is_full(),
        "a": algebra_to_json(rec.base),
        "phi": matrix_to_json(rec.phi, g.field),
        "first_failed": _first_failure(rec.certificates),
    })
    _emit(doc, args, [
        f"recognize: {'pass' if rec.passed() else 'fail'}",
        f"  |P| = {rec.subgroup.order}, base dim = {rec.base.dim}, "
        f"untwisted = {rec.subgroup.is_full()}",
    ])
    return EXIT_POSITIVE if rec.passed() else EXIT_NEGATIVE


def cmd_schur(args):
    W = module_from_json(_load_json(args.input))
    rep = schur_report(W, seed=args.seed)
    verdict = "pass" if rep["scalar_only"] and not rep["precondition_violation"] else (
        "precondition" if rep["precondition_violation"] else "fail")
    certs = [{"name": "graded_simple_precondition", "pass": not rep["precondition_violation"],
              "witness": rep["graded_simple_status"]},
             {"name": "scalar_end0", "pass": rep["scalar_only"], "witness": rep["end0_dim"]}]
    doc = _report("schur", args, verdict, certs, rep)
    _emit(doc, args, [f"schur: end0 dim = {rep['end0_dim']}, scalar_only = {rep['scalar_only']}"])
    if rep["precondition_violation"]:
        return EXIT_INCONCLUSIVE
    return EXIT_POSITIVE if rep["scalar_only"] else EXIT_NEGATIVE


def cmd_weyl(args):
    W = module_from_json(_load_json(args.input))
    parts = weyl_decompose(W, seed=args.seed)
    dims = sorted(s.dim for s in parts)
    certs = [{"name": "direct_sum", "pass": True, "witness": {"dims": dims}}]
    doc = _report("weyl", args, "pass", certs, {"summand_dims": dims})
    _emit(doc, args, [f"weyl: {len(parts)} graded summands, dims {dims}"])
    return EXIT_POSITIVE


def cmd_mod_recognize(args):
    W = module_from_json(_load_json(args.input))
    order = None
    if args.commute_order:
        order = [tuple(int(t) for t in part.split(",")) for part in args.commute_order.split(";")]
    rec = reconstruct_module(W, seed=args.seed, commute_order=order)
    doc = _report("mod-recognize", args, "pass" if rec.passed() else "fail", rec.certificates, {
        "P_elements": [list(x) for x in rec.subgroup.sorted_elements()],
        "P_order": rec.subgroup.order,
        "V": module_to_json(rec.quotient_module),
        "canonical": matrix_to_json(rec.canonical, W.field),
        "first_failed": _first_failure(rec.certificates),
    })
    _emit(doc, args, [
        f"mod-recognize: {'pass' if rec.passed() else 'fail'}",
        f"  |P| = {rec.subgroup.order}, dim V = {rec.quotient_module.dim}",
    ])
    return EXIT_POSITIVE if rec.passed() else EXIT_NEGATIVE


def build_parser():
    ap = argparse.ArgumentParser(prog="gsla",
                                 description="exact computations with graded Lie algebras and modules")
    ap.add_argument("--version", action="version", version=f"gsla {VERSION}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("input", help="input JSON file, or - for stdin")
        p.add_argument("--json", action="store_true", help="emit the full JSON report")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--probes", type=int, default=8)
        p.add_argument("--max-subsets", type=int, default=65536)

    p = sub.add_parser("catalog", help="emit a built-in example as JSON")
    p.add_argument("name")
    p.add_argument("--field", help="rationals | cyclotomic:N | prime:P")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_catalog)

    for name, fn in [("verify", cmd_verify), ("mod-verify", cmd_mod_verify),
                     ("decompose", cmd_decompose), ("recognize", cmd_recognize),
                     ("schur", cmd_schur), ("weyl", cmd_weyl)]:
        p = sub.add_parser(name)
        common(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("loop-build", help="build g(Q,P,a) from a Q/P-graded base algebra")
    common(p)
    p.add_argument("--untwisted", action="store_true", help="use P = Q")
    p.set_defaults(func=cmd_loop_build)

    p = sub.add_parser("mod-recognize")
    common(p)
    p.add_argument("--commute-order", help="semicolon-separated degree tuples, e.g. '1,0;0,1;1,1'")
    p.set_defaults(func=cmd_mod_recognize)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"gsla: invalid input at {exc.path}: {exc.message}\n")
        return EXIT_INVALID
    except (NoSuchRoot, NonSplit) as exc:
        sys.stderr.write(f"gsla: {exc}\n")
        return EXIT_NEGATIVE
    except GslaError as exc:
        sys.stderr.write(f"gsla: {type(exc).__name__}: {exc}\n")
        return EXIT_NEGATIVE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
