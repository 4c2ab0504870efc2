"""Command-line interface.

    smpds validate MODEL
    smpds prestar MODEL AUTOMATON [-o OUT] [--dot]
    smpds poststar MODEL AUTOMATON [-o OUT] [--dot]
    smpds translate MODEL [--symbolic] [-o OUT]
    smpds asm2smpds PROGRAM [-o OUT] [--erase-selfmod] [--allow-meta-selfmod]
    smpds check MODEL AUTOMATON [--config N] [--direction pre|post]
    smpds enumerate MODEL AUTOMATON [--max-len N]
    smpds bench [--rules N] [--smrules N] [--runs N] [-o CSV]

`check` exits 0 when the configuration is a member, 1 when it is not,
and 2 on any error.
"""

from __future__ import annotations

import argparse
import random
import sys

from . import asm, bench, formats, model
from .automaton import from_configs
from .model import Configuration
from .prestar import SaturationStats, prestar
from .poststar import poststar
from .translate import phase_closure, to_pds, to_symbolic_pds


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_doc(path: str) -> formats.SmpdsDocument:
    return formats.parse_smpds(_read(path))


def _emit_stats(args, stats: SaturationStats) -> None:
    if args.stats and not args.quiet:
        print(f"transitions added: {stats.transitions_added}", file=sys.stderr)
        print(f"finals added: {stats.finals_added}", file=sys.stderr)
        print(f"phases: {stats.phases_materialized}", file=sys.stderr)
        print(f"wall seconds: {stats.wall_seconds:.3f}", file=sys.stderr)


def cmd_validate(args) -> int:
    doc = _load_doc(args.model)
    report = model.validate(doc.smpds)
    for i, c in enumerate(doc.configs):
        try:
            model.check_configuration(doc.smpds, c)
        except ValueError as e:
            report.violations.append(f"config {i}: {e}")
    for v in report.violations:
        print(f"error: {v}", file=sys.stderr)
    if not args.quiet:
        for w in report.warnings:
            print(f"warning: {w}", file=sys.stderr)
        if report.ok and not report.violations:
            print(f"ok: {len(doc.smpds.delta)} rules, "
                  f"{len(doc.smpds.delta_c)} modifying rules, "
                  f"{len(doc.configs)} configs")
    return 0 if report.ok and not report.violations else 1


def _saturate(args, op) -> int:
    doc = _load_doc(args.model)
    aut = formats.parse_automaton(_read(args.automaton), doc)
    stats = SaturationStats()
    result = op(doc.smpds, aut, stats)
    _emit_stats(args, stats)
    out = result.to_dot() if args.dot else formats.print_automaton(result, doc)
    _write(out, args.output)
    return 0


def cmd_prestar(args) -> int:
    return _saturate(args, prestar)


def cmd_poststar(args) -> int:
    return _saturate(args, poststar)


def cmd_translate(args) -> int:
    doc = _load_doc(args.model)
    if args.symbolic:
        spds = to_symbolic_pds(doc.smpds)
        if not args.quiet:
            print(f"symbolic rules: {len(spds.rules)}", file=sys.stderr)
        _write(formats.print_symbolic_pds(spds, doc), args.output)
        return 0
    seeds = list(doc.phase_names.values()) + [c.phase for c in doc.configs]
    if not seeds:
        print("error: translation needs at least one phase or config "
              "to seed the phase closure", file=sys.stderr)
        return 2
    phases = phase_closure(doc.smpds, seeds)
    pds = to_pds(doc.smpds, phases)
    if not args.quiet:
        print(f"phases: {len(phases)}, paired rules: {len(pds.rules)}",
              file=sys.stderr)
    _write(formats.print_pds(pds, doc), args.output)
    return 0


def cmd_asm2smpds(args) -> int:
    prog = asm.parse_program(_read(args.program), args.allow_meta_selfmod)
    compiled = asm.compile_program(prog, erase_selfmod=args.erase_selfmod)
    doc = formats.SmpdsDocument(compiled.smpds,
                                {"init": compiled.initial_phase},
                                [compiled.entry_config])
    _write(formats.print_smpds(doc), args.output)
    return 0


def cmd_check(args) -> int:
    doc = _load_doc(args.model)
    if not doc.configs:
        print("error: model file declares no config", file=sys.stderr)
        return 2
    config = doc.configs[args.config]
    aut = formats.parse_automaton(_read(args.automaton), doc)
    if args.direction == "pre":
        result = prestar(doc.smpds, aut)
    else:
        result = poststar(doc.smpds, aut)
    member = result.accepts(config)
    if not args.quiet:
        print("member" if member else "non-member")
    return 0 if member else 1


def cmd_enumerate(args) -> int:
    doc = _load_doc(args.model)
    aut = formats.parse_automaton(_read(args.automaton), doc)
    lines = []
    for c in sorted(aut.enumerate_configs(args.max_len),
                    key=lambda c: (len(c.stack), c.state, c.stack)):
        stack = " ".join(c.stack)
        lines.append(f"config: {c.state} {doc.phase_name(c.phase)} {stack}".rstrip())
    _write("\n".join(lines) + ("\n" if lines else ""), args.output)
    return 0


def cmd_bench(args) -> int:
    rows = [bench.CSV_HEADER]
    rng = random.Random(args.seed)
    for i in range(args.runs):
        params = bench.GenParams(num_states=args.states, num_symbols=args.symbols,
                                 num_rules=args.rules, num_smrules=args.smrules,
                                 seed=rng.randrange(2**31))
        direct, translated = bench.run_comparison(
            params, budget_seconds=args.budget_seconds)
        merged = bench.ReportRow(
            direct.rules, direct.smrules, direct.direct_ms, direct.direct_mb,
            translated.pds_ms, translated.pds_saturate_ms, translated.total_ms,
            direct.status if direct.status != "ok" else translated.status)
        rows.append(merged.csv())
        if not args.quiet:
            print(rows[-1], file=sys.stderr)
    _write("\n".join(rows) + "\n", args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smpds",
        description="Reachability analysis for self-modifying pushdown systems")
    parser.add_argument("--quiet", action="store_true",
                        help="suppress informational output")
    parser.add_argument("--stats", action="store_true",
                        help="print saturation statistics to stderr")
    parser.add_argument("--seed", type=int, default=0,
                        help="random seed for generated instances")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a model file for consistency")
    p.add_argument("model")
    p.set_defaults(func=cmd_validate)

    for name, helptext in (("prestar", "saturate towards predecessors"),
                           ("poststar", "saturate towards successors")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("model")
        p.add_argument("automaton")
        p.add_argument("-o", "--output")
        p.add_argument("--dot", action="store_true",
                       help="emit graphviz instead of the text format")
        p.set_defaults(func=cmd_prestar if name == "prestar" else cmd_poststar)

    p = sub.add_parser("translate", help="translate to an ordinary or symbolic PDS")
    p.add_argument("model")
    p.add_argument("--symbolic", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("asm2smpds", help="compile an assembly program")
    p.add_argument("program")
    p.add_argument("-o", "--output")
    p.add_argument("--erase-selfmod", action="store_true",
                   help="compile selfmod instructions as nops")
    p.add_argument("--allow-meta-selfmod", action="store_true")
    p.set_defaults(func=cmd_asm2smpds)

    p = sub.add_parser("check", help="decide membership of a config")
    p.add_argument("model")
    p.add_argument("automaton")
    p.add_argument("--config", type=int, default=0,
                   help="index of the config line to check (default 0)")
    p.add_argument("--direction", choices=("pre", "post"), default="pre")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("enumerate", help="list accepted configs up to a stack depth")
    p.add_argument("model")
    p.add_argument("automaton")
    p.add_argument("--max-len", type=int, default=3)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("bench", help="random-instance comparison runs")
    p.add_argument("--states", type=int, default=4)
    p.add_argument("--symbols", type=int, default=4)
    p.add_argument("--rules", type=int, default=20)
    p.add_argument("--smrules", type=int, default=3)
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--budget-seconds", type=float, default=60.0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (formats.FormatError, asm.AsmError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
