"""``cbd`` command-line interface.

Exit status is 0 on success, 1 when a system fails validation or an
analysis precondition, and 2 on unreadable or malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import TextIO

from . import __version__
from .chsh import chsh, is_chsh_shaped
from .coupling import DEFAULT_MAX_VARS, CbdReport, analyze
from .errors import CbdError, ParseError
from .fixtures import fixtures
from .jsonio import (
    chsh_to_dict,
    dumps_system,
    load_system,
    report_to_dict,
    sample_space_to_dict,
)
from .simulate import simulate
from .system import System, canonical_sample_space, is_consistently_connected, to_fraction

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INPUT = 2

COMMANDS = ("validate", "analyze", "chsh", "sample-space", "simulate", "fixtures")


def _emit_json(obj, out: TextIO) -> None:
    out.write(json.dumps(obj, indent=2) + "\n")


def _optional_chsh(system: System):
    if is_chsh_shaped(system) and is_consistently_connected(system):
        return chsh(system)
    return None


def format_report(system: System, report: CbdReport, chsh_report=None) -> str:
    lines = [
        f"System: {len(system.contexts)} contexts, {len(system.contents)} contents, "
        f"{system.num_variables} variables",
        f"Consistently connected: {'yes' if report.consistent else 'no'}",
        "Connections:",
    ]
    if not report.connections:
        lines.append("  (none)")
    for c, w, wp in zip(report.connections, report.omegas, report.omega_primes):
        lines.append(
            f"  {c.content}: contexts {c.context_a}, {c.context_b}  "
            f"p_a = {c.p_a}  p_b = {c.p_b}  omega = {w}  omega' = {wp}"
        )
    lines += [
        f"Sum of omega = {sum(report.omegas, 0)}",
        f"Max sum of omega' = {sum(report.omega_primes, 0)}",
        f"CNTX = {report.cntx}",
        f"Verdict: {'CONTEXTUAL' if report.contextual else 'NONCONTEXTUAL'}",
    ]
    if chsh_report is not None:
        lines.append(_format_chsh(chsh_report))
    return "\n".join(lines) + "\n"


def _format_chsh(report) -> str:
    exps = ", ".join(f"<{label}> = {e}" for label, e in zip(report.contexts, report.expectations))
    verdict = "CONTEXTUAL" if report.contextual else "NONCONTEXTUAL"
    return f"CHSH: {exps}; S = {report.s_value} ({verdict})"


def _cmd_validate(args, out) -> int:
    system = load_system(args.file)
    consistency = is_consistently_connected(system)
    if args.format == "json":
        _emit_json({
            "valid": True,
            "contexts": list(system.context_labels),
            "contents": list(system.contents),
            "variables": system.num_variables,
            "consistent": consistency.consistent,
            "connections": [
                {"content": c.content, "contexts": [c.context_a, c.context_b],
                 "p_a": str(c.p_a), "p_b": str(c.p_b), "difference": str(c.delta)}
                for c in consistency.connections
            ],
        }, out)
    else:
        out.write(f"VALID: {len(system.contexts)} contexts, {len(system.contents)} contents, "
                  f"{system.num_variables} variables\n")
        for c in consistency.connections:
            out.write(f"  {c.content}: p_a = {c.p_a}, p_b = {c.p_b}, |difference| = {c.delta}\n")
        out.write(f"Consistently connected: {'yes' if consistency else 'no'}\n")
    return EXIT_OK


def _cmd_analyze(args, out) -> int:
    system = load_system(args.file)
    report = analyze(system, max_vars=args.max_vars)
    chsh_report = _optional_chsh(system)
    if args.format == "json":
        _emit_json(report_to_dict(report, chsh_report), out)
    else:
        out.write(format_report(system, report, chsh_report))
    return EXIT_OK


def _cmd_chsh(args, out) -> int:
    report = chsh(load_system(args.file))
    if args.format == "json":
        _emit_json(chsh_to_dict(report), out)
    else:
        out.write(_format_chsh(report) + "\n")
    return EXIT_OK


def _cmd_sample_space(args, out) -> int:
    system = load_system(args.file)
    spaces = [canonical_sample_space(ctx) for ctx in system.contexts if ctx.arity == 2]
    if args.format == "json":
        _emit_json([sample_space_to_dict(s) for s in spaces], out)
        return EXIT_OK
    if not spaces:
        out.write("no two-variable contexts\n")
    for space in spaces:
        (first, fv), (second, sv) = space.variables
        out.write(f"context {space.context}: S = {{{', '.join(space.points)}}}\n")
        for pt, m, a, b in zip(space.points, space.mass, fv, sv):
            out.write(f"  mu({pt}) = {m}   {first} = {a:+d}   {second} = {b:+d}\n")
    return EXIT_OK


def _cmd_simulate(args, out) -> int:
    system = load_system(args.file)
    result = simulate(system, args.samples, args.seed, max_vars=args.max_vars)
    if args.format == "json":
        payload = report_to_dict(result.analysis)
        payload["simulation"] = {
            "generator": result.generator,
            "seed": result.seed,
            "samples_per_context": result.samples_per_context,
            "counts": {label: list(c) for label, c in result.counts},
        }
        _emit_json(payload, out)
    else:
        out.write(f"Simulated {result.samples_per_context} samples per context "
                  f"({result.generator}, seed {result.seed})\n")
        for label, c in result.counts:
            out.write(f"  context {label}: counts {list(c)}\n")
        out.write(format_report(result.empirical_system, result.analysis))
    return EXIT_OK


def _cmd_fixtures(args, out) -> int:
    systems = fixtures(to_fraction(args.epsilon))
    if args.out is None:
        _emit_json({name: json.loads(dumps_system(s)) for name, s in systems.items()}, out)
        return EXIT_OK
    target = Path(args.out)
    target.mkdir(parents=True, exist_ok=True)
    for name, system in systems.items():
        path = target / f"{name}.json"
        path.write_text(dumps_system(system))
        out.write(f"wrote {path}\n")
    return EXIT_OK


HANDLERS = {
    "validate": _cmd_validate,
    "analyze": _cmd_analyze,
    "chsh": _cmd_chsh,
    "sample-space": _cmd_sample_space,
    "simulate": _cmd_simulate,
    "fixtures": _cmd_fixtures,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cbd", description="Contextuality-by-Default analysis of dichotomous systems."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-vars", type=int, default=DEFAULT_MAX_VARS,
                        help="size guard on the total number of variables")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("validate", "analyze", "chsh", "sample-space"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("file")
    p = sub.add_parser("simulate", parents=[common])
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--samples", type=int, required=True, help="samples per context")
    p.add_argument("file")
    p = sub.add_parser("fixtures", parents=[common])
    p.add_argument("--out", default=None, help="directory for one JSON file per fixture")
    p.add_argument("--epsilon", default="1/8", help="perturbation for the perturbed fixtures")
    return parser


def main(argv=None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "max_vars", 1) < 1:
        err.write("cbd: --max-vars must be positive\n")
        return EXIT_INPUT
    if args.command == "simulate" and (args.samples < 1 or not 0 <= args.seed < 2**64):
        err.write("cbd: --samples must be positive and --seed an unsigned 64-bit integer\n")
        return EXIT_INPUT
    try:
        return HANDLERS[args.command](args, out)
    except (ParseError, OSError) as exc:
        err.write(f"cbd: error: {exc}\n")
        return EXIT_INPUT
    except CbdError as exc:
        err.write(f"cbd: {type(exc).__name__}: {exc}\n")
        return EXIT_INVALID


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
