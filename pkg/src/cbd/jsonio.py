"""JSON reading and writing of systems and analysis reports.

System files look like::

    {"contexts": [{"id": "11", "contents": ["Alice-1", "Bob-1"],
                   "probabilities": {"++": "1/2", "--": "1/2"}}]}

Outcome strings are aligned with ``contents``; probabilities are strings
``"a/b"`` or terminating decimals (bare JSON numbers are read exactly).
Omitted outcomes are zero and repeated keys are rejected.
"""
from __future__ import annotations

import json
from decimal import Decimal
from pathlib import Path
from typing import Any

from .chsh import ChshReport
from .coupling import CbdReport
from .errors import ParseError
from .system import SampleSpace, System, outcome_string, validate_system


def _no_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise ParseError(f"duplicate key {key!r}")
        out[key] = value
    return out


def parse_system(data: bytes | str) -> System:
    """Decode a system file and validate it."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    try:
        raw = json.loads(data, object_pairs_hook=_no_duplicates, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ParseError("top-level JSON value must be an object")
    return validate_system(raw)


def load_system(path: str | Path) -> System:
    return parse_system(Path(path).read_bytes())


def system_to_dict(system: System) -> dict[str, Any]:
    return {
        "contexts": [
            {
                "id": ctx.context,
                "contents": list(ctx.contents),
                "probabilities": {
                    outcome_string(i, ctx.arity): str(p) for i, p in enumerate(ctx.probs)
                },
            }
            for ctx in system.contexts
        ]
    }


def dumps_system(system: System) -> str:
    return json.dumps(system_to_dict(system), indent=2) + "\n"


def chsh_to_dict(report: ChshReport) -> dict[str, Any]:
    return {
        "contexts": list(report.contexts),
        "expectations": [str(e) for e in report.expectations],
        "s_value": str(report.s_value),
        "contextual": report.contextual,
    }


def report_to_dict(report: CbdReport, chsh: ChshReport | None = None) -> dict[str, Any]:
    out: dict[str, Any] = {
        "consistent": report.consistent,
        "connections": [
            {
                "content": c.content,
                "contexts": [c.context_a, c.context_b],
                "p_a": str(c.p_a),
                "p_b": str(c.p_b),
                "omega": str(w),
                "omega_prime": str(wp),
            }
            for c, w, wp in zip(report.connections, report.omegas, report.omega_primes)
        ],
        "cntx": str(report.cntx),
        "contextual": report.contextual,
    }
    if chsh is not None:
        out["chsh"] = chsh_to_dict(chsh)
    return out


def sample_space_to_dict(space: SampleSpace) -> dict[str, Any]:
    return {
        "context": space.context,
        "points": list(space.points),
        "mass": {pt: str(m) for pt, m in zip(space.points, space.mass)},
        "variables": {
            name: {pt: v for pt, v in zip(space.points, values)}
            for name, values in space.variables
        },
    }
