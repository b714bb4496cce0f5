"""Command-line front end.

Exit codes: 0 when every theorem checks, 1 when any theorem is invalid or the
oracle disagrees with the checker, 2 for unreadable files, parse errors and
static errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import oracle
from .dot import to_dot
from .errors import MetacatError, StaticError
from .proof import CheckReport, Env, TheoremStmt, check_theorem
from .surface import dump, load

EXIT_OK, EXIT_INVALID, EXIT_ERROR = 0, 1, 2

REPORT_SCHEMA = {
    "type": "object",
    "required": ["file", "theorems"],
    "properties": {
        "file": {"type": "string"},
        "theorems": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "status"],
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": ["valid", "invalid", "error"]},
                    "detail": {"type": "string"},
                },
                "additionalProperties": False,
            },
        },
    },
}


@dataclass
class RunConfig:
    command: str
    path: str
    json: bool = False
    oracle: bool = False
    seed: int = 0
    trials: int = 0
    thm: str | None = None
    values: bool = False
    level: str = "ir"
    output: str | None = None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metacat", description="Check string-diagrammatic proofs.")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="check every theorem in FILE")
    check.add_argument("path", metavar="FILE")
    check.add_argument("--json", action="store_true", help="emit a JSON report")
    check.add_argument("--oracle", action="store_true", help="cross-check with the direct evaluator")
    check.add_argument("--trials", type=int, default=0, help="random differential trials (with --oracle)")
    check.add_argument("--seed", type=int, default=0)

    dot = sub.add_parser("dot", help="export a theorem's derivation as Graphviz DOT")
    dot.add_argument("path", metavar="FILE")
    dot.add_argument("--thm", required=True, help="theorem to draw")
    dot.add_argument("--values", action="store_true", help="label wires with their values")
    dot.add_argument("--level", choices=["ir", "proof"], default="ir")
    dot.add_argument("-o", dest="output", help="write to OUT instead of standard output")

    dump_cmd = sub.add_parser("dump", help="print the elaborated file in canonical form")
    dump_cmd.add_argument("path", metavar="FILE")
    return parser


def parse_args(argv: list[str] | None = None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    return RunConfig(**args)


class _Fatal(Exception):
    pass


def _load(path: str) -> Env:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"{path}: error: cannot read file: {exc.strerror}", file=sys.stderr)
        raise _Fatal from None
    try:
        return load(text)
    except MetacatError as exc:
        where = f"{path}:{exc.span}" if exc.span is not None else path
        print(f"{where}: error: {exc.kind}: {exc.message}", file=sys.stderr)
        raise _Fatal from None


def _line(thm: TheoremStmt, report: CheckReport) -> str:
    detail = report.detail()
    return f"{thm.name}: {report.status}" + (f": {detail}" if detail else "")


def cmd_check(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    env = _load(cfg.path)
    working = env.rules_only()
    results = []
    mismatched = []  # theorems on which the two engines disagree
    for thm in env.theorems:
        report = check_theorem(thm, working)
        results.append((thm, report))
        if cfg.oracle:
            problem = oracle.compare_instance(thm, working)
            if problem is not None:
                mismatched.append(f"{thm.name}: {problem}")
        if report.valid:
            working = Env(working.signature, working.generators, working.theorems + (thm,))
    summary = oracle.differential_run(working, cfg.trials, cfg.seed) if cfg.oracle else None
    diverged = bool(mismatched) or (summary is not None and summary.divergences > 0)

    if cfg.json:
        doc = {"file": cfg.path, "theorems": [_entry(thm, r) for thm, r in results]}
        if summary is not None:
            doc["oracle"] = {
                "theorem_divergences": mismatched,
                "trials": summary.trials,
                "divergences": summary.divergences,
                "first_divergence": summary.first_divergence,
            }
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        for thm, report in results:
            out.write(_line(thm, report) + "\n")
        if summary is not None:
            out.write(f"oracle: {len(results)} theorems cross-checked, {len(mismatched)} divergences\n")
            for problem in mismatched:
                out.write(f"divergence: {problem}\n")
            if cfg.trials:
                out.write(summary.line() + "\n")
            if summary.first_divergence is not None:
                out.write(f"divergence: {summary.first_divergence}\n")

    errors = [(thm, r) for thm, r in results if r.status == "error"]
    for thm, r in errors:
        print(f"{cfg.path}: error: {thm.name}: {r.message}", file=sys.stderr)
    if errors:
        return EXIT_ERROR
    if diverged or any(r.status == "invalid" for _, r in results):
        return EXIT_INVALID
    return EXIT_OK


def _entry(thm: TheoremStmt, report: CheckReport) -> dict:
    entry = {"name": thm.name, "status": report.status}
    if report.detail():
        entry["detail"] = report.detail()
    return entry


def cmd_dot(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    env = _load(cfg.path)
    thm = env.theorem(cfg.thm)
    if thm is None:
        print(f"{cfg.path}: error: UnknownTheorem: no theorem named {cfg.thm!r}", file=sys.stderr)
        return EXIT_ERROR
    # earlier theorems are usable as rules in the drawing, whatever their status
    earlier = env.theorems[: env.theorems.index(thm)]
    scope = Env(env.signature, env.generators, earlier)
    try:
        text = to_dot(thm, scope, values=cfg.values, level=cfg.level)
    except StaticError as exc:
        print(f"{cfg.path}: error: {exc.kind}: {exc.message}", file=sys.stderr)
        return EXIT_ERROR
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_dump(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    out.write(dump(_load(cfg.path)))
    return EXIT_OK


COMMANDS = {"check": cmd_check, "dot": cmd_dot, "dump": cmd_dump}


def main(argv: list[str] | None = None) -> int:
    cfg = parse_args(argv)
    try:
        return COMMANDS[cfg.command](cfg)
    except _Fatal:
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
