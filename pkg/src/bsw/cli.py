"""Command line front end: run or syntax-check a session file.

Exit codes: 0 success, 2 validation or syntax failure, 3 budget or
resource-cap exhaustion (3 wins when both kinds of block are present).
The default reduction budget comes from BSW_BUDGET when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .groebner import DEFAULT_BUDGET
from .session import SessionSyntaxError, parse_session, report_exit_code, run_session

BUDGET_ENV = "BSW_BUDGET"


def _default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        print(f"bsw: {BUDGET_ENV} must be an integer, got {raw!r}", file=sys.stderr)
        raise SystemExit(2) from None
    if value < 1:
        print(f"bsw: {BUDGET_ENV} must be positive", file=sys.stderr)
        raise SystemExit(2)
    return value


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        print(f"bsw: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(2) from None


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bsw", description="commutative-algebra session runner")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a session file, emit a JSON report")
    run_p.add_argument("session", help="session file path")
    run_p.add_argument("--out", help="report destination (default: stdout)")
    run_p.add_argument("--budget", type=int, default=None,
                       help="reduction-step budget per command")
    run_p.add_argument("--seed", type=int, default=0, help="sampling seed")

    check_p = sub.add_parser("check", help="parse a session file without running it")
    check_p.add_argument("session", help="session file path")

    args = parser.parse_args(argv)
    text = _read(args.session)
    try:
        sess = parse_session(text)
    except SessionSyntaxError as exc:
        print(f"bsw: {args.session}:{exc.line}:{exc.col}: {exc}", file=sys.stderr)
        return 2

    if args.command == "check":
        print(f"ok: {sess.n_statements} statements, {len(sess.commands)} commands")
        return 0

    budget = args.budget if args.budget is not None else _default_budget()
    if budget < 1:
        print("bsw: budget must be positive", file=sys.stderr)
        return 2
    csv_dir = os.path.dirname(os.path.abspath(args.out)) if args.out else os.getcwd()
    report = run_session(sess, seed=args.seed, budget=budget, csv_dir=csv_dir)
    payload = json.dumps(report, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return report_exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
