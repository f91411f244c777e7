"""
TreeSpectra — Command-line entry point.

    python services/cli/main.py spectrum --family constant --k 2 --depth 4 --format json
    python services/cli/main.py oracle-compare --family hat --k 3 --depth 2
    python services/cli/main.py identities --k 2 --trunc 60

Exit codes: 0 success, 1 failed comparison / certificate / internal
consistency error, 2 bad arguments.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "..", "packages"))

from common.audit import new_run_id, record_run, run_params
from common.config import DEFAULT_SCHEME
from common.errors import TreeSpectraError
from common.logging_util import get_logger, run_logger
from common.types import BranchingKind, NormalizationScheme, OperatorKind

from artifacts import emit
from commands import COMMANDS

log = get_logger("cli")


def _spec_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    spec = parent.add_argument_group("spec")
    spec.add_argument("--family", choices=[k.value for k in BranchingKind],
                      default=BranchingKind.CONSTANT.value)
    spec.add_argument("--k", type=int, help="branching (constant/hat) or copies per node (fan)")
    spec.add_argument("--d", type=int, help="fan simplex dimension")
    spec.add_argument("--alphas", help="comma-separated branching vector, e.g. 3,2")
    spec.add_argument("--depth", type=int)
    spec.add_argument("--operator", choices=[o.value for o in OperatorKind],
                      default=OperatorKind.ADJACENCY.value)
    return parent


def _output_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    out = parent.add_argument_group("output")
    out.add_argument("--out", help="output path (stdout when omitted or '-')")
    out.add_argument("--format", choices=["csv", "json"], default="csv")
    num = parent.add_argument_group("numeric")
    num.add_argument("--tol", type=float)
    num.add_argument("--trunc", type=int, help="truncation N for limiting sums")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treespectra",
        description="Exact spectra of rooted homogeneous trees, cross-checked against a dense oracle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    parents = [_spec_parent(), _output_parent()]

    sub.add_parser("spectrum", parents=parents, help="assemble the spectrum with multiplicities")
    sub.add_parser("verify", parents=parents, help="certify every constructed eigenvector")

    stair = sub.add_parser("staircase", parents=parents, help="normalized spectral CDF")
    stair.add_argument("--scheme", choices=[s.value for s in NormalizationScheme],
                       default=DEFAULT_SCHEME)
    stair.add_argument("--limit", action="store_true",
                       help="truncated limiting CDF instead of the depth-r CDF")

    ends = sub.add_parser("endpoints", parents=parents, help="staircase plateau endpoints")
    ends.add_argument("--m", type=int)
    ends.add_argument("--a", type=int)

    sub.add_parser("oracle-compare", parents=parents, help="compare against the dense oracle")
    sub.add_parser("identities", parents=parents, help="Lambert totient sums and tail bounds")
    sub.add_parser("fan", parents=parents, help="rooted fan pipeline")
    sub.add_parser("report", parents=parents, help="discrepancy report (markdown or JSON)")
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    handler = COMMANDS[args.command]
    run_id = new_run_id()
    params = run_params(vars(args))
    run_log = run_logger(log, run_id, args.command, params)
    try:
        code, text = handler(args)
    except ValueError as exc:
        run_log.error("%s: %s", args.command, exc)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TreeSpectraError as exc:
        run_log.error("%s failed: %s", args.command, exc)
        print(f"error: {exc}", file=sys.stderr)
        return 1

    emit(text, args.out)
    record_run(run_id=run_id, command=args.command, params=params, artifact=text)
    run_log.info("%s finished with exit code %d", args.command, code)
    return code


if __name__ == "__main__":
    sys.exit(run())
