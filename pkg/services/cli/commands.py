"""
TreeSpectra — CLI command handlers.

Each handler takes the parsed argparse namespace and returns
(exit_code, artifact_text).  Handlers never write; main.run emits the text
and records it in the run ledger.  Exit 1 means a comparison or a
certificate check failed; raised ValueErrors become exit 2 in main.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Callable, Dict, List, Tuple

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "..", "packages"))

from common.config import CERT_TOL, COMPARE_TOL, LIMIT_TRUNCATION, REPORTS_DIR
from common.errors import SpecViolation
from common.logging_util import get_logger
from common.types import BranchingKind, BranchingSpec, OperatorKind
from measure.endpoints import staircase_endpoints
from measure.lambert import FORMS, lambert_partial
from measure.staircase import limiting_cdf, normalize_spectrum
from oracle.compare import compare_spectra
from oracle.dense import oracle_spectrum
from polyfam.numtheory import coprime_numerators
from spectra.assemble import assemble_spectrum
from spectra.eigvecs import RANK_CHECK_MAX_N, certificate_summary
from spectra.fans import fan_pipeline
from treegen.builder import build_tree, check_depth

from artifacts import render_endpoints, render_json, render_rows, render_spectrum, render_staircase
from reporter import build_discrepancy_data, generate_report

log = get_logger("cli.commands")

Result = Tuple[int, str]

DEFAULT_ENDPOINT_M = 6


# ── Spec arguments ───────────────────────────────────────────────────────────

def parse_alphas(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise SpecViolation("alphas must be a comma-separated list of integers",
                            f"got {text!r}") from None


def spec_from_args(args: argparse.Namespace) -> BranchingSpec:
    """Build and validate the BranchingSpec before any computation runs."""
    family = BranchingKind(args.family)
    if family in (BranchingKind.CONSTANT, BranchingKind.HAT, BranchingKind.FAN):
        if args.k is None:
            raise SpecViolation(f"--k is required for --family {family.value}")
    if family == BranchingKind.CONSTANT:
        spec = BranchingSpec.constant(args.k)
    elif family == BranchingKind.HAT:
        spec = BranchingSpec.regular_subtree(args.k)
    elif family == BranchingKind.FAN:
        spec = BranchingSpec.fan(args.k, args.d)
    else:
        if not args.alphas:
            raise SpecViolation(f"--alphas is required for --family {family.value}")
        alphas = parse_alphas(args.alphas)
        spec = (BranchingSpec.periodic(alphas) if family == BranchingKind.PERIODIC
                else BranchingSpec.sequence(alphas))
    if getattr(args, "depth", None) is not None:
        check_depth(spec, args.depth)
    return spec


def _operator(args: argparse.Namespace) -> OperatorKind:
    return OperatorKind(getattr(args, "operator", None) or OperatorKind.ADJACENCY.value)


def _require_depth(args: argparse.Namespace) -> int:
    if args.depth is None:
        raise SpecViolation(f"--depth is required for '{args.command}'")
    return args.depth


# ── Handlers ─────────────────────────────────────────────────────────────────

def cmd_spectrum(args: argparse.Namespace) -> Result:
    spec = spec_from_args(args)
    report = assemble_spectrum(spec, _require_depth(args), _operator(args))
    log.info("spectrum %s depth %d: %d distinct values, total_dim %d",
             spec.label, report.depth, len(report.entries), report.total_dim)
    return 0, render_spectrum(report, args.format)


def cmd_verify(args: argparse.Namespace) -> Result:
    spec = spec_from_args(args)
    depth = _require_depth(args)
    tol = args.tol if args.tol is not None else CERT_TOL
    if spec.kind == BranchingKind.FAN:
        fan = fan_pipeline(spec.k, spec.d, depth)
        row = {"label": spec.label, "depth": depth, "n_nodes": fan.n_nodes,
               "count": len(fan.closing_roots), "max_residual": fan.max_residual,
               "complete": False}
        ok = fan.max_residual <= tol and not fan.unmatched_roots
    else:
        tree = build_tree(spec, depth)
        summary = certificate_summary(tree, tol, check_rank=tree.n_nodes <= RANK_CHECK_MAX_N)
        row = {"label": summary.label, "depth": depth, "n_nodes": summary.n_nodes,
               "count": summary.count, "max_residual": summary.max_residual,
               "complete": summary.complete}
        ok = summary.complete and summary.max_residual <= tol
    columns = ["label", "depth", "n_nodes", "count", "max_residual", "complete"]
    return (0 if ok else 1), render_rows([row], columns, args.format)


def cmd_staircase(args: argparse.Namespace) -> Result:
    spec = spec_from_args(args)
    if args.limit:
        cdf = limiting_cdf(spec, args.trunc or LIMIT_TRUNCATION, args.scheme)
    else:
        cdf = normalize_spectrum(assemble_spectrum(spec, _require_depth(args)), args.scheme)
    return 0, render_staircase(cdf, args.format)


def cmd_endpoints(args: argparse.Namespace) -> Result:
    spec = spec_from_args(args)
    truncation = args.trunc or LIMIT_TRUNCATION
    if args.m is not None:
        probes = [(args.m, a) for a in ([args.a] if args.a is not None else coprime_numerators(args.m))]
    else:
        probes = [(m, a) for m in range(2, DEFAULT_ENDPOINT_M + 1) for a in coprime_numerators(m)]
    records = [staircase_endpoints(spec, m, a, truncation) for m, a in probes]
    return 0, render_endpoints(records, args.format)


def cmd_oracle_compare(args: argparse.Namespace) -> Result:
    spec = spec_from_args(args)
    depth = _require_depth(args)
    operator = _operator(args)
    tol = args.tol if args.tol is not None else COMPARE_TOL
    report = assemble_spectrum(spec, depth, operator)
    oracle = oracle_spectrum(build_tree(spec, depth), operator)
    cmp = compare_spectra(report, oracle, tol)
    if not cmp.matched:
        log.warning("oracle-compare %s depth %d (%s): %d mismatches, worst gap %.3e",
                    spec.label, depth, operator.value, len(cmp.mult_mismatches), cmp.worst_value_gap)
    if args.format == "json":
        return (0 if cmp.matched else 1), render_json(cmp)
    row = {"label": spec.label, "depth": depth, "operator": operator.value,
           "matched": cmp.matched, "worst_value_gap": cmp.worst_value_gap,
           "mismatches": len(cmp.mult_mismatches),
           "n_clusters_assembled": cmp.n_clusters_a, "n_clusters_oracle": cmp.n_clusters_b}
    return (0 if cmp.matched else 1), render_rows([row], list(row), args.format)


def cmd_identities(args: argparse.Namespace) -> Result:
    if args.k is None:
        raise SpecViolation("--k is required for 'identities'")
    truncation = args.trunc or LIMIT_TRUNCATION
    rows: List[dict] = []
    for form in FORMS:
        s = lambert_partial(args.k, truncation, form)
        rows.append({"k": s.k, "n": s.n, "form": s.form, "value": s.value,
                     "limit": s.limit, "gap": s.gap, "tail_bound": s.tail_bound})
    return 0, render_rows(rows, list(rows[0]), args.format)


def cmd_fan(args: argparse.Namespace) -> Result:
    if args.k is None or args.d is None:
        raise SpecViolation("--k and --d are required for 'fan'")
    fan = fan_pipeline(args.k, args.d, _require_depth(args), args.tol)
    if args.format == "json":
        payload = {
            "spec":            fan.spec.to_payload(),
            "depth":           fan.depth,
            "n_nodes":         fan.n_nodes,
            "n_edges":         fan.n_edges,
            "closing_roots":   fan.closing_roots,
            "unmatched_roots": fan.unmatched_roots,
            "max_residual":    fan.max_residual,
            "spectrum":        fan.report.to_payload(),
        }
        return (0 if fan.ok else 1), render_json(payload)
    return (0 if fan.ok else 1), render_spectrum(fan.report, "csv")


def cmd_report(args: argparse.Namespace) -> Result:
    data = build_discrepancy_data()
    if args.out is None:
        ext = "json" if args.format == "json" else "md"
        args.out = os.path.join(REPORTS_DIR, f"discrepancies.{ext}")
    if args.format == "json":
        return 0, render_json(data)
    return 0, generate_report(data)


COMMANDS: Dict[str, Callable[[argparse.Namespace], Result]] = {
    "spectrum":       cmd_spectrum,
    "verify":         cmd_verify,
    "staircase":      cmd_staircase,
    "endpoints":      cmd_endpoints,
    "oracle-compare": cmd_oracle_compare,
    "identities":     cmd_identities,
    "fan":            cmd_fan,
    "report":         cmd_report,
}
