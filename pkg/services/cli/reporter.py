"""
TreeSpectra — Discrepancy report generator.

Collects every place where a printed formula and a computed quantity can be
set side by side, and renders the comparison as markdown (or JSON):

  1. Laplacian / random-walk families, printed vs derived, against the oracle
  2. cumulative multiplicity closed form vs summed per-index dimensions
  3. anchor-count exponent vs the node-count identity
  4. endpoint counting direction vs the empirical CDF at depth 12
  5. the degree-affine normalization range
  6. the numerator range of the closed-form roots

No timestamps are written, so reruns are byte-identical.
"""

from __future__ import annotations

import math
import os
import sys
from fractions import Fraction
from typing import Any, Dict, List

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "..", "packages"))

from common.config import COMPARE_TOL
from common.errors import TreeSpectraError
from common.logging_util import get_logger
from common.types import BranchingSpec, NormalizationScheme, OperatorKind
from measure.endpoints import staircase_endpoints
from measure.staircase import normalize_spectrum, normalizer
from oracle.compare import cluster_weighted, compare_spectra
from oracle.dense import oracle_spectrum
from polyfam.families import (
    PolyFamily,
    constant_family_config,
    laplacian_as_stated_config,
    make_family,
    walk_as_stated_config,
)
from polyfam.roots import closed_form_value, sturm_roots
from spectra.assemble import assemble_spectrum, family_route_spectrum
from spectra.multiplicity import cumulative_multiplicity, typed_multiplicities
from treegen.builder import build_tree, node_count_closed

log = get_logger("cli.reporter")

FAMILY_INSTANCES = [
    (BranchingSpec.constant(2), (1, 2, 3)),
    (BranchingSpec.constant(3), (1, 2, 3)),
    (BranchingSpec.regular_subtree(3), (1, 2, 3)),
    (BranchingSpec.regular_subtree(4), (1, 2, 3)),
]

ENDPOINT_PROBES = [(2, 1), (3, 1), (3, 2), (4, 1), (4, 3), (5, 2), (5, 3)]


# ── Section 1: operator families ─────────────────────────────────────────────

def _as_stated_pairs(spec: BranchingSpec, depth: int, operator: OperatorKind):
    k = spec.k
    if operator == OperatorKind.LAPLACIAN:
        cfg = laplacian_as_stated_config(k)
    else:
        cfg = walk_as_stated_config(k)
    family = make_family(cfg, depth + 2)
    pairs = []
    for s, mult in typed_multiplicities(spec, depth).items():
        pairs.extend((r, mult) for r in sturm_roots(family.members[s]))
    pairs.extend((r, 1) for r in sturm_roots(family.q_members[depth + 1]))
    return cluster_weighted(pairs, tol=1e-9)


def family_rows() -> List[Dict[str, Any]]:
    rows = []
    for spec, depths in FAMILY_INSTANCES:
        for depth in depths:
            graph = build_tree(spec, depth)
            for operator in (OperatorKind.LAPLACIAN, OperatorKind.RANDOM_WALK):
                oracle = oracle_spectrum(graph, operator)
                for variant in ("as-stated", "derived"):
                    row = {"instance": f"{spec.label} r={depth}", "operator": operator.value,
                           "family": variant, "matched": False, "worst_gap": None,
                           "mismatches": None, "note": ""}
                    try:
                        if variant == "derived":
                            ours = family_route_spectrum(spec, depth, operator).pairs()
                        else:
                            ours = _as_stated_pairs(spec, depth, operator)
                        cmp = compare_spectra(ours, oracle, COMPARE_TOL)
                        row.update(matched=cmp.matched, worst_gap=cmp.worst_value_gap,
                                   mismatches=len(cmp.mult_mismatches))
                    except TreeSpectraError as exc:
                        row["note"] = str(exc)
                    if variant == "as-stated" and not row["matched"]:
                        log.warning("As-stated %s family disagrees with the oracle on %s",
                                    operator.value, row["instance"])
                    rows.append(row)
    return rows


def star_walk_check(k: int) -> Dict[str, Any]:
    """The printed walk closing polynomial on the star K_{1,k}."""
    family = make_family(walk_as_stated_config(k), 3)
    printed = sturm_roots(family.q_members[2])
    expected = [-1.0, 1.0]
    return {
        "k": k,
        "printed_roots": printed,
        "expected_roots": expected,
        "flagged": any(abs(abs(r) - 1.0) > COMPARE_TOL for r in printed),
    }


# ── Section 2: cumulative multiplicity closed form ───────────────────────────

def printed_cumulative(m: int, depth: int, k: int) -> Fraction:
    """The printed geometric closed form, evaluated exactly."""
    j = (depth + 1) // m
    geometric = Fraction((k - 1) * k ** (m + depth + 1), k ** m - 1) * (1 - Fraction(1, k ** (m * j)))
    delta = 1 if depth % m == 1 % m else 0
    return geometric + delta


def cumulative_rows() -> List[Dict[str, Any]]:
    rows = []
    for k in (2, 3):
        spec = BranchingSpec.constant(k)
        for depth in range(2, 7):
            for m in range(2, depth):
                summed = cumulative_multiplicity(m, depth, spec)
                printed = printed_cumulative(m, depth, k)
                rows.append({"k": k, "depth": depth, "m": m, "summed": summed,
                             "printed": str(printed), "agrees": printed == summed})
    return rows


# ── Section 3: anchor exponent ───────────────────────────────────────────────

def anchor_rows() -> List[Dict[str, Any]]:
    rows = []
    for k in (2, 3, 4):
        for depth in range(1, 6):
            nodes = node_count_closed(BranchingSpec.constant(k), depth)
            printed = sum((s - 1) * Fraction(k) ** (depth - s) * (k - 1)
                          for s in range(2, depth + 2)) + depth + 1
            corrected = sum((s - 1) * k ** (depth + 1 - s) * (k - 1)
                            for s in range(2, depth + 2)) + depth + 1
            rows.append({"k": k, "depth": depth, "nodes": nodes, "printed": str(printed),
                         "corrected": corrected, "corrected_ok": corrected == nodes})
    return rows


# ── Section 4: endpoint direction ────────────────────────────────────────────

def endpoint_rows(k: int = 2, depth: int = 12, truncation: int = 60) -> List[Dict[str, Any]]:
    spec = BranchingSpec.constant(k)
    cdf = normalize_spectrum(assemble_spectrum(spec, depth), NormalizationScheme.SUPPORT_AFFINE)
    to_x = normalizer(spec, NormalizationScheme.SUPPORT_AFFINE)
    rows = []
    for m, a in ENDPOINT_PROBES:
        empirical = cdf.left_limit(to_x(closed_form_value(k, a, m)))
        adopted = staircase_endpoints(spec, m, a, truncation).left
        stated = staircase_endpoints(spec, m, a, truncation, stated_condition=True).left
        rows.append({"m": m, "a": a, "empirical_left": empirical,
                     "adopted_left": adopted, "stated_left": stated,
                     "adopted_error": abs(adopted - empirical),
                     "stated_error": abs(stated - empirical)})
    return rows


# ── Section 5 / 6: normalization range and root numerators ───────────────────

def normalization_rows(depth: int = 6) -> List[Dict[str, Any]]:
    rows = []
    for k in (2, 3, 4, 5):
        spec = BranchingSpec.constant(k)
        cdf = normalize_spectrum(assemble_spectrum(spec, depth), NormalizationScheme.DEGREE_AFFINE)
        lo, hi = cdf.xs[0], cdf.xs[-1]
        rows.append({"k": k, "min_x": lo, "max_x": hi, "inside_unit": 0.0 <= lo and hi <= 1.0})
    return rows


def numerator_rows(b: int = 2, max_m: int = 8) -> List[Dict[str, Any]]:
    family: PolyFamily = make_family(constant_family_config(b), max_m)
    edge = -2.0 * math.sqrt(b)
    rows = []
    for m in range(2, max_m + 1):
        value = family.members[m](edge)
        rows.append({"m": m, "degree": family.members[m].degree, "printed_count": m,
                     "P_m(-2sqrt b)": value, "extra_is_root": abs(value) < 1e-9})
    return rows


# ── Assembly and rendering ───────────────────────────────────────────────────

def build_discrepancy_data() -> Dict[str, Any]:
    log.info("Building discrepancy report")
    return {
        "operator_families":     family_rows(),
        "star_walk":             [star_walk_check(k) for k in (2, 3, 4)],
        "cumulative_closed_form": cumulative_rows(),
        "anchor_exponent":       anchor_rows(),
        "endpoint_direction":    endpoint_rows(),
        "degree_normalization":  normalization_rows(),
        "root_numerators":       numerator_rows(),
    }


def _fmt(value: Any) -> str:
    if value is None:
        return "—"
    if isinstance(value, bool):
        return "✅" if value else "❌"
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, list):
        return ", ".join(_fmt(v) for v in value)
    return str(value)


def _table(rows: List[Dict[str, Any]]) -> str:
    if not rows:
        return "_No rows._\n"
    columns = list(rows[0])
    lines = ["| " + " | ".join(columns) + " |",
             "|" + "|".join("---" for _ in columns) + "|"]
    for row in rows:
        lines.append("| " + " | ".join(_fmt(row[c]) for c in columns) + " |")
    return "\n".join(lines) + "\n"


def generate_report(data: Dict[str, Any]) -> str:
    families = data["operator_families"]
    stated_bad = sum(1 for r in families if r["family"] == "as-stated" and not r["matched"])
    derived_bad = sum(1 for r in families if r["family"] == "derived" and not r["matched"])
    cumulative_bad = sum(1 for r in data["cumulative_closed_form"] if not r["agrees"])
    star_flagged = all(r["flagged"] for r in data["star_walk"])

    report = f"""# TreeSpectra Discrepancy Report

**Derived families failing the oracle:** {derived_bad}
**As-stated families failing the oracle:** {stated_bad}
**Star walk closing roots flagged:** {_fmt(star_flagged)}
**Cumulative closed form disagreements:** {cumulative_bad}

---

## Laplacian and random-walk families vs oracle

{_table(families)}

### Walk closing polynomial on the star K(1,k)

{_table(data["star_walk"])}

---

## Cumulative multiplicity: printed closed form vs summed dimensions

{_table(data["cumulative_closed_form"])}

---

## Anchor exponent vs node count

{_table(data["anchor_exponent"])}

---

## Endpoint direction at depth 12 (k=2)

{_table(data["endpoint_direction"])}

---

## Degree-affine normalization range (depth 6)

{_table(data["degree_normalization"])}

---

## Closed-form root numerators (b=2)

{_table(data["root_numerators"])}

---

## Notes

- Acceptance checks bind to the derived families; as-stated rows are informational.
- Endpoint left edges count reduced angles l/n > a/m.
- Multiplicities use the exponent (k-1)·k^(r+1-s).
"""
    return report.strip() + "\n"
