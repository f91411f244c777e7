"""
TreeSpectra — Spectrum assembly.

Three routes produce a SpectrumReport:

  polynomial route   roots of the block polynomials (closed form where one
                     exists, Sturm isolation otherwise), each repeated by
                     its class dimension
  block route        QL eigenvalues of the depth_reduce blocks
  fan route          dense oracle clusters, tagged with G-root provenance

Every route merges equal values across classes and checks that the
multiplicities add up to the node count.
"""

from __future__ import annotations

from typing import List, NamedTuple

from common.config import COMPARE_TOL, DEDUP_TOL, SUPPORTED_OPERATORS
from common.errors import ConsistencyError, SpecViolation, UnsupportedOperation
from common.logging_util import get_logger
from common.types import (
    BranchingKind,
    BranchingSpec,
    OperatorKind,
    Provenance,
    SpectrumEntry,
    SpectrumReport,
)
from oracle.dense import oracle_spectrum
from oracle.eigensolver import tridiagonal_eigenvalues
from polyfam.families import fan_family_config, make_family, make_root_poly
from polyfam.roots import cached_sturm_roots, closed_form_roots, match_root
from spectra.reduce import block_family, block_polynomials, depth_reduce
from treegen.builder import build_fan_graph, check_depth, node_count_closed

log = get_logger(__name__)

ORACLE_LABEL = "oracle"


class _Contribution(NamedTuple):
    value:        float
    multiplicity: int
    index:        int
    label:        str
    closing:      bool
    isotropic:    bool


# ── Merging ──────────────────────────────────────────────────────────────────

def _merge(contribs: List[_Contribution], tol: float = DEDUP_TOL) -> List[SpectrumEntry]:
    """Group values equal within tol (relative to the spectral scale)."""
    if not contribs:
        return []
    ordered = sorted(contribs, key=lambda c: c.value)
    scale = max(1.0, max(abs(c.value) for c in ordered))
    groups: List[List[_Contribution]] = [[ordered[0]]]
    for c in ordered[1:]:
        if c.value - groups[-1][-1].value <= tol * scale:
            groups[-1].append(c)
        else:
            groups.append([c])

    entries = []
    for group in groups:
        # first appearance: lowest P index, closing polynomials last
        head = min(group, key=lambda c: (c.closing, c.index))
        entries.append(SpectrumEntry(
            value=head.value + 0.0,
            multiplicity=sum(c.multiplicity for c in group),
            source=Provenance(family_label=head.label, poly_index=head.index,
                              first_index=head.index),
        ))
    return entries


def _finish(
    spec: BranchingSpec,
    depth: int,
    operator: OperatorKind,
    entries: List[SpectrumEntry],
) -> SpectrumReport:
    n_nodes = node_count_closed(spec, depth)
    total = sum(e.multiplicity for e in entries)
    if total != n_nodes:
        log.error("Multiplicities of %s depth %d (%s) sum to %d, node count %d",
                  spec.label, depth, operator.value, total, n_nodes)
        raise ConsistencyError("sum of multiplicities", n_nodes, total)
    report = SpectrumReport(spec=spec, depth=depth, operator=operator,
                            entries=tuple(entries), total_dim=n_nodes)
    log.info("Assembled %s spectrum of %s depth %d: %d distinct values, dim %d",
             operator.value, spec.label, depth, len(entries), n_nodes)
    return report


# ── Routes ───────────────────────────────────────────────────────────────────

def polynomial_contributions(
    spec: BranchingSpec,
    depth: int,
    operator: OperatorKind,
    closed_form: bool,
) -> List[_Contribution]:
    family = block_family(spec, depth, operator)
    label = family.label
    use_closed = (closed_form and operator == OperatorKind.ADJACENCY
                  and spec.kind in (BranchingKind.CONSTANT, BranchingKind.HAT))
    out: List[_Contribution] = []
    for bp in block_polynomials(spec, depth, operator, family):
        size = depth + 1 if bp.closing else bp.index - 1
        if use_closed and not bp.closing:
            roots = closed_form_roots(spec.branching, bp.index)
            index, tag, closing = bp.index, label, False
        elif use_closed and spec.kind == BranchingKind.CONSTANT:
            # the constant tree closes with its own next member, Q_{d+1} = P_{d+2}
            roots = closed_form_roots(spec.k, depth + 2)
            index, tag, closing = depth + 2, label, False
        else:
            roots = list(cached_sturm_roots(bp.poly))
            index, closing = bp.index, bp.closing
            tag = f"{label}/Q" if closing else label
        if len(roots) != size:
            log.error("Block %d of %s has %d roots, expected %d",
                      bp.index, spec.label, len(roots), size)
            raise ConsistencyError(f"root count of block index {bp.index}", size, len(roots))
        out.extend(_Contribution(r, bp.multiplicity, index, tag, closing, bp.closing)
                   for r in roots)
    return out


def _block_contributions(spec: BranchingSpec, depth: int, operator: OperatorKind) -> List[_Contribution]:
    label = f"{operator.value}-blocks[{spec.label}]"
    out: List[_Contribution] = []
    for block in depth_reduce(spec, depth, operator):
        for value in tridiagonal_eigenvalues(block.diag, block.offdiag):
            out.append(_Contribution(value, block.multiplicity, block.poly_index,
                                     label, block.isotropic, block.isotropic))
    return out


def block_route_spectrum(
    spec: BranchingSpec,
    depth: int,
    operator: OperatorKind = OperatorKind.ADJACENCY,
) -> SpectrumReport:
    """Spectrum from the QL eigenvalues of the depth-reduction blocks."""
    check_depth(spec, depth)
    return _finish(spec, depth, operator, _merge(_block_contributions(spec, depth, operator)))


def family_route_spectrum(
    spec: BranchingSpec,
    depth: int,
    operator: OperatorKind = OperatorKind.ADJACENCY,
) -> SpectrumReport:
    """Spectrum from Sturm roots of the exact operator family members."""
    check_depth(spec, depth)
    if depth == 0:
        # the walk closing polynomial degenerates on a single node
        return block_route_spectrum(spec, depth, operator)
    contribs = polynomial_contributions(spec, depth, operator, closed_form=False)
    return _finish(spec, depth, operator, _merge(contribs))


def fan_spectrum(spec: BranchingSpec, depth: int) -> SpectrumReport:
    """Oracle clusters of the fan, with G_{depth+1} provenance where a root matches."""
    if spec.kind != BranchingKind.FAN:
        raise UnsupportedOperation(spec.kind.value, "fan_spectrum")
    graph = build_fan_graph(spec.k, spec.d, depth)
    family = make_family(fan_family_config(spec.k, spec.d), depth + 1)
    closing = cached_sturm_roots(make_root_poly(family, depth + 1))
    entries = []
    for value, mult in oracle_spectrum(graph):
        if match_root(value, closing, COMPARE_TOL) is not None:
            source = Provenance(family_label=f"{family.label}/G", poly_index=depth + 1,
                                first_index=depth + 1)
        else:
            source = Provenance(family_label=ORACLE_LABEL, poly_index=0, first_index=0)
        entries.append(SpectrumEntry(value=value + 0.0, multiplicity=mult, source=source))
    return _finish(spec, depth, OperatorKind.ADJACENCY, entries)


def assemble_spectrum(
    spec: BranchingSpec,
    depth: int,
    operator_kind: OperatorKind = OperatorKind.ADJACENCY,
) -> SpectrumReport:
    """Full spectrum with exact multiplicities and provenance."""
    operator_kind = OperatorKind(operator_kind)
    if operator_kind.value not in SUPPORTED_OPERATORS[spec.kind.value]:
        raise UnsupportedOperation(spec.kind.value, f"{operator_kind.value} spectrum")
    if spec.kind == BranchingKind.FAN:
        if depth < 0:
            raise SpecViolation("depth must be >= 0", f"got depth={depth}")
        return fan_spectrum(spec, depth)
    check_depth(spec, depth)
    if operator_kind == OperatorKind.ADJACENCY:
        contribs = polynomial_contributions(spec, depth, operator_kind, closed_form=True)
        return _finish(spec, depth, operator_kind, _merge(contribs))
    return block_route_spectrum(spec, depth, operator_kind)


def is_nested(inner: SpectrumReport, outer: SpectrumReport, tol: float = 1e-9) -> bool:
    """True iff every value of inner lies within tol of a value of outer."""
    outer_values = outer.values()
    return all(match_root(v, outer_values, tol) is not None for v in inner.values())
