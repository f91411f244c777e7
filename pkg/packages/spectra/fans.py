"""
TreeSpectra — Rooted fan pipeline.

Only the isotropic direction is constructive for fans: every root of
G_{depth+1} is an eigenvalue with the depth-constant eigenvector
F_{depth-m+1}(lambda).  The rest of the fan spectrum comes from the oracle.
"""

from __future__ import annotations

from typing import List, Optional

from pydantic import BaseModel, Field

from common.config import CERT_TOL, COMPARE_TOL
from common.logging_util import get_logger
from common.types import BranchingSpec, SpectrumReport
from polyfam.families import fan_family_config, make_family, make_root_poly
from polyfam.roots import cached_sturm_roots, match_root
from spectra.assemble import fan_spectrum
from spectra.eigvecs import isotropic_eigenvector
from treegen.builder import build_fan_graph

log = get_logger(__name__)


class FanSummary(BaseModel):
    spec:            BranchingSpec
    depth:           int
    n_nodes:         int
    n_edges:         int
    closing_roots:   List[float]
    unmatched_roots: List[float] = Field(default_factory=list)
    max_residual:    float
    report:          SpectrumReport

    @property
    def ok(self) -> bool:
        return not self.unmatched_roots and self.max_residual <= CERT_TOL


def fan_pipeline(k: int, d: int, depth: int, tol: Optional[float] = None) -> FanSummary:
    """
    Build the fan, assemble its spectrum, check that every G_{depth+1} root is
    an oracle eigenvalue and certify the isotropic eigenvector of each root.
    """
    tol = COMPARE_TOL if tol is None else tol
    spec = BranchingSpec.fan(k, d)
    graph = build_fan_graph(k, d, depth)
    report = fan_spectrum(spec, depth)
    family = make_family(fan_family_config(k, d), depth + 1)
    closing = list(cached_sturm_roots(make_root_poly(family, depth + 1)))
    values = report.values()
    unmatched = [r for r in closing if match_root(r, values, tol) is None]
    if unmatched:
        log.warning("Fan %s depth %d: %d closing roots missing from the oracle spectrum",
                    spec.label, depth, len(unmatched))
    worst = 0.0
    for lam in closing:
        worst = max(worst, isotropic_eigenvector(graph, lam, family).residual_inf)
    log.info("Fan %s depth %d: %d nodes, %d closing roots, max residual %.2e",
             spec.label, depth, graph.n_nodes, len(closing), worst)
    return FanSummary(spec=spec, depth=depth, n_nodes=graph.n_nodes, n_edges=graph.n_edges,
                      closing_roots=closing, unmatched_roots=unmatched,
                      max_residual=worst, report=report)
