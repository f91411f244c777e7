"""
TreeSpectra — Explicit eigenvectors and their residual certificates.

Isotropic vectors take the value P_{d-m+1}(lambda) on every node at depth m
(F for fans).  Typed vectors of index s sit below an anchor at depth
t = d+1-s: child i of the anchor carries +profile on its subtree, child i+1
carries -profile, where the profile at distance j below the anchor is
P_{s-j}(lambda).  Each vector is accepted only after its residual is checked.
"""

from __future__ import annotations

from typing import Iterator, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from common.config import CERT_TOL
from common.errors import CertificateError, SpecViolation, UnsupportedOperation
from common.logging_util import get_logger
from common.types import BranchingKind, Construction, OperatorKind
from polyfam.families import PolyFamily
from treegen.builder import TreeGraph

log = get_logger(__name__)

RANK_CHECK_MAX_N = 300


class EigvecCertificate(BaseModel):
    values:       np.ndarray
    lam:          float
    residual_inf: float
    construction: Construction
    s:            Optional[int] = None
    anchor:       Optional[int] = None

    model_config = {"frozen": True, "arbitrary_types_allowed": True}


# ── Residuals ────────────────────────────────────────────────────────────────

def apply_operator(graph: TreeGraph, v: np.ndarray, operator: OperatorKind) -> np.ndarray:
    """Op @ v without forming the matrix; the walk is D^-1 A."""
    src, dst = graph.edge_arrays()
    av = np.bincount(src, weights=v[dst], minlength=graph.n_nodes)
    if operator == OperatorKind.ADJACENCY:
        return av
    deg = graph.degrees().astype(float)
    if operator == OperatorKind.LAPLACIAN:
        return deg * v - av
    if np.any(deg == 0):
        raise SpecViolation("random walk requires no isolated nodes")
    return av / deg


def residual_detail(
    graph: TreeGraph,
    values,
    lam: float,
    operator: OperatorKind = OperatorKind.ADJACENCY,
    max_depth: Optional[int] = None,
) -> Tuple[float, int]:
    """(max |Op v - lam v| / max |v|, node attaining it)."""
    v = np.asarray(values, dtype=float)
    if v.shape != (graph.n_nodes,):
        raise SpecViolation(f"eigenvector must have {graph.n_nodes} entries",
                            f"got shape {v.shape}")
    norm = float(np.max(np.abs(v))) if v.size else 0.0
    if norm == 0.0:
        raise SpecViolation("eigenvector candidate must be nonzero")
    diff = np.abs(apply_operator(graph, v, operator) - lam * v)
    if max_depth is not None:
        diff = np.where(graph.depth_of <= max_depth, diff, 0.0)
    worst = int(np.argmax(diff))
    return float(diff[worst]) / norm, worst


def verify_eigenpair(
    graph: TreeGraph,
    values,
    lam: float,
    operator_kind: OperatorKind = OperatorKind.ADJACENCY,
    max_depth: Optional[int] = None,
) -> float:
    """Max-norm relative residual; max_depth restricts the rows checked."""
    residual, _ = residual_detail(graph, values, lam, operator_kind, max_depth)
    return residual


def _certify(
    graph: TreeGraph,
    v: np.ndarray,
    lam: float,
    construction: Construction,
    tol: float,
    s: Optional[int] = None,
    anchor: Optional[int] = None,
) -> EigvecCertificate:
    residual, worst = residual_detail(graph, v, lam)
    if residual > tol:
        log.error("Certificate rejected: lambda=%r residual %.3e at node %d",
                  lam, residual, worst)
        raise CertificateError(lam, residual, worst, tol)
    v.setflags(write=False)
    return EigvecCertificate(values=v, lam=lam, residual_inf=residual,
                             construction=construction, s=s, anchor=anchor)


# ── Constructions ────────────────────────────────────────────────────────────

def depth_profile(family: PolyFamily, lam: float, depth: int) -> np.ndarray:
    """profile[m] = P_{depth-m+1}(lam) for m = 0..depth."""
    if family.n_max < depth + 1:
        raise SpecViolation(f"family must reach index {depth + 1}", f"n_max={family.n_max}")
    vals = family.evaluate_all(lam)
    return np.array([vals[depth - m + 1] for m in range(depth + 1)])


def isotropic_eigenvector(
    tree: TreeGraph,
    lam: float,
    family: PolyFamily,
    tol: float = CERT_TOL,
) -> EigvecCertificate:
    """lam must be a root of the closing polynomial Q_{d+1} (G_{d+1} for fans)."""
    profile = depth_profile(family, lam, tree.depth)
    v = profile[tree.depth_of].astype(float)
    construction = Construction.FAN if tree.spec.kind == BranchingKind.FAN else Construction.ISOTROPIC
    return _certify(tree, v, lam, construction, tol)


def _typed_vectors(tree: TreeGraph, lam: float, s: int, family: PolyFamily) -> Iterator[Tuple[int, np.ndarray]]:
    depth = tree.depth
    t = depth + 1 - s
    if tree.spec.kind == BranchingKind.FAN:
        raise UnsupportedOperation(tree.spec.kind.value, "typed_eigenbasis")
    if not 0 <= t < depth:
        raise SpecViolation(f"typed index s must lie in [2, {depth + 1}]", f"got s={s}")
    vals = family.evaluate_all(lam)
    for anchor in tree.level(t):
        kids = list(tree.children(anchor))
        for i in range(len(kids) - 1):
            v = np.zeros(tree.n_nodes)
            for sign, child in ((1.0, kids[i]), (-1.0, kids[i + 1])):
                v[child] = sign * vals[s - 1]
                for j, rng in enumerate(tree.descendant_ranges(child)):
                    v[rng.start:rng.stop] = sign * vals[s - 2 - j]
            yield anchor, v


def typed_eigenbasis(
    tree: TreeGraph,
    lam: float,
    s: int,
    family: PolyFamily,
    tol: float = CERT_TOL,
) -> List[EigvecCertificate]:
    """(c_t - 1) certificates per anchor at depth t = d+1-s; lam a root of P_s."""
    return [
        _certify(tree, v, lam, Construction.TYPED, tol, s=s, anchor=anchor)
        for anchor, v in _typed_vectors(tree, lam, s, family)
    ]


# ── Whole-tree certification ─────────────────────────────────────────────────

def iter_certificates(tree: TreeGraph, tol: float = CERT_TOL) -> Iterator[EigvecCertificate]:
    """Every certificate for the adjacency of a Bethe tree, lazily."""
    from spectra.assemble import polynomial_contributions
    from spectra.reduce import block_family

    spec, depth = tree.spec, tree.depth
    if spec.kind == BranchingKind.FAN:
        raise UnsupportedOperation(spec.kind.value, "typed certificates")
    family = block_family(spec, depth, OperatorKind.ADJACENCY)
    for c in polynomial_contributions(spec, depth, OperatorKind.ADJACENCY, closed_form=True):
        if c.isotropic:
            yield isotropic_eigenvector(tree, c.value, family, tol)
        else:
            for anchor, v in _typed_vectors(tree, c.value, c.index, family):
                yield _certify(tree, v, c.value, Construction.TYPED, tol, s=c.index, anchor=anchor)


class CertificateSummary(BaseModel):
    label:        str
    depth:        int
    n_nodes:      int
    count:        int
    max_residual: float
    rank:         Optional[int] = None

    @property
    def complete(self) -> bool:
        return self.count == self.n_nodes and (self.rank is None or self.rank == self.n_nodes)


def certificate_summary(tree: TreeGraph, tol: float = CERT_TOL, check_rank: bool = False) -> CertificateSummary:
    """
    Certify every eigenvector of the tree.  With check_rank (small trees
    only) the stacked certificates are also checked for full rank.
    """
    count, worst = 0, 0.0
    rows: List[np.ndarray] = []
    keep = check_rank and tree.n_nodes <= RANK_CHECK_MAX_N
    for cert in iter_certificates(tree, tol):
        count += 1
        worst = max(worst, cert.residual_inf)
        if keep:
            rows.append(cert.values)
    rank = int(np.linalg.matrix_rank(np.vstack(rows))) if keep and rows else None
    log.info("Certified %d eigenvectors of %s depth %d (max residual %.2e)",
             count, tree.spec.label, tree.depth, worst)
    return CertificateSummary(label=tree.spec.label, depth=tree.depth, n_nodes=tree.n_nodes,
                              count=count, max_residual=worst, rank=rank)
