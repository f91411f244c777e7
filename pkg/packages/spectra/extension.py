"""
TreeSpectra — Extension of hat-tree eigenvectors to balls of the regular tree.

Below every leaf of the hat tree X^_n^k the extension puts 0 on the first new
ring and then follows

    w_{n+i} = (lambda * w_{n+i-1} - w_{n+i-2}) / (k - 1)

ring by ring, so the values are constant on each sibling group.  The eigen
relation then holds everywhere except on the outermost ring of the ball.
"""

from __future__ import annotations

import numpy as np

from common.config import CERT_TOL
from common.errors import CertificateError, SpecViolation, UnsupportedOperation
from common.logging_util import get_logger
from common.types import BranchingKind, BranchingSpec
from spectra.eigvecs import residual_detail
from treegen.builder import build_tree, node_count_closed

log = get_logger(__name__)


def _infer_depth(spec: BranchingSpec, n_values: int) -> int:
    depth = 0
    while True:
        count = node_count_closed(spec, depth)
        if count == n_values:
            return depth
        if count > n_values:
            raise SpecViolation(f"vector length must be a {spec.label} node count",
                                f"got {n_values}")
        depth += 1


def extend_to_ball(values, lam: float, spec: BranchingSpec, extra_depth: int,
                   tol: float = CERT_TOL) -> np.ndarray:
    """Values on the depth n+extra_depth ball; the first entries are the input."""
    if spec.kind != BranchingKind.HAT:
        raise UnsupportedOperation(spec.kind.value, "extend_to_ball")
    if extra_depth < 1:
        raise SpecViolation("extra_depth must be >= 1", f"got {extra_depth}")
    v = np.asarray(values, dtype=float)
    depth = _infer_depth(spec, v.size)

    tree = build_tree(spec, depth)
    residual, worst = residual_detail(tree, v, lam)
    if residual > tol:
        raise CertificateError(lam, residual, worst, tol)

    ball = build_tree(spec, depth + extra_depth)
    out = np.zeros(ball.n_nodes)
    out[:v.size] = v
    parent = ball.parent_of
    # ring depth+1 stays 0
    for level in range(depth + 2, depth + extra_depth + 1):
        ring = ball.level(level)
        idx = np.arange(ring.start, ring.stop)
        up = parent[idx]
        out[idx] = (lam * out[up] - out[parent[up]]) / (spec.k - 1)

    residual, worst = residual_detail(ball, out, lam, max_depth=depth + extra_depth - 1)
    if residual > tol:
        log.error("Extension of lambda=%r broke the eigen relation at node %d", lam, worst)
        raise CertificateError(lam, residual, worst, tol)
    log.debug("Extended %s depth %d eigenvector by %d rings (residual %.2e)",
              spec.label, depth, extra_depth, residual)
    return out
