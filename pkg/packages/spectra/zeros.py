"""
TreeSpectra — Zero eigenvalue dominance on increasing sequence trees.

Every node on the level above the leaves anchors (alpha_d - 1) independent
kernel vectors (leaf differences), which gives the closed-form lower bound
(alpha_d - 1) * prod(alpha_1 .. alpha_{d-1}) / N on the nullity proportion.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

from common.config import CLUSTER_TOL, ORACLE_MAX_NODES
from common.errors import UnsupportedOperation
from common.logging_util import get_logger
from common.types import BranchingKind, BranchingSpec, OperatorKind, ZeroProportion
from oracle.compare import eigenspace_dim
from oracle.dense import dense_operator
from spectra.reduce import exact_nullity
from treegen.builder import build_tree, check_depth, node_count_closed

log = get_logger(__name__)


def nullity_lower_bound(spec: BranchingSpec, depth: int) -> Fraction:
    check_depth(spec, depth)
    if depth == 0:
        return Fraction(0)
    alphas = spec.alphas
    leaves_bound = (alphas[depth - 1] - 1) * math.prod(alphas[:depth - 1])
    return Fraction(leaves_bound, node_count_closed(spec, depth))


def zero_proportion(spec: BranchingSpec, depth: int, with_oracle: bool = False) -> ZeroProportion:
    """
    Lower bound and exact nullity proportion; the dense-oracle proportion is
    added when asked for and the graph is small enough.
    """
    if spec.kind != BranchingKind.SEQUENCE:
        raise UnsupportedOperation(spec.kind.value, "zero_proportion")
    bound = nullity_lower_bound(spec, depth)
    n_nodes = node_count_closed(spec, depth)
    nullity = exact_nullity(spec, depth)

    oracle: Optional[float] = None
    if with_oracle and n_nodes <= ORACLE_MAX_NODES:
        matrix = dense_operator(build_tree(spec, depth), OperatorKind.ADJACENCY)
        oracle = eigenspace_dim(matrix, 0.0, CLUSTER_TOL) / n_nodes

    log.info("Zero proportion of %s depth %d: bound %s, exact %d/%d",
             spec.label, depth, bound, nullity, n_nodes)
    return ZeroProportion(depth=depth, n_nodes=n_nodes, bound=bound, nullity=nullity,
                          proportion=Fraction(nullity, n_nodes), oracle_proportion=oracle)
