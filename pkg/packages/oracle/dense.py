"""
TreeSpectra — Dense operator matrices for the brute-force oracle.

Adjacency is 0/1; Laplacian is D - A; the random walk is returned in its
symmetrized form D^{-1/2} A D^{-1/2}, which has the spectrum of D^{-1} A.
"""

from __future__ import annotations

import os
from typing import List, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel

from common.config import CLUSTER_TOL, CSV_COLUMNS, CSV_FLOAT_FORMAT, ORACLE_MAX_NODES
from common.errors import SpecViolation
from common.logging_util import get_logger
from common.types import OperatorKind
from oracle.compare import cluster_multiset
from oracle.eigensolver import symmetric_eigenvalues
from treegen.builder import TreeGraph

log = get_logger(__name__)


class DenseSymMatrix(BaseModel):
    n:       int
    entries: np.ndarray

    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "DenseSymMatrix":
        arr = np.array(arr, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        if not np.array_equal(arr, arr.T):
            raise ValueError("matrix is not exactly symmetric")
        arr.setflags(write=False)
        return cls(n=arr.shape[0], entries=arr)

    def trace(self) -> float:
        return float(np.trace(self.entries))

    def frobenius_sq(self) -> float:
        return float(np.sum(self.entries * self.entries))


def dense_operator(graph: TreeGraph, kind: OperatorKind = OperatorKind.ADJACENCY) -> DenseSymMatrix:
    n = graph.n_nodes
    if n > ORACLE_MAX_NODES:
        raise SpecViolation(
            f"dense oracle is limited to {ORACLE_MAX_NODES} nodes", f"graph has {n}"
        )
    src, dst = graph.edge_arrays()
    adj = np.zeros((n, n), dtype=float)
    adj[src, dst] = 1.0
    deg = graph.degrees().astype(float)

    if kind == OperatorKind.ADJACENCY:
        out = adj
    elif kind == OperatorKind.LAPLACIAN:
        out = np.diag(deg) - adj
    else:
        if np.any(deg == 0):
            isolated = int(np.flatnonzero(deg == 0)[0])
            raise SpecViolation("random walk requires no isolated nodes",
                                f"node {isolated} has degree 0")
        inv_sqrt = 1.0 / np.sqrt(deg)
        out = adj * inv_sqrt[:, None] * inv_sqrt[None, :]
        # enforce exact symmetry after the two scalings
        out = np.triu(out) + np.triu(out, 1).T
    return DenseSymMatrix.from_array(out)


def sym_eigenvalues(m: DenseSymMatrix, method: str = "auto") -> np.ndarray:
    if m.n < 1:
        raise ValueError("sym_eigenvalues requires n >= 1")
    return symmetric_eigenvalues(m.entries, method=method)


def oracle_spectrum(
    graph: TreeGraph,
    kind: OperatorKind = OperatorKind.ADJACENCY,
    tol: float = CLUSTER_TOL,
) -> List[Tuple[float, int]]:
    """Clustered dense spectrum of the graph operator."""
    values = sym_eigenvalues(dense_operator(graph, kind))
    clusters = cluster_multiset(values.tolist(), tol)
    log.info("Oracle %s spectrum of %s depth %d: %d clusters over %d nodes",
             kind.value, graph.spec.label, graph.depth, len(clusters), graph.n_nodes)
    return clusters


def dump_eigenvalues_csv(values: Sequence[float], path: str) -> None:
    """Raw eigenvalues to CSV (index, value) for debugging."""
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    frame = pd.DataFrame({"index": range(len(values)), "value": list(values)},
                         columns=CSV_COLUMNS["eigenvalues"])
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
