"""
TreeSpectra — Graph construction for rooted families.

Nodes are numbered breadth-first; the children of a node are created
consecutively, so every node's children (and every level) is a contiguous
index range.  Fans keep their clique sibling groups in a separate array
because "same clique" cannot be read off the adjacency alone.
"""

from __future__ import annotations

import math
from typing import List, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel

from common.errors import SpecViolation
from common.logging_util import get_logger
from common.types import BranchingKind, BranchingSpec

log = get_logger(__name__)


# ── Graph model ──────────────────────────────────────────────────────────────

class TreeGraph(BaseModel):
    """Immutable adjacency structure in CSR form with per-node depth."""
    spec:             BranchingSpec
    depth:            int
    n_nodes:          int
    depth_of:         np.ndarray
    parent_of:        np.ndarray
    neighbor_offsets: np.ndarray
    neighbors:        np.ndarray
    child_start:      np.ndarray
    child_stop:       np.ndarray
    sibling_group:    np.ndarray      # first node of the clique, -1 for the root
    level_offsets:    np.ndarray      # level i is range(level_offsets[i], level_offsets[i+1])

    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    @property
    def n_edges(self) -> int:
        return int(len(self.neighbors) // 2)

    @property
    def is_tree(self) -> bool:
        return self.spec.is_tree

    def degrees(self) -> np.ndarray:
        return np.diff(self.neighbor_offsets)

    def neighbors_of(self, u: int) -> np.ndarray:
        return self.neighbors[self.neighbor_offsets[u]:self.neighbor_offsets[u + 1]]

    def children(self, u: int) -> range:
        return range(int(self.child_start[u]), int(self.child_stop[u]))

    def level(self, i: int) -> range:
        return range(int(self.level_offsets[i]), int(self.level_offsets[i + 1]))

    def level_sizes(self) -> List[int]:
        return [int(n) for n in np.diff(self.level_offsets)]

    def edge_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """Directed (src, dst) arrays, both orientations of every edge."""
        src = np.repeat(np.arange(self.n_nodes), self.degrees())
        return src, self.neighbors

    def edges(self) -> List[Tuple[int, int]]:
        """Undirected edges as (u, v) with u < v, sorted."""
        src, dst = self.edge_arrays()
        keep = src < dst
        pairs = sorted(zip(src[keep].tolist(), dst[keep].tolist()))
        return pairs

    def descendant_ranges(self, u: int) -> List[range]:
        """Descendants of u grouped by distance (1, 2, ...); each is contiguous."""
        out = []
        lo, hi = int(self.child_start[u]), int(self.child_stop[u])
        while lo < hi:
            out.append(range(lo, hi))
            lo, hi = int(self.child_start[lo]), int(self.child_stop[hi - 1])
        return out

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n_nodes))
        g.add_edges_from(self.edges())
        return g


# ── Level model ──────────────────────────────────────────────────────────────

def check_depth(spec: BranchingSpec, depth: int) -> None:
    if depth < 0:
        raise SpecViolation("depth must be >= 0", f"got depth={depth}")
    if spec.kind == BranchingKind.PERIODIC and depth % len(spec.alphas) != 0:
        raise SpecViolation(
            "periodic trees are built at complete periods only",
            f"depth={depth} is not a multiple of period {len(spec.alphas)}",
        )
    if spec.kind == BranchingKind.SEQUENCE and depth > len(spec.alphas):
        raise SpecViolation(
            "sequence depth cannot exceed the number of alphas",
            f"depth={depth}, len(alphas)={len(spec.alphas)}",
        )


def children_per_level(spec: BranchingSpec, depth: int) -> List[int]:
    """c_i for levels 0 .. depth-1 (fans: new nodes attached per frontier node)."""
    check_depth(spec, depth)
    kind = spec.kind
    if kind == BranchingKind.CONSTANT:
        return [spec.k] * depth
    if kind == BranchingKind.HAT:
        return ([spec.k] + [spec.k - 1] * (depth - 1)) if depth else []
    if kind == BranchingKind.PERIODIC:
        period = len(spec.alphas)
        return [spec.alphas[i % period] for i in range(depth)]
    if kind == BranchingKind.SEQUENCE:
        return list(spec.alphas[:depth])
    return [spec.k * (spec.d - 1)] * depth


def level_sizes(spec: BranchingSpec, depth: int) -> List[int]:
    sizes = [1]
    for c in children_per_level(spec, depth):
        sizes.append(sizes[-1] * c)
    return sizes


def node_count_closed(spec: BranchingSpec, depth: int) -> int:
    """Closed-form node count; must agree with the built graph."""
    check_depth(spec, depth)
    kind = spec.kind
    if kind == BranchingKind.CONSTANT:
        k = spec.k
        return (k ** (depth + 1) - 1) // (k - 1)
    if kind == BranchingKind.HAT:
        k = spec.k
        if depth == 0:
            return 1
        return 1 + k * ((k - 1) ** depth - 1) // (k - 2)
    if kind == BranchingKind.FAN:
        q = spec.k * (spec.d - 1)
        if q == 1:
            return depth + 1
        return (q ** (depth + 1) - 1) // (q - 1)
    if kind == BranchingKind.PERIODIC:
        alphas = spec.alphas
        period = len(alphas)
        per_period = math.prod(alphas)
        # nodes in the first period's levels, before the next period starts
        block = sum(math.prod(alphas[:i]) for i in range(period))
        periods = depth // period
        return block * sum(per_period ** j for j in range(periods)) + per_period ** periods
    return sum(math.prod(spec.alphas[:i]) for i in range(depth + 1))


# ── Builders ─────────────────────────────────────────────────────────────────

def _freeze(values, dtype=np.int64) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


def _assemble(
    spec: BranchingSpec,
    depth: int,
    adjacency: List[List[int]],
    depth_of: List[int],
    parent_of: List[int],
    child_start: List[int],
    child_stop: List[int],
    sibling_group: List[int],
    level_offsets: List[int],
) -> TreeGraph:
    offsets = [0]
    for nbrs in adjacency:
        offsets.append(offsets[-1] + len(nbrs))
    flat = [v for nbrs in adjacency for v in nbrs]
    graph = TreeGraph(
        spec=spec,
        depth=depth,
        n_nodes=len(adjacency),
        depth_of=_freeze(depth_of),
        parent_of=_freeze(parent_of),
        neighbor_offsets=_freeze(offsets),
        neighbors=_freeze(flat),
        child_start=_freeze(child_start),
        child_stop=_freeze(child_stop),
        sibling_group=_freeze(sibling_group),
        level_offsets=_freeze(level_offsets),
    )
    log.debug("Built %s depth %d: %d nodes, %d edges",
              spec.label, depth, graph.n_nodes, graph.n_edges)
    return graph


def build_tree(spec: BranchingSpec, depth: int) -> TreeGraph:
    """The rooted graph of the family at the given depth, BFS-numbered."""
    check_depth(spec, depth)
    if spec.kind == BranchingKind.FAN:
        return build_fan_graph(spec.k, spec.d, depth)

    adjacency: List[List[int]] = [[]]
    depth_of, parent_of = [0], [-1]
    child_start, child_stop = [0], [0]
    sibling_group = [-1]
    level_offsets = [0, 1]
    frontier = [0]
    for level, c in enumerate(children_per_level(spec, depth)):
        nxt = []
        for u in frontier:
            start = len(adjacency)
            for _ in range(c):
                v = len(adjacency)
                adjacency.append([u])
                adjacency[u].append(v)
                depth_of.append(level + 1)
                parent_of.append(u)
                child_start.append(0)
                child_stop.append(0)
                sibling_group.append(v)
                nxt.append(v)
            child_start[u], child_stop[u] = start, len(adjacency)
        frontier = nxt
        level_offsets.append(len(adjacency))
    return _assemble(spec, depth, adjacency, depth_of, parent_of,
                     child_start, child_stop, sibling_group, level_offsets)


def build_fan_graph(k: int, d: int, depth: int) -> TreeGraph:
    """
    Upper-adjacency graph of the rooted fan: every node added at the previous
    level receives k disjoint cliques of d-1 new nodes, each clique node joined
    to its parent and to its clique siblings.
    """
    spec = BranchingSpec.fan(k, d)
    if depth < 0:
        raise SpecViolation("depth must be >= 0", f"got depth={depth}")

    adjacency: List[List[int]] = [[]]
    depth_of, parent_of = [0], [-1]
    child_start, child_stop = [0], [0]
    sibling_group = [-1]
    level_offsets = [0, 1]
    frontier = [0]
    for level in range(depth):
        nxt = []
        for u in frontier:
            start = len(adjacency)
            for _ in range(k):
                first = len(adjacency)
                group = list(range(first, first + d - 1))
                for v in group:
                    adjacency.append([u] + [w for w in group if w != v])
                    adjacency[u].append(v)
                    depth_of.append(level + 1)
                    parent_of.append(u)
                    child_start.append(0)
                    child_stop.append(0)
                    sibling_group.append(first)
                    nxt.append(v)
            child_start[u], child_stop[u] = start, len(adjacency)
        frontier = nxt
        level_offsets.append(len(adjacency))
    return _assemble(spec, depth, adjacency, depth_of, parent_of,
                     child_start, child_stop, sibling_group, level_offsets)
