"""
TreeSpectra — Edge-list text format.

    n m
    u v          (m lines, u < v, sorted, 0-indexed BFS numbering)
    depths: d0 d1 ... d_{n-1}
"""

from __future__ import annotations

from typing import List, Tuple

from pydantic import BaseModel

from treegen.builder import TreeGraph


class EdgeList(BaseModel):
    n_nodes: int
    edges:   List[Tuple[int, int]]
    depths:  List[int]


def to_edge_list_text(graph: TreeGraph) -> str:
    edges = graph.edges()
    lines = [f"{graph.n_nodes} {len(edges)}"]
    lines.extend(f"{u} {v}" for u, v in edges)
    lines.append("depths: " + " ".join(str(int(d)) for d in graph.depth_of))
    return "\n".join(lines) + "\n"


def parse_edge_list_text(text: str) -> EdgeList:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty edge list")
    n, m = (int(t) for t in lines[0].split())
    body = lines[1:1 + m]
    if len(body) != m:
        raise ValueError(f"edge list declares {m} edges, found {len(body)}")
    edges = []
    for ln in body:
        u, v = (int(t) for t in ln.split())
        edges.append((u, v))
    depths: List[int] = []
    tail = lines[1 + m:]
    if tail:
        head, _, rest = tail[0].partition(":")
        if head.strip() != "depths":
            raise ValueError(f"expected a depths line, got {tail[0]!r}")
        depths = [int(t) for t in rest.split()]
        if len(depths) != n:
            raise ValueError(f"depths line has {len(depths)} entries for {n} nodes")
    return EdgeList(n_nodes=n, edges=edges, depths=depths)
