"""
TreeSpectra — Spectrum clustering and comparison.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from common.config import CLUSTER_TOL, COMPARE_TOL
from common.errors import AmbiguousClustering
from common.types import SpectrumComparison, SpectrumReport

Clustered = List[Tuple[float, int]]


def cluster_weighted(pairs: Iterable[Tuple[float, int]], tol: float = CLUSTER_TOL) -> Clustered:
    """
    Greedy clustering of (value, weight) pairs: consecutive values within tol
    merge, the cluster value is the weighted mean, and adjacent cluster means
    must be more than 10*tol apart.
    """
    ordered = sorted(pairs, key=lambda p: p[0])
    groups: List[List[Tuple[float, int]]] = []
    for value, weight in ordered:
        if groups and value - groups[-1][-1][0] <= tol:
            groups[-1].append((value, weight))
        else:
            groups.append([(value, weight)])

    clusters: Clustered = []
    for group in groups:
        total = sum(w for _, w in group)
        mean = sum(v * w for v, w in group) / total
        clusters.append((mean, total))

    for (left, _), (right, _) in zip(clusters, clusters[1:]):
        if right - left <= 10.0 * tol:
            raise AmbiguousClustering(left, right, right - left, 10.0 * tol)
    return clusters


def cluster_multiset(values: Sequence[float], tol: float = CLUSTER_TOL) -> Clustered:
    return cluster_weighted(((float(v), 1) for v in values), tol)


def _as_pairs(spectrum: Union[SpectrumReport, Sequence[Tuple[float, int]]]) -> Clustered:
    if isinstance(spectrum, SpectrumReport):
        return spectrum.pairs()
    return [(float(v), int(m)) for v, m in spectrum]


def compare_spectra(
    a: Union[SpectrumReport, Sequence[Tuple[float, int]]],
    b: Union[SpectrumReport, Sequence[Tuple[float, int]]],
    tol: float = COMPARE_TOL,
) -> SpectrumComparison:
    """Pair clusters by value; mismatches are returned as data."""
    pa, pb = _as_pairs(a), _as_pairs(b)
    mismatches: List[Tuple[float, int, int]] = []
    worst = 0.0
    i = j = 0
    while i < len(pa) and j < len(pb):
        (va, ma), (vb, mb) = pa[i], pb[j]
        gap = abs(va - vb)
        if gap <= tol:
            worst = max(worst, gap)
            if ma != mb:
                mismatches.append((va, ma, mb))
            i += 1
            j += 1
        elif va < vb:
            mismatches.append((va, ma, 0))
            i += 1
        else:
            mismatches.append((vb, 0, mb))
            j += 1
    mismatches.extend((v, m, 0) for v, m in pa[i:])
    mismatches.extend((v, 0, m) for v, m in pb[j:])

    if len(pa) == len(pb) and pa:
        worst = max(worst, max(abs(x[0] - y[0]) for x, y in zip(pa, pb)))

    matched = len(pa) == len(pb) and not mismatches and worst <= tol
    return SpectrumComparison(
        matched=matched,
        worst_value_gap=worst,
        mult_mismatches=mismatches,
        n_clusters_a=len(pa),
        n_clusters_b=len(pb),
    )


def eigenspace_dim(
    m,
    lam: float,
    tol: float = CLUSTER_TOL,
    eigenvalues: Optional[Sequence[float]] = None,
) -> int:
    """
    Number of eigenvalues of the dense matrix within tol of lam.  An
    eigenvalue between tol and 2*tol away makes the count ambiguous.
    """
    if eigenvalues is None:
        from oracle.dense import sym_eigenvalues
        eigenvalues = sym_eigenvalues(m)
    dist = np.abs(np.asarray(eigenvalues, dtype=float) - lam)
    edge = dist[(dist > tol) & (dist <= 2.0 * tol)]
    if edge.size:
        raise AmbiguousClustering(lam, lam + float(edge[0]), float(edge[0]), tol)
    return int(np.count_nonzero(dist <= tol))
