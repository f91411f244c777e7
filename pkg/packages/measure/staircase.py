"""
TreeSpectra — Normalized spectral CDFs.

Two affine normalizations of an adjacency spectrum:

    degree   x = (lambda + k) / 2k          (leaves [0,1] for k <= 3)
    support  x = (lambda + 2 sqrt b) / 4 sqrt b

Empirical CDFs carry exact rational weights mult / N.  Limiting CDFs place
limit_proportion(n) at every reduced angle a/n with n <= N and report the
mass beyond N as a tail bound.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, model_validator

from common.config import DEFAULT_SCHEME, LIMIT_TRUNCATION
from common.errors import SpecViolation, UnsupportedOperation
from common.logging_util import get_logger
from common.types import (
    BranchingKind,
    BranchingSpec,
    CdfKind,
    NormalizationScheme,
    OperatorKind,
    SpectrumReport,
)
from measure.endpoints import limit_proportion, measure_tail
from polyfam.numtheory import coprime_numerators
from polyfam.roots import closed_form_value

log = get_logger(__name__)

Point = Tuple[float, Fraction]


class StaircaseCDF(BaseModel):
    xs:         Tuple[float, ...]
    weights:    Tuple[Fraction, ...]
    cumulative: Tuple[float, ...]
    kind:       CdfKind
    scheme:     NormalizationScheme
    depth:      Optional[int] = None
    truncation: Optional[int] = None
    tail_bound: float = 0.0

    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    @model_validator(mode="after")
    def check_shape(self) -> "StaircaseCDF":
        if not (len(self.xs) == len(self.weights) == len(self.cumulative)):
            raise ValueError("xs, weights and cumulative must have equal length")
        for a, b in zip(self.xs, self.xs[1:]):
            if not a < b:
                raise ValueError(f"CDF points must be strictly ascending: {a!r} then {b!r}")
        if any(w <= 0 for w in self.weights):
            raise ValueError("CDF weights must be positive")
        if self.cumulative:
            last = self.cumulative[-1]
            if self.kind == CdfKind.EMPIRICAL and abs(last - 1.0) > 1e-12:
                raise ValueError(f"empirical CDF must end at 1, got {last!r}")
            if self.kind == CdfKind.LIMITING and not (
                1.0 - self.tail_bound - 1e-12 <= last <= 1.0 + 1e-12
            ):
                raise ValueError(
                    f"limiting CDF ends at {last!r}, outside 1 - tail ({self.tail_bound:.2e})"
                )
        return self

    @property
    def points(self) -> List[Point]:
        return list(zip(self.xs, self.weights))

    def at(self, x: float) -> float:
        """Right-continuous value F(x)."""
        i = int(np.searchsorted(self.xs, x, side="right"))
        return self.cumulative[i - 1] if i else 0.0

    def left_limit(self, x: float) -> float:
        """F(x-), the mass strictly below x."""
        i = int(np.searchsorted(self.xs, x, side="left"))
        return self.cumulative[i - 1] if i else 0.0

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"x": list(self.xs), "cumulative": list(self.cumulative)})


# ── Normalization ────────────────────────────────────────────────────────────

def _check_measure_spec(spec: BranchingSpec) -> None:
    if spec.kind not in (BranchingKind.CONSTANT, BranchingKind.HAT):
        raise UnsupportedOperation(spec.kind.value, "spectral normalization")


def normalizer(spec: BranchingSpec, scheme: Union[NormalizationScheme, str]):
    """The affine map lambda -> x for this spec and scheme."""
    _check_measure_spec(spec)
    scheme = NormalizationScheme(scheme)
    if scheme == NormalizationScheme.DEGREE_AFFINE:
        k = spec.k
        return lambda lam: (lam + k) / (2.0 * k)
    edge = 2.0 * math.sqrt(spec.branching)
    return lambda lam: (lam + edge) / (2.0 * edge)


def normalize_points(report: SpectrumReport, scheme=DEFAULT_SCHEME) -> List[Point]:
    if report.operator != OperatorKind.ADJACENCY:
        raise UnsupportedOperation(report.operator.value, "spectral normalization")
    to_x = normalizer(report.spec, scheme)
    return [(to_x(e.value), Fraction(e.multiplicity, report.total_dim)) for e in report.entries]


def empirical_cdf(
    points: Sequence[Point],
    scheme=DEFAULT_SCHEME,
    depth: Optional[int] = None,
) -> StaircaseCDF:
    """Right-continuous step CDF through normalized (x, weight) points."""
    if not points:
        raise SpecViolation("empirical_cdf requires a nonempty spectrum")
    ordered = sorted(points, key=lambda p: p[0])
    running = Fraction(0)
    cumulative = []
    for _, w in ordered:
        running += w
        cumulative.append(float(running))
    return StaircaseCDF(
        xs=tuple(p[0] for p in ordered),
        weights=tuple(p[1] for p in ordered),
        cumulative=tuple(cumulative),
        kind=CdfKind.EMPIRICAL,
        scheme=NormalizationScheme(scheme),
        depth=depth,
    )


def normalize_spectrum(report: SpectrumReport, scheme=DEFAULT_SCHEME) -> StaircaseCDF:
    return empirical_cdf(normalize_points(report, scheme), scheme, depth=report.depth)


def limiting_cdf(
    spec: BranchingSpec,
    truncation_n: int = LIMIT_TRUNCATION,
    scheme=DEFAULT_SCHEME,
) -> StaircaseCDF:
    """Truncated limiting measure: weight limit_proportion(n) at every reduced a/n."""
    _check_measure_spec(spec)
    if truncation_n < 2:
        raise SpecViolation("limiting_cdf requires N >= 2", f"got N={truncation_n}")
    to_x = normalizer(spec, scheme)
    b = spec.branching
    points: List[Point] = []
    for n in range(2, truncation_n + 1):
        w = limit_proportion(spec, n)
        points.extend((to_x(closed_form_value(b, a, n)), w) for a in coprime_numerators(n))
    points.sort(key=lambda p: p[0])
    running = Fraction(0)
    cumulative = []
    for _, w in points:
        running += w
        cumulative.append(float(running))
    log.debug("Limiting CDF %s N=%d: %d atoms", spec.label, truncation_n, len(points))
    return StaircaseCDF(
        xs=tuple(p[0] for p in points),
        weights=tuple(p[1] for p in points),
        cumulative=tuple(cumulative),
        kind=CdfKind.LIMITING,
        scheme=NormalizationScheme(scheme),
        truncation=truncation_n,
        tail_bound=measure_tail(spec, truncation_n),
    )


def cdf_distance(c1: StaircaseCDF, c2: StaircaseCDF) -> float:
    """Kolmogorov distance, evaluated on the union of jump points."""
    if c1.scheme != c2.scheme:
        raise SpecViolation("cdf_distance requires matching normalization schemes",
                            f"got {c1.scheme.value} and {c2.scheme.value}")
    grid = np.union1d(np.asarray(c1.xs), np.asarray(c2.xs))
    if grid.size == 0:
        return 0.0
    f1 = _evaluate(c1, grid)
    f2 = _evaluate(c2, grid)
    return float(np.max(np.abs(f1 - f2)))


def _evaluate(cdf: StaircaseCDF, grid: np.ndarray) -> np.ndarray:
    cum = np.concatenate(([0.0], np.asarray(cdf.cumulative)))
    return cum[np.searchsorted(np.asarray(cdf.xs), grid, side="right")]
