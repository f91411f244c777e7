"""
TreeSpectra — Limiting proportions and staircase plateau endpoints.

In the limit every value 2*sqrt(b)*cos(a*pi/m) (a/m in lowest terms) carries
a fixed share of the spectrum.  The cumulative measure strictly below it
counts every value whose angle is larger: cos is decreasing on [0, pi], so
the plateau of a/m starts after all l/n with l/n > a/m.
"""

from __future__ import annotations

import math
from fractions import Fraction

from common.config import LIMIT_TRUNCATION
from common.errors import SpecViolation, UnsupportedOperation
from common.logging_util import get_logger
from common.types import BranchingKind, BranchingSpec, EndpointRecord
from polyfam.numtheory import coprime_numerators
from spectra.multiplicity import cumulative_multiplicity
from treegen.builder import node_count_closed

log = get_logger(__name__)


def _base_and_weight(spec: BranchingSpec):
    if spec.kind == BranchingKind.CONSTANT:
        return spec.k, (spec.k - 1) ** 2
    if spec.kind == BranchingKind.HAT:
        return spec.k - 1, (spec.k - 2) ** 2
    raise UnsupportedOperation(spec.kind.value, "limiting spectral measure")


def limit_proportion(spec: BranchingSpec, m: int) -> Fraction:
    """(k-1)^2/(k^m-1) on constant trees, (k-2)^2/((k-1)^m-1) on hat trees."""
    if m < 2:
        raise SpecViolation("limit_proportion requires m >= 2", f"got m={m}")
    base, weight = _base_and_weight(spec)
    return Fraction(weight, base ** m - 1)


def geometric_tail(weight: int, base: int, n: int) -> float:
    """
    Bound on sum_{j>n} j * weight / (base^j - 1), using
    1/(base^j - 1) <= 2/base^j.
    """
    q = 1.0 / base
    return 2.0 * weight * q ** (n + 1) * ((n + 1) - n * q) / (1.0 - q) ** 2


def measure_tail(spec: BranchingSpec, truncation: int) -> float:
    base, weight = _base_and_weight(spec)
    return geometric_tail(weight, base, truncation)


def _angles_above(n: int, m: int, a: int, stated: bool) -> int:
    """Reduced l/n with l/n > a/m (or < a/m for the stated variant)."""
    if stated:
        return sum(1 for ell in coprime_numerators(n) if ell * m < a * n)
    return sum(1 for ell in coprime_numerators(n) if ell * m > a * n)


def staircase_endpoints(
    spec: BranchingSpec,
    m: int,
    a: int,
    truncation_n: int = LIMIT_TRUNCATION,
    stated_condition: bool = False,
) -> EndpointRecord:
    """
    Plateau [left, right] of the value with angle a/m in the limiting CDF.
    stated_condition counts l/n < a/m instead; it exists only to measure the
    printed variant against the empirical CDF.
    """
    if m < 2 or not 1 <= a <= m - 1:
        raise SpecViolation("endpoints require m >= 2 and 1 <= a <= m-1", f"got m={m}, a={a}")
    if math.gcd(a, m) != 1:
        raise SpecViolation("endpoint numerator must be coprime to m", f"gcd({a}, {m}) != 1")
    if truncation_n < m:
        raise SpecViolation("truncation must be >= m", f"got N={truncation_n}, m={m}")

    left = Fraction(0)
    for n in range(2, truncation_n + 1):
        count = _angles_above(n, m, a, stated_condition)
        if count:
            left += limit_proportion(spec, n) * count
    width = limit_proportion(spec, m)
    record = EndpointRecord(
        m=m,
        a=a,
        left=float(left),
        right=float(left + width),
        width=float(width),
        tail_bound=measure_tail(spec, truncation_n),
    )
    log.debug("Endpoints %s a/m=%d/%d: [%.12f, %.12f]", spec.label, a, m,
              record.left, record.right)
    return record


def empirical_proportion(spec: BranchingSpec, depth: int, m: int, a: int = 1) -> Fraction:
    """Share of the depth-r spectrum taken by the value first seen at index m."""
    return Fraction(cumulative_multiplicity(m, depth, spec, a), node_count_closed(spec, depth))
