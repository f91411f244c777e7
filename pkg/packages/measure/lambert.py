"""
TreeSpectra — Lambert-type totient sums.

    normalized:  sum_{n>=2} phi(n) (k-1)^2 / (k^n - 1) = 1
    raw:         sum_{n>=1} phi(n) / (k^n - 1)         = k / (k-1)^2

The normalized sum is the total mass of the limiting measure of the constant
tree with branching k (the hat tree with k+1 uses the same sum).
"""

from __future__ import annotations

import math
from fractions import Fraction

from pydantic import BaseModel

from common.errors import SpecViolation
from common.logging_util import get_logger
from measure.endpoints import geometric_tail
from polyfam.numtheory import euler_phi

log = get_logger(__name__)

FORMS = ("normalized", "raw")


class LambertSum(BaseModel):
    k:          int
    n:          int
    form:       str
    value:      float
    tail_bound: float
    limit:      float

    @property
    def gap(self) -> float:
        return abs(self.limit - self.value)


def lambert_partial(k: int, n: int, form: str = "normalized") -> LambertSum:
    """Partial sum through index n with a bound on everything beyond it."""
    if form not in FORMS:
        raise SpecViolation(f"form must be one of {FORMS}", f"got {form!r}")
    if k < 2:
        raise SpecViolation("lambert_partial requires k >= 2", f"got k={k}")
    if n < 2:
        raise SpecViolation("lambert_partial requires N >= 2", f"got N={n}")

    if form == "normalized":
        weight = (k - 1) ** 2
        start = 2
        limit = 1.0
    else:
        weight = 1
        start = 1
        limit = float(Fraction(k, (k - 1) ** 2))
    value = math.fsum(euler_phi(j) * weight / (k ** j - 1) for j in range(start, n + 1))
    result = LambertSum(k=k, n=n, form=form, value=value,
                        tail_bound=geometric_tail(weight, k, n), limit=limit)
    log.debug("Lambert %s k=%d N=%d: %.17g (tail %.2e)", form, k, n, value, result.tail_bound)
    return result
