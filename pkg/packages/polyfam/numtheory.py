"""
TreeSpectra — Number-theory helpers: totient, coprime numerators, and the
non-consecutive products that give periodic recurrence coefficients.
"""

from __future__ import annotations

import math
from itertools import combinations
from typing import List, Sequence, Tuple

from common.errors import SpecViolation


def euler_phi(n: int) -> int:
    """Euler's totient by trial-division factorization."""
    if n < 1:
        raise SpecViolation("euler_phi requires n >= 1", f"got n={n}")
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def coprime_numerators(n: int) -> List[int]:
    """All a in [1, n-1] with gcd(a, n) == 1."""
    return [a for a in range(1, n) if math.gcd(a, n) == 1]


def reduce_fraction(a: int, n: int) -> Tuple[int, int]:
    g = math.gcd(a, n)
    return a // g, n // g


def divisors(n: int) -> List[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _cyclically_separated(indices: Sequence[int], length: int) -> bool:
    chosen = set(indices)
    for i in indices:
        if (i + 1) % length in chosen:
            return False
    return True


def sigma_noncons(alphas: Sequence[int], i: int) -> int:
    """
    Sum over i-element index sets with no two indices consecutive (mod len)
    of the product of the selected alphas.  sigma(0) is the empty product 1.
    """
    length = len(alphas)
    if i == 0:
        return 1
    if i < 1 or i > length // 2:
        raise SpecViolation(
            "sigma_noncons requires 1 <= i <= floor(len/2)", f"got i={i}, len={length}"
        )
    total = 0
    for idx in combinations(range(length), i):
        if _cyclically_separated(idx, length):
            total += math.prod(alphas[j] for j in idx)
    return total
