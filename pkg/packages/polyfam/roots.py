"""
TreeSpectra — Real roots of family polynomials.

Two routes:
  - closed_form_roots: 2*sqrt(b)*cos(l*pi/n) for the generalized Fibonacci family.
  - sturm_roots: exact Sturm-chain isolation on the squarefree part, then
    bisection driven by exact dyadic sign evaluation.  Used for every family
    without a closed form (Q, G, periodic, Laplacian, random walk).
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from common.config import DEDUP_TOL, ROOT_TOL
from common.errors import ConsistencyError, SpecViolation
from common.logging_util import get_logger
from polyfam.families import PolyFamily
from polyfam.numtheory import reduce_fraction
from polyfam.polynomial import Polynomial

log = get_logger(__name__)


# ── Closed form ──────────────────────────────────────────────────────────────

def closed_form_value(b: int, a: int, n: int) -> float:
    """
    2*sqrt(b)*cos(a*pi/n), computed so that mirrored angles give exactly
    negated values and the midpoint gives exactly 0.
    """
    a, n = reduce_fraction(a, n)
    if 2 * a == n:
        return 0.0
    if 2 * a > n:
        return -closed_form_value(b, n - a, n)
    return 2.0 * math.sqrt(b) * math.cos(a * math.pi / n)


def closed_form_roots(b: int, n: int) -> List[float]:
    """The n-1 roots of P_n for parameter b, ascending."""
    if b < 1 or n < 2:
        raise SpecViolation("closed_form_roots requires b >= 1 and n >= 2",
                            f"got b={b}, n={n}")
    return [closed_form_value(b, ell, n) for ell in range(n - 1, 0, -1)]


# ── Sturm machinery ──────────────────────────────────────────────────────────

def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Primitive gcd via the primitive remainder sequence."""
    a, b = a.primitive(), b.primitive()
    while not b.is_zero:
        _, r = a.pseudo_divmod(b)
        a, b = b, r.primitive()
    return a.primitive()


def is_squarefree(p: Polynomial) -> bool:
    if p.degree <= 1:
        return True
    return poly_gcd(p, p.derivative()).degree == 0


def squarefree_part(p: Polynomial) -> Polynomial:
    if p.degree <= 1:
        return p.primitive()
    g = poly_gcd(p, p.derivative())
    if g.degree == 0:
        return p.primitive()
    return p.exact_quotient(g)


def sturm_chain(p: Polynomial) -> List[Polynomial]:
    """
    p, p', then negated pseudo-remainders scaled by positive factors only,
    each reduced to its content-free form.
    """
    chain = [p.primitive(), p.derivative().primitive()]
    while not chain[-1].is_zero and chain[-1].degree > 0:
        prev, cur = chain[-2], chain[-1]
        _, r = prev.pseudo_divmod(cur)
        if r.is_zero:
            break
        delta = prev.degree - cur.degree + 1
        multiplier_positive = cur.leading > 0 or delta % 2 == 0
        nxt = -r if multiplier_positive else r
        g = nxt.content()
        chain.append(Polynomial._make(c // g for c in nxt.coeffs))
    return chain


def count_sign_changes(signs: Sequence[int]) -> int:
    """Sign changes in a sequence, ignoring zeros."""
    nonzero = [s for s in signs if s != 0]
    return sum(1 for u, v in zip(nonzero, nonzero[1:]) if u != v)


class _SturmCounter:
    """Caches V(x) for one chain."""

    def __init__(self, chain: List[Polynomial]) -> None:
        self.chain = chain
        self._cache: Dict[float, int] = {}

    def variations(self, x: float) -> int:
        v = self._cache.get(x)
        if v is None:
            num, den = float(x).as_integer_ratio()
            signs = []
            for q in self.chain:
                val = q.eval_scaled(num, den)
                signs.append((val > 0) - (val < 0))
            v = count_sign_changes(signs)
            self._cache[x] = v
        return v

    def count(self, lo: float, hi: float) -> int:
        """Distinct roots in (lo, hi]."""
        return self.variations(lo) - self.variations(hi)


def _cauchy_bound(p: Polynomial) -> int:
    lead = abs(p.leading)
    biggest = max(abs(c) for c in p.coeffs[:-1]) if p.degree > 0 else 0
    return 1 + -(-biggest // lead)


def _refine(p: Polynomial, lo: float, hi: float, tol: float) -> float:
    """Bisect an isolating interval (lo, hi) whose endpoints are not roots."""
    s_lo = p.sign_at(lo)
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return mid
        if hi - lo <= tol * max(1.0, abs(mid)):
            return mid
        s_mid = p.sign_at(mid)
        if s_mid == 0:
            return mid
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid


def sturm_roots(p: Polynomial, tol: float = ROOT_TOL) -> List[float]:
    """
    All distinct real roots of p, ascending.  A non-squarefree input is reduced
    to its squarefree part with a warning; a root count that disagrees with
    the squarefree degree is a hard error (the spectral polynomials are
    real-rooted).
    """
    if p.is_zero:
        raise SpecViolation("sturm_roots requires a nonzero polynomial")
    if p.degree == 0:
        return []
    q = squarefree_part(p)
    if q.degree != p.degree:
        log.warning("sturm_roots: input of degree %d is not squarefree; using degree-%d part",
                    p.degree, q.degree)
    chain = sturm_chain(q)
    counter = _SturmCounter(chain)
    bound = float(_cauchy_bound(q))
    total = counter.count(-bound, bound)
    if total != q.degree:
        log.error("sturm_roots: %d real roots for squarefree degree %d", total, q.degree)
        raise ConsistencyError("real root count of squarefree part", q.degree, total)

    roots: List[float] = []
    stack: List[Tuple[float, float, int]] = [(-bound, bound, total)]
    intervals: List[Tuple[float, float]] = []
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            intervals.append((lo, hi))
            continue
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            raise ConsistencyError("root isolation interval", "splittable", (lo, hi))
        if q.sign_at(mid) == 0:
            roots.append(mid)
            eps = 0.25 * (hi - lo)
            while True:
                a, b = mid - eps, mid + eps
                if q.sign_at(a) != 0 and q.sign_at(b) != 0 and counter.count(a, b) == 1:
                    break
                eps *= 0.5
            stack.append((lo, a, counter.count(lo, a)))
            stack.append((b, hi, counter.count(b, hi)))
            continue
        left = counter.count(lo, mid)
        stack.append((lo, mid, left))
        stack.append((mid, hi, n - left))

    for lo, hi in intervals:
        roots.append(_refine(q, lo, hi, tol))
    roots.sort()
    return roots


@lru_cache(maxsize=4096)
def cached_sturm_roots(p: Polynomial) -> Tuple[float, ...]:
    return tuple(sturm_roots(p))


# ── Divisibility and new roots ───────────────────────────────────────────────

def divides_exact(pa: Polynomial, pb: Polynomial) -> bool:
    """True iff pa divides pb with zero remainder."""
    if pa.is_zero:
        raise SpecViolation("divides_exact requires a nonzero divisor")
    return pa.divides(pb)


def _scale(values: Sequence[float]) -> float:
    return max([1.0] + [abs(v) for v in values])


def new_root_count(family: PolyFamily, n: int, tol: float = DEDUP_TOL) -> int:
    """
    Roots of members[n] farther than tol (relative to the root scale) from
    every root of members[2..n-1].
    """
    if not 2 <= n <= family.n_max:
        raise SpecViolation(f"new_root_count requires 2 <= n <= {family.n_max}", f"got n={n}")
    current = cached_sturm_roots(family.members[n])
    earlier: List[float] = []
    for m in range(2, n):
        earlier.extend(cached_sturm_roots(family.members[m]))
    earlier.sort()
    scale = _scale(list(current) + earlier)
    count = 0
    for r in current:
        if not any(abs(r - e) <= tol * scale for e in earlier):
            count += 1
    return count


def match_root(value: float, candidates: Sequence[float], tol: float) -> Optional[int]:
    """Index of the candidate within tol of value, if any."""
    for i, c in enumerate(candidates):
        if abs(c - value) <= tol:
            return i
    return None
