"""
TreeSpectra — Eigenspace dimensions per polynomial index.

A Bethe tree of depth d splits into one isotropic class and one typed class
per anchor level t (0 <= t <= d-1).  The typed class anchored at t lives on
levels t+1..d, closes with the index s = d+1-t member of the P family and has
dimension (c_t - 1) * n_t, where c_t is the child count at level t and n_t
the number of nodes there.
"""

from __future__ import annotations

import math
from typing import Dict, Optional

from common.config import DEDUP_TOL
from common.errors import SpecViolation, UnsupportedOperation
from common.types import BranchingKind, BranchingSpec
from polyfam.families import hat_family_config, make_family, make_root_poly
from polyfam.numtheory import reduce_fraction
from polyfam.roots import cached_sturm_roots, closed_form_value
from treegen.builder import check_depth, children_per_level, level_sizes


def typed_multiplicities(spec: BranchingSpec, depth: int) -> Dict[int, int]:
    """{s: dimension of the typed class closing with P_s} from the level model."""
    if spec.kind == BranchingKind.FAN:
        raise UnsupportedOperation(spec.kind.value, "typed multiplicities")
    check_depth(spec, depth)
    c = children_per_level(spec, depth)
    n = level_sizes(spec, depth)
    return {depth + 1 - t: (c[t] - 1) * n[t] for t in range(depth)}


def exact_multiplicity(s: int, depth: int, spec: BranchingSpec) -> int:
    """
    New-appearance dimension for roots of the index-s polynomial.

    Constant trees: (k-1) * k^(depth+1-s) for 2 <= s <= depth+1, and 1 for the
    isotropic index s = depth+2.  Hat trees: k-1 at s = depth+1 and
    (k-2) * k * (k-1)^(depth-s) below it.
    """
    kind = spec.kind
    if kind == BranchingKind.CONSTANT:
        k = spec.k
        if not 2 <= s <= depth + 2:
            raise SpecViolation(f"index s must lie in [2, {depth + 2}]", f"got s={s}")
        if s == depth + 2:
            return 1
        return (k - 1) * k ** (depth + 1 - s)
    if kind == BranchingKind.HAT:
        k = spec.k
        if not 2 <= s <= depth + 1:
            raise SpecViolation(f"index s must lie in [2, {depth + 1}]", f"got s={s}")
        if s == depth + 1:
            return k - 1
        return (k - 2) * k * (k - 1) ** (depth - s)
    typed = typed_multiplicities(spec, depth)
    if s not in typed:
        raise SpecViolation(f"index s must lie in [2, {depth + 1}]", f"got s={s}")
    return typed[s]


def cumulative_multiplicity(m: int, depth: int, spec: BranchingSpec, a: int = 1) -> int:
    """
    Total multiplicity at this depth of the value 2*sqrt(b)*cos(a*pi/m), which
    first appears as a root of P_m.  Recurrences follow divisibility, so the
    value contributes at every index j*m that has a class.  On hat trees the
    value may also be a root of the closing polynomial Q_{depth+1}.
    """
    if m < 2:
        raise SpecViolation("first-appearance index m must be >= 2", f"got m={m}")
    if math.gcd(a, m) != 1 or not 1 <= a <= m - 1:
        raise SpecViolation("numerator a must be coprime to m with 1 <= a <= m-1",
                            f"got a={a}, m={m}")
    kind = spec.kind
    if kind == BranchingKind.CONSTANT:
        top = depth + 2
        return sum(exact_multiplicity(s, depth, spec) for s in range(m, top + 1, m))
    if kind != BranchingKind.HAT:
        raise UnsupportedOperation(kind.value, "cumulative_multiplicity")

    total = sum(exact_multiplicity(s, depth, spec) for s in range(m, depth + 2, m))
    value = closed_form_value(spec.k - 1, a, m)
    if _is_closing_root(spec.k, depth, value):
        total += 1
    return total


def _is_closing_root(k: int, depth: int, value: float, tol: float = DEDUP_TOL) -> bool:
    family = make_family(hat_family_config(k), depth + 1)
    roots = cached_sturm_roots(make_root_poly(family, depth + 1))
    scale = max(1.0, 2.0 * math.sqrt(k))
    return any(abs(r - value) <= tol * scale for r in roots)


def first_appearance(value: float, b: int, max_index: int) -> Optional[tuple]:
    """
    (a, m) with value = 2*sqrt(b)*cos(a*pi/m) in lowest terms and m <= max_index,
    or None when the value is not a closed-form root of that range.
    """
    for m in range(2, max_index + 1):
        for a in range(1, m):
            if math.gcd(a, m) != 1:
                continue
            if abs(closed_form_value(b, a, m) - value) <= DEDUP_TOL * max(1.0, abs(value)):
                return reduce_fraction(a, m)
    return None
