"""
TreeSpectra — Three-term recurrence families.

A family is fixed by a FamilyConfig:

    P_n = c1 * P_{n-step} - c0 * P_{n-2*step}      for n >= 2*step
    Q_n = qc1 * P_n - qc0 * P_{n-1}                 (root-closing polynomial)

with P_0 .. P_{2*step-1} given explicitly.  Every tree family in the library
is one of these configs; the periodic configs are checked against the
directly unrolled layer recurrence before they are returned.
"""

from __future__ import annotations

import math
from typing import List, Sequence, Tuple

from pydantic import BaseModel, model_validator

from common.errors import ConsistencyError, SpecViolation, UnsupportedOperation
from common.logging_util import get_logger
from common.types import BranchingKind, BranchingSpec, OperatorKind
from polyfam.numtheory import sigma_noncons
from polyfam.polynomial import ONE, X, ZERO, Polynomial

log = get_logger(__name__)


# ── Models ───────────────────────────────────────────────────────────────────

class QRule(BaseModel):
    """Q_n = qc1 * P_n - qc0 * P_{n-1}."""
    qc1: Polynomial
    qc0: int

    model_config = {"frozen": True}


class FamilyConfig(BaseModel):
    label:    str
    c1:       Polynomial
    c0:       int
    step:     int = 1
    initials: Tuple[Polynomial, ...]
    q_rule:   QRule

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def check_shape(self) -> "FamilyConfig":
        if self.step < 1:
            raise ValueError(f"step must be >= 1, got {self.step}")
        if len(self.initials) != 2 * self.step:
            raise ValueError(
                f"a step-{self.step} family needs {2 * self.step} initial members, "
                f"got {len(self.initials)}"
            )
        if self.c1.degree != self.step:
            raise ValueError(
                f"deg(c1) must equal the step ({self.step}), got {self.c1.degree}"
            )
        return self

    @property
    def p_init0(self) -> Polynomial:
        return self.initials[0]

    @property
    def p_init1(self) -> Polynomial:
        return self.initials[1]


class PolyFamily(BaseModel):
    config:    FamilyConfig
    members:   Tuple[Polynomial, ...]
    q_members: Tuple[Polynomial, ...]

    model_config = {"frozen": True}

    @property
    def n_max(self) -> int:
        return len(self.members) - 1

    @property
    def label(self) -> str:
        return self.config.label

    def member(self, n: int) -> Polynomial:
        if not 0 <= n <= self.n_max:
            raise SpecViolation(
                f"family index must lie in [0, {self.n_max}]", f"got n={n}"
            )
        return self.members[n]

    def evaluate_all(self, x: float) -> List[float]:
        """Float values P_0(x) .. P_{n_max}(x) by running the recurrence."""
        cfg = self.config
        step = cfg.step
        values: List[float] = []
        c1x = cfg.c1(x)
        for n in range(self.n_max + 1):
            if n < 2 * step:
                values.append(cfg.initials[n](x))
            else:
                values.append(c1x * values[n - step] - cfg.c0 * values[n - 2 * step])
        return values


# ── Construction ─────────────────────────────────────────────────────────────

def make_family(config: FamilyConfig, n_max: int) -> PolyFamily:
    """Compute P_0 .. P_{n_max} and Q_0 .. Q_{n_max} exactly."""
    if n_max < 1:
        raise SpecViolation("make_family requires n_max >= 1", f"got n_max={n_max}")
    step = config.step
    members: List[Polynomial] = []
    for n in range(n_max + 1):
        if n < 2 * step:
            members.append(config.initials[n])
        else:
            members.append(config.c1 * members[n - step] - members[n - 2 * step] * config.c0)

    qc1, qc0 = config.q_rule.qc1, config.q_rule.qc0
    q_members = [qc1 * members[0]]
    for n in range(1, n_max + 1):
        q_members.append(qc1 * members[n] - members[n - 1] * qc0)

    log.debug("Built family %s up to n=%d", config.label, n_max)
    return PolyFamily(config=config, members=tuple(members), q_members=tuple(q_members))


def make_root_poly(family: PolyFamily, n: int) -> Polynomial:
    """The root-closing polynomial Q_n (or G_n for fans)."""
    if not 1 <= n <= family.n_max:
        raise SpecViolation(
            f"root polynomial index must lie in [1, {family.n_max}]", f"got n={n}"
        )
    return family.q_members[n]


# ── Adjacency families ───────────────────────────────────────────────────────

def constant_family_config(b: int, qc0: int = None) -> FamilyConfig:
    """Generalized Fibonacci family P_n = x P_{n-1} - b P_{n-2}, P_0 = 0, P_1 = 1."""
    if b < 1:
        raise SpecViolation("constant family requires b >= 1", f"got b={b}")
    return FamilyConfig(
        label=f"P[b={b}]",
        c1=X,
        c0=b,
        step=1,
        initials=(ZERO, ONE),
        q_rule=QRule(qc1=X, qc0=b if qc0 is None else qc0),
    )


def hat_family_config(k: int) -> FamilyConfig:
    """P family with b = k-1 closed by Q_n = x P_n - k P_{n-1}."""
    cfg = constant_family_config(k - 1, qc0=k)
    return cfg.model_copy(update={"label": f"hat(k={k})"})


def fan_family_config(k: int, d: int) -> FamilyConfig:
    """F_{n+1} = (x - (d-2)) F_n - k(d-1) F_{n-1}; G_n = x F_n - k(d-1) F_{n-1}."""
    if k < 1 or d < 2:
        raise SpecViolation("fan family requires k >= 1 and d >= 2", f"got k={k}, d={d}")
    w = k * (d - 1)
    return FamilyConfig(
        label=f"fan(k={k},d={d})",
        c1=X - (d - 2),
        c0=w,
        step=1,
        initials=(ZERO, ONE),
        q_rule=QRule(qc1=X, qc0=w),
    )


def _unrolled_periodic(alphas: Sequence[int], n_max: int) -> List[Polynomial]:
    """P_{j+1} = x P_j - w_j P_{j-1} with w_j = alphas[(1 - j) mod len]."""
    length = len(alphas)
    out = [ZERO, ONE]
    for j in range(1, n_max):
        w = alphas[(1 - j) % length]
        out.append(X * out[j] - out[j - 1] * w)
    return out[: n_max + 1]


def periodic_recurrence_coeffs(alphas: Sequence[int]) -> FamilyConfig:
    """
    Period-length step recurrence for a periodic branching vector.

    c1 is the trace of the period transfer product,
    sum_i (-1)^i sigma(i) x^(len - 2i) with sigma(0) = 1; c0 is prod(alphas).
    The first 2*len members are unrolled directly from the layer recurrence.
    """
    alphas = tuple(int(a) for a in alphas)
    length = len(alphas)
    if length < 2:
        raise SpecViolation("periodic recurrence requires a period of length >= 2",
                            f"got {length}")
    c1 = ZERO
    for i in range(length // 2 + 1):
        c1 = c1 + Polynomial.monomial(length - 2 * i, (-1) ** i * sigma_noncons(alphas, i))
    c0 = math.prod(alphas)

    unrolled = _unrolled_periodic(alphas, 3 * length + 1)
    for n in range(2 * length, 3 * length + 2):
        expected = c1 * unrolled[n - length] - unrolled[n - 2 * length] * c0
        if expected != unrolled[n]:
            log.error("Periodic coefficients disagree with unrolled recurrence at n=%d", n)
            raise ConsistencyError(f"periodic recurrence identity at n={n}",
                                   str(unrolled[n]), str(expected))

    return FamilyConfig(
        label=f"periodic({','.join(str(a) for a in alphas)})",
        c1=c1,
        c0=c0,
        step=length,
        initials=tuple(unrolled[: 2 * length]),
        q_rule=QRule(qc1=X, qc0=alphas[0]),
    )


def adjacency_family_config(spec: BranchingSpec, depth: int) -> FamilyConfig:
    """The adjacency family whose members close every block of (spec, depth)."""
    kind = spec.kind
    if kind == BranchingKind.CONSTANT:
        return constant_family_config(spec.k)
    if kind == BranchingKind.HAT:
        return hat_family_config(spec.k)
    if kind == BranchingKind.FAN:
        return fan_family_config(spec.k, spec.d)
    if kind == BranchingKind.PERIODIC:
        if len(spec.alphas) == 1:
            return constant_family_config(spec.alphas[0])
        return periodic_recurrence_coeffs(spec.alphas)
    # sequence: the first `depth` alphas form one full period
    window = spec.alphas[:max(depth, 1)]
    if len(window) == 1:
        return constant_family_config(window[0])
    return periodic_recurrence_coeffs(window)


# ── Laplacian / random-walk families ─────────────────────────────────────────

def _bethe_degrees(spec: BranchingSpec) -> Tuple[int, int, int]:
    """(root children, interior children, interior degree) for constant/hat specs."""
    if spec.kind == BranchingKind.CONSTANT:
        return spec.k, spec.k, spec.k + 1
    if spec.kind == BranchingKind.HAT:
        return spec.k, spec.k - 1, spec.k
    raise UnsupportedOperation(spec.kind.value, "laplacian/random-walk families")


def laplacian_derived_config(spec: BranchingSpec) -> FamilyConfig:
    """
    Characteristic polynomials of the Laplacian depth-reduction blocks.

    Built from the leaf end: D_1 = 1, D_2 = x - 1,
    D_{j+1} = (x - deg) D_j - c D_{j-1}; the isotropic block closes with the
    root row (diag = root degree, offdiag^2 = root children).
    """
    root_c, c, deg = _bethe_degrees(spec)
    return FamilyConfig(
        label=f"laplacian-derived[{spec.label}]",
        c1=X - deg,
        c0=c,
        step=1,
        initials=(Polynomial.of(-1), ONE),
        q_rule=QRule(qc1=X - root_c, qc0=root_c),
    )


def walk_derived_config(spec: BranchingSpec) -> FamilyConfig:
    """
    Profile polynomials of the random-walk eigen-relation.

    f(leaf) = 1, f(level above) = mu, then f(i-1) = mu*deg*f(i) - c*f(i+1);
    the root relation gives Q_n = x R_n - R_{n-1} because the root degree
    equals its child count.
    """
    _, c, deg = _bethe_degrees(spec)
    return FamilyConfig(
        label=f"walk-derived[{spec.label}]",
        c1=X * deg,
        c0=c,
        step=1,
        initials=(X, ONE),
        q_rule=QRule(qc1=X, qc0=1),
    )


def laplacian_as_stated_config(k: int) -> FamilyConfig:
    """Printed Laplacian family: P_1 = 1, P_2 = 1 - x, P_{n+1} = (k - x) P_n - (k-1) P_{n-1}."""
    return FamilyConfig(
        label=f"laplacian-as-stated(k={k})",
        c1=Polynomial.of(k, -1),
        c0=k - 1,
        step=1,
        initials=(ONE, ONE),
        q_rule=QRule(qc1=X - k, qc0=-k),
    )


def walk_as_stated_config(k: int) -> FamilyConfig:
    """Printed walk family: P_1 = 1, P_2 = (k+1)x, P_{n+1} = (k+1)(x P_n - k P_{n-1})."""
    return FamilyConfig(
        label=f"walk-as-stated(k={k})",
        c1=X * (k + 1),
        c0=k * (k + 1),
        step=1,
        initials=(ZERO, ONE),
        q_rule=QRule(qc1=X, qc0=1),
    )


def operator_family_config(spec: BranchingSpec, depth: int, operator: OperatorKind) -> FamilyConfig:
    if operator == OperatorKind.ADJACENCY:
        return adjacency_family_config(spec, depth)
    if operator == OperatorKind.LAPLACIAN:
        return laplacian_derived_config(spec)
    return walk_derived_config(spec)
