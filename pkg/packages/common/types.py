"""
TreeSpectra — Shared Pydantic models used across all packages.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, field_serializer, model_validator


# ── Enums ────────────────────────────────────────────────────────────────────

class BranchingKind(str, enum.Enum):
    """Graph families the library can build."""
    CONSTANT = "constant"     # every non-leaf has k children
    HAT      = "hat"          # root k children, others k-1
    PERIODIC = "periodic"
    SEQUENCE = "sequence"
    FAN      = "fan"


class OperatorKind(str, enum.Enum):
    ADJACENCY   = "adjacency"
    LAPLACIAN   = "laplacian"
    RANDOM_WALK = "random_walk"


class NormalizationScheme(str, enum.Enum):
    DEGREE_AFFINE  = "degree"     # (λ + k) / 2k
    SUPPORT_AFFINE = "support"    # (λ + 2√b) / 4√b


class Construction(str, enum.Enum):
    ISOTROPIC = "isotropic"
    TYPED     = "typed"
    FAN       = "fan"


class CdfKind(str, enum.Enum):
    EMPIRICAL = "empirical"    # finite depth
    LIMITING  = "limiting"     # truncated limit measure


# ── Branching specs ──────────────────────────────────────────────────────────

class BranchingSpec(BaseModel):
    """
    Declarative description of a rooted family.

    Use the classmethod constructors; the validator rejects any parameter
    below its bound with a message naming the bound.
    """
    kind:   BranchingKind
    k:      Optional[int] = None
    d:      Optional[int] = None
    alphas: Tuple[int, ...] = ()

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def check_bounds(self) -> "BranchingSpec":
        kind = self.kind
        if kind in (BranchingKind.CONSTANT, BranchingKind.HAT, BranchingKind.FAN):
            if self.k is None:
                raise ValueError(f"{kind.value} spec requires k")
        if kind == BranchingKind.CONSTANT and self.k < 2:
            raise ValueError(f"ConstantChildren requires k >= 2, got k={self.k}")
        if kind == BranchingKind.HAT and self.k < 3:
            raise ValueError(f"RegularSubtree requires k >= 3, got k={self.k}")
        if kind == BranchingKind.FAN:
            if self.k < 1:
                raise ValueError(f"Fan requires k >= 1, got k={self.k}")
            if self.d is None or self.d < 2:
                raise ValueError(f"Fan requires d >= 2, got d={self.d}")
        if kind in (BranchingKind.PERIODIC, BranchingKind.SEQUENCE):
            if not self.alphas:
                raise ValueError(f"{kind.value} spec requires a nonempty alphas vector")
            low = [a for a in self.alphas if a < 2]
            if low:
                raise ValueError(f"{kind.value} requires every alpha >= 2, got {low[0]}")
        if kind == BranchingKind.SEQUENCE:
            for prev, nxt in zip(self.alphas, self.alphas[1:]):
                if nxt <= prev:
                    raise ValueError(
                        f"Sequence requires strictly increasing alphas, got {prev} then {nxt}"
                    )
        return self

    # constructors

    @classmethod
    def constant(cls, k: int) -> "BranchingSpec":
        return cls(kind=BranchingKind.CONSTANT, k=k)

    @classmethod
    def regular_subtree(cls, k: int) -> "BranchingSpec":
        return cls(kind=BranchingKind.HAT, k=k)

    @classmethod
    def periodic(cls, alphas) -> "BranchingSpec":
        return cls(kind=BranchingKind.PERIODIC, alphas=tuple(alphas))

    @classmethod
    def sequence(cls, alphas) -> "BranchingSpec":
        return cls(kind=BranchingKind.SEQUENCE, alphas=tuple(alphas))

    @classmethod
    def fan(cls, k: int, d: int) -> "BranchingSpec":
        return cls(kind=BranchingKind.FAN, k=k, d=d)

    # derived properties

    @property
    def is_tree(self) -> bool:
        return self.kind != BranchingKind.FAN

    @property
    def branching(self) -> int:
        """Interior branching b of the P family (k for constant, k-1 for hat)."""
        if self.kind == BranchingKind.CONSTANT:
            return self.k
        if self.kind == BranchingKind.HAT:
            return self.k - 1
        raise ValueError(f"branching parameter undefined for {self.kind.value} specs")

    @property
    def label(self) -> str:
        if self.kind == BranchingKind.FAN:
            return f"fan(k={self.k},d={self.d})"
        if self.kind in (BranchingKind.CONSTANT, BranchingKind.HAT):
            return f"{self.kind.value}(k={self.k})"
        return f"{self.kind.value}({','.join(str(a) for a in self.alphas)})"

    def to_payload(self) -> dict:
        return self.model_dump(mode="json", exclude_defaults=True)


# ── Spectra ──────────────────────────────────────────────────────────────────

class Provenance(BaseModel):
    family_label: str
    poly_index:   int
    first_index:  int

    model_config = {"frozen": True}


class SpectrumEntry(BaseModel):
    value:        float
    multiplicity: int = Field(..., ge=1)
    source:       Provenance

    model_config = {"frozen": True}


class SpectrumReport(BaseModel):
    """Eigenvalues with exact multiplicities, ascending and pairwise distinct."""
    spec:      BranchingSpec
    depth:     int
    operator:  OperatorKind
    entries:   Tuple[SpectrumEntry, ...]
    total_dim: int

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def check_sorted(self) -> "SpectrumReport":
        for a, b in zip(self.entries, self.entries[1:]):
            if not a.value < b.value:
                raise ValueError(
                    f"Spectrum entries must be strictly ascending: {a.value!r} then {b.value!r}"
                )
        return self

    def values(self) -> List[float]:
        return [e.value for e in self.entries]

    def pairs(self) -> List[Tuple[float, int]]:
        return [(e.value, e.multiplicity) for e in self.entries]

    def multiplicity_of(self, value: float, tol: float) -> int:
        return sum(e.multiplicity for e in self.entries if abs(e.value - value) <= tol)

    def to_payload(self) -> dict:
        return {
            "spec":      self.spec.to_payload(),
            "depth":     self.depth,
            "operator":  self.operator.value,
            "total_dim": self.total_dim,
            "entries": [
                {"value": e.value, "mult": e.multiplicity, "first_index": e.source.first_index}
                for e in self.entries
            ],
        }


class TridiagonalBlock(BaseModel):
    """One symmetry class of the depth reduction."""
    diag:         Tuple[float, ...]
    offdiag:      Tuple[float, ...]
    multiplicity: int = Field(..., ge=1)
    poly_index:   int
    isotropic:    bool = False

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def check_shape(self) -> "TridiagonalBlock":
        if len(self.offdiag) != len(self.diag) - 1:
            raise ValueError(
                f"offdiag length {len(self.offdiag)} must be diag length {len(self.diag)} - 1"
            )
        return self

    @property
    def size(self) -> int:
        return len(self.diag)


# ── Oracle ───────────────────────────────────────────────────────────────────

class SpectrumComparison(BaseModel):
    matched:         bool
    worst_value_gap: float
    mult_mismatches: List[Tuple[float, int, int]] = Field(default_factory=list)
    n_clusters_a:    int
    n_clusters_b:    int


# ── Measure ──────────────────────────────────────────────────────────────────

class EndpointRecord(BaseModel):
    """Plateau of one limiting eigenvalue in the cumulative spectral measure."""
    m:          int
    a:          int
    left:       float
    right:      float
    width:      float
    tail_bound: float = 0.0

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def check_order(self) -> "EndpointRecord":
        eps = 1e-12
        if not (-eps <= self.left <= self.right <= 1.0 + eps):
            raise ValueError(
                f"Endpoint order violated: left={self.left!r} right={self.right!r}"
            )
        return self


class ZeroProportion(BaseModel):
    depth:             int
    n_nodes:           int
    bound:             Fraction
    nullity:           int
    proportion:        Fraction
    oracle_proportion: Optional[float] = None

    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    @field_serializer("bound", "proportion")
    def _fraction_str(self, value: Fraction) -> str:
        return str(value)
