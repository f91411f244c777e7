"""
TreeSpectra — Exception hierarchy.

Every error carries the fields a caller needs to act on it; the message is
built once in __init__.  The CLI maps ValueError subclasses to exit 2 and
every other TreeSpectraError to exit 1.
"""

from __future__ import annotations

from typing import Any, Optional


class TreeSpectraError(Exception):
    """Base class for all library errors."""


class SpecViolation(TreeSpectraError, ValueError):
    """Raised when a spec, depth or index violates a documented bound."""

    def __init__(self, bound: str, detail: str = "") -> None:
        self.bound  = bound
        self.detail = detail
        msg = f"SpecViolation: {bound}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class UnsupportedOperation(TreeSpectraError, ValueError):
    """Raised for (spec, operation) pairs outside the supported matrix."""

    def __init__(self, spec_kind: str, operation: str) -> None:
        self.spec_kind = spec_kind
        self.operation = operation
        super().__init__(
            f"UnsupportedOperation: '{operation}' is not available for '{spec_kind}' specs"
        )


class ConsistencyError(TreeSpectraError):
    """An internal identity failed; signals a numeric or logic bug."""

    def __init__(self, what: str, expected: Any, actual: Any) -> None:
        self.what     = what
        self.expected = expected
        self.actual   = actual
        super().__init__(
            f"ConsistencyError: {what}: expected {expected}, got {actual}"
        )


class CertificateError(TreeSpectraError):
    """An eigenvector candidate failed its residual check."""

    def __init__(self, lam: float, residual: float, worst_node: int, tol: float) -> None:
        self.lam        = lam
        self.residual   = residual
        self.worst_node = worst_node
        self.tol        = tol
        super().__init__(
            f"CertificateError: residual {residual:.3e} > {tol:.1e} for lambda={lam!r} "
            f"(worst node {worst_node})"
        )


class AmbiguousClustering(TreeSpectraError):
    """Two clusters (or a probe value and a cluster) are too close to separate."""

    def __init__(self, left: float, right: float, gap: float, required: Optional[float] = None) -> None:
        self.left     = left
        self.right    = right
        self.gap      = gap
        self.required = required
        msg = f"AmbiguousClustering: values {left!r} and {right!r} are {gap:.3e} apart"
        if required is not None:
            msg += f", need more than {required:.1e}"
        super().__init__(msg)


class EigensolverFailure(TreeSpectraError):
    """The QL iteration did not converge for one eigenvalue."""

    def __init__(self, index: int, iterations: int) -> None:
        self.index      = index
        self.iterations = iterations
        super().__init__(
            f"EigensolverFailure: eigenvalue {index} not converged after {iterations} iterations"
        )
