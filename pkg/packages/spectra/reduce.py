"""
TreeSpectra — Depth reduction.

Functions that are constant on the levels of a subtree (isotropic) or that
combine subtree profiles with zero-sum weights below an anchor (typed) span
invariant subspaces of every level-symmetric operator.  On each one the
operator is a small symmetric tridiagonal matrix:

    adjacency     diag 0      offdiag  sqrt(c_i)
    laplacian     diag deg_i  offdiag -sqrt(c_i)
    random walk   diag 0      offdiag  sqrt(c_i) / sqrt(deg_i * deg_{i+1})

where c_i is the child count at level i.  The union of block spectra, each
repeated by its class dimension, is the full spectrum.
"""

from __future__ import annotations

import math
from typing import List, NamedTuple

from common.errors import UnsupportedOperation
from common.logging_util import get_logger
from common.types import BranchingKind, BranchingSpec, OperatorKind, TridiagonalBlock
from polyfam.families import PolyFamily, make_family, operator_family_config
from polyfam.polynomial import Polynomial
from spectra.multiplicity import typed_multiplicities
from treegen.builder import check_depth, children_per_level

log = get_logger(__name__)


def level_degrees(spec: BranchingSpec, depth: int) -> List[int]:
    """Degree of every node on level i, i = 0..depth."""
    c = children_per_level(spec, depth)
    if depth == 0:
        return [0]
    return [c[0]] + [c[i] + 1 for i in range(1, depth)] + [1]


def _check_operator(spec: BranchingSpec, operator: OperatorKind) -> None:
    if spec.kind == BranchingKind.FAN:
        raise UnsupportedOperation(spec.kind.value, "depth_reduce")
    if operator != OperatorKind.ADJACENCY and spec.kind not in (BranchingKind.CONSTANT,
                                                                BranchingKind.HAT):
        raise UnsupportedOperation(spec.kind.value, f"{operator.value} depth_reduce")


def _block(c: List[int], deg: List[int], lo: int, hi: int, operator: OperatorKind):
    """Tridiagonal entries of the operator on levels lo..hi."""
    if operator == OperatorKind.LAPLACIAN:
        diag = [float(deg[i]) for i in range(lo, hi + 1)]
        off = [-math.sqrt(c[i]) for i in range(lo, hi)]
    elif operator == OperatorKind.RANDOM_WALK:
        diag = [0.0] * (hi - lo + 1)
        off = [math.sqrt(c[i]) / math.sqrt(deg[i] * deg[i + 1]) for i in range(lo, hi)]
    else:
        diag = [0.0] * (hi - lo + 1)
        off = [math.sqrt(c[i]) for i in range(lo, hi)]
    return tuple(diag), tuple(off)


def depth_reduce(
    spec: BranchingSpec,
    depth: int,
    operator: OperatorKind = OperatorKind.ADJACENCY,
) -> List[TridiagonalBlock]:
    """Typed blocks in increasing index order, then the isotropic block."""
    _check_operator(spec, operator)
    check_depth(spec, depth)
    if depth == 0:
        return [TridiagonalBlock(diag=(0.0,), offdiag=(), multiplicity=1,
                                 poly_index=1, isotropic=True)]
    c = children_per_level(spec, depth)
    deg = level_degrees(spec, depth)
    typed = typed_multiplicities(spec, depth)

    blocks: List[TridiagonalBlock] = []
    for s in sorted(typed):
        t = depth + 1 - s
        diag, off = _block(c, deg, t + 1, depth, operator)
        blocks.append(TridiagonalBlock(diag=diag, offdiag=off,
                                       multiplicity=typed[s], poly_index=s))
    diag, off = _block(c, deg, 0, depth, operator)
    blocks.append(TridiagonalBlock(diag=diag, offdiag=off, multiplicity=1,
                                   poly_index=depth + 1, isotropic=True))
    log.debug("depth_reduce %s depth %d %s: %d blocks",
              spec.label, depth, operator.value, len(blocks))
    return blocks


# ── Block polynomials ────────────────────────────────────────────────────────

class BlockPolynomial(NamedTuple):
    poly:         Polynomial
    index:        int
    multiplicity: int
    closing:      bool


def block_family(spec: BranchingSpec, depth: int, operator: OperatorKind) -> PolyFamily:
    """The operator family, built far enough to close this depth."""
    cfg = operator_family_config(spec, depth, operator)
    return make_family(cfg, max(depth + 2, 2 * cfg.step))


def block_polynomials(
    spec: BranchingSpec,
    depth: int,
    operator: OperatorKind = OperatorKind.ADJACENCY,
    family: PolyFamily = None,
) -> List[BlockPolynomial]:
    """
    One exact polynomial per block whose roots are the block's eigenvalues:
    P_s for the typed class of index s, Q_{depth+1} for the isotropic class.
    """
    _check_operator(spec, operator)
    check_depth(spec, depth)
    if family is None:
        family = block_family(spec, depth, operator)
    out = [BlockPolynomial(family.members[s], s, mult, False)
           for s, mult in sorted(typed_multiplicities(spec, depth).items())]
    out.append(BlockPolynomial(family.q_members[depth + 1], depth + 1, 1, True))
    return out


def exact_nullity(spec: BranchingSpec, depth: int) -> int:
    """Dimension of the adjacency kernel, from exact evaluation at 0."""
    if depth == 0:
        return 1
    total = 0
    for bp in block_polynomials(spec, depth, OperatorKind.ADJACENCY):
        if bp.poly.eval_scaled(0, 1) == 0:
            total += bp.multiplicity
    return total
