"""
Tests for TreeSpectra zero-eigenvalue dominance and rooted fans.

Verifies:
1. Fibonacci-branching nullity proportions, exactly, at depths 1..6.
2. The closed-form lower bound holds, and exceeds 0.9 at depth 6.
3. The dense oracle agrees with the exact nullity where it is feasible.
4. Fans: every closing root is an oracle eigenvalue with a certified
   isotropic eigenvector, and d=2 fans reproduce constant trees.
"""

from __future__ import annotations

import math
import os
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", ".."))

from common.errors import UnsupportedOperation
from common.types import BranchingSpec
from oracle.compare import compare_spectra
from polyfam.families import fan_family_config, make_family, make_root_poly
from polyfam.roots import sturm_roots
from spectra.assemble import assemble_spectrum, fan_spectrum
from spectra.fans import fan_pipeline
from spectra.zeros import nullity_lower_bound, zero_proportion

FIBONACCI = BranchingSpec.sequence([2, 3, 5, 8, 13, 21])

EXACT_PROPORTIONS = {
    1: Fraction(1, 3),
    2: Fraction(5, 9),
    3: Fraction(25, 39),
    4: Fraction(215, 279),
    5: Fraction(2905, 3399),
    6: Fraction(62615, 68919),
}


# ── Zero dominance ───────────────────────────────────────────────────────────

class TestZeroProportion:
    @pytest.mark.parametrize("depth,expected", sorted(EXACT_PROPORTIONS.items()))
    def test_exact_proportion(self, depth, expected):
        """Exact nullity / N at each depth."""
        zp = zero_proportion(FIBONACCI, depth)
        assert zp.proportion == expected
        assert zp.proportion >= zp.bound

    def test_nondecreasing(self):
        """Nullity proportions never drop as depth grows."""
        props = [zero_proportion(FIBONACCI, r).proportion for r in range(1, 7)]
        assert props == sorted(props)

    def test_bound_exceeds_nine_tenths(self):
        """At depth 6 the leaf-difference bound is 62400/68919 > 0.9."""
        bound = nullity_lower_bound(FIBONACCI, 6)
        assert bound == Fraction(62400, 68919)
        assert bound > Fraction(9, 10)

    def test_depth_zero(self):
        """A single node: bound 0, nullity 1."""
        zp = zero_proportion(FIBONACCI, 0)
        assert zp.bound == 0
        assert zp.proportion == 1

    @pytest.mark.parametrize("depth", [1, 2, 3, 4])
    def test_oracle_agrees(self, depth):
        """Dense nullity proportion equals the exact one."""
        zp = zero_proportion(FIBONACCI, depth, with_oracle=True)
        assert zp.oracle_proportion == pytest.approx(float(EXACT_PROPORTIONS[depth]), abs=1e-12)

    @pytest.mark.slow
    def test_oracle_agrees_depth_five(self):
        """3399 nodes through the LAPACK path."""
        zp = zero_proportion(FIBONACCI, 5, with_oracle=True)
        assert zp.oracle_proportion == pytest.approx(float(EXACT_PROPORTIONS[5]), abs=1e-12)

    def test_oracle_skipped_when_too_large(self):
        """Depth 6 is beyond the dense limit; only the exact value is reported."""
        assert zero_proportion(FIBONACCI, 6, with_oracle=True).oracle_proportion is None

    def test_matches_assembled_zero_multiplicity(self):
        """Exact nullity is the multiplicity of 0 in the assembled spectrum."""
        report = assemble_spectrum(FIBONACCI, 4)
        assert report.multiplicity_of(0.0, 1e-9) == 215

    def test_serializes_fractions(self):
        """Fraction fields serialize as strings."""
        payload = zero_proportion(FIBONACCI, 3).model_dump(mode="json")
        assert payload["proportion"] == "25/39"

    def test_rejects_non_sequence(self):
        """Zero dominance is defined for increasing sequences only."""
        with pytest.raises(UnsupportedOperation):
            zero_proportion(BranchingSpec.constant(2), 3)


# ── Fans ─────────────────────────────────────────────────────────────────────

FAN_CASES = [(k, d, r) for k, d in [(2, 3), (3, 3), (2, 4)] for r in range(1, 5)]


class TestFans:
    def test_closing_polynomial_small_fan(self):
        """Fan (k=2, d=3) at depth 1 closes with x^2 - x - 4."""
        family = make_family(fan_family_config(2, 3), 2)
        roots = sturm_roots(make_root_poly(family, 2))
        s17 = math.sqrt(17.0)
        assert roots == pytest.approx([(1 - s17) / 2, (1 + s17) / 2], abs=1e-12)

    def test_small_fan_shape(self):
        """Fan (2, 3) at depth 1 has 5 nodes and 6 edges."""
        fan = fan_pipeline(2, 3, 1)
        assert (fan.n_nodes, fan.n_edges) == (5, 6)
        assert fan.ok

    @pytest.mark.parametrize("k,d,depth", FAN_CASES,
                             ids=[f"k{k}-d{d}-r{r}" for k, d, r in FAN_CASES])
    def test_pipeline(self, k, d, depth):
        """Closing roots are oracle eigenvalues with certified isotropic vectors."""
        fan = fan_pipeline(k, d, depth)
        assert len(fan.closing_roots) == depth + 1
        assert fan.unmatched_roots == []
        assert fan.max_residual <= 1e-9
        assert fan.report.total_dim == fan.n_nodes

    @pytest.mark.parametrize("k", [2, 3])
    def test_two_simplex_fan_is_constant_tree(self, k):
        """d=2 fans have no sibling edges; their spectrum is the constant tree's."""
        for depth in range(1, 5):
            fan = fan_spectrum(BranchingSpec.fan(k, 2), depth)
            tree = assemble_spectrum(BranchingSpec.constant(k), depth)
            assert compare_spectra(fan, tree, 1e-8).matched

    def test_provenance_tags_closing_roots(self):
        """Values matching a closing root carry its index; the rest come from the oracle."""
        report = fan_spectrum(BranchingSpec.fan(2, 3), 2)
        indices = {e.source.first_index for e in report.entries}
        assert indices <= {0, 3}
        assert 3 in indices

    def test_fan_spectrum_rejects_trees(self):
        """fan_spectrum needs a fan spec."""
        with pytest.raises(UnsupportedOperation):
            fan_spectrum(BranchingSpec.constant(2), 2)
