"""
Tests for TreeSpectra normalized spectral CDFs, plateau endpoints and
Lambert totient sums.

Verifies:
1. Limiting proportions and empirical proportions at finite depth.
2. Both normalizations on worked values.
3. Empirical CDF steps of X_2^2 and the right-continuous / left-limit lookups.
4. Kolmogorov distance: shrinks with depth, and depth 12 is within 0.01 of
   the truncated limit.
5. Plateau endpoints: symmetric pairs, agreement with the empirical CDF,
   and the printed counting direction measurably off.
6. Lambert sums converge to 1 (normalized) and k/(k-1)^2 (raw).
"""

from __future__ import annotations

import math
import os
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", ".."))

from common.errors import SpecViolation, UnsupportedOperation
from common.types import BranchingSpec, CdfKind, NormalizationScheme, OperatorKind
from measure.endpoints import (
    empirical_proportion,
    limit_proportion,
    staircase_endpoints,
)
from measure.lambert import lambert_partial
from measure.staircase import (
    cdf_distance,
    empirical_cdf,
    limiting_cdf,
    normalize_spectrum,
    normalizer,
)
from polyfam.numtheory import euler_phi
from polyfam.roots import closed_form_value
from spectra.assemble import assemble_spectrum

BINARY = BranchingSpec.constant(2)
SUPPORT = NormalizationScheme.SUPPORT_AFFINE
DEGREE = NormalizationScheme.DEGREE_AFFINE


# ── Proportions ──────────────────────────────────────────────────────────────

class TestProportions:
    def test_limit_examples(self):
        """1/3 for the binary tree at m=2; 1/2 for the degree-4 hat tree."""
        assert limit_proportion(BINARY, 2) == Fraction(1, 3)
        assert limit_proportion(BranchingSpec.regular_subtree(4), 2) == Fraction(1, 2)
        assert limit_proportion(BranchingSpec.constant(3), 3) == Fraction(4, 26)

    def test_limit_rejects_small_m(self):
        """m must be at least 2."""
        with pytest.raises(SpecViolation):
            limit_proportion(BINARY, 1)

    def test_empirical_binary_depth_twelve(self):
        """2731/8191, within 0.002 of 1/3."""
        p = empirical_proportion(BINARY, 12, 2)
        assert p == Fraction(2731, 8191)
        assert abs(float(p) - 1 / 3) < 0.002

    def test_empirical_ternary_depth_eight(self):
        """4921/9841, within 0.002 of 1/2."""
        p = empirical_proportion(BranchingSpec.constant(3), 8, 2)
        assert p == Fraction(4921, 9841)
        assert abs(float(p) - 1 / 2) < 0.002

    @pytest.mark.parametrize("spec", [BINARY, BranchingSpec.regular_subtree(3),
                                      BranchingSpec.regular_subtree(4)])
    def test_total_mass_is_one(self, spec):
        """sum over n of phi(n) * limit_proportion(n) converges to 1."""
        total = sum(euler_phi(n) * limit_proportion(spec, n) for n in range(2, 61))
        assert float(total) == pytest.approx(1.0, abs=1e-12)


# ── Normalization and empirical CDFs ─────────────────────────────────────────

class TestNormalization:
    def test_support_scheme(self):
        """Support scheme maps [-2 sqrt b, 2 sqrt b] onto [0, 1]."""
        to_x = normalizer(BINARY, SUPPORT)
        assert to_x(0.0) == pytest.approx(0.5)
        assert to_x(-2.0 * math.sqrt(2.0)) == pytest.approx(0.0)
        assert to_x(2.0 * math.sqrt(2.0)) == pytest.approx(1.0)

    def test_degree_scheme_leaves_unit_interval(self):
        """(lambda + k)/2k puts the binary spectral edge at about 1.207."""
        to_x = normalizer(BINARY, DEGREE)
        assert to_x(2.0 * math.sqrt(2.0)) == pytest.approx((2.0 * math.sqrt(2.0) + 2.0) / 4.0)
        assert to_x(2.0 * math.sqrt(2.0)) > 1.2

    def test_hat_uses_interior_branching(self):
        """The hat tree edge is 2 sqrt(k-1)."""
        to_x = normalizer(BranchingSpec.regular_subtree(5), SUPPORT)
        assert to_x(4.0) == pytest.approx(1.0)

    def test_binary_depth_two_steps(self):
        """X_2^2 steps: 1/7, 1/7, 3/7, 1/7, 1/7."""
        cdf = normalize_spectrum(assemble_spectrum(BINARY, 2), SUPPORT)
        assert cdf.kind == CdfKind.EMPIRICAL
        assert list(cdf.weights) == [Fraction(1, 7), Fraction(1, 7), Fraction(3, 7),
                                     Fraction(1, 7), Fraction(1, 7)]
        assert cdf.cumulative[-1] == pytest.approx(1.0, abs=1e-15)
        assert cdf.at(0.5) == pytest.approx(5 / 7)
        assert cdf.left_limit(0.5) == pytest.approx(2 / 7)
        assert cdf.at(-0.1) == 0.0

    def test_to_frame(self):
        """The CDF converts to a two-column frame."""
        frame = normalize_spectrum(assemble_spectrum(BINARY, 3), SUPPORT).to_frame()
        assert list(frame.columns) == ["x", "cumulative"]
        assert frame["cumulative"].is_monotonic_increasing

    def test_empirical_cdf_rejects_empty(self):
        """No points, no CDF."""
        with pytest.raises(SpecViolation):
            empirical_cdf([])

    def test_rejects_non_adjacency(self):
        """Only adjacency spectra are normalized."""
        report = assemble_spectrum(BINARY, 2, OperatorKind.LAPLACIAN)
        with pytest.raises(UnsupportedOperation):
            normalize_spectrum(report)

    def test_rejects_periodic(self):
        """The limiting measure is defined for constant and hat trees."""
        with pytest.raises(UnsupportedOperation):
            limiting_cdf(BranchingSpec.periodic([3, 2]), 20)


# ── Distances ────────────────────────────────────────────────────────────────

class TestDistance:
    def test_self_distance(self):
        """d(c, c) = 0."""
        cdf = normalize_spectrum(assemble_spectrum(BINARY, 6), SUPPORT)
        assert cdf_distance(cdf, cdf) == 0.0

    def test_converges_with_depth(self):
        """Depth 4 is farther from depth 12 than depth 8 is."""
        ref = normalize_spectrum(assemble_spectrum(BINARY, 12), SUPPORT)
        d4 = cdf_distance(normalize_spectrum(assemble_spectrum(BINARY, 4), SUPPORT), ref)
        d8 = cdf_distance(normalize_spectrum(assemble_spectrum(BINARY, 8), SUPPORT), ref)
        assert d4 > d8

    def test_depth_twelve_near_limit(self):
        """Empirical depth 12 vs limiting N=60: at most 0.01."""
        empirical = normalize_spectrum(assemble_spectrum(BINARY, 12), SUPPORT)
        limit = limiting_cdf(BINARY, 60, SUPPORT)
        assert cdf_distance(empirical, limit) <= 0.01

    def test_limiting_cdf_mass(self):
        """The truncated limit ends within its tail bound of 1."""
        limit = limiting_cdf(BINARY, 60, SUPPORT)
        assert limit.kind == CdfKind.LIMITING
        assert 1.0 - limit.tail_bound - 1e-12 <= limit.cumulative[-1] <= 1.0 + 1e-12

    def test_scheme_mismatch(self):
        """Distances between differently normalized CDFs are refused."""
        report = assemble_spectrum(BINARY, 4)
        with pytest.raises(SpecViolation):
            cdf_distance(normalize_spectrum(report, SUPPORT), normalize_spectrum(report, DEGREE))


# ── Endpoints ────────────────────────────────────────────────────────────────

class TestEndpoints:
    def test_zero_plateau(self):
        """The value 0 (a/m = 1/2) occupies [1/3, 2/3] on the binary tree."""
        rec = staircase_endpoints(BINARY, 2, 1, 60)
        assert rec.left == pytest.approx(1 / 3, abs=1e-9)
        assert rec.right == pytest.approx(2 / 3, abs=1e-9)
        assert rec.width == pytest.approx(1 / 3, abs=1e-15)

    @pytest.mark.parametrize("m,a", [(3, 1), (5, 2), (7, 3)])
    def test_mirrored_plateaus(self, m, a):
        """left(a/m) + right((m-a)/m) = 1."""
        lo = staircase_endpoints(BINARY, m, a, 60)
        hi = staircase_endpoints(BINARY, m, m - a, 60)
        assert lo.left + hi.right == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("m,a", [(2, 1), (3, 1), (3, 2), (4, 1), (5, 2), (5, 3)])
    def test_matches_empirical_cdf(self, m, a):
        """Left endpoints track F(x-) of the depth-12 CDF within 0.01."""
        cdf = normalize_spectrum(assemble_spectrum(BINARY, 12), SUPPORT)
        x = normalizer(BINARY, SUPPORT)(closed_form_value(2, a, m))
        rec = staircase_endpoints(BINARY, m, a, 60)
        assert abs(rec.left - cdf.left_limit(x)) <= 0.01

    def test_stated_direction_is_off(self):
        """Counting l/n < a/m misplaces every plateau except the one at 0."""
        cdf = normalize_spectrum(assemble_spectrum(BINARY, 12), SUPPORT)
        x = normalizer(BINARY, SUPPORT)(closed_form_value(2, 1, 3))
        stated = staircase_endpoints(BINARY, 3, 1, 60, stated_condition=True)
        assert abs(stated.left - cdf.left_limit(x)) > 0.1

    def test_rejects_bad_fractions(self):
        """Non-coprime numerators and short truncations are refused."""
        with pytest.raises(SpecViolation):
            staircase_endpoints(BINARY, 4, 2, 60)
        with pytest.raises(SpecViolation):
            staircase_endpoints(BINARY, 3, 3, 60)
        with pytest.raises(SpecViolation):
            staircase_endpoints(BINARY, 8, 1, 5)


# ── Lambert sums ─────────────────────────────────────────────────────────────

class TestLambert:
    @pytest.mark.parametrize("k", [2, 3, 5])
    def test_normalized_sum_is_one(self, k):
        """sum phi(n)(k-1)^2/(k^n - 1) -> 1."""
        s = lambert_partial(k, 60, "normalized")
        assert s.value == pytest.approx(1.0, abs=1e-12)
        assert s.gap <= s.tail_bound + 1e-15

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_raw_sum(self, k):
        """sum phi(n)/(k^n - 1) -> k/(k-1)^2; 2 for k=2."""
        s = lambert_partial(k, 60, "raw")
        assert s.limit == pytest.approx(k / (k - 1) ** 2)
        assert s.value == pytest.approx(s.limit, abs=1e-12)

    def test_tail_bound_shrinks(self):
        """Longer partial sums carry smaller tail bounds."""
        assert lambert_partial(2, 40).tail_bound > lambert_partial(2, 60).tail_bound

    def test_rejects_bad_arguments(self):
        """Unknown form, k < 2 and N < 2 are spec violations."""
        with pytest.raises(SpecViolation):
            lambert_partial(2, 60, "scaled")
        with pytest.raises(SpecViolation):
            lambert_partial(1, 60)
        with pytest.raises(SpecViolation):
            lambert_partial(2, 1)
