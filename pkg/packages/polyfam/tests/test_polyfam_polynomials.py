"""
Tests for TreeSpectra exact polynomials and number theory helpers.

Verifies:
1. Z[x] arithmetic, pseudo-division and exact evaluation.
2. Coefficients serialise as decimal strings (no precision loss).
3. Totient, coprime numerators and non-consecutive sums.
"""

from __future__ import annotations

import os
import sys

import pytest
from pydantic import ValidationError

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", ".."))

from common.errors import SpecViolation
from polyfam.numtheory import coprime_numerators, divisors, euler_phi, reduce_fraction, sigma_noncons
from polyfam.polynomial import ONE, X, ZERO, Polynomial


# ── Arithmetic ───────────────────────────────────────────────────────────────

class TestPolynomial:
    def test_product(self):
        """(x - 1)(x + 1) = x^2 - 1."""
        assert (X - 1) * (X + 1) == Polynomial.of(-1, 0, 1)

    def test_trailing_zeros_stripped(self):
        """Degree ignores trailing zero coefficients."""
        p = Polynomial.of(1, 2, 0, 0)
        assert p.degree == 1
        assert ZERO.degree == -1 and ZERO.is_zero

    def test_pseudo_divmod_identity(self):
        """lc(g)^(deg f - deg g + 1) f = q g + r."""
        f = Polynomial.of(1, 0, 3, 2)
        g = Polynomial.of(1, 3)
        q, r = f.pseudo_divmod(g)
        assert r.degree < g.degree
        assert f * 3 ** 3 == q * g + r

    def test_divides(self):
        """x - 2 divides x^2 - 4 but not x^2 + 4."""
        assert (X - 2).divides(X * X - 4)
        assert not (X - 2).divides(X * X + 4)

    def test_exact_quotient(self):
        """Exact quotients are returned primitive; inexact ones raise."""
        assert (X * X - 4).exact_quotient(X - 2) == X + 2
        with pytest.raises(ArithmeticError):
            (X * X + 1).exact_quotient(X - 2)

    def test_division_by_zero(self):
        """Pseudo-division by 0 raises."""
        with pytest.raises(ZeroDivisionError):
            X.pseudo_divmod(ZERO)

    def test_eval_scaled_is_exact(self):
        """den^deg * p(num/den) in integers."""
        p = Polynomial.of(-1, 0, 2)          # 2x^2 - 1
        assert p.eval_scaled(1, 2) == -2      # 4 * (2/4 - 1)
        assert p.eval_scaled(3, 1) == 17

    def test_sign_at(self):
        """Exact signs around a root."""
        p = X * X - 2
        assert p.sign_at(1.4142) == -1
        assert p.sign_at(1.4143) == 1
        assert (X - 1).sign_at(1.0) == 0

    def test_float_evaluation(self):
        """__call__ evaluates by Horner."""
        assert (X * X * X - X * 2)(2.0) == pytest.approx(4.0)

    def test_primitive_and_content(self):
        """Content is the coefficient gcd; primitive has positive leading coefficient."""
        p = Polynomial.of(4, -6, -2)
        assert p.content() == 2
        assert p.primitive() == Polynomial.of(-2, 3, 1)

    def test_derivative_and_shift(self):
        """d/dx and multiplication by x^n."""
        assert (X * X * X).derivative() == Polynomial.of(0, 0, 3)
        assert ONE.shift(3) == Polynomial.monomial(3)

    def test_string_form(self):
        """Human-readable form, highest degree first."""
        assert str(X * X - X * 2 + 1) == "x^2 - 2x + 1"
        assert str(ZERO) == "0"


class TestPolynomialSerialization:
    def test_big_coefficients_survive_json(self):
        """Coefficients beyond 2^53 are written as decimal strings."""
        big = 2 ** 80 + 1
        p = Polynomial.of(big, -3)
        dumped = p.model_dump(mode="json")
        assert dumped["coeffs"] == [str(big), "-3"]
        assert Polynomial.model_validate(dumped) == p
        assert Polynomial.from_strings(p.to_strings()) == p

    def test_float_coefficients_rejected(self):
        """Only integers are coefficients."""
        with pytest.raises(ValidationError):
            Polynomial(coeffs=(1.5, 2))
        with pytest.raises(ValidationError):
            Polynomial(coeffs=(True,))


# ── Number theory ────────────────────────────────────────────────────────────

class TestNumberTheory:
    @pytest.mark.parametrize("n,expected", [(1, 1), (2, 1), (9, 6), (12, 4), (97, 96), (100, 40)])
    def test_euler_phi(self, n, expected):
        """Totient values."""
        assert euler_phi(n) == expected

    def test_phi_matches_coprime_count(self):
        """phi(n) counts numerators 1..n-1 coprime to n (n >= 2)."""
        for n in range(2, 60):
            assert euler_phi(n) == len(coprime_numerators(n))

    def test_phi_rejects_zero(self):
        """phi is defined for n >= 1."""
        with pytest.raises(SpecViolation):
            euler_phi(0)

    def test_divisor_sum_identity(self):
        """sum_{d | n} phi(d) = n."""
        for n in (12, 30, 64, 97):
            assert sum(euler_phi(d) for d in divisors(n)) == n

    def test_reduce_fraction(self):
        """Lowest terms."""
        assert reduce_fraction(4, 6) == (2, 3)
        assert coprime_numerators(10) == [1, 3, 7, 9]

    def test_sigma_noncons(self):
        """Cyclically non-consecutive products."""
        assert sigma_noncons((2, 3, 5, 8), 0) == 1
        assert sigma_noncons((2, 3, 5, 8), 1) == 18
        assert sigma_noncons((2, 3, 5, 8), 2) == 10 + 24
        assert sigma_noncons((3, 2), 1) == 5

    def test_sigma_index_bound(self):
        """i above floor(len/2) is rejected."""
        with pytest.raises(SpecViolation):
            sigma_noncons((2, 3, 5), 2)
