import math
from fractions import Fraction
from math import factorial

import pytest

from src.operators.operator_series import (
    RationalCoefficient, bernoulli_even, coth_half_series, partial_sum,
)


def coth_half(z):
    return 1.0 if z == 0 else (z / 2) / math.tanh(z / 2)


class TestCothHalfSeries:
    """Test the exact coefficients of (z/2) coth(z/2)."""

    def test_leading_coefficients(self):
        values = [c.value for c in coth_half_series(6)]
        assert values == [Fraction(1), Fraction(1, 12), Fraction(-1, 720), Fraction(1, 30240)]

    def test_orders_and_lowest_terms(self):
        coefficients = coth_half_series(8)
        assert [c.order for c in coefficients] == [0, 2, 4, 6, 8]
        assert coefficients[4].value == Fraction(-1, 1209600)
        assert str(coefficients[1]) == "1/12"
        assert str(coefficients[0]) == "1"

    def test_signs_alternate(self):
        coefficients = coth_half_series(16)
        for k, c in enumerate(coefficients[1:], start=1):
            assert (c.value > 0) == (k % 2 == 1)

    def test_bernoulli_identity(self):
        """c_k = B_{2k} / (2k)!."""
        for k, c in enumerate(coth_half_series(12)):
            assert c.value == bernoulli_even(k) / factorial(2 * k)

    def test_known_bernoulli_numbers(self):
        assert bernoulli_even(0) == 1
        assert bernoulli_even(1) == Fraction(1, 6)
        assert bernoulli_even(2) == Fraction(-1, 30)
        assert bernoulli_even(6) == Fraction(691, -2730)

    def test_invalid_order(self):
        with pytest.raises(ValueError):
            coth_half_series(5)
        with pytest.raises(ValueError):
            coth_half_series(-2)
        with pytest.raises(ValueError):
            bernoulli_even(-1)

    def test_rational_validation(self):
        with pytest.raises(ValueError):
            RationalCoefficient(2, 4, 2)
        with pytest.raises(ValueError):
            RationalCoefficient(1, 0, 2)
        with pytest.raises(ValueError):
            RationalCoefficient(1, 12, 3)


class TestPartialSum:
    """Test floating-point evaluation of the truncated series."""

    def test_at_zero(self):
        assert partial_sum(coth_half_series(8), 0.0) == 1.0

    def test_converges_inside_radius(self):
        """Order-8 truncation is already accurate for small z."""
        z = 0.05
        assert abs(partial_sum(coth_half_series(8), z) - coth_half(z)) < 1e-14

    def test_error_shrinks_with_order(self):
        z = 1.0
        errors = [abs(partial_sum(coth_half_series(n), z) - coth_half(z)) for n in (2, 4, 6, 8)]
        assert all(b < a for a, b in zip(errors, errors[1:]))
