from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import List, Sequence


@dataclass(frozen=True)
class RationalCoefficient:
    """Exact coefficient numerator/denominator of z**order."""
    numerator: int
    denominator: int
    order: int

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError(f"Denominator must be positive, got {self.denominator}")
        if self.order < 0 or self.order % 2:
            raise ValueError(f"Order must be even and non-negative, got {self.order}")
        reduced = Fraction(self.numerator, self.denominator)
        if (reduced.numerator, reduced.denominator) != (self.numerator, self.denominator):
            raise ValueError(f"{self.numerator}/{self.denominator} is not in lowest terms")

    @classmethod
    def from_fraction(cls, value: Fraction, order: int) -> "RationalCoefficient":
        return cls(value.numerator, value.denominator, order)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __str__(self):
        if self.denominator == 1:
            return str(self.numerator)
        return f"{self.numerator}/{self.denominator}"


def coth_half_series(max_order: int) -> List[RationalCoefficient]:
    """Coefficients c_k of (z/2) coth(z/2) = sum c_k z^(2k) up to z^max_order.

    Multiplying the series by sinh(z/2) and matching (z/2) cosh(z/2) term by
    term gives, for every n >= 0,

        sum_{k<=n} c_k 4^k / (2n - 2k + 1)! = 1 / (2n)!

    which is solved for c_n in exact rational arithmetic.
    """
    if int(max_order) != max_order or max_order < 0 or max_order % 2:
        raise ValueError(f"max_order must be a non-negative even integer, got {max_order}")

    coefficients: List[Fraction] = []
    for n in range(max_order // 2 + 1):
        remainder = Fraction(1, factorial(2 * n))
        for k, c_k in enumerate(coefficients):
            remainder -= c_k * 4 ** k / factorial(2 * n - 2 * k + 1)
        coefficients.append(remainder / 4 ** n)

    return [RationalCoefficient.from_fraction(c, 2 * k) for k, c in enumerate(coefficients)]


def partial_sum(coefficients: Sequence[RationalCoefficient], z: float) -> float:
    """Evaluate the truncated series at z in floating point (Horner in z^2)."""
    total = 0.0
    z2 = z * z
    for coefficient in sorted(coefficients, key=lambda c: c.order, reverse=True):
        total = total * z2 + float(coefficient.value)
    return total


def bernoulli_even(k: int) -> Fraction:
    """B_{2k} from the binomial recurrence sum_{r<=n} C(n+1, r) B_r = 0."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return Fraction(1)

    even: List[Fraction] = [Fraction(1)]
    for m in range(1, k + 1):
        n = 2 * m
        s = sum((comb(n + 1, 2 * j) * even[j] for j in range(m)), Fraction(0))
        s += Fraction(n + 1) * Fraction(-1, 2)
        even.append(-s / (n + 1))
    return even[k]
