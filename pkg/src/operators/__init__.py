# Inter-element coupling operator series package

from .operator_series import RationalCoefficient, coth_half_series, partial_sum, bernoulli_even

__all__ = [
    'RationalCoefficient',
    'coth_half_series',
    'partial_sum',
    'bernoulli_even',
]
