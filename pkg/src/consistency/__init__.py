# Truncation-order verification package

from .analytic_fields import AnalyticField, sine_field, constant_field, mixed_field, get_field
from .consistency_checker import (
    Probe,
    NonlinearForm,
    OrderEstimate,
    AmplitudeEstimate,
    fit_slope,
    residual,
    observed_order,
    amplitude_order,
    alternative_order,
)

__all__ = [
    'AnalyticField',
    'sine_field',
    'constant_field',
    'mixed_field',
    'get_field',
    'Probe',
    'NonlinearForm',
    'OrderEstimate',
    'AmplitudeEstimate',
    'fit_slope',
    'residual',
    'observed_order',
    'amplitude_order',
    'alternative_order',
]
