# Holistic finite-difference models package

from .term_definitions import (
    TermKind,
    Misprint,
    Transcription,
    StencilTerm,
    LINEAR_KINDS,
    scheme_registry,
)
from .holistic_rhs import (
    RhsEvaluation,
    rhs,
    rhs_function,
    nonlinear_advective,
    nonlinear_conservative,
    linear_symbol,
    spectral_radius,
    gamma_sweep,
)

__all__ = [
    'TermKind',
    'Misprint',
    'Transcription',
    'StencilTerm',
    'LINEAR_KINDS',
    'scheme_registry',
    'RhsEvaluation',
    'rhs',
    'rhs_function',
    'nonlinear_advective',
    'nonlinear_conservative',
    'linear_symbol',
    'spectral_radius',
    'gamma_sweep',
]
