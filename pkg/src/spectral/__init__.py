# Fourier pseudospectral reference solutions package

from .spectral_oracle import (
    SpectralConfig,
    SpectralDiagnostics,
    SpectralTrajectory,
    reference_solve,
    sample_at,
)

__all__ = [
    'SpectralConfig',
    'SpectralDiagnostics',
    'SpectralTrajectory',
    'reference_solve',
    'sample_at',
]
