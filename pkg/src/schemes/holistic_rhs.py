"""Discrete right-hand sides du_j/dt of the Kuramoto-Sivashinsky models.

Every model is a sum of stencil blocks from ``scheme_registry``. Blocks are
evaluated by gathering wrapped neighbours u_{j+k}; no matrices are assembled.
"""

from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..grid.grid_state import GridSpec, ModelParams, StateVector, TruncationLevel
from .term_definitions import (
    LINEAR_KINDS,
    StencilTerm,
    TermKind,
    Transcription,
    scheme_registry,
)

STENCIL_REACH = 2

RhsFunction = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class RhsEvaluation:
    """Tendency g_j of one model evaluated on one state."""
    tendency: StateVector
    level: TruncationLevel
    params: ModelParams


def _gather_offsets(grid: GridSpec) -> dict:
    return {k: grid.index(k) for k in range(-STENCIL_REACH, STENCIL_REACH + 1)}


def _evaluate(values: np.ndarray, grid: GridSpec, params: ModelParams,
              terms: Sequence[StencilTerm], transcription: Transcription,
              offsets: dict) -> np.ndarray:
    gathered = {}

    def gather(k: int) -> np.ndarray:
        if k not in gathered:
            gathered[k] = values[offsets[k]]
        return gathered[k]

    tendency = np.zeros(grid.m)
    for term in terms:
        scale = term.factor(params.R, params.gamma, grid.h)
        if scale != 0.0:
            tendency += scale * term.apply(gather, transcription)
    return tendency


def rhs_function(grid: GridSpec, params: ModelParams, level: TruncationLevel,
                 kinds: Optional[Iterable[TermKind]] = None,
                 transcription: Transcription = Transcription()) -> RhsFunction:
    """Array-level closure values -> tendency, as consumed by the integrator."""
    terms = scheme_registry.get_terms(level, kinds)
    offsets = _gather_offsets(grid)

    def evaluate(values: np.ndarray) -> np.ndarray:
        return _evaluate(values, grid, params, terms, transcription, offsets)

    return evaluate


def rhs(u: StateVector, p: ModelParams, level: TruncationLevel,
        kinds: Optional[Iterable[TermKind]] = None,
        transcription: Transcription = Transcription()) -> RhsEvaluation:
    """Evaluate du_j/dt for the chosen truncation level.

    Args:
        u: nodal state.
        p: R and gamma.
        level: which model to evaluate.
        kinds: restrict to these block kinds (all blocks when None).
        transcription: printed or corrected form of the misprinted blocks.
    """
    tendency = rhs_function(u.grid, p, level, kinds, transcription)(u.values)
    return RhsEvaluation(StateVector(u.grid, tendency), level, p)


def _check_grid(u: StateVector, grid: Optional[GridSpec]) -> GridSpec:
    if grid is not None and grid != u.grid:
        raise ValueError(f"State lives on {u.grid}, not {grid}")
    return u.grid


def nonlinear_advective(u: StateVector, grid: Optional[GridSpec] = None) -> np.ndarray:
    """u_j (u_{j+1} - u_{j-1}) / 2h."""
    grid = _check_grid(u, grid)
    v = u.values
    return v * (v[grid.index(1)] - v[grid.index(-1)]) / (2 * grid.h)


def nonlinear_conservative(u: StateVector, grid: Optional[GridSpec] = None) -> np.ndarray:
    """(u_{j+1}^2 - u_{j-1}^2) / 4h; sums to zero over the periodic ring."""
    grid = _check_grid(u, grid)
    sq = u.values ** 2
    return (sq[grid.index(1)] - sq[grid.index(-1)]) / (4 * grid.h)


def linear_symbol(k: int, p: ModelParams, grid: GridSpec, level: TruncationLevel) -> float:
    """Growth rate of the linearised model on the mode cos(2 pi k x / L).

    The linear blocks are symmetric circulant stencils, so the mode is an
    eigenvector and the rate is the tendency at x_0 = 0 where the mode is 1.
    """
    if int(k) != k or not 0 <= k <= grid.m / 2:
        raise ValueError(f"Wavenumber must be an integer in [0, {grid.m / 2}], got {k}")
    mode = np.cos(2 * np.pi * k * grid.nodes / grid.L)
    tendency = rhs_function(grid, p, level, LINEAR_KINDS)(mode)
    return float(tendency[0])


def spectral_radius(p: ModelParams, grid: GridSpec, level: TruncationLevel) -> float:
    """Largest |linear_symbol| over the resolvable wavenumbers."""
    return max(abs(linear_symbol(k, p, grid, level)) for k in range(grid.m // 2 + 1))


def gamma_sweep(k: int, p: ModelParams, grid: GridSpec, level: TruncationLevel,
                gammas: Sequence[float]) -> List[Tuple[float, float]]:
    """Linear growth rate of mode k as the coupling gamma runs from 0 towards 1."""
    return [
        (float(gamma), linear_symbol(k, ModelParams(R=p.R, gamma=gamma), grid, level))
        for gamma in gammas
    ]
