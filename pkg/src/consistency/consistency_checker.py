"""Observed truncation orders of the discrete models against the continuum."""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..grid.grid_state import GridSpec, ModelParams, StateVector, TruncationLevel
from ..schemes.holistic_rhs import nonlinear_advective, nonlinear_conservative, rhs_function
from ..schemes.term_definitions import TermKind
from .analytic_fields import AnalyticField

logger = logging.getLogger(__name__)

# Residuals at or below this are treated as exact (field in the stencil null space).
ZERO_RESIDUAL = 1e-13
MIN_LEVELS = 3
FIT_LEVELS = 3
DEFAULT_AMPLITUDES = (1.0, 0.5, 0.25)
ROW_HEADER = ("scheme", "probe", "m", "residual", "fitted_order", "amplitude_order")


class Probe(Enum):
    """Which blocks of a model are compared against the continuum."""
    LINEAR_GROWTH = "linear-R"
    HYPERDIFFUSION = "hyperdiffusion"
    NONLINEAR = "nonlinear"
    FULL = "full"

    @property
    def kinds(self) -> Tuple[TermKind, ...]:
        if self == Probe.LINEAR_GROWTH:
            return (TermKind.LINEAR_GROWTH,)
        if self == Probe.HYPERDIFFUSION:
            return (TermKind.HYPERDIFFUSION,)
        if self == Probe.NONLINEAR:
            return (TermKind.NONLINEAR,)
        return tuple(TermKind)

    @property
    def scans_amplitude(self) -> bool:
        """Probes containing the nonlinear blocks also get an amplitude scan."""
        return self in (Probe.NONLINEAR, Probe.FULL)

    def exact(self, field_: AnalyticField, x: np.ndarray, R: float) -> np.ndarray:
        if self == Probe.LINEAR_GROWTH:
            return field_.continuum_growth(x, R)
        if self == Probe.HYPERDIFFUSION:
            return field_.continuum_hyperdiffusion(x)
        if self == Probe.NONLINEAR:
            return field_.continuum_advection(x)
        return field_.continuum_rhs(x, R)


class NonlinearForm(Enum):
    """The two standard second-order discretisations of u u_x."""
    ADVECTIVE = "advective"
    CONSERVATIVE = "conservative"


_FORMS: Dict[NonlinearForm, Callable] = {
    NonlinearForm.ADVECTIVE: nonlinear_advective,
    NonlinearForm.CONSERVATIVE: nonlinear_conservative,
}


@dataclass(frozen=True)
class AmplitudeEstimate:
    """Residuals over field amplitudes at a fixed grid and the fitted slope in a."""
    scheme: str
    probe: str
    m: int
    amplitudes: Tuple[float, ...]
    residuals: Tuple[float, ...]
    order: float


@dataclass(frozen=True)
class OrderEstimate:
    """Residuals over a grid sequence and the fitted slope in h.

    Probes with nonlinear blocks also carry the amplitude scan at the coarsest grid.
    """
    scheme: str
    probe: str
    m_values: Tuple[int, ...]
    residuals: Tuple[float, ...]
    order: float
    excluded: Tuple[int, ...] = field(default_factory=tuple)
    amplitude: Optional[AmplitudeEstimate] = None

    def __post_init__(self):
        if len(self.m_values) < MIN_LEVELS:
            raise ValueError(f"Need at least {MIN_LEVELS} grid levels, got {len(self.m_values)}")
        if len(self.residuals) != len(self.m_values):
            raise ValueError("One residual per grid level")

    @property
    def fitted(self) -> bool:
        return math.isfinite(self.order)

    @property
    def amplitude_order(self) -> float:
        return self.amplitude.order if self.amplitude is not None else math.nan

    def rows(self) -> List[Tuple[str, str, int, float, float, float]]:
        """CSV rows in ROW_HEADER order."""
        return [(self.scheme, self.probe, m, r, self.order, self.amplitude_order)
                for m, r in zip(self.m_values, self.residuals)]


def fit_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log(ys) against log(xs)."""
    if len(xs) < 2:
        return math.nan
    slope, _ = np.polyfit(np.log(np.asarray(xs)), np.log(np.asarray(ys)), 1)
    return float(slope)


def _validate_levels(m_list: Sequence[int]) -> Tuple[int, ...]:
    m_values = tuple(int(m) for m in m_list)
    if len(m_values) < MIN_LEVELS:
        raise ValueError(f"Need at least {MIN_LEVELS} grid levels, got {len(m_values)}")
    if any(b <= a for a, b in zip(m_values, m_values[1:])):
        raise ValueError(f"Grid sizes must increase: {m_values}")
    return m_values


def _estimate(label: str, probe: str, L: float, m_values: Tuple[int, ...],
              residuals: List[float]) -> OrderEstimate:
    usable = [(L / m, r) for m, r in zip(m_values, residuals) if r > ZERO_RESIDUAL]
    excluded = tuple(m for m, r in zip(m_values, residuals) if r <= ZERO_RESIDUAL)
    if excluded:
        logger.warning(f"{label}/{probe}: zero residual at m={list(excluded)}, levels excluded")

    finest = usable[-FIT_LEVELS:]
    order = fit_slope([h for h, _ in finest], [r for _, r in finest])
    return OrderEstimate(label, probe, m_values, tuple(residuals), order, excluded)


def residual(field_: AnalyticField, p: ModelParams, level: TruncationLevel, m: int,
             probe: Probe = Probe.FULL, L: float = 2 * math.pi) -> float:
    """L-infinity distance between the discrete blocks and the continuum at the nodes."""
    grid = GridSpec(m, L)
    x = grid.nodes
    values = StateVector.from_function(grid, field_.u).values
    discrete = rhs_function(grid, p, level, probe.kinds)(values)
    return float(np.max(np.abs(discrete - probe.exact(field_, x, p.R))))


def observed_order(field_: AnalyticField, p: ModelParams, level: TruncationLevel,
                   m_list: Sequence[int], probe: Probe = Probe.FULL,
                   L: float = 2 * math.pi,
                   amplitudes: Sequence[float] = DEFAULT_AMPLITUDES) -> OrderEstimate:
    """Residual at each m and the slope fitted over the finest three usable grids.

    For probes with nonlinear blocks the field amplitude is scanned at the
    coarsest grid as well, so O(h^p) and O(|u|^q) contributions can be told apart.
    """
    m_values = _validate_levels(m_list)
    residuals = [residual(field_, p, level, m, probe, L) for m in m_values]
    estimate = _estimate(level.value, probe.value, L, m_values, residuals)
    if not probe.scans_amplitude:
        return estimate
    scan = amplitude_order(field_, p, level, m_values[0], amplitudes, probe, L)
    logger.info(f"{level.value}/{probe.value}: order {estimate.order:.3f} in h, "
                f"{scan.order:.3f} in amplitude at m={scan.m}")
    return replace(estimate, amplitude=scan)


def amplitude_order(field_: AnalyticField, p: ModelParams, level: TruncationLevel, m: int,
                    amplitudes: Sequence[float] = DEFAULT_AMPLITUDES,
                    probe: Probe = Probe.FULL, L: float = 2 * math.pi) -> AmplitudeEstimate:
    """Separate O(|u|^q) from O(h^p): residual at fixed m as the amplitude shrinks."""
    amplitudes = tuple(float(a) for a in amplitudes)
    if len(amplitudes) < 2 or any(a <= 0 for a in amplitudes):
        raise ValueError("Need at least two positive amplitudes")
    residuals = tuple(residual(field_.scaled(a), p, level, m, probe, L) for a in amplitudes)
    usable = [(a, r) for a, r in zip(amplitudes, residuals) if r > ZERO_RESIDUAL]
    order = fit_slope([a for a, _ in usable], [r for _, r in usable])
    return AmplitudeEstimate(level.value, probe.value, m, amplitudes, residuals, order)


def alternative_order(form: NonlinearForm, field_: AnalyticField, m_list: Sequence[int],
                      L: float = 2 * math.pi) -> OrderEstimate:
    """Order of one standalone discretisation of u u_x."""
    m_values = _validate_levels(m_list)
    residuals = []
    for m in m_values:
        grid = GridSpec(m, L)
        u = StateVector.from_function(grid, field_.u)
        exact = field_.u(grid.nodes) * field_.u_x(grid.nodes)
        residuals.append(float(np.max(np.abs(_FORMS[form](u) - exact))))
    return _estimate(form.value, "u*u_x", L, m_values, residuals)
