"""Adaptive explicit time integration of semi-discrete models."""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence

import numpy as np

from ..grid.grid_state import StateVector
from .step_control import PIController, stability_limited_step
from .tableau import DORMAND_PRINCE, EmbeddedTableau

logger = logging.getLogger(__name__)

RhsFunction = Callable[[np.ndarray], np.ndarray]


class IntegrationStatus(Enum):
    """Outcome of an integration run."""
    SUCCESS = "success"
    MAX_STEPS = "max_steps"
    STEP_UNDERFLOW = "step_underflow"


@dataclass(frozen=True)
class IntegrationConfig:
    """Time span, tolerances and output times of one integration."""
    t_start: float
    t_end: float
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_steps: int = 100000
    output_times: Sequence[float] = ()
    initial_step: Optional[float] = None
    max_step: Optional[float] = None
    # Estimate of the fastest linear rate |lambda|; caps the step for stability.
    stability_rate: Optional[float] = None

    def __post_init__(self):
        if not self.t_end > self.t_start:
            raise ValueError(f"t_end ({self.t_end}) must exceed t_start ({self.t_start})")
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("Tolerances must be positive")
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")
        if self.initial_step is not None and self.initial_step <= 0:
            raise ValueError("initial_step must be positive")
        if self.max_step is not None and self.max_step <= 0:
            raise ValueError("max_step must be positive")

        times = tuple(float(t) for t in self.output_times) or (float(self.t_end),)
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("output_times must be strictly increasing")
        if times[0] < self.t_start or times[-1] > self.t_end:
            raise ValueError(
                f"output_times must lie in [{self.t_start}, {self.t_end}]"
            )
        object.__setattr__(self, "output_times", times)

    def with_tolerances(self, rel_tol: float, abs_tol: float) -> "IntegrationConfig":
        return IntegrationConfig(
            t_start=self.t_start, t_end=self.t_end, rel_tol=rel_tol, abs_tol=abs_tol,
            max_steps=self.max_steps, output_times=self.output_times,
            initial_step=self.initial_step, max_step=self.max_step,
            stability_rate=self.stability_rate,
        )


@dataclass
class Trajectory:
    """States at the output times plus the cost and outcome of the run."""
    times: List[float] = field(default_factory=list)
    states: List[StateVector] = field(default_factory=list)
    accepted_steps: int = 0
    rejected_steps: int = 0
    rhs_evaluations: int = 0
    status: IntegrationStatus = IntegrationStatus.SUCCESS

    @property
    def succeeded(self) -> bool:
        return self.status == IntegrationStatus.SUCCESS

    @property
    def final_state(self) -> StateVector:
        return self.states[-1]

    def append(self, t: float, state: StateVector):
        if self.times and t <= self.times[-1]:
            raise ValueError(f"Trajectory times must increase: {t} after {self.times[-1]}")
        if self.states and state.grid != self.states[0].grid:
            raise ValueError("All trajectory states must share one grid")
        self.times.append(t)
        self.states.append(state)

    def as_array(self) -> np.ndarray:
        """States stacked as (n_times, m)."""
        return np.array([s.values for s in self.states])


def _scaled_max(e: np.ndarray, scale: np.ndarray) -> float:
    return float(np.max(np.abs(e) / scale))


def _initial_step(rhs_fn: RhsFunction, y0: np.ndarray, f0: np.ndarray, order: int,
                  rel_tol: float, abs_tol: float) -> float:
    """Curvature-based starting step from two trial evaluations."""
    scale = abs_tol + np.abs(y0) * rel_tol
    d0 = float(np.sqrt(np.mean((y0 / scale) ** 2)))
    d1 = float(np.sqrt(np.mean((f0 / scale) ** 2)))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1

    f1 = rhs_fn(y0 + h0 * f0)
    d2 = float(np.sqrt(np.mean(((f1 - f0) / scale) ** 2))) / h0
    if not math.isfinite(d2):
        return h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1.0 / (order + 1))
    return min(100 * h0, h1)


def integrate(rhs_fn: RhsFunction, u0: StateVector, cfg: IntegrationConfig,
              tableau: EmbeddedTableau = DORMAND_PRINCE) -> Trajectory:
    """Advance du/dt = rhs_fn(u) from u0, reporting states at cfg.output_times.

    Output states come from the tableau's continuous extension, so output
    times never shorten a step. A trial step producing non-finite values is
    rejected and halved; the run stops with STEP_UNDERFLOW once the step
    falls below rounding level, or MAX_STEPS after cfg.max_steps attempts.
    """
    grid = u0.grid
    trajectory = Trajectory()
    controller = PIController(tableau.error_order)

    t = float(cfg.t_start)
    y = np.array(u0.values, dtype=float)
    f = rhs_fn(y)
    trajectory.rhs_evaluations += 1

    outputs = list(cfg.output_times)
    next_output = 0
    while next_output < len(outputs) and outputs[next_output] <= t:
        trajectory.append(outputs[next_output], StateVector(grid, y))
        next_output += 1

    step_cap = min(
        cfg.max_step if cfg.max_step is not None else math.inf,
        stability_limited_step(cfg.stability_rate, tableau.real_stability_boundary),
    )
    if cfg.initial_step is not None:
        dt = cfg.initial_step
    else:
        dt = _initial_step(rhs_fn, y, f, tableau.error_order, cfg.rel_tol, cfg.abs_tol)
        trajectory.rhs_evaluations += 1
    dt = min(dt, step_cap)

    K = np.empty((tableau.n_stages, y.size))
    attempts = 0
    while t < cfg.t_end:
        if attempts >= cfg.max_steps:
            trajectory.status = IntegrationStatus.MAX_STEPS
            logger.warning(f"Integration stopped at t={t:.6g} after {attempts} step attempts")
            break
        attempts += 1

        min_step = 16 * np.finfo(float).eps * max(abs(t), 1.0)
        if dt < min_step:
            trajectory.status = IntegrationStatus.STEP_UNDERFLOW
            logger.warning(f"Step size underflow at t={t:.6g} (dt={dt:.3g})")
            break

        last = t + dt >= cfg.t_end
        if last:
            dt = cfg.t_end - t

        K[0] = f
        with np.errstate(over="ignore", invalid="ignore"):
            for s in range(1, tableau.n_stages):
                stage = y + dt * (tableau.A[s, :s] @ K[:s])
                K[s] = rhs_fn(stage)
            y_new = y + dt * (tableau.b @ K)
            error_estimate = dt * (tableau.E @ K)
        trajectory.rhs_evaluations += tableau.n_stages - 1

        if not (np.all(np.isfinite(y_new)) and np.all(np.isfinite(error_estimate))):
            trajectory.rejected_steps += 1
            logger.debug(f"Non-finite trial step at t={t:.6g}, halving dt={dt:.3g}")
            dt *= 0.5
            continue

        scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        error = _scaled_max(error_estimate, scale)
        accepted = error <= 1.0
        factor = controller.propose(error, accepted)

        if not accepted:
            trajectory.rejected_steps += 1
            dt *= factor
            continue

        t_new = cfg.t_end if last else t + dt
        # FSAL: the last stage is the derivative at the new point.
        if tableau.c[-1] == 1.0 and tableau.b[-1] == 0.0:
            f_new = K[-1].copy()
        else:
            f_new = rhs_fn(y_new)
            trajectory.rhs_evaluations += 1

        while next_output < len(outputs) and outputs[next_output] <= t_new:
            t_out = outputs[next_output]
            if t_out == t_new:
                y_out = y_new
            else:
                theta = (t_out - t) / dt
                powers = np.cumprod(np.full(tableau.P.shape[1], theta))
                y_out = y + dt * ((K.T @ tableau.P) @ powers)
            trajectory.append(t_out, StateVector(grid, y_out))
            next_output += 1

        trajectory.accepted_steps += 1
        t, y, f = t_new, y_new, f_new
        dt = min(dt * factor, step_cap)

    logger.debug(
        f"Integration {trajectory.status.value}: {trajectory.accepted_steps} accepted, "
        f"{trajectory.rejected_steps} rejected, {trajectory.rhs_evaluations} evaluations"
    )
    return trajectory
