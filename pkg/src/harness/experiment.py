"""Side-by-side integration of the discrete models against the spectral reference."""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from ..grid.grid_state import GridSpec, ModelParams, NormKind, StateVector, TruncationLevel, norm
from ..integrator.stiff_integrator import IntegrationConfig, IntegrationStatus, Trajectory, integrate
from ..schemes.holistic_rhs import rhs_function, spectral_radius
from ..save_system import ResultWriter
from ..settings import ExperimentConfig
from ..spectral.spectral_oracle import SpectralConfig, SpectralTrajectory, reference_solve, sample_at
from .initial_conditions import initial_condition_registry

logger = logging.getLogger(__name__)

ORACLE = "oracle"
PEAK_HALF_WIDTH = 1


@dataclass
class SchemeErrors:
    """Errors of one model against the sampled reference at each output time."""
    scheme: str
    times: List[float]
    l2: List[float]
    linf: List[float]
    peak_linf: float
    status: IntegrationStatus
    complete: bool
    accepted_steps: int = 0
    rejected_steps: int = 0
    rhs_evaluations: int = 0

    def __post_init__(self):
        if not len(self.times) == len(self.l2) == len(self.linf):
            raise ValueError("One L2 and one Linf error per output time")
        if any(e < 0 for e in self.l2 + self.linf) or self.peak_linf < 0:
            raise ValueError(f"Errors of {self.scheme} must be nonnegative")

    @property
    def failed(self) -> bool:
        return self.status != IntegrationStatus.SUCCESS or not self.complete

    @property
    def max_l2(self) -> float:
        return max(self.l2) if self.l2 else math.nan

    @property
    def max_linf(self) -> float:
        return max(self.linf) if self.linf else math.nan

    def rows(self) -> List[Tuple[float, str, float, float]]:
        """CSV rows: t, scheme, L2, Linf."""
        return [(t, self.scheme, a, b) for t, a, b in zip(self.times, self.l2, self.linf)]

    def summary(self) -> Dict[str, Any]:
        return {
            "scheme": self.scheme,
            "status": self.status.value,
            "failed": self.failed,
            "max_l2": self.max_l2,
            "max_linf": self.max_linf,
            "peak_linf": self.peak_linf,
            "accepted_steps": self.accepted_steps,
            "rejected_steps": self.rejected_steps,
            "rhs_evaluations": self.rhs_evaluations,
        }


@dataclass
class ErrorReport:
    """Per-scheme errors plus the metadata of the run that produced them."""
    config_hash: str
    rel_tol: float
    abs_tol: float
    oracle_n: int
    oracle_status: IntegrationStatus
    oracle_resolved: bool
    oracle_top_energy_fraction: float
    oracle_imaginary_residue: float
    oracle_accepted_steps: int
    schemes: List[SchemeErrors] = field(default_factory=list)
    # Not written to any output file: it is the one non-reproducible quantity.
    wall_time: float = 0.0
    fields: Dict[str, Trajectory] = field(default_factory=dict, repr=False)
    files_written: bool = True

    def __post_init__(self):
        names = [s.scheme for s in self.schemes]
        if len(set(names)) != len(names):
            raise ValueError(f"Every scheme must appear exactly once, got {names}")

    def get(self, scheme: Union[str, TruncationLevel]) -> SchemeErrors:
        name = scheme.value if isinstance(scheme, TruncationLevel) else scheme
        for entry in self.schemes:
            if entry.scheme == name:
                return entry
        raise KeyError(f"Scheme not in report: {name}")

    @property
    def failed_schemes(self) -> List[str]:
        return [s.scheme for s in self.schemes if s.failed]

    @property
    def succeeded(self) -> bool:
        return (self.oracle_status == IntegrationStatus.SUCCESS and not self.failed_schemes
                and self.files_written)

    @property
    def exit_status(self) -> int:
        return 0 if self.succeeded else 1

    def error_rows(self) -> List[Tuple[float, str, float, float]]:
        rows = []
        for entry in self.schemes:
            rows.extend(entry.rows())
        rows.sort(key=lambda row: row[0])
        return rows

    def summary(self) -> Dict[str, Any]:
        return {
            "config_hash": self.config_hash,
            "rel_tol": self.rel_tol,
            "abs_tol": self.abs_tol,
            "oracle": {
                "N": self.oracle_n,
                "status": self.oracle_status.value,
                "resolved": self.oracle_resolved,
                "top_energy_fraction": self.oracle_top_energy_fraction,
                "imaginary_residue": self.oracle_imaginary_residue,
                "accepted_steps": self.oracle_accepted_steps,
            },
            "schemes": [entry.summary() for entry in self.schemes],
            "succeeded": self.succeeded,
        }


def oracle_config(cfg: ExperimentConfig, N: Optional[int] = None) -> SpectralConfig:
    return SpectralConfig(
        N=N or cfg.oracle_n,
        R=cfg.R,
        L=cfg.L,
        t_end=cfg.t_end,
        rel_tol=cfg.oracle_rel_tol,
        abs_tol=cfg.oracle_abs_tol,
        output_times=cfg.resolved_output_times(),
    )


def integration_config(cfg: ExperimentConfig, level: TruncationLevel) -> IntegrationConfig:
    grid = GridSpec(cfg.m, cfg.L)
    return IntegrationConfig(
        t_start=0.0,
        t_end=cfg.t_end,
        rel_tol=cfg.rel_tol,
        abs_tol=cfg.abs_tol,
        output_times=cfg.resolved_output_times(),
        stability_rate=spectral_radius(ModelParams(cfg.R, cfg.gamma), grid, level),
    )


def integrate_scheme(cfg: ExperimentConfig, level: TruncationLevel) -> Trajectory:
    """Integrate one discrete model from the configured initial condition."""
    grid = GridSpec(cfg.m, cfg.L)
    profile = initial_condition_registry.build(cfg.ic, cfg.L)
    u0 = StateVector.from_function(grid, profile)
    rhs_fn = rhs_function(grid, ModelParams(cfg.R, cfg.gamma), level)
    trajectory = integrate(rhs_fn, u0, integration_config(cfg, level))
    logger.info(
        f"{level.value}: {trajectory.status.value} after {trajectory.accepted_steps} steps "
        f"({trajectory.rejected_steps} rejected)"
    )
    return trajectory


def solve_reference(cfg: ExperimentConfig, N: Optional[int] = None) -> SpectralTrajectory:
    profile = initial_condition_registry.build(cfg.ic, cfg.L)
    return reference_solve(profile, oracle_config(cfg, N))


def peak_region_error(model: Trajectory, reference: Trajectory,
                      half_width: int = PEAK_HALF_WIDTH) -> float:
    """Max over t of the Linf error on the nodes around the reference maximum."""
    worst = 0.0
    for state, ref in zip(model.states, reference.states):
        m = ref.grid.m
        peak = int(np.argmax(ref.values))
        region = [(peak + k) % m for k in range(-half_width, half_width + 1)]
        worst = max(worst, float(np.max(np.abs(state.values[region] - ref.values[region]))))
    return worst


def scheme_errors(level: TruncationLevel, model: Trajectory, reference: Trajectory,
                  expected_outputs: int) -> SchemeErrors:
    count = min(len(model.states), len(reference.states))
    times, l2, linf = [], [], []
    for state, ref, t in zip(model.states[:count], reference.states[:count], model.times[:count]):
        diff = state - ref
        times.append(t)
        l2.append(norm(diff, NormKind.L2))
        linf.append(norm(diff, NormKind.LINF))
    return SchemeErrors(
        scheme=level.value,
        times=times,
        l2=l2,
        linf=linf,
        peak_linf=peak_region_error(model, reference),
        status=model.status,
        complete=len(model.states) == expected_outputs,
        accepted_steps=model.accepted_steps,
        rejected_steps=model.rejected_steps,
        rhs_evaluations=model.rhs_evaluations,
    )


def run_comparison(cfg: ExperimentConfig,
                   out_dir: Optional[Union[str, Path]] = None) -> ErrorReport:
    """Integrate every configured scheme and the reference, then measure the errors.

    Schemes run concurrently; results keep the configured scheme order. When
    out_dir is given, the field, error, report and plot files are written
    there once every integration has finished.
    """
    started = time.perf_counter()
    grid = GridSpec(cfg.m, cfg.L)
    levels = cfg.levels
    expected = len(cfg.resolved_output_times())
    logger.info(f"Comparison of {[lv.value for lv in levels]} on m={cfg.m}, R={cfg.R}, gamma={cfg.gamma}")

    with ThreadPoolExecutor(max_workers=len(levels) + 1) as pool:
        oracle_future = pool.submit(solve_reference, cfg)
        futures = [pool.submit(integrate_scheme, cfg, level) for level in levels]
        models = [future.result() for future in futures]
        oracle = oracle_future.result()

    sampled = sample_at(oracle, grid)
    report = ErrorReport(
        config_hash=cfg.config_hash(),
        rel_tol=cfg.rel_tol,
        abs_tol=cfg.abs_tol,
        oracle_n=cfg.oracle_n,
        oracle_status=oracle.status,
        oracle_resolved=oracle.diagnostics.resolved,
        oracle_top_energy_fraction=oracle.diagnostics.max_top_energy_fraction,
        oracle_imaginary_residue=oracle.diagnostics.max_imaginary_residue,
        oracle_accepted_steps=oracle.accepted_steps,
        schemes=[scheme_errors(level, model, sampled, expected)
                 for level, model in zip(levels, models)],
    )
    report.fields = {level.value: model for level, model in zip(levels, models)}
    report.fields[ORACLE] = sampled
    report.wall_time = time.perf_counter() - started

    for entry in report.schemes:
        if entry.failed:
            logger.error(f"Scheme {entry.scheme} failed: {entry.status.value}")
        else:
            logger.info(f"{entry.scheme}: max L2 {entry.max_l2:.4g}, max Linf {entry.max_linf:.4g}")
    if report.oracle_status != IntegrationStatus.SUCCESS:
        logger.error(f"Reference solve failed: {report.oracle_status.value}")
    logger.info(f"Comparison finished in {report.wall_time:.2f}s")

    if out_dir is not None:
        report.files_written = ResultWriter(out_dir).write_comparison(cfg, report)
        if not report.files_written:
            logger.error(f"Could not write all results to {out_dir}")
    return report


def oracle_self_convergence(cfg: ExperimentConfig) -> float:
    """Max Linf difference at the model nodes between oracle_n and 2*oracle_n."""
    grid = GridSpec(cfg.m, cfg.L)
    coarse = sample_at(solve_reference(cfg), grid)
    fine = sample_at(solve_reference(cfg, 2 * cfg.oracle_n), grid)
    return max(norm(a - b, NormKind.LINF) for a, b in zip(coarse.states, fine.states))
