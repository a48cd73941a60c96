"""Named check suites with machine-readable pass/fail summaries."""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Union

import numpy as np

from ..consistency.analytic_fields import mixed_field, sine_field
from ..consistency.consistency_checker import (
    NonlinearForm, Probe, alternative_order, observed_order,
)
from ..grid.grid_state import GridSpec, ModelParams, StateVector, TruncationLevel
from ..operators.operator_series import coth_half_series
from ..save_system import ResultWriter
from ..schemes.holistic_rhs import linear_symbol, nonlinear_conservative, rhs_function
from ..schemes.term_definitions import Transcription
from ..settings import ExperimentConfig
from .experiment import oracle_self_convergence, run_comparison

logger = logging.getLogger(__name__)

SAMPLES = 100
SEED = 20240601
REL_TOL = 1e-12
CONSISTENCY_LEVELS = (16, 32, 64)
ORDER_WINDOWS = {
    TruncationLevel.CONVENTIONAL: (1.8, 2.2),
    TruncationLevel.FIRST_CORRECTION: (3.8, 4.2),
}
ALTERNATIVE_WINDOW = (1.8, 2.2)
# Models whose nonlinear blocks are all quadratic in u.
QUADRATIC_LEVELS = (
    TruncationLevel.CONVENTIONAL,
    TruncationLevel.FIRST_CORRECTION,
    TruncationLevel.LOW_ORDER_EQ3,
)
AMPLITUDE_WINDOW = (1.8, 2.2)
ORACLE_SELF_CONVERGENCE = 1e-6


class SuiteKind(Enum):
    PROPERTIES = "properties"
    CONSISTENCY = "consistency"
    FIGURE1 = "figure1"


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: Dict[str, Any] = field(default_factory=dict)


@dataclass
class SuiteResult:
    kind: SuiteKind
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]

    @property
    def exit_status(self) -> int:
        return 0 if self.passed else 1

    def summary(self) -> Dict[str, Any]:
        return {
            "suite": self.kind.value,
            "passed": self.passed,
            "failures": self.failures,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks
            ],
        }


def _relative_gap(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(b)))))


def _random_states(rng: np.random.Generator, grid: GridSpec) -> List[np.ndarray]:
    return [rng.uniform(-1.0, 1.0, grid.m) for _ in range(SAMPLES)]


# ---- properties ---------------------------------------------------------------

def check_coefficients() -> CheckResult:
    expected = [Fraction(1), Fraction(1, 12), Fraction(-1, 720), Fraction(1, 30240)]
    got = [c.value for c in coth_half_series(6)]
    return CheckResult("coefficients", got == expected, {"got": [str(c) for c in got]})


def check_fixed_point(rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    grid = GridSpec(8)
    for _ in range(SAMPLES):
        c = rng.uniform(-10.0, 10.0)
        params = ModelParams(R=rng.uniform(0.0, 4.0), gamma=float(rng.choice([0.0, 0.5, 1.0])))
        for level in TruncationLevel:
            g = rhs_function(grid, params, level)(np.full(grid.m, c))
            worst = max(worst, float(np.max(np.abs(g))) / (1.0 + abs(c) ** 3))
    return CheckResult("fixed_point", worst <= 1e-12, {"worst_scaled_residual": worst})


def check_cross_equivalence(rng: np.random.Generator,
                            transcription: Transcription = Transcription()) -> CheckResult:
    grid = GridSpec(8)
    params = ModelParams(R=2.0, gamma=1.0)
    first = rhs_function(grid, params, TruncationLevel.FIRST_CORRECTION, transcription=transcription)
    eq3 = rhs_function(grid, params, TruncationLevel.LOW_ORDER_EQ3)
    worst = max(_relative_gap(first(u), eq3(u)) for u in _random_states(rng, grid))
    return CheckResult("first_matches_low_order", worst <= REL_TOL, {"worst_relative_gap": worst})


def check_equivariance(rng: np.random.Generator,
                       transcription: Transcription = Transcription()) -> CheckResult:
    grid = GridSpec(8)
    params = ModelParams(R=2.0, gamma=1.0)
    worst_shift = worst_reflect = 0.0
    for level in TruncationLevel:
        g = rhs_function(grid, params, level, transcription=transcription)
        for values in _random_states(rng, grid):
            u = StateVector(grid, values)
            gu = StateVector(grid, g(u.values))
            for s in (1, 3):
                worst_shift = max(worst_shift, _relative_gap(g(u.shift(s).values), gu.shift(s).values))
            worst_reflect = max(worst_reflect,
                                _relative_gap(g(u.reflect().values), gu.reflect().values))
    return CheckResult(
        "equivariance",
        worst_shift <= REL_TOL and worst_reflect <= REL_TOL,
        {"worst_translation_gap": worst_shift, "worst_reflection_gap": worst_reflect},
    )


def check_misprints_detected(rng: np.random.Generator) -> CheckResult:
    """Either printed form must break the low-order equality or the equivariance."""
    detail = {}
    for name, transcription in (("quadratic", Transcription(quadratic_corrected=False)),
                                ("cubic", Transcription(cubic_corrected=False))):
        equal = check_cross_equivalence(rng, transcription).passed
        symmetric = check_equivariance(rng, transcription).passed
        detail[name] = {"matches_low_order": equal, "equivariant": symmetric}
    passed = all(not (d["matches_low_order"] and d["equivariant"]) for d in detail.values())
    return CheckResult("printed_forms_detected", passed, detail)


def check_impulse_row() -> CheckResult:
    grid = GridSpec(11, 11.0)
    u = np.zeros(11)
    u[5] = 1.0
    g = rhs_function(grid, ModelParams(R=0.0, gamma=1.0), TruncationLevel.CONVENTIONAL)(u)
    expected = np.zeros(11)
    expected[3:8] = [-1.0, 4.0, -6.0, 4.0, -1.0]
    return CheckResult("impulse_row", bool(np.allclose(g, expected, rtol=0, atol=1e-12)),
                       {"row": [float(v) for v in g[3:8]]})


def check_telescoping(rng: np.random.Generator) -> CheckResult:
    grid = GridSpec(16)
    worst = max(abs(float(np.sum(nonlinear_conservative(StateVector(grid, u)))))
                for u in _random_states(rng, grid))
    return CheckResult("conservative_telescoping", worst <= 1e-12, {"worst_sum": worst})


def check_gravest_mode() -> CheckResult:
    rate = linear_symbol(1, ModelParams(R=2.0), GridSpec(64), TruncationLevel.CONVENTIONAL)
    return CheckResult("gravest_mode_grows", rate > 0 and abs(rate - 1.0) < 1e-2, {"rate": rate})


def properties_suite() -> SuiteResult:
    rng = np.random.default_rng(SEED)
    return SuiteResult(SuiteKind.PROPERTIES, [
        check_coefficients(),
        check_fixed_point(rng),
        check_cross_equivalence(rng),
        check_equivariance(rng),
        check_misprints_detected(rng),
        check_impulse_row(),
        check_telescoping(rng),
        check_gravest_mode(),
    ])


# ---- consistency --------------------------------------------------------------

def _within(value: float, window) -> bool:
    return math.isfinite(value) and window[0] <= value <= window[1]


def consistency_suite() -> SuiteResult:
    checks = []
    params = ModelParams(R=2.0, gamma=1.0)
    for level, window in ORDER_WINDOWS.items():
        estimate = observed_order(sine_field(), params, level, CONSISTENCY_LEVELS,
                                  Probe.LINEAR_GROWTH)
        checks.append(CheckResult(
            f"order_{level.value}_linear-R", _within(estimate.order, window),
            {"order": estimate.order, "window": list(window),
             "residuals": list(estimate.residuals), "m": list(estimate.m_values)},
        ))
    for level in QUADRATIC_LEVELS:
        estimate = observed_order(sine_field(), params, level, CONSISTENCY_LEVELS, Probe.NONLINEAR)
        scan = estimate.amplitude
        checks.append(CheckResult(
            f"amplitude_order_{level.value}_nonlinear", _within(scan.order, AMPLITUDE_WINDOW),
            {"order": scan.order, "window": list(AMPLITUDE_WINDOW), "m": scan.m,
             "amplitudes": list(scan.amplitudes), "residuals": list(scan.residuals)},
        ))
    for form in NonlinearForm:
        estimate = alternative_order(form, sine_field(), CONSISTENCY_LEVELS)
        checks.append(CheckResult(
            f"order_{form.value}", _within(estimate.order, ALTERNATIVE_WINDOW),
            {"order": estimate.order, "window": list(ALTERNATIVE_WINDOW)},
        ))
    for level in TruncationLevel:
        estimate = observed_order(mixed_field(), params, level, CONSISTENCY_LEVELS, Probe.FULL)
        residuals = list(estimate.residuals)
        checks.append(CheckResult(
            f"full_residual_decreases_{level.value}",
            all(b < a for a, b in zip(residuals, residuals[1:])),
            {"order": estimate.order, "residuals": residuals},
        ))
    return SuiteResult(SuiteKind.CONSISTENCY, checks)


# ---- comparison ---------------------------------------------------------------

def figure1_suite(out_dir: Union[str, Path, None] = None) -> SuiteResult:
    cfg = ExperimentConfig()
    report = run_comparison(cfg, out_dir)
    checks = [CheckResult("integrations_succeeded", report.succeeded,
                          {"failed": report.failed_schemes})]
    if not report.succeeded:
        return SuiteResult(SuiteKind.FIGURE1, checks)

    conventional = report.get(TruncationLevel.CONVENTIONAL)
    for level in (TruncationLevel.FIRST_CORRECTION, TruncationLevel.SECOND_CORRECTION):
        entry = report.get(level)
        checks.append(CheckResult(
            f"{level.value}_beats_conventional_l2", entry.max_l2 < conventional.max_l2,
            {"max_l2": entry.max_l2, "conventional_max_l2": conventional.max_l2},
        ))
        checks.append(CheckResult(
            f"{level.value}_beats_conventional_near_peak", entry.peak_linf < conventional.peak_linf,
            {"peak_linf": entry.peak_linf, "conventional_peak_linf": conventional.peak_linf},
        ))
    drift = oracle_self_convergence(cfg)
    checks.append(CheckResult("oracle_self_convergence", drift < ORACLE_SELF_CONVERGENCE,
                              {"max_linf_difference": drift}))
    return SuiteResult(SuiteKind.FIGURE1, checks)


SUITES: Dict[SuiteKind, Callable[..., SuiteResult]] = {
    SuiteKind.PROPERTIES: properties_suite,
    SuiteKind.CONSISTENCY: consistency_suite,
    SuiteKind.FIGURE1: figure1_suite,
}


def run_suite(kind: Union[str, SuiteKind], out_dir: Union[str, Path] = "results") -> int:
    """Run a named suite, write suite_<kind>.json into out_dir and return the exit status."""
    kind = SuiteKind(kind)
    logger.info(f"Running {kind.value} suite")
    if kind == SuiteKind.FIGURE1:
        result = figure1_suite(out_dir)
    else:
        result = SUITES[kind]()

    for check in result.checks:
        if check.passed:
            logger.info(f"{kind.value}: {check.name} passed")
        else:
            logger.error(f"{kind.value}: {check.name} FAILED {check.detail}")

    if not ResultWriter(out_dir).write_suite(kind.value, result.summary()):
        return 1
    return result.exit_status
