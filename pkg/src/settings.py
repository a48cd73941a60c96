import hashlib
import json
import logging
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional

from .grid.grid_state import MIN_NODES, TruncationLevel

logger = logging.getLogger(__name__)

DEFAULT_OUTPUT_COUNT = 51
DEFAULT_SCHEMES = [level.value for level in TruncationLevel]
IC_KINDS = ("sine", "fourier", "seeded-random")


class ConfigurationError(ValueError):
    """A configuration file or override that cannot describe an experiment."""


@dataclass
class InitialConditionSpec:
    """Named initial-condition family and its parameters."""
    kind: str = "sine"
    amplitude: float = 10.0
    modes: List[List[float]] = field(default_factory=list)  # [k, amplitude, phase]
    seed: int = 0
    cutoff: int = 3

    def __post_init__(self):
        if self.kind not in IC_KINDS:
            raise ConfigurationError(f"Unknown initial condition '{self.kind}', expected one of {IC_KINDS}")
        self.amplitude = float(self.amplitude)
        self.modes = [[float(v) for v in mode] for mode in self.modes]
        if any(len(mode) != 3 for mode in self.modes):
            raise ConfigurationError("Fourier modes must be [k, amplitude, phase] triples")
        if self.kind == "fourier" and not self.modes:
            raise ConfigurationError("A fourier initial condition needs at least one mode")
        if any(mode[0] != int(mode[0]) or mode[0] < 0 for mode in self.modes):
            raise ConfigurationError("Fourier mode wavenumbers must be non-negative integers")
        if int(self.seed) != self.seed or int(self.cutoff) != self.cutoff or self.cutoff < 1:
            raise ConfigurationError("seed must be an integer and cutoff a positive integer")
        self.seed = int(self.seed)
        self.cutoff = int(self.cutoff)


@dataclass
class ExperimentConfig:
    """Everything that determines a comparison run.

    Defaults are the reference comparison: R = 2, m = 8, u(x, 0) = 10 sin x.
    """
    R: float = 2.0
    m: int = 8
    L: float = 2 * math.pi
    ic: InitialConditionSpec = field(default_factory=InitialConditionSpec)
    t_end: float = 1.0
    output_times: Optional[List[float]] = None  # None: DEFAULT_OUTPUT_COUNT uniform in [0, t_end]
    schemes: List[str] = field(default_factory=lambda: list(DEFAULT_SCHEMES))
    gamma: float = 1.0
    oracle_n: int = 128
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    oracle_rel_tol: float = 1e-10
    oracle_abs_tol: float = 1e-12
    contour_interval: float = 3.0
    plot_script: bool = True

    def __post_init__(self):
        if isinstance(self.ic, dict):
            self.ic = _build(InitialConditionSpec, self.ic, "ic")
        for name in ("R", "L", "t_end", "gamma", "rel_tol", "abs_tol",
                     "oracle_rel_tol", "oracle_abs_tol", "contour_interval"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ConfigurationError(f"{name} must be a finite number, got {value!r}")
            setattr(self, name, float(value))
        for name in ("m", "oracle_n"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise ConfigurationError(f"{name} must be an integer, got {value!r}")
            setattr(self, name, int(value))

        if self.m < MIN_NODES:
            raise ConfigurationError(f"m must be at least {MIN_NODES}, got {self.m}")
        if self.L <= 0 or self.t_end <= 0:
            raise ConfigurationError("L and t_end must be positive")
        if not 0.0 <= self.gamma <= 1.0:
            raise ConfigurationError(f"gamma must lie in [0, 1], got {self.gamma}")
        if min(self.rel_tol, self.abs_tol, self.oracle_rel_tol, self.oracle_abs_tol) <= 0:
            raise ConfigurationError("Tolerances must be positive")
        if self.oracle_n < 64 or self.oracle_n & (self.oracle_n - 1):
            raise ConfigurationError(f"oracle_n must be a power of two >= 64, got {self.oracle_n}")
        if self.oracle_n < 4 * self.m:
            raise ConfigurationError(f"oracle_n must be at least 4*m = {4 * self.m}")
        if self.contour_interval <= 0:
            raise ConfigurationError("contour_interval must be positive")

        if not self.schemes:
            raise ConfigurationError("At least one scheme is required")
        for name in self.schemes:
            try:
                TruncationLevel.from_name(name)
            except KeyError as e:
                raise ConfigurationError(str(e)) from e
        if len(set(self.schemes)) != len(self.schemes):
            raise ConfigurationError(f"Duplicate schemes in {self.schemes}")
        self.schemes = [TruncationLevel.from_name(name).value for name in self.schemes]

        if self.output_times is not None:
            self.output_times = [float(t) for t in self.output_times]
            times = self.output_times
            if not times or any(b <= a for a, b in zip(times, times[1:])):
                raise ConfigurationError("output_times must be non-empty and strictly increasing")
            if times[0] < 0 or times[-1] > self.t_end:
                raise ConfigurationError(f"output_times must lie in [0, {self.t_end}]")

    @property
    def levels(self) -> List[TruncationLevel]:
        return [TruncationLevel.from_name(name) for name in self.schemes]

    def resolved_output_times(self) -> List[float]:
        if self.output_times is not None:
            return list(self.output_times)
        step = self.t_end / (DEFAULT_OUTPUT_COUNT - 1)
        times = [i * step for i in range(DEFAULT_OUTPUT_COUNT)]
        times[-1] = self.t_end
        return times

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        return _build(cls, data, "config")

    def with_overrides(self, **overrides) -> "ExperimentConfig":
        """Copy with the non-None overrides applied (and re-validated)."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        unknown = set(changes) - {f.name for f in fields(self)}
        if unknown:
            raise ConfigurationError(f"Unknown configuration keys: {sorted(unknown)}")
        return replace(self, **changes)

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON form."""
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()

    def save(self, filename="settings.json") -> bool:
        """Save the configuration to a JSON file."""
        try:
            with open(filename, "w", encoding="utf-8", newline="\n") as f:
                json.dump(self.to_dict(), f, indent=4)
                f.write("\n")
        except OSError as e:
            logger.error(f"Failed to save configuration to {filename}: {e}")
            return False
        logger.info(f"Configuration saved to {filename}")
        return True

    @classmethod
    def load(cls, filename="settings.json") -> "ExperimentConfig":
        """Load a configuration from a JSON file."""
        path = Path(filename)
        if not path.exists():
            raise ConfigurationError(f"Configuration file not found: {path}")
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigurationError(f"Failed to read configuration {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigurationError(f"Configuration {path} must hold a JSON object")
        config = cls.from_dict(data)
        logger.info(f"Configuration loaded from {path} (hash {config.config_hash()[:12]})")
        return config


def _build(cls, data: Dict[str, Any], where: str):
    if not isinstance(data, dict):
        raise ConfigurationError(f"{where} must be a JSON object")
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigurationError(f"Unknown keys in {where}: {sorted(unknown)}")
    try:
        return cls(**data)
    except TypeError as e:
        raise ConfigurationError(f"Invalid {where}: {e}") from e
