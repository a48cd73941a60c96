import logging
from typing import Callable, Dict, List

import numpy as np

from ..settings import ConfigurationError, InitialConditionSpec

logger = logging.getLogger(__name__)

Profile = Callable[[np.ndarray], np.ndarray]
Builder = Callable[[InitialConditionSpec, float], Profile]


def _sine(spec: InitialConditionSpec, L: float) -> Profile:
    a = spec.amplitude
    return lambda x: a * np.sin(2 * np.pi * x / L)


def _fourier(spec: InitialConditionSpec, L: float) -> Profile:
    modes = [(int(k), amp, phase) for k, amp, phase in spec.modes]

    def profile(x: np.ndarray) -> np.ndarray:
        u = np.zeros_like(x, dtype=float)
        for k, amp, phase in modes:
            u = u + amp * np.sin(2 * np.pi * k * x / L + phase)
        return u
    return profile


def _seeded_random(spec: InitialConditionSpec, L: float) -> Profile:
    rng = np.random.default_rng(spec.seed)
    k = np.arange(1, spec.cutoff + 1)
    cos_coeffs = rng.standard_normal(spec.cutoff) / k
    sin_coeffs = rng.standard_normal(spec.cutoff) / k

    def profile(x: np.ndarray) -> np.ndarray:
        phase = 2 * np.pi * np.outer(x, k) / L
        return spec.amplitude * (np.cos(phase) @ cos_coeffs + np.sin(phase) @ sin_coeffs)
    return profile


class InitialConditionRegistry:
    """Named families of smooth periodic initial profiles."""

    def __init__(self):
        self.builders: Dict[str, Builder] = {}
        self._initialize_default_families()

    def _initialize_default_families(self):
        self.register("sine", _sine)
        self.register("fourier", _fourier)
        self.register("seeded-random", _seeded_random)

    def register(self, kind: str, builder: Builder):
        self.builders[kind] = builder
        logger.debug(f"Registered initial condition family: {kind}")

    def build(self, spec: InitialConditionSpec, L: float) -> Profile:
        """Profile x -> u(x, 0) for a configured family."""
        if spec.kind not in self.builders:
            raise ConfigurationError(f"Unknown initial condition family: {spec.kind}")
        return self.builders[spec.kind](spec, L)

    def get_kinds(self) -> List[str]:
        return list(self.builders)


initial_condition_registry = InitialConditionRegistry()
