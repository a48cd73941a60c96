from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

Profile = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class AnalyticField:
    """A smooth periodic field with closed-form derivatives."""
    name: str
    u: Profile
    u_x: Profile
    u_xx: Profile
    u_xxxx: Profile
    amplitude: float = 1.0

    def scaled(self, a: float) -> "AnalyticField":
        """The same profile multiplied by a."""
        return AnalyticField(
            name=self.name,
            u=lambda x: a * self.u(x),
            u_x=lambda x: a * self.u_x(x),
            u_xx=lambda x: a * self.u_xx(x),
            u_xxxx=lambda x: a * self.u_xxxx(x),
            amplitude=a * self.amplitude,
        )

    def continuum_growth(self, x: np.ndarray, R: float) -> np.ndarray:
        return -R * self.u_xx(x)

    def continuum_hyperdiffusion(self, x: np.ndarray) -> np.ndarray:
        return -self.u_xxxx(x)

    def continuum_advection(self, x: np.ndarray) -> np.ndarray:
        return -self.u(x) * self.u_x(x)

    def continuum_rhs(self, x: np.ndarray, R: float) -> np.ndarray:
        """-(u u_x + R u_xx + u_xxxx)."""
        return (self.continuum_advection(x) + self.continuum_growth(x, R)
                + self.continuum_hyperdiffusion(x))


def sine_field(amplitude: float = 1.0, wavenumber: int = 1) -> AnalyticField:
    k = float(wavenumber)
    return AnalyticField(
        name=f"sin({wavenumber}x)",
        u=lambda x: np.sin(k * x),
        u_x=lambda x: k * np.cos(k * x),
        u_xx=lambda x: -k ** 2 * np.sin(k * x),
        u_xxxx=lambda x: k ** 4 * np.sin(k * x),
    ).scaled(amplitude)


def constant_field(c: float = 1.0) -> AnalyticField:
    return AnalyticField(
        name="constant",
        u=lambda x: np.ones_like(x),
        u_x=np.zeros_like,
        u_xx=np.zeros_like,
        u_xxxx=np.zeros_like,
    ).scaled(c)


def mixed_field(amplitude: float = 1.0) -> AnalyticField:
    """sin x + cos 2x / 2: no symmetry for a stencil to exploit."""
    return AnalyticField(
        name="sin(x)+cos(2x)/2",
        u=lambda x: np.sin(x) + 0.5 * np.cos(2 * x),
        u_x=lambda x: np.cos(x) - np.sin(2 * x),
        u_xx=lambda x: -np.sin(x) - 2 * np.cos(2 * x),
        u_xxxx=lambda x: np.sin(x) + 8 * np.cos(2 * x),
    ).scaled(amplitude)


FIELDS: Dict[str, Callable[[], AnalyticField]] = {
    "sine": sine_field,
    "constant": constant_field,
    "mixed": mixed_field,
}


def get_field(name: str) -> AnalyticField:
    if name not in FIELDS:
        raise KeyError(f"Unknown analytic field: {name}")
    return FIELDS[name]()


def field_names() -> List[str]:
    return list(FIELDS)
