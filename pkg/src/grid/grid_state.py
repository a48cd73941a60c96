import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

# The widest holistic stencil reaches j-2..j+2.
MIN_NODES = 5


class NormKind(Enum):
    """Norms used to measure states and errors."""
    L2 = "L2"
    LINF = "Linf"


class TruncationLevel(Enum):
    """Which discrete model the right-hand side evaluates."""
    CONVENTIONAL = "conventional"
    FIRST_CORRECTION = "first"
    SECOND_CORRECTION = "second"
    LOW_ORDER_EQ3 = "eq3"

    @classmethod
    def from_name(cls, name: str) -> "TruncationLevel":
        """Look up a level by its CLI name ("conventional", "first", ...)."""
        for level in cls:
            if level.value == name or level.name == name.upper():
                return level
        raise KeyError(f"Unknown scheme: {name}")


def wrap(j: int, m: int) -> int:
    """Periodic index: j mod m, always in 0..m-1."""
    return j % m


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid of m nodes x_j = j*h on [0, L)."""
    m: int
    L: float = 2 * math.pi

    def __post_init__(self):
        try:
            m = int(self.m)
        except (TypeError, ValueError, OverflowError):
            raise ValueError(f"Node count must be an integer, got {self.m!r}")
        if m != self.m:
            raise ValueError(f"Node count must be an integer, got {self.m!r}")
        object.__setattr__(self, "m", m)
        if self.m < MIN_NODES:
            raise ValueError(f"Grid needs at least {MIN_NODES} nodes, got {self.m}")
        if not (self.L > 0 and math.isfinite(self.L)):
            raise ValueError(f"Domain length must be positive and finite, got {self.L}")

    @property
    def h(self) -> float:
        return self.L / self.m

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.m) * self.h

    def index(self, offset: int) -> np.ndarray:
        """Wrapped neighbour indices j + offset for every node j."""
        return (np.arange(self.m) + offset) % self.m


@dataclass(frozen=True, eq=False)
class StateVector:
    """Nodal values u_j on a grid. Immutable; arithmetic requires a shared grid."""
    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.m,):
            raise ValueError(
                f"State has shape {values.shape}, grid expects ({self.grid.m},)"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("State contains non-finite values")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, grid: GridSpec, fn) -> "StateVector":
        """Sample fn(x) at the grid nodes."""
        return cls(grid, np.asarray(fn(grid.nodes), dtype=float) * np.ones(grid.m))

    @classmethod
    def zeros(cls, grid: GridSpec) -> "StateVector":
        return cls(grid, np.zeros(grid.m))

    @classmethod
    def constant(cls, grid: GridSpec, c: float) -> "StateVector":
        return cls(grid, np.full(grid.m, float(c)))

    def _check_grid(self, other: "StateVector"):
        if other.grid != self.grid:
            raise ValueError(f"Grid mismatch: {self.grid} vs {other.grid}")

    def __len__(self):
        return self.grid.m

    def __add__(self, other: "StateVector") -> "StateVector":
        self._check_grid(other)
        return StateVector(self.grid, self.values + other.values)

    def __sub__(self, other: "StateVector") -> "StateVector":
        self._check_grid(other)
        return StateVector(self.grid, self.values - other.values)

    def __mul__(self, c: float) -> "StateVector":
        return StateVector(self.grid, float(c) * self.values)

    __rmul__ = __mul__

    def __neg__(self) -> "StateVector":
        return StateVector(self.grid, -self.values)

    def shift(self, s: int) -> "StateVector":
        """Translate by s nodes: result_j = u_{j-s}."""
        return StateVector(self.grid, self.values[self.grid.index(-s)])

    def reflect(self) -> "StateVector":
        """Reflection-negation: result_j = -u_{wrap(-j)}."""
        return StateVector(self.grid, -self.values[(-np.arange(self.grid.m)) % self.grid.m])

    def allclose(self, other: "StateVector", rtol: float = 1e-12, atol: float = 0.0) -> bool:
        self._check_grid(other)
        return bool(np.allclose(self.values, other.values, rtol=rtol, atol=atol))


@dataclass(frozen=True)
class ModelParams:
    """Linear-growth parameter R and element coupling gamma."""
    R: float = 2.0
    gamma: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.R):
            raise ValueError(f"R must be finite, got {self.R}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")


def norm(u: StateVector, kind: NormKind = NormKind.L2) -> float:
    """L2 = sqrt(h * sum u_j^2) or Linf = max |u_j|."""
    if kind == NormKind.LINF:
        return float(np.max(np.abs(u.values)))
    return math.sqrt(u.grid.h * float(np.dot(u.values, u.values)))
