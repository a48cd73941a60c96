"""Embedded explicit Runge-Kutta tableaux."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class EmbeddedTableau:
    """Butcher tableau with an embedded error estimate and a continuous extension.

    ``E`` holds b - b_hat; ``P`` maps stage derivatives to the coefficients of
    theta, theta^2, ... of the dense output polynomial.
    """
    name: str
    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    E: np.ndarray
    P: np.ndarray
    order: int
    error_order: int
    # Where the stability region meets the negative real axis.
    real_stability_boundary: float

    def __post_init__(self):
        stages = len(self.c)
        if self.A.shape != (stages, stages):
            raise ValueError(f"{self.name}: A must be {stages}x{stages}")
        if len(self.b) != stages or len(self.E) != stages or self.P.shape[0] != stages:
            raise ValueError(f"{self.name}: b, E and P need one row per stage")
        if not np.isclose(self.b.sum(), 1.0):
            raise ValueError(f"{self.name}: weights must sum to one")

    @property
    def n_stages(self) -> int:
        return len(self.c)


DORMAND_PRINCE = EmbeddedTableau(
    name="Dormand-Prince 5(4)",
    A=np.array([
        [0, 0, 0, 0, 0, 0, 0],
        [1 / 5, 0, 0, 0, 0, 0, 0],
        [3 / 40, 9 / 40, 0, 0, 0, 0, 0],
        [44 / 45, -56 / 15, 32 / 9, 0, 0, 0, 0],
        [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0, 0, 0],
        [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0, 0],
        [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0],
    ]),
    b=np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0]),
    c=np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1]),
    E=np.array([71 / 57600, 0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]),
    P=np.array([
        [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0, 0, 0, 0],
        [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]),
    order=5,
    error_order=4,
    real_stability_boundary=3.3,
)
