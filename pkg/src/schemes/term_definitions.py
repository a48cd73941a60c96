from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional

import numpy as np

from ..grid.grid_state import TruncationLevel


class TermKind(Enum):
    """Physical role of a stencil block."""
    LINEAR_GROWTH = "linear-R"
    HYPERDIFFUSION = "hyperdiffusion"
    NONLINEAR = "nonlinear"


LINEAR_KINDS = frozenset({TermKind.LINEAR_GROWTH, TermKind.HYPERDIFFUSION})


class Misprint(Enum):
    """Blocks whose printed form disagrees with the rest of the model."""
    QUADRATIC = "quadratic"  # lone -3u_{j+1}, +3u_{j-1} in the 1/48h block
    CUBIC = "cubic"          # u_{j-1}^2 (10u_{j-1} - 20u_{j-1} + 235u_j)


@dataclass(frozen=True)
class Transcription:
    """Which misprinted blocks are evaluated in their corrected form."""
    quadratic_corrected: bool = True
    cubic_corrected: bool = True

    @classmethod
    def corrected(cls) -> "Transcription":
        return cls(True, True)

    @classmethod
    def printed(cls) -> "Transcription":
        return cls(False, False)

    def is_corrected(self, misprint: Misprint) -> bool:
        if misprint == Misprint.QUADRATIC:
            return self.quadratic_corrected
        return self.cubic_corrected


# u(k) returns the gathered neighbour array u_{j+k} for every node j.
Gather = Callable[[int], np.ndarray]
Stencil = Callable[[Gather], np.ndarray]


@dataclass(frozen=True)
class StencilTerm:
    """One block of a discrete model: weight * gamma^p * R^r * h^q * stencil(u)."""
    id: str
    kind: TermKind
    coefficient: Fraction
    stencil: Stencil
    gamma_power: int = 0
    h_power: int = 0
    uses_R: bool = False
    misprint: Optional[Misprint] = None
    printed_stencil: Optional[Stencil] = None
    weight: float = field(init=False, repr=False)

    def __post_init__(self):
        if self.coefficient == 0:
            raise ValueError(f"Term '{self.id}' has a zero coefficient")
        if (self.misprint is None) != (self.printed_stencil is None):
            raise ValueError(f"Term '{self.id}' needs both a misprint tag and a printed stencil")
        object.__setattr__(self, "weight", float(self.coefficient))

    def factor(self, R: float, gamma: float, h: float) -> float:
        scale = self.weight * h ** self.h_power
        if self.gamma_power:
            scale *= gamma ** self.gamma_power
        if self.uses_R:
            scale *= R
        return scale

    def apply(self, u: Gather, transcription: Transcription) -> np.ndarray:
        if self.misprint is not None and not transcription.is_corrected(self.misprint):
            return self.printed_stencil(u)
        return self.stencil(u)


def second_difference(u: Gather) -> np.ndarray:
    return u(1) - 2 * u(0) + u(-1)


def fourth_difference(u: Gather) -> np.ndarray:
    return u(2) - 4 * u(1) + 6 * u(0) - 4 * u(-1) + u(-2)


def _advection(u: Gather) -> np.ndarray:
    return u(0) * (u(1) - u(-1))


def _quadratic_correction(u: Gather) -> np.ndarray:
    return (u(2) * u(1) + 3 * u(2) * u(0) - 3 * u(1) ** 2 - 3 * u(1) * u(0)
            + 3 * u(-1) * u(0) + 3 * u(-1) ** 2 - 3 * u(-2) * u(0) - u(-2) * u(-1))


def _quadratic_correction_printed(u: Gather) -> np.ndarray:
    return (u(2) * u(1) + 3 * u(2) * u(0) - 3 * u(1) - 3 * u(1) * u(0)
            + 3 * u(-1) * u(0) + 3 * u(-1) - 3 * u(-2) * u(0) - u(-2) * u(-1))


def _cubic_diffusion(u: Gather) -> np.ndarray:
    return u(0) ** 2 * second_difference(u)


def _cubic_common(u: Gather) -> np.ndarray:
    uj = u(0)
    return (uj ** 2 * (-30 * u(2) - 170 * u(1) + 256 * uj - 170 * u(-1) - 30 * u(-2))
            + uj * (-126 * u(2) * u(1) - 54 * u(1) * u(-1) - 126 * u(-2) * u(-1))
            + u(1) ** 2 * (10 * u(2) - 20 * u(1) + 235 * uj))


def _cubic_correction(u: Gather) -> np.ndarray:
    return _cubic_common(u) + u(-1) ** 2 * (10 * u(-2) - 20 * u(-1) + 235 * u(0))


def _cubic_correction_printed(u: Gather) -> np.ndarray:
    return _cubic_common(u) + u(-1) ** 2 * (10 * u(-1) - 20 * u(-1) + 235 * u(0))


def _low_order_advection(u: Gather) -> np.ndarray:
    return u(0) * (-u(2) + 9 * u(1) - 9 * u(-1) + u(-2))


def _low_order_flux(u: Gather) -> np.ndarray:
    return u(1) ** 2 - u(-1) ** 2


def _low_order_pair_flux(u: Gather) -> np.ndarray:
    return u(2) * u(1) - u(-2) * u(-1)


def _fourth_order_second_difference(u: Gather) -> np.ndarray:
    return -u(2) + 16 * u(1) - 30 * u(0) + 16 * u(-1) - u(-2)


class SchemeRegistry:
    """Registry of stencil blocks and of the blocks each truncation level sums."""

    def __init__(self):
        self._terms: Dict[str, StencilTerm] = {}
        self._levels: Dict[TruncationLevel, List[str]] = {}
        self._initialize_default_schemes()

    def _initialize_default_schemes(self):
        """Register the holistic model blocks and the low-order model."""
        holistic_terms = [
            StencilTerm(
                id="growth",
                kind=TermKind.LINEAR_GROWTH,
                coefficient=Fraction(-1),
                stencil=second_difference,
                gamma_power=1, h_power=-2, uses_R=True,
            ),
            StencilTerm(
                id="advection",
                kind=TermKind.NONLINEAR,
                coefficient=Fraction(-1, 2),
                stencil=_advection,
                gamma_power=1, h_power=-1,
            ),
            StencilTerm(
                id="hyperdiffusion",
                kind=TermKind.HYPERDIFFUSION,
                coefficient=Fraction(-1),
                stencil=fourth_difference,
                gamma_power=2, h_power=-4,
            ),
            StencilTerm(
                id="growth_correction",
                kind=TermKind.LINEAR_GROWTH,
                coefficient=Fraction(1, 12),
                stencil=fourth_difference,
                gamma_power=2, h_power=-2, uses_R=True,
            ),
            StencilTerm(
                id="quadratic_correction",
                kind=TermKind.NONLINEAR,
                coefficient=Fraction(1, 48),
                stencil=_quadratic_correction,
                gamma_power=2, h_power=-1,
                misprint=Misprint.QUADRATIC,
                printed_stencil=_quadratic_correction_printed,
            ),
            StencilTerm(
                id="cubic_diffusion",
                kind=TermKind.NONLINEAR,
                coefficient=Fraction(1, 120),
                stencil=_cubic_diffusion,
                gamma_power=1, h_power=2,
            ),
            StencilTerm(
                id="cubic_correction",
                kind=TermKind.NONLINEAR,
                coefficient=Fraction(1, 60480),
                stencil=_cubic_correction,
                gamma_power=2, h_power=2,
                misprint=Misprint.CUBIC,
                printed_stencil=_cubic_correction_printed,
            ),
        ]

        # The low-order model is written "= 0"; these are its blocks moved to
        # the right-hand side. It carries no gamma.
        low_order_terms = [
            StencilTerm(
                id="eq3_advection",
                kind=TermKind.NONLINEAR,
                coefficient=Fraction(-1, 16),
                stencil=_low_order_advection,
                h_power=-1,
            ),
            StencilTerm(
                id="eq3_flux",
                kind=TermKind.NONLINEAR,
                coefficient=Fraction(-1, 16),
                stencil=_low_order_flux,
                h_power=-1,
            ),
            StencilTerm(
                id="eq3_pair_flux",
                kind=TermKind.NONLINEAR,
                coefficient=Fraction(1, 48),
                stencil=_low_order_pair_flux,
                h_power=-1,
            ),
            StencilTerm(
                id="eq3_growth",
                kind=TermKind.LINEAR_GROWTH,
                coefficient=Fraction(-1, 12),
                stencil=_fourth_order_second_difference,
                h_power=-2, uses_R=True,
            ),
            StencilTerm(
                id="eq3_hyperdiffusion",
                kind=TermKind.HYPERDIFFUSION,
                coefficient=Fraction(-1),
                stencil=fourth_difference,
                h_power=-4,
            ),
        ]

        for term in holistic_terms + low_order_terms:
            self.register_term(term)

        conventional = ["growth", "advection", "hyperdiffusion"]
        first = conventional + ["growth_correction", "quadratic_correction"]
        second = first + ["cubic_diffusion", "cubic_correction"]
        self.register_level(TruncationLevel.CONVENTIONAL, conventional)
        self.register_level(TruncationLevel.FIRST_CORRECTION, first)
        self.register_level(TruncationLevel.SECOND_CORRECTION, second)
        self.register_level(TruncationLevel.LOW_ORDER_EQ3, [t.id for t in low_order_terms])

    def register_term(self, term: StencilTerm):
        """Register a new stencil block."""
        if term.id in self._terms:
            raise ValueError(f"Term with id '{term.id}' already exists")
        self._terms[term.id] = term

    def register_level(self, level: TruncationLevel, term_ids: Iterable[str]):
        """Define the blocks a truncation level sums."""
        term_ids = list(term_ids)
        for term_id in term_ids:
            self.get_term(term_id)
        self._levels[level] = term_ids

    def get_term(self, term_id: str) -> StencilTerm:
        if term_id not in self._terms:
            raise KeyError(f"Unknown term id: {term_id}")
        return self._terms[term_id]

    def get_terms(self, level: TruncationLevel,
                  kinds: Optional[Iterable[TermKind]] = None) -> List[StencilTerm]:
        """Blocks of a level, optionally restricted to some kinds."""
        if level not in self._levels:
            raise KeyError(f"No terms registered for {level}")
        terms = [self._terms[term_id] for term_id in self._levels[level]]
        if kinds is not None:
            kinds = set(kinds)
            terms = [t for t in terms if t.kind in kinds]
        return terms


# Global scheme registry instance
scheme_registry = SchemeRegistry()
