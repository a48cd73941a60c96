import math

import numpy as np
import pytest

from src.grid.grid_state import GridSpec, ModelParams, StateVector, TruncationLevel
from src.schemes.holistic_rhs import (
    gamma_sweep, linear_symbol, nonlinear_advective, nonlinear_conservative,
    rhs, rhs_function, spectral_radius,
)
from src.schemes.term_definitions import (
    Misprint, StencilTerm, TermKind, Transcription, fourth_difference, scheme_registry,
)

ALL_LEVELS = list(TruncationLevel)


def relative_gap(a, b):
    return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(b)))))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def random_states(rng):
    grid = GridSpec(8)
    return [StateVector(grid, rng.uniform(-1.0, 1.0, 8)) for _ in range(100)]


class TestSchemeRegistry:
    """Test the registry of stencil blocks."""

    def test_levels_are_cumulative(self):
        """Each holistic correction adds blocks on top of the previous level."""
        ids = {level: [t.id for t in scheme_registry.get_terms(level)] for level in ALL_LEVELS}
        assert ids[TruncationLevel.CONVENTIONAL] == ["growth", "advection", "hyperdiffusion"]
        assert ids[TruncationLevel.FIRST_CORRECTION][:3] == ids[TruncationLevel.CONVENTIONAL]
        assert ids[TruncationLevel.SECOND_CORRECTION][:5] == ids[TruncationLevel.FIRST_CORRECTION]
        assert not set(ids[TruncationLevel.LOW_ORDER_EQ3]) & set(ids[TruncationLevel.SECOND_CORRECTION])

    def test_exact_coefficients(self):
        """Coefficients are stored as exact rationals."""
        assert str(scheme_registry.get_term("quadratic_correction").coefficient) == "1/48"
        assert str(scheme_registry.get_term("cubic_diffusion").coefficient) == "1/120"
        assert str(scheme_registry.get_term("cubic_correction").coefficient) == "1/60480"
        assert scheme_registry.get_term("growth_correction").weight == 1 / 12

    def test_unknown_term(self):
        with pytest.raises(KeyError):
            scheme_registry.get_term("missing")

    def test_duplicate_term(self):
        term = scheme_registry.get_term("growth")
        with pytest.raises(ValueError):
            scheme_registry.register_term(term)

    def test_term_validation(self):
        """A misprint tag needs its printed stencil and vice versa."""
        with pytest.raises(ValueError):
            StencilTerm(id="bad", kind=TermKind.HYPERDIFFUSION, coefficient=1,
                        stencil=fourth_difference, misprint=Misprint.CUBIC)
        with pytest.raises(ValueError):
            StencilTerm(id="zero", kind=TermKind.HYPERDIFFUSION, coefficient=0,
                        stencil=fourth_difference)

    def test_kind_filter(self):
        terms = scheme_registry.get_terms(TruncationLevel.FIRST_CORRECTION, [TermKind.LINEAR_GROWTH])
        assert [t.id for t in terms] == ["growth", "growth_correction"]


class TestRhs:
    """Test the right-hand sides of the four models."""

    @pytest.mark.parametrize("level", ALL_LEVELS)
    def test_origin_is_fixed(self, level):
        grid = GridSpec(8)
        g = rhs(StateVector.zeros(grid), ModelParams(), level)
        assert np.all(g.tendency.values == 0.0)
        assert g.level == level

    def test_constants_are_fixed_points(self, rng):
        """Every block cancels on a constant state."""
        grid = GridSpec(8)
        for _ in range(100):
            c = rng.uniform(-10.0, 10.0)
            params = ModelParams(R=rng.uniform(0.0, 4.0), gamma=float(rng.choice([0.0, 0.5, 1.0])))
            for level in ALL_LEVELS:
                g = rhs_function(grid, params, level)(np.full(8, c))
                assert np.max(np.abs(g)) <= 1e-12 * (1 + abs(c) ** 3)

    def test_impulse_row(self):
        """The hyperdiffusion stencil appears as -(1, -4, 6, -4, 1) around the impulse."""
        grid = GridSpec(11, 11.0)
        u = np.zeros(11)
        u[5] = 1.0
        g = rhs(StateVector(grid, u), ModelParams(R=0.0, gamma=1.0), TruncationLevel.CONVENTIONAL)
        expected = np.zeros(11)
        expected[3:8] = [-1.0, 4.0, -6.0, 4.0, -1.0]
        assert np.allclose(g.tendency.values, expected, rtol=0.0, atol=1e-14)

    def test_first_correction_matches_low_order_model(self, random_states):
        """At gamma = 1 the first correction is the low-order model."""
        params = ModelParams(R=2.0, gamma=1.0)
        for u in random_states:
            first = rhs(u, params, TruncationLevel.FIRST_CORRECTION).tendency.values
            eq3 = rhs(u, params, TruncationLevel.LOW_ORDER_EQ3).tendency.values
            assert relative_gap(first, eq3) <= 1e-12

    @pytest.mark.parametrize("level", ALL_LEVELS)
    def test_translation_equivariance(self, level, random_states):
        params = ModelParams(R=1.5, gamma=1.0)
        for u in random_states:
            g = rhs(u, params, level).tendency
            for s in (1, 2, 5):
                shifted = rhs(u.shift(s), params, level).tendency
                assert relative_gap(shifted.values, g.shift(s).values) <= 1e-12

    @pytest.mark.parametrize("level", ALL_LEVELS)
    def test_reflection_equivariance(self, level, random_states):
        """rhs(-u(-x)) = -rhs(u)(-x)."""
        params = ModelParams(R=1.5, gamma=1.0)
        for u in random_states:
            g = rhs(u, params, level).tendency
            reflected = rhs(u.reflect(), params, level).tendency
            assert relative_gap(reflected.values, g.reflect().values) <= 1e-12

    def test_gamma_zero_decouples_elements(self, rng):
        """With gamma = 0 every holistic block vanishes."""
        grid = GridSpec(8)
        u = StateVector(grid, rng.uniform(-1, 1, 8))
        for level in (TruncationLevel.CONVENTIONAL, TruncationLevel.FIRST_CORRECTION,
                      TruncationLevel.SECOND_CORRECTION):
            g = rhs(u, ModelParams(R=2.0, gamma=0.0), level)
            assert np.all(g.tendency.values == 0.0)

    def test_kind_restriction(self, rng):
        """The blocks of each kind add up to the full right-hand side."""
        grid = GridSpec(10)
        u = rng.uniform(-1, 1, 10)
        params = ModelParams(R=2.0, gamma=0.7)
        for level in ALL_LEVELS:
            total = rhs_function(grid, params, level)(u)
            parts = sum(rhs_function(grid, params, level, [kind])(u) for kind in TermKind)
            assert np.allclose(parts, total, rtol=1e-13, atol=1e-12)


class TestMisprints:
    """The printed forms of the two suspicious blocks are kept behind a flag."""

    def test_printed_quadratic_breaks_low_order_equality(self, random_states):
        params = ModelParams(R=2.0, gamma=1.0)
        printed = Transcription(quadratic_corrected=False)
        gaps = [
            relative_gap(
                rhs(u, params, TruncationLevel.FIRST_CORRECTION, transcription=printed).tendency.values,
                rhs(u, params, TruncationLevel.LOW_ORDER_EQ3).tendency.values,
            )
            for u in random_states
        ]
        assert max(gaps) > 1e-6

    def test_printed_cubic_breaks_reflection_equivariance(self, random_states):
        params = ModelParams(R=2.0, gamma=1.0)
        printed = Transcription(cubic_corrected=False)
        level = TruncationLevel.SECOND_CORRECTION
        gaps = [
            relative_gap(
                rhs(u.reflect(), params, level, transcription=printed).tendency.values,
                rhs(u, params, level, transcription=printed).tendency.reflect().values,
            )
            for u in random_states
        ]
        assert max(gaps) > 1e-9

    def test_printed_forms_still_fix_constants(self):
        grid = GridSpec(8)
        for level in ALL_LEVELS:
            g = rhs_function(grid, ModelParams(), level, transcription=Transcription.printed())
            assert np.max(np.abs(g(np.full(8, 3.0)))) <= 1e-12 * 28

    def test_transcription_flags(self):
        assert Transcription.corrected().is_corrected(Misprint.CUBIC)
        assert not Transcription.printed().is_corrected(Misprint.QUADRATIC)


class TestNonlinearAlternatives:
    """Test the two standard forms of u u_x."""

    def test_examples(self):
        grid = GridSpec(6, 6.0)
        u = StateVector(grid, [0, 1, 2, 1, 0, 0])
        advective = nonlinear_advective(u)
        assert advective[2] == 0.0
        assert advective[1] == 1.0

    def test_constants_vanish(self):
        u = StateVector.constant(GridSpec(8), 4.2)
        assert np.all(nonlinear_advective(u) == 0.0)
        assert np.all(nonlinear_conservative(u) == 0.0)

    def test_conservative_telescopes(self, rng):
        grid = GridSpec(16)
        for _ in range(20):
            u = StateVector(grid, rng.standard_normal(16))
            assert abs(grid.h * np.sum(nonlinear_conservative(u))) < 1e-12

    def test_grid_mismatch(self):
        with pytest.raises(ValueError):
            nonlinear_advective(StateVector.zeros(GridSpec(8)), GridSpec(9))


class TestLinearSymbol:
    """Test growth rates of the linearised models."""

    @pytest.mark.parametrize("level", ALL_LEVELS)
    def test_mean_mode_is_neutral(self, level):
        assert linear_symbol(0, ModelParams(), GridSpec(16), level) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("level", ALL_LEVELS)
    def test_pure_damping_without_growth(self, level):
        grid = GridSpec(16)
        for k in range(1, 9):
            assert linear_symbol(k, ModelParams(R=0.0), grid, level) < 0.0

    def test_conventional_closed_form(self):
        """(4R/h^2) s^2 - (16/h^4) s^4 with s = sin(kh/2)."""
        grid = GridSpec(16)
        R = 2.0
        for k in range(0, 9):
            s = math.sin(k * grid.h / 2)
            expected = 4 * R / grid.h ** 2 * s ** 2 - 16 / grid.h ** 4 * s ** 4
            got = linear_symbol(k, ModelParams(R=R), grid, TruncationLevel.CONVENTIONAL)
            assert got == pytest.approx(expected, rel=1e-12, abs=1e-10)

    @pytest.mark.parametrize("level", ALL_LEVELS)
    def test_gravest_mode_grows(self, level):
        """R = 2, k = 1 approaches the continuum rate 2 - 1 = 1."""
        rate = linear_symbol(1, ModelParams(R=2.0), GridSpec(64), level)
        assert rate > 0
        assert rate == pytest.approx(1.0, abs=1e-2)

    def test_wavenumber_range(self):
        with pytest.raises(ValueError):
            linear_symbol(5, ModelParams(), GridSpec(8), TruncationLevel.CONVENTIONAL)
        with pytest.raises(ValueError):
            linear_symbol(1.5, ModelParams(), GridSpec(8), TruncationLevel.CONVENTIONAL)

    def test_spectral_radius_is_largest_rate(self):
        grid = GridSpec(8)
        p = ModelParams()
        radius = spectral_radius(p, grid, TruncationLevel.CONVENTIONAL)
        rates = [abs(linear_symbol(k, p, grid, TruncationLevel.CONVENTIONAL)) for k in range(5)]
        assert radius == max(rates)
        # attained by the Nyquist mode
        assert radius == pytest.approx(16 / grid.h ** 4 - 4 * 2.0 / grid.h ** 2, rel=1e-12)

    def test_gamma_sweep_endpoints(self):
        grid = GridSpec(8)
        sweep = gamma_sweep(1, ModelParams(), grid, TruncationLevel.FIRST_CORRECTION, [0.0, 0.5, 1.0])
        assert [g for g, _ in sweep] == [0.0, 0.5, 1.0]
        assert sweep[0][1] == 0.0
        assert sweep[-1][1] == linear_symbol(1, ModelParams(), grid, TruncationLevel.FIRST_CORRECTION)
