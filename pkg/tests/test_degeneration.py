"""Tests for degeneration paths, asymptotic fits and the boundary tables."""

import math
from fractions import Fraction

import numpy as np
import pytest

from src.core.config import WorkbenchConfig
from src.core.degeneration import (
    AsymptoticSample,
    DegenerationPath,
    beta1_sweep,
    beta2_fay_sweep,
    boundary_coefficient_vectors,
    coefficients_proportional,
    decade_schedule,
    evaluate_samples,
    faltings_reference,
    fay_period_matrix,
    fay_period_matrix_from_log,
    fit_asymptotics,
    hodge_norm_log,
    hodge_sweep,
    incommensurability_check,
    log_spaced,
    reducible_period_matrix,
    reducible_sweep,
    reduction_prediction,
    vanishing_order_slope,
)
from src.core.exceptions import DimensionError, DomainError, FitError
from src.core.modular_numerics import SiegelPoint


@pytest.fixture
def defaults() -> WorkbenchConfig:
    """Default schedules, which are the ones the acceptance values refer to."""
    return WorkbenchConfig()


@pytest.fixture
def fay_path(defaults: WorkbenchConfig) -> DegenerationPath:
    """Default Fay path."""
    return DegenerationPath.fay(
        defaults.fay_omega0_imag,
        defaults.fay_v,
        log_spaced(defaults.fay_x_min, defaults.fay_x_max, defaults.fay_samples),
    )


def _synthetic(
    xs: list[float], log_coeff: float, loglog_coeff: float, const: float
) -> list[AsymptoticSample]:
    return [
        AsymptoticSample(-x, log_coeff * -x + loglog_coeff * math.log(x) + const)
        for x in xs
    ]


class TestPeriodMatrices:
    """Tests for the degenerating period matrices."""

    def test_fay_matrix(self) -> None:
        """The new diagonal entry is log t / 2 pi i."""
        omega0 = SiegelPoint.from_tau(1.2j)
        point = fay_period_matrix(omega0, [0.2], math.exp(-20))
        assert point.genus == 2
        assert point.omega[1, 1] == pytest.approx(20j / (2 * math.pi))
        assert point.omega[0, 1] == point.omega[1, 0] == pytest.approx(0.2)

    def test_fay_from_log_survives_underflow(self) -> None:
        """log|t| = -2000 is fine where t itself underflows."""
        point = fay_period_matrix_from_log(SiegelPoint.from_tau(1.2j), [0.2], -2000)
        assert point.omega[1, 1].imag == pytest.approx(2000 / (2 * math.pi))

    @pytest.mark.parametrize("t", [0, 1, 1.5])
    def test_fay_bad_t(self, t: float) -> None:
        """|t| must lie strictly between 0 and 1."""
        with pytest.raises(DomainError, match="0 < \\|t\\| < 1"):
            fay_period_matrix(SiegelPoint.from_tau(1j), [0.0], t)

    def test_fay_wrong_v_length(self) -> None:
        """v needs one entry per row of omega0."""
        with pytest.raises(DimensionError, match="entries"):
            fay_period_matrix(SiegelPoint.from_tau(1j), [0.1, 0.2], 0.5)

    def test_fay_leaves_siegel_space(self) -> None:
        """A large imaginary v breaks positive definiteness."""
        with pytest.raises(DomainError, match="Siegel"):
            fay_period_matrix(SiegelPoint.from_tau(1j), [5j], 0.5)

    def test_reducible_matrix(self) -> None:
        """Off-diagonal entry t, diagonal tau1 and tau2."""
        point = reducible_period_matrix(1.1j, 1.3j, 1e-3)
        assert point.omega[0, 1] == pytest.approx(1e-3)

    def test_reducible_lower_half_plane(self) -> None:
        """tau1 and tau2 must lie in the upper half plane."""
        with pytest.raises(DomainError, match="upper half plane"):
            reducible_period_matrix(-1j, 1j, 0.1)

    def test_hodge_norm(self) -> None:
        """1/2 log det Im."""
        point = SiegelPoint(np.diag([2j, 3j]))
        assert hodge_norm_log(point) == pytest.approx(0.5 * math.log(6))


class TestSample:
    """Tests for AsymptoticSample."""

    def test_t_and_loglog(self) -> None:
        """t = exp(log|t|) and loglog = log(-log|t|)."""
        s = AsymptoticSample(-math.e, 1.0)
        assert s.t == pytest.approx(math.exp(-math.e))
        assert s.loglog == pytest.approx(1.0)

    def test_loglog_needs_small_t(self) -> None:
        """log log(1/|t|) is undefined for |t| >= 1."""
        with pytest.raises(DomainError):
            _ = AsymptoticSample(0.0, 1.0).loglog


class TestFit:
    """Tests for fit_asymptotics."""

    def test_recovers_synthetic_coefficients(self) -> None:
        """Exact data are fitted exactly."""
        samples = _synthetic(log_spaced(10, 1e4, 20), 2.0, -5.0, 7.0)
        fit = fit_asymptotics(samples)
        assert fit.coeff_log == pytest.approx(2.0, abs=1e-10)
        assert fit.coeff_loglog == pytest.approx(-5.0, abs=1e-10)
        assert fit.coeff_const == pytest.approx(7.0, abs=1e-6)
        assert fit.residual < 1e-8

    def test_without_log_column(self) -> None:
        """include_log=False reports coeff_log = 0."""
        samples = _synthetic(log_spaced(10, 1e4, 20), 0.0, 0.5, -1.0)
        fit = fit_asymptotics(samples, include_log=False)
        assert fit.coeff_log == 0.0
        assert fit.coeff_loglog == pytest.approx(0.5, abs=1e-10)

    def test_too_few_samples(self) -> None:
        """At least 8 samples are needed."""
        samples = _synthetic(log_spaced(10, 1e4, 7), 1.0, 1.0, 1.0)
        with pytest.raises(FitError, match="at least 8"):
            fit_asymptotics(samples)

    def test_window_too_narrow(self) -> None:
        """The samples must span four decades of |t|."""
        samples = _synthetic(log_spaced(1, 5, 10), 1.0, 1.0, 1.0)
        with pytest.raises(FitError, match="decades"):
            fit_asymptotics(samples)

    def test_rejects_large_t(self) -> None:
        """Every sample needs |t| < 1."""
        samples = _synthetic(log_spaced(10, 1e4, 10), 1.0, 1.0, 1.0)
        samples[0] = AsymptoticSample(0.5, 1.0)
        with pytest.raises(FitError, match="\\|t\\| < 1"):
            fit_asymptotics(samples)

    def test_rejects_non_finite_values(self) -> None:
        """NaN values cannot be fitted."""
        samples = _synthetic(log_spaced(10, 1e4, 10), 1.0, 1.0, 1.0)
        samples[3] = AsymptoticSample(samples[3].log_abs_t, float("nan"))
        with pytest.raises(FitError, match="finite"):
            fit_asymptotics(samples)

    def test_rank_deficient(self) -> None:
        """Repeated points leave a constant design column."""
        samples = [AsymptoticSample(-100.0, 1.0)] * 10
        with pytest.raises(FitError):
            fit_asymptotics(samples)

    def test_vanishing_order_slope(self) -> None:
        """A straight line in log|t| has the expected slope."""
        samples = [AsymptoticSample(x, 3 * x + 1) for x in (-1.0, -2.0, -5.0)]
        assert vanishing_order_slope(samples) == pytest.approx(3.0)

    def test_vanishing_order_needs_two_points(self) -> None:
        """A single sample has no slope."""
        with pytest.raises(FitError):
            vanishing_order_slope([AsymptoticSample(-1.0, 0.0)])


class TestSchedules:
    """Tests for sample schedules and paths."""

    def test_log_spaced(self) -> None:
        """Endpoints are kept and spacing is geometric."""
        xs = log_spaced(10, 1000, 3)
        assert xs == pytest.approx([10, 100, 1000])

    def test_log_spaced_bad_range(self) -> None:
        """x_max must exceed x_min > 0."""
        with pytest.raises(DomainError):
            log_spaced(10, 5, 4)

    def test_decade_schedule(self) -> None:
        """t = 10^-k."""
        expected = [-3 * math.log(10), -4 * math.log(10)]
        assert decade_schedule(3, 4) == pytest.approx(expected)

    def test_path_must_decrease(self) -> None:
        """|t| must decrease along the path."""
        with pytest.raises(DomainError, match="decreasing"):
            DegenerationPath.fay(1.2, 0.2, [100.0, 20.0])

    def test_path_needs_base_point(self) -> None:
        """An irreducible path needs omega0."""
        with pytest.raises(DimensionError, match="omega0"):
            DegenerationPath(kind="irreducible-node", log_abs_t=(-1.0,))

    def test_unknown_kind(self) -> None:
        """Only the two node types are known."""
        with pytest.raises(DomainError, match="unknown"):
            DegenerationPath(kind="cusp", log_abs_t=(-1.0,))  # type: ignore[arg-type]

    def test_reducible_points(self) -> None:
        """Reducible paths carry t = 10^-k off the diagonal."""
        path = DegenerationPath.reducible(1.1, 1.3, 3, 5)
        points = path.points()
        assert len(points) == 3
        assert points[-1].omega[0, 1].real == pytest.approx(1e-5)

    def test_evaluate_keeps_order(self) -> None:
        """Samples come back in schedule order and the callback fires each time."""
        seen: list[AsymptoticSample] = []
        xs = [-1.0, -2.0, -3.0, -4.0]
        samples = evaluate_samples(xs, lambda x: x * x, 3, seen.append)
        assert [s.log_abs_t for s in samples] == xs
        assert [s.value for s in samples] == [1.0, 4.0, 9.0, 16.0]
        assert len(seen) == 4

    def test_reducible_sweep_needs_reducible_path(
        self, fay_path: DegenerationPath
    ) -> None:
        """log|chi_10| slopes are only defined along reducible paths."""
        with pytest.raises(DomainError, match="reducible"):
            reducible_sweep(fay_path)


class TestAsymptotics:
    """Recovery of the boundary coefficients from the numerics."""

    def test_beta1(self, defaults: WorkbenchConfig) -> None:
        """beta_1 ~ -log|t| - 6 log log(1/|t|)."""
        xs = log_spaced(defaults.beta1_x_min, defaults.beta1_x_max, 40)
        fit = fit_asymptotics(beta1_sweep(xs, max_workers=2))
        assert fit.coeff_log == pytest.approx(-1.0, abs=1e-6)
        assert fit.coeff_loglog == pytest.approx(-6.0, abs=1e-6)

    def test_beta2_fay(self, fay_path: DegenerationPath) -> None:
        """beta_2 ~ -2 log|t| - 10 log log(1/|t|) along the Fay path."""
        fit = fit_asymptotics(beta2_fay_sweep(fay_path, max_workers=2))
        assert fit.coeff_log == pytest.approx(-2.0, abs=1e-2)
        assert fit.coeff_loglog == pytest.approx(-10.0, abs=1e-2)

    def test_reducible_vanishing_order(self, defaults: WorkbenchConfig) -> None:
        """chi_10 vanishes to order 2 on the reducible locus."""
        path = DegenerationPath.reducible(
            defaults.reducible_tau1_imag,
            defaults.reducible_tau2_imag,
            defaults.reducible_k_min,
            defaults.reducible_k_max,
        )
        slope = vanishing_order_slope(reducible_sweep(path, max_workers=2))
        assert slope == pytest.approx(2.0, abs=1e-3)

    def test_beta1_converges_toward_cusp(self) -> None:
        """Sliding the window toward t = 0 never moves the fit away from (-1, -6)."""
        errors = []
        for x_min in (2.0, 4.0, 8.0, 16.0):
            xs = log_spaced(x_min, 10 * x_min, 12)
            fit = fit_asymptotics(beta1_sweep(xs, max_workers=2))
            errors.append((abs(fit.coeff_log + 1), abs(fit.coeff_loglog + 6)))
        for near, far in zip(errors, errors[1:]):
            assert far[0] <= near[0]
            assert far[1] <= near[1]
        assert errors[-1][0] < 1e-3

    def test_hodge_loglog(self, fay_path: DegenerationPath) -> None:
        """The Hodge metric grows like 1/2 log log(1/|t|)."""
        fit = fit_asymptotics(hodge_sweep(fay_path))
        assert fit.coeff_loglog == pytest.approx(0.5, abs=1e-3)
        assert fit.coeff_log == pytest.approx(0.0, abs=1e-3)


class TestBoundaryTables:
    """Tests for the Faltings delta and beta_g coefficient tables."""

    def test_faltings_reference(self) -> None:
        """-(4g-1), -18 at delta_0 and -12h(g-h), 0 at delta_h."""
        assert faltings_reference(3, 0) == (Fraction(-11), Fraction(-18))
        assert faltings_reference(3, 1) == (Fraction(-24), Fraction(0))
        assert faltings_reference(2, 1) == (Fraction(-12), Fraction(0))

    def test_faltings_bad_h(self) -> None:
        """h must lie in 0..g-1."""
        with pytest.raises(DimensionError):
            faltings_reference(3, 3)

    def test_low_genus_predictions(self) -> None:
        """Genus 1 and 2 predictions."""
        assert reduction_prediction(1) == (Fraction(-1), Fraction(-6))
        assert reduction_prediction(2, 0) == (Fraction(-2), Fraction(-10))
        assert reduction_prediction(2, 1) == (Fraction(-4), Fraction(0))

    def test_higher_genus_predictions(self) -> None:
        """For g >= 3 the log coefficient comes from the Chern class."""
        assert reduction_prediction(3, 0) == (Fraction(-3), Fraction(-14))
        assert reduction_prediction(3, 1) == (Fraction(-8), Fraction(0))
        assert reduction_prediction(4, 2) == (Fraction(-16), Fraction(0))

    def test_proportional(self) -> None:
        """Exact 2x2 minors decide proportionality."""
        one, zero, half = Fraction(1), Fraction(0), Fraction(1, 2)
        assert coefficients_proportional([one, half], [Fraction(2), one])
        assert not coefficients_proportional([one, zero], [zero, one])
        with pytest.raises(DimensionError):
            coefficients_proportional([Fraction(1)], [Fraction(1), Fraction(2)])

    def test_vector_layout(self) -> None:
        """(log, loglog) per boundary divisor delta_0 .. delta_[g/2]."""
        beta, faltings = boundary_coefficient_vectors(4)
        assert len(beta) == len(faltings) == 6
        assert beta[:2] == [Fraction(-4), Fraction(-18)]

    @pytest.mark.parametrize("g", range(3, 9))
    def test_incommensurable(self, g: int) -> None:
        """beta_g is not a multiple of the Faltings delta."""
        assert incommensurability_check(g)

    def test_incommensurable_needs_genus_three(self) -> None:
        """The comparison uses the Chern class, defined for g >= 3."""
        with pytest.raises(DimensionError):
            incommensurability_check(2)
