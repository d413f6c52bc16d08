"""Degenerating period matrices, asymptotic fits and the boundary tables.

Samples are keyed by log|t|: along t = e^{-2000} the parameter itself
underflows a double while log|t| stays exact.
"""

import cmath
import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import numpy as np

from src.core.config import MIN_FIT_DECADES, MIN_FIT_SAMPLES
from src.core.exceptions import DimensionError, DomainError, FitError
from src.core.modular_numerics import (
    DEFAULT_DELTA_TAIL_BOUND,
    DEFAULT_THETA_TAIL_BOUND,
    SiegelPoint,
    beta1,
    beta2,
    log_abs_chi10,
)
from src.core.picard import chern_biextension
from src.core.symplectic_core import require_genus

logger = logging.getLogger(__name__)

PathKind = Literal["irreducible-node", "reducible-node"]
SampleCallback = Callable[["AsymptoticSample"], None]

MAX_CONDITION_NUMBER = 1e12


def fay_period_matrix_from_log(
    omega0: SiegelPoint, v: Sequence[complex], log_t: complex
) -> SiegelPoint:
    """[[omega0, v^T], [v, log t / 2 pi i]] for a given branch of log t."""
    g0 = omega0.genus
    if len(v) != g0:
        raise DimensionError(f"v must have {g0} entries, got {len(v)}")
    omega = np.zeros((g0 + 1, g0 + 1), dtype=complex)
    omega[:g0, :g0] = omega0.omega
    omega[g0, :g0] = v
    omega[:g0, g0] = v
    omega[g0, g0] = complex(log_t) / (2j * math.pi)
    try:
        return SiegelPoint(omega)
    except DomainError as e:
        raise DomainError(f"Fay matrix left the Siegel space: {e}") from e


def fay_period_matrix(
    omega0: SiegelPoint, v: Sequence[complex], t: complex
) -> SiegelPoint:
    """Plumbing period matrix of an irreducible one-node degeneration.

    Raises:
        DomainError: If |t| is not in (0, 1) or Im is not positive definite.
    """
    if not 0 < abs(t) < 1:
        raise DomainError(f"need 0 < |t| < 1, got |t| = {abs(t)}")
    return fay_period_matrix_from_log(omega0, v, cmath.log(t))


def reducible_period_matrix(tau1: complex, tau2: complex, t: complex) -> SiegelPoint:
    """[[tau1, t], [t, tau2]], a reducible one-node degeneration as t -> 0."""
    if not (complex(tau1).imag > 0 and complex(tau2).imag > 0):
        raise DomainError("tau1 and tau2 must lie in the upper half plane")
    return SiegelPoint(np.array([[tau1, t], [t, tau2]], dtype=complex))


def hodge_norm_log(omega: SiegelPoint) -> float:
    """log of the Hodge metric on det of the Hodge bundle, 1/2 log det Im."""
    return 0.5 * omega.log_det_imag


@dataclass(frozen=True)
class AsymptoticSample:
    """A value sampled at a point with parameter |t| = exp(log_abs_t)."""

    log_abs_t: float
    value: float

    @property
    def t(self) -> float:
        return math.exp(self.log_abs_t)

    @property
    def loglog(self) -> float:
        """log log(1/|t|)."""
        if self.log_abs_t >= 0:
            raise DomainError(
                f"log log(1/|t|) needs |t| < 1, got log|t| = {self.log_abs_t}"
            )
        return math.log(-self.log_abs_t)


@dataclass(frozen=True)
class AsymptoticFit:
    """value ~ coeff_log log|t| + coeff_loglog log log(1/|t|) + coeff_const."""

    coeff_log: float
    coeff_loglog: float
    coeff_const: float
    residual: float


def _check_window(samples: Sequence[AsymptoticSample]) -> tuple[np.ndarray, np.ndarray]:
    if len(samples) < MIN_FIT_SAMPLES:
        raise FitError(f"need at least {MIN_FIT_SAMPLES} samples, got {len(samples)}")
    logs = np.array([s.log_abs_t for s in samples], dtype=float)
    values = np.array([s.value for s in samples], dtype=float)
    if np.any(logs >= 0):
        raise FitError("every sample needs |t| < 1")
    if not np.all(np.isfinite(values)):
        raise FitError("sample values must be finite")
    decades = float(np.ptp(logs)) / math.log(10)
    if decades < MIN_FIT_DECADES:
        raise FitError(
            f"samples span {decades:.2f} decades of |t|, need {MIN_FIT_DECADES:g}"
        )
    return logs, values


def fit_asymptotics(
    samples: Sequence[AsymptoticSample], include_log: bool = True
) -> AsymptoticFit:
    """Least-squares fit on {log|t|, log log(1/|t|), 1}.

    With include_log=False the basis is {log log(1/|t|), 1} and coeff_log
    is reported as 0. Columns are centred and scaled before solving.

    Raises:
        FitError: On too few samples, too narrow a window or a
            rank-deficient design.
    """
    logs, values = _check_window(samples)
    raw = [np.log(-logs)] if not include_log else [logs, np.log(-logs)]
    means = [float(np.mean(col)) for col in raw]
    scales = [float(np.std(col)) for col in raw]
    if any(scale == 0 for scale in scales):
        raise FitError("design column is constant")
    design = np.column_stack(
        [(col - mu) / sd for col, mu, sd in zip(raw, means, scales)]
        + [np.ones_like(logs)]
    )
    coeffs, _, rank, singular = np.linalg.lstsq(design, values, rcond=None)
    if rank < design.shape[1] or singular[0] / singular[-1] > MAX_CONDITION_NUMBER:
        raise FitError("rank-deficient design: samples too clustered")

    slopes = [c / sd for c, sd in zip(coeffs[:-1], scales)]
    const = float(coeffs[-1] - sum(s * mu for s, mu in zip(slopes, means)))
    residual = float(np.max(np.abs(design @ coeffs - values)))
    coeff_log, coeff_loglog = (0.0, slopes[0]) if not include_log else slopes
    logger.info(
        "Fit over %d samples: log %.9f, loglog %.9f, const %.6f, residual %.2e",
        len(samples),
        coeff_log,
        coeff_loglog,
        const,
        residual,
    )
    return AsymptoticFit(float(coeff_log), float(coeff_loglog), const, residual)


def vanishing_order_slope(samples: Sequence[AsymptoticSample]) -> float:
    """Slope of value (a log-magnitude) against log|t|."""
    if len(samples) < 2:
        raise FitError(f"need at least 2 samples, got {len(samples)}")
    logs = np.array([s.log_abs_t for s in samples], dtype=float)
    if float(np.ptp(logs)) == 0:
        raise FitError("samples share a single |t|")
    values = np.array([s.value for s in samples], dtype=float)
    slope, _ = np.polyfit(logs, values, 1)
    return float(slope)


def faltings_reference(g: int, h: int = 0) -> tuple[Fraction, Fraction]:
    """(log, loglog) coefficients of the Faltings delta near delta_h."""
    require_genus(g, 2)
    if not 0 <= h <= g - 1:
        raise DimensionError(f"h must lie in 0..{g - 1}, got {h}")
    if h == 0:
        return Fraction(-(4 * g - 1)), Fraction(-18)
    return Fraction(-12 * h * (g - h)), Fraction(0)


def reduction_prediction(g: int, h: int = 0) -> tuple[Fraction, Fraction]:
    """(log, loglog) coefficients of beta_g near delta_h.

    The log coefficient is the delta_h coefficient of the Chern form
    class; the loglog coefficient is -(4g+2) at delta_0 and 0 elsewhere.
    """
    require_genus(g)
    if not 0 <= h <= max(g - 1, 0):
        raise DimensionError(f"h must lie in 0..{g - 1}, got {h}")
    if g < 3:
        log_coeff = Fraction(-g) if h == 0 else Fraction(-4 * h * (g - h))
    else:
        label = f"delta_{min(h, g - h)}"
        log_coeff = chern_biextension(g).coefficient(label)
    loglog_coeff = Fraction(-(4 * g + 2)) if h == 0 else Fraction(0)
    return log_coeff, loglog_coeff


def coefficients_proportional(u: Sequence[Fraction], v: Sequence[Fraction]) -> bool:
    """Whether u and v are linearly dependent, by exact 2x2 minors."""
    if len(u) != len(v):
        raise DimensionError(f"length mismatch: {len(u)} vs {len(v)}")
    return all(
        u[i] * v[j] == u[j] * v[i] for i in range(len(u)) for j in range(i + 1, len(u))
    )


def boundary_coefficient_vectors(g: int) -> tuple[list[Fraction], list[Fraction]]:
    """Flattened (log, loglog) coefficients of beta_g and of the Faltings
    delta over delta_0 .. delta_[g/2]."""
    beta: list[Fraction] = []
    faltings: list[Fraction] = []
    for h in range(g // 2 + 1):
        beta.extend(reduction_prediction(g, h))
        faltings.extend(faltings_reference(g, h))
    return beta, faltings


def incommensurability_check(g: int) -> bool:
    """True when beta_g is not a constant multiple of the Faltings delta."""
    require_genus(g, 3)
    beta, faltings = boundary_coefficient_vectors(g)
    return not coefficients_proportional(beta, faltings)


def log_spaced(x_min: float, x_max: float, count: int) -> list[float]:
    """count values of log(1/|t|), geometrically spaced in [x_min, x_max]."""
    if not 0 < x_min < x_max or count < 2:
        raise DomainError(f"bad schedule: [{x_min}, {x_max}] x {count}")
    return [float(x) for x in np.geomspace(x_min, x_max, count)]


def decade_schedule(k_min: int, k_max: int) -> list[float]:
    """log|t| for t = 10^-k, k = k_min .. k_max."""
    if not 0 < k_min < k_max:
        raise DomainError(f"bad decade range {k_min}..{k_max}")
    return [-k * math.log(10) for k in range(k_min, k_max + 1)]


@dataclass(frozen=True)
class DegenerationPath:
    """A one-parameter family of period matrices approaching the boundary.

    Irreducible paths carry omega0 and v; reducible ones carry tau1, tau2.
    t is real and positive along both.
    """

    kind: PathKind
    log_abs_t: tuple[float, ...]
    omega0: SiegelPoint | None = None
    v: tuple[complex, ...] = ()
    tau1: complex | None = None
    tau2: complex | None = None

    def __post_init__(self) -> None:
        logs = tuple(float(x) for x in self.log_abs_t)
        if not logs:
            raise DomainError("path needs at least one sample")
        if any(x >= 0 for x in logs):
            raise DomainError("every sample needs |t| < 1")
        if any(b >= a for a, b in zip(logs, logs[1:])):
            raise DomainError("|t| must be strictly decreasing along the path")
        object.__setattr__(self, "log_abs_t", logs)
        if self.kind == "irreducible-node":
            if self.omega0 is None:
                raise DimensionError("irreducible path needs omega0")
        elif self.kind == "reducible-node":
            if self.tau1 is None or self.tau2 is None:
                raise DimensionError("reducible path needs tau1 and tau2")
        else:
            raise DomainError(f"unknown path kind {self.kind!r}")

    @classmethod
    def fay(
        cls, omega0_imag: float, v: float, xs: Sequence[float]
    ) -> "DegenerationPath":
        """Genus-2 Fay path with omega0 = i*omega0_imag and t = e^{-x}."""
        return cls(
            kind="irreducible-node",
            log_abs_t=tuple(-x for x in xs),
            omega0=SiegelPoint.from_tau(complex(0, omega0_imag)),
            v=(complex(v),),
        )

    @classmethod
    def reducible(
        cls, tau1_imag: float, tau2_imag: float, k_min: int, k_max: int
    ) -> "DegenerationPath":
        return cls(
            kind="reducible-node",
            log_abs_t=tuple(decade_schedule(k_min, k_max)),
            tau1=complex(0, tau1_imag),
            tau2=complex(0, tau2_imag),
        )

    def point(self, log_abs_t: float) -> SiegelPoint:
        if self.kind == "irreducible-node":
            assert self.omega0 is not None
            return fay_period_matrix_from_log(self.omega0, self.v, log_abs_t)
        assert self.tau1 is not None and self.tau2 is not None
        return reducible_period_matrix(self.tau1, self.tau2, math.exp(log_abs_t))

    def points(self) -> list[SiegelPoint]:
        return [self.point(x) for x in self.log_abs_t]


def evaluate_samples(
    log_abs_ts: Sequence[float],
    evaluate: Callable[[float], float],
    max_workers: int = 4,
    progress_callback: SampleCallback | None = None,
) -> list[AsymptoticSample]:
    """Evaluate a function of log|t| concurrently, keeping schedule order.

    Args:
        log_abs_ts: Sample schedule.
        evaluate: Maps log|t| to the sampled value.
        max_workers: Thread pool size.
        progress_callback: Called once per finished sample, in completion
            order.

    Returns:
        Samples in the order of log_abs_ts.
    """
    results: dict[int, AsymptoticSample] = {}

    def _evaluate_one(index: int, log_abs_t: float) -> tuple[int, AsymptoticSample]:
        value = evaluate(log_abs_t)
        logger.debug("Sample log|t|=%.6g -> %.12g", log_abs_t, value)
        return index, AsymptoticSample(log_abs_t, value)

    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        futures = [
            executor.submit(_evaluate_one, i, x) for i, x in enumerate(log_abs_ts)
        ]
        for future in as_completed(futures):
            index, sample = future.result()
            results[index] = sample
            if progress_callback:
                progress_callback(sample)

    return [results[i] for i in range(len(log_abs_ts))]


def beta1_sweep(
    xs: Sequence[float],
    max_workers: int = 4,
    progress_callback: SampleCallback | None = None,
    tail_bound: float = DEFAULT_DELTA_TAIL_BOUND,
) -> list[AsymptoticSample]:
    """beta_1 along t = e^{-x}, that is tau = i x / 2 pi."""

    def evaluate(log_abs_t: float) -> float:
        return beta1(complex(0, -log_abs_t / (2 * math.pi)), tail_bound)

    return evaluate_samples([-x for x in xs], evaluate, max_workers, progress_callback)


def beta2_fay_sweep(
    path: DegenerationPath,
    max_workers: int = 4,
    progress_callback: SampleCallback | None = None,
    tail_bound: float = DEFAULT_THETA_TAIL_BOUND,
) -> list[AsymptoticSample]:
    """beta_2 along a degeneration path (either kind)."""

    def evaluate(log_abs_t: float) -> float:
        return beta2(path.point(log_abs_t), tail_bound)

    return evaluate_samples(path.log_abs_t, evaluate, max_workers, progress_callback)


def reducible_sweep(
    path: DegenerationPath,
    max_workers: int = 4,
    progress_callback: SampleCallback | None = None,
    tail_bound: float = DEFAULT_THETA_TAIL_BOUND,
) -> list[AsymptoticSample]:
    """log|chi_10| along a reducible path; its slope is the vanishing order."""
    if path.kind != "reducible-node":
        raise DomainError("reducible_sweep needs a reducible-node path")

    def evaluate(log_abs_t: float) -> float:
        return log_abs_chi10(path.point(log_abs_t), tail_bound)

    return evaluate_samples(path.log_abs_t, evaluate, max_workers, progress_callback)


def hodge_sweep(path: DegenerationPath) -> list[AsymptoticSample]:
    """1/2 log det Im along a path; cheap, evaluated inline."""
    return [
        AsymptoticSample(x, hodge_norm_log(path.point(x))) for x in path.log_abs_t
    ]
