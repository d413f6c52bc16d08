"""Numerics of the modular forms Delta and chi_10 and their Petersson norms.

Magnitudes are carried as logarithms wherever a degeneration sweep can push
them outside the double range: log|Delta| at Im tau = 300 is about -1900.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from src.core.exceptions import DimensionError, DomainError

logger = logging.getLogger(__name__)

DEFAULT_DELTA_TAIL_BOUND = 1e-18
DEFAULT_THETA_TAIL_BOUND = 1e-16
SYMMETRY_TOLERANCE = 1e-12

LOG_TWO_PI = math.log(2 * math.pi)


@dataclass(frozen=True, eq=False)
class SiegelPoint:
    """A point of the Siegel upper half space: symmetric, Im positive definite."""

    omega: np.ndarray

    def __post_init__(self) -> None:
        omega = np.array(self.omega, dtype=complex)
        if omega.ndim == 0:
            omega = omega.reshape(1, 1)
        if omega.ndim != 2 or omega.shape[0] != omega.shape[1]:
            raise DimensionError(f"period matrix must be square, got {omega.shape}")
        if not np.all(np.isfinite(omega)):
            raise DomainError("period matrix has non-finite entries")
        asymmetry = float(np.max(np.abs(omega - omega.T)))
        if asymmetry > SYMMETRY_TOLERANCE:
            raise DomainError(f"period matrix not symmetric (off by {asymmetry:.3e})")
        try:
            np.linalg.cholesky(omega.imag)
        except np.linalg.LinAlgError as e:
            raise DomainError("imaginary part is not positive definite") from e
        omega.setflags(write=False)
        object.__setattr__(self, "omega", omega)

    @classmethod
    def from_tau(cls, tau: complex) -> "SiegelPoint":
        return cls(np.array([[tau]], dtype=complex))

    @property
    def genus(self) -> int:
        return int(self.omega.shape[0])

    @property
    def imag(self) -> np.ndarray:
        return self.omega.imag

    @property
    def det_imag(self) -> float:
        return float(np.linalg.det(self.imag))

    @property
    def log_det_imag(self) -> float:
        sign, logdet = np.linalg.slogdet(self.imag)
        if sign <= 0:
            raise DomainError("det Im(Omega) is not positive")
        return float(logdet)

    @property
    def min_imag_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.imag)[0])


@dataclass(frozen=True)
class ThetaCharacteristic:
    """Half-integer characteristic [a; b], stored as the bits 2a and 2b."""

    twice_a: tuple[int, ...]
    twice_b: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.twice_a) != len(self.twice_b):
            raise DimensionError("characteristic halves differ in length")
        if any(bit not in (0, 1) for bit in (*self.twice_a, *self.twice_b)):
            raise DomainError("characteristic entries must be 0 or 1/2")

    @classmethod
    def from_halves(
        cls, a: Sequence[float], b: Sequence[float]
    ) -> "ThetaCharacteristic":
        """Build from entries in {0, 1/2}."""
        return cls(tuple(round(2 * x) for x in a), tuple(round(2 * x) for x in b))

    @property
    def a(self) -> np.ndarray:
        return np.array(self.twice_a, dtype=float) / 2

    @property
    def b(self) -> np.ndarray:
        return np.array(self.twice_b, dtype=float) / 2

    @property
    def is_even(self) -> bool:
        return sum(x * y for x, y in zip(self.twice_a, self.twice_b)) % 2 == 0

    def label(self) -> str:
        return "".join(map(str, self.twice_a)) + "/" + "".join(map(str, self.twice_b))


@lru_cache(maxsize=1)
def even_characteristics() -> tuple[ThetaCharacteristic, ...]:
    """The 10 even genus-2 characteristics, in product order of (2a, 2b)."""
    chars = (
        ThetaCharacteristic((a1, a2), (b1, b2))
        for a1, a2, b1, b2 in product((0, 1), repeat=4)
    )
    return tuple(c for c in chars if c.is_even)


@dataclass(frozen=True)
class ModularValue:
    """Value of a weight-k form at a point."""

    value: complex
    weight: float
    point: SiegelPoint

    def __post_init__(self) -> None:
        if self.weight <= 0:
            raise DomainError(f"weight must be positive, got {self.weight}")


def _check_upper_half_plane(tau: complex) -> complex:
    tau = complex(tau)
    if not tau.imag > 0:
        raise DomainError(f"Im(tau) must be positive, got {tau.imag}")
    return tau


def delta_terms(tau: complex, tail_bound: float = DEFAULT_DELTA_TAIL_BOUND) -> int:
    """Number of product factors before |q|^n drops below tail_bound."""
    tau = _check_upper_half_plane(tau)
    log_abs_q = -2 * math.pi * tau.imag
    return max(1, math.ceil(math.log(tail_bound) / log_abs_q))


def dedekind_delta(
    tau: complex,
    cutoff: int | None = None,
    tail_bound: float = DEFAULT_DELTA_TAIL_BOUND,
) -> complex:
    """Delta(tau) = (2 pi)^12 q prod_{n>=1} (1 - q^n)^24.

    Raises:
        DomainError: If Im(tau) <= 0.
    """
    tau = _check_upper_half_plane(tau)
    n_terms = cutoff if cutoff is not None else delta_terms(tau, tail_bound)
    q = np.exp(2j * np.pi * tau)
    n = np.arange(1, n_terms + 1)
    value = (2 * np.pi) ** 12 * q * np.prod((1 - q**n) ** 24)
    return complex(value)


def log_abs_delta(
    tau: complex,
    cutoff: int | None = None,
    tail_bound: float = DEFAULT_DELTA_TAIL_BOUND,
) -> float:
    """log|Delta(tau)| = 12 log 2pi - 2pi Im tau + 24 sum log|1 - q^n|."""
    tau = _check_upper_half_plane(tau)
    n_terms = cutoff if cutoff is not None else delta_terms(tau, tail_bound)
    q = np.exp(2j * np.pi * tau)
    factors = np.abs(1 - q ** np.arange(1, n_terms + 1))
    if np.any(factors == 0):
        raise DomainError("Delta vanishes at this point")
    return float(
        12 * LOG_TWO_PI - 2 * math.pi * tau.imag + 24 * np.sum(np.log(factors))
    )


def theta_radius(
    omega: SiegelPoint, tail_bound: float = DEFAULT_THETA_TAIL_BOUND
) -> int:
    """Box radius R with exp(-pi lambda_min (R-1)^2) below tail_bound."""
    lam = omega.min_imag_eigenvalue
    return math.ceil(math.sqrt(math.log(1 / tail_bound) / (math.pi * lam))) + 1


def _theta_log_parts(
    char: ThetaCharacteristic,
    omega: SiegelPoint,
    radius: int | None,
    tail_bound: float,
) -> tuple[float, complex]:
    """(M, s) with theta = exp(M) * s, for log-sum-exp evaluation."""
    if omega.genus != 2:
        raise DimensionError(f"theta constants need genus 2, got {omega.genus}")
    if len(char.twice_a) != 2:
        raise DimensionError("characteristic must have two entries per half")
    if not char.is_even:
        raise DomainError(f"characteristic {char.label()} is odd")
    r = radius if radius is not None else theta_radius(omega, tail_bound)
    # half-integer shifts get one extra lattice point so the box is symmetric in n + a
    axes = [np.arange(-r - bit, r + 1) for bit in char.twice_a]
    n1, n2 = np.meshgrid(*axes, indexing="ij")
    m = np.stack([n1.ravel(), n2.ravel()], axis=1) + char.a
    quad = np.einsum("ki,ij,kj->k", m, omega.omega, m)
    exponents = 1j * np.pi * quad + 2j * np.pi * (m @ char.b)
    top = float(np.max(exponents.real))
    s = complex(np.sum(np.exp(exponents - top)))
    return top, s


def theta_constant(
    char: ThetaCharacteristic,
    omega: SiegelPoint,
    radius: int | None = None,
    tail_bound: float = DEFAULT_THETA_TAIL_BOUND,
) -> complex:
    """Genus-2 theta constant with characteristic char at omega.

    Raises:
        DimensionError: If omega is not genus 2.
        DomainError: If char is odd.
    """
    top, s = _theta_log_parts(char, omega, radius, tail_bound)
    return complex(math.exp(top) * s)


def log_abs_theta_constant(
    char: ThetaCharacteristic,
    omega: SiegelPoint,
    radius: int | None = None,
    tail_bound: float = DEFAULT_THETA_TAIL_BOUND,
) -> float:
    top, s = _theta_log_parts(char, omega, radius, tail_bound)
    if s == 0:
        raise DomainError(f"theta constant {char.label()} vanishes")
    return top + math.log(abs(s))


def chi10(omega: SiegelPoint, tail_bound: float = DEFAULT_THETA_TAIL_BOUND) -> complex:
    """Product of the squares of the 10 even theta constants."""
    value = complex(1.0)
    for char in even_characteristics():
        value *= theta_constant(char, omega, tail_bound=tail_bound) ** 2
    return value


def log_abs_chi10(
    omega: SiegelPoint, tail_bound: float = DEFAULT_THETA_TAIL_BOUND
) -> float:
    return sum(
        2 * log_abs_theta_constant(char, omega, tail_bound=tail_bound)
        for char in even_characteristics()
    )


def modular_norm(v: ModularValue) -> float:
    """|F| (det Im Omega)^(k/2)."""
    det = v.point.det_imag
    if det <= 0:
        raise DomainError(f"det Im(Omega) must be positive, got {det}")
    return abs(v.value) * det ** (v.weight / 2)


def beta1(tau: complex, tail_bound: float = DEFAULT_DELTA_TAIL_BOUND) -> float:
    """-log ||Delta|| = -(log|Delta| + 6 log Im tau)."""
    tau = _check_upper_half_plane(tau)
    return -(log_abs_delta(tau, tail_bound=tail_bound) + 6 * math.log(tau.imag))


def beta2(omega: SiegelPoint, tail_bound: float = DEFAULT_THETA_TAIL_BOUND) -> float:
    """-2 log ||chi_10|| = -2 (log|chi_10| + 5 log det Im Omega)."""
    return -2 * (log_abs_chi10(omega, tail_bound) + 5 * omega.log_det_imag)
