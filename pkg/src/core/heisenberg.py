"""The q-twisted central extension G_Z = V_Z x Z and the fiber metric.

Group law (u, n)(v, m) = (u + v, n + m + q(u, v)). Separating Dehn twists
land in the centre {0} x Z; their central coordinate is computed from q
restricted to one side of the curve.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from src.core.exceptions import DimensionError, LatticeArithmeticError
from src.core.symplectic_core import (
    HVector,
    VClass,
    Wedge3,
    j_map,
    q_form,
    require_genus,
    vclass_equal,
    wedge3_pairing,
    wedge_with_partial_theta,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GZElement:
    """Element (v, n) of G_Z."""

    v: VClass
    n: int

    @property
    def genus(self) -> int:
        return self.v.genus

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GZElement):
            return NotImplemented
        return self.n == other.n and vclass_equal(self.v, other.v)

    __hash__ = None  # type: ignore[assignment]


def gz_identity(g: int) -> GZElement:
    require_genus(g, 3)
    return GZElement(VClass.zero(g), 0)


def gz_mul(a: GZElement, b: GZElement) -> GZElement:
    """(u, n)(v, m) = (u + v, n + m + q(u, v))."""
    if a.genus != b.genus:
        raise DimensionError(f"genus mismatch: {a.genus} vs {b.genus}")
    return GZElement(a.v + b.v, a.n + b.n + q_form(a.v, b.v))


def gz_inverse(a: GZElement) -> GZElement:
    # q(u, -u) = 0, so the inverse is the naive negation
    return GZElement(-a.v, -a.n)


def gz_commutator(a: GZElement, b: GZElement) -> GZElement:
    """a b a^-1 b^-1, which equals (0, 2 q(u, v))."""
    return gz_mul(gz_mul(gz_mul(a, b), gz_inverse(a)), gz_inverse(b))


@dataclass(frozen=True)
class SeparatingCurveData:
    """A separating curve cutting genus g into pieces of genus h and g - h.

    The genus-h side carries the pairs a_1, b_1 .. a_h, b_h.
    """

    g: int
    h: int

    def __post_init__(self) -> None:
        require_genus(self.g, 2)
        if isinstance(self.h, bool) or not isinstance(self.h, int):
            raise DimensionError(f"h must be an integer, got {self.h!r}")
        if not 1 <= self.h <= self.g - 1:
            raise DimensionError(f"h must lie in 1..{self.g - 1}, got {self.h}")

    @property
    def pairs(self) -> range:
        """1-based pair indices on the genus-h side."""
        return range(1, self.h + 1)

    @property
    def complementary_pairs(self) -> range:
        return range(self.h + 1, self.g + 1)

    def w_prime(self, x: HVector) -> Wedge3:
        """x ^ w', with w' = sum of a_j ^ b_j over the genus-h side."""
        return wedge_with_partial_theta(x, self.pairs)

    def w_double_prime(self, x: HVector) -> Wedge3:
        """x ^ w'', with w'' = sum of a_j ^ b_j over the other side."""
        return wedge_with_partial_theta(x, self.complementary_pairs)

    def complement(self) -> "SeparatingCurveData":
        return SeparatingCurveData(self.g, self.g - self.h)


@dataclass(frozen=True)
class CentralChargeBreakdown:
    """Intermediate quantities of the central charge computation."""

    g: int
    h: int
    block: tuple[int, ...]
    pairing_w_prime: int
    pairing_w_double_prime: int
    q_sum: int
    charge: int


def central_charge_breakdown(c: SeparatingCurveData) -> CentralChargeBreakdown:
    """Central coordinate of the Dehn twist about c, with its ingredients.

    The twist is a product of h commutators whose central parts add up to
    S = sum_j q(a_j ^ w', b_j ^ w') over a block of size k; the charge is
    8S / (2k - 2). A block of size 1 gives 0/0, so for h = 1 the
    complementary block (size g - 1) is used; the charge is symmetric in
    h and g - h.

    Raises:
        DimensionError: If g < 3.
        LatticeArithmeticError: If 8S is not divisible by 2k - 2.
    """
    g = require_genus(c.g, 3)
    if c.h >= 2:
        block, other = tuple(c.pairs), tuple(c.complementary_pairs)
    else:
        block, other = tuple(c.complementary_pairs), tuple(c.pairs)
    k = len(block)

    q_sum = 0
    pairing_prime = 0
    pairing_double_prime = 0
    for j in block:
        a_w = wedge_with_partial_theta(HVector.a(g, j), block)
        b_w = wedge_with_partial_theta(HVector.b(g, j), block)
        q_sum += q_form(VClass(a_w), VClass(b_w))
        pairing_prime += wedge3_pairing(a_w, b_w)
        pairing_double_prime += wedge3_pairing(
            wedge_with_partial_theta(HVector.a(g, j), other),
            wedge_with_partial_theta(HVector.b(g, j), other),
        )

    charge, remainder = divmod(8 * q_sum, 2 * k - 2)
    if remainder:
        raise LatticeArithmeticError(
            f"8S = {8 * q_sum} is not divisible by 2h-2 = {2 * k - 2}"
        )
    logger.debug(
        "Central charge g=%d h=%d via block %s: S=%d, charge=%d",
        g,
        c.h,
        block,
        q_sum,
        charge,
    )
    return CentralChargeBreakdown(
        g=g,
        h=c.h,
        block=block,
        pairing_w_prime=pairing_prime,
        pairing_w_double_prime=pairing_double_prime,
        q_sum=q_sum,
        charge=charge,
    )


def dehn_twist_central_charge(c: SeparatingCurveData) -> int:
    """The integer image of the separating twist about c in the centre of G_Z."""
    return central_charge_breakdown(c).charge


def _check_supported(x: HVector, c: SeparatingCurveData) -> None:
    g = c.g
    if x.genus != g:
        raise DimensionError(f"genus mismatch: {x.genus} vs {g}")
    allowed = {j - 1 for j in c.pairs} | {g + j - 1 for j in c.pairs}
    outside = [i for i, v in enumerate(x.coords) if v and i not in allowed]
    if outside:
        raise DimensionError(
            f"x has coordinates outside the first {c.h} pairs: {outside}"
        )


def j_split_identity_check(g: int, h: int, x: HVector) -> bool:
    """Check j(x ^ w') = (g-h) x ^ w' - (h-1) x ^ w'' for x on the h-side.

    Raises:
        DimensionError: If x has support outside the first h pairs.
    """
    c = SeparatingCurveData(g, h)
    _check_supported(x, c)
    x_w1 = c.w_prime(x)
    x_w2 = c.w_double_prime(x)
    return j_map(VClass(x_w1)) == x_w1 * (g - h) - x_w2 * (h - 1)


def ortho_split_check(g: int, h: int) -> bool:
    """Whether <x ^ w'', y ^ w'> = 0 for x on the h-side, y on the other."""
    c = SeparatingCurveData(g, h)
    left = [HVector.a(g, j) for j in c.pairs] + [HVector.b(g, j) for j in c.pairs]
    right = [HVector.a(g, j) for j in c.complementary_pairs] + [
        HVector.b(g, j) for j in c.complementary_pairs
    ]
    return all(
        wedge3_pairing(c.w_double_prime(x), c.w_prime(y)) == 0
        for x in left
        for y in right
    )


@dataclass(frozen=True)
class FiberPoint:
    """A point (z, u) in C^n x C^n."""

    z: tuple[complex, ...]
    u: tuple[complex, ...]

    def __post_init__(self) -> None:
        z = tuple(complex(v) for v in self.z)
        u = tuple(complex(v) for v in self.u)
        if len(z) != len(u):
            raise DimensionError(f"z and u differ in length: {len(z)} vs {len(u)}")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "u", u)

    @property
    def dim(self) -> int:
        return len(self.z)

    def as_array(self) -> np.ndarray:
        return np.array(self.z + self.u, dtype=complex)


def _log_norm_of(w: np.ndarray, n: int) -> float:
    z, u = w[:n], w[n:]
    value = 2j * np.pi * np.sum(z * np.conj(u) - u * np.conj(z))
    return float(value.real)


def fiber_log_norm(p: FiberPoint) -> float:
    """log of the biextension fiber norm, 2 pi i sum_j (z_j u_j* - u_j z_j*).

    This is the real number -4 pi sum_j Im(z_j conj(u_j)).
    """
    return _log_norm_of(p.as_array(), p.dim)


def expected_curvature(n: int) -> np.ndarray:
    """Coefficient matrix of sum_j (dz_j ^ du_j* - du_j ^ dz_j*) over w = (z, u)."""
    expected = np.zeros((2 * n, 2 * n))
    for j in range(n):
        expected[j, n + j] = 1.0
        expected[n + j, j] = -1.0
    return expected


def _real_hessian(
    f: Callable[[np.ndarray], float], r: np.ndarray, step: float
) -> np.ndarray:
    size = r.size
    hessian = np.empty((size, size))
    eye = np.eye(size) * step
    for s in range(size):
        for t in range(size):
            hessian[s, t] = (
                f(r + eye[s] + eye[t])
                - f(r + eye[s] - eye[t])
                - f(r - eye[s] + eye[t])
                + f(r - eye[s] - eye[t])
            ) / (4 * step * step)
    return hessian


def curvature_check(p: FiberPoint, step: float = 1e-3) -> float:
    """Max deviation of the numeric curvature from the expected constant form.

    The mixed Wirtinger derivatives d^2 f / dw_a dw_b* are assembled from
    central-difference real second partials and divided by 2 pi i.
    """
    n = p.dim
    w = p.as_array()
    m = 2 * n
    r = np.concatenate([w.real, w.imag])

    def f(real: np.ndarray) -> float:
        return _log_norm_of(real[:m] + 1j * real[m:], n)

    hess = _real_hessian(f, r, step)
    xx, yy = hess[:m, :m], hess[m:, m:]
    xy, yx = hess[:m, m:], hess[m:, :m]
    mixed = 0.25 * ((xx + yy) + 1j * (xy - yx))
    deviation = np.max(np.abs(mixed / (2j * np.pi) - expected_curvature(n)))
    logger.debug("Curvature deviation at n=%d: %.3e", n, deviation)
    return float(deviation)
