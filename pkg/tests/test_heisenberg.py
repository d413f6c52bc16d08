"""Tests for the q-twisted group G_Z, separating twists and the fiber metric."""

import math
import random
from collections.abc import Callable

import numpy as np
import pytest

from src.core.exceptions import DimensionError
from src.core.heisenberg import (
    FiberPoint,
    GZElement,
    SeparatingCurveData,
    central_charge_breakdown,
    curvature_check,
    dehn_twist_central_charge,
    expected_curvature,
    fiber_log_norm,
    gz_commutator,
    gz_identity,
    gz_inverse,
    gz_mul,
    j_split_identity_check,
    ortho_split_check,
)
from src.core.symplectic_core import HVector, VClass, q_form, wedge_with_theta

VClassFactory = Callable[[int], VClass]

SPLITS = [(g, h) for g in range(3, 9) for h in range(1, g)]


def _element(random_vclass: VClassFactory, rng: random.Random, g: int) -> GZElement:
    return GZElement(random_vclass(g), rng.randint(-10, 10))


class TestGroupLaw:
    """Tests for the multiplication on G_Z."""

    def test_identity(self, random_vclass: VClassFactory, rng: random.Random) -> None:
        """(0, 0) is a two-sided identity."""
        a = _element(random_vclass, rng, 3)
        e = gz_identity(3)
        assert gz_mul(a, e) == a
        assert gz_mul(e, a) == a

    def test_inverse(self, random_vclass: VClassFactory, rng: random.Random) -> None:
        """a a^-1 = a^-1 a = e."""
        a = _element(random_vclass, rng, 4)
        assert gz_mul(a, gz_inverse(a)) == gz_identity(4)
        assert gz_mul(gz_inverse(a), a) == gz_identity(4)

    def test_associative(
        self, random_vclass: VClassFactory, rng: random.Random
    ) -> None:
        """(ab)c = a(bc) on 100 random triples."""
        for _ in range(100):
            a, b, c = (_element(random_vclass, rng, 3) for _ in range(3))
            assert gz_mul(gz_mul(a, b), c) == gz_mul(a, gz_mul(b, c))

    @pytest.mark.parametrize("g", [3, 4])
    def test_commutator_is_central(
        self, g: int, random_vclass: VClassFactory, rng: random.Random
    ) -> None:
        """[a, b] = (0, 2 q(u, v)) on 200 random pairs."""
        for _ in range(200):
            a = _element(random_vclass, rng, g)
            b = _element(random_vclass, rng, g)
            comm = gz_commutator(a, b)
            assert comm.v.lift.is_zero()
            assert comm.n == 2 * q_form(a.v, b.v)

    def test_identity_needs_genus_three(self) -> None:
        """G_Z is only built for g >= 3."""
        with pytest.raises(DimensionError):
            gz_identity(2)

    def test_genus_mismatch(self, random_vclass: VClassFactory) -> None:
        """Elements of different genus cannot be multiplied."""
        with pytest.raises(DimensionError, match="mismatch"):
            gz_mul(GZElement(random_vclass(3), 0), GZElement(random_vclass(4), 0))


class TestSeparatingCurve:
    """Tests for SeparatingCurveData."""

    def test_pairs(self) -> None:
        """The genus-h side carries the first h pairs."""
        c = SeparatingCurveData(5, 2)
        assert list(c.pairs) == [1, 2]
        assert list(c.complementary_pairs) == [3, 4, 5]
        assert c.complement() == SeparatingCurveData(5, 3)

    @pytest.mark.parametrize("h", [0, 4, -1])
    def test_h_out_of_range(self, h: int) -> None:
        """h must lie strictly between 0 and g."""
        with pytest.raises(DimensionError, match="h must lie"):
            SeparatingCurveData(4, h)

    def test_partial_thetas_sum_to_theta(self) -> None:
        """x ^ w' + x ^ w'' = x ^ theta."""
        c = SeparatingCurveData(4, 1)
        x = HVector(4, (1, -2, 0, 3, 2, 0, -1, 1))
        assert c.w_prime(x) + c.w_double_prime(x) == wedge_with_theta(x)


class TestCentralCharge:
    """Tests for the central charge of separating twists."""

    @pytest.mark.parametrize(("g", "h"), SPLITS)
    def test_closed_form(self, g: int, h: int) -> None:
        """tau(sigma_h) = 4h(g-h)."""
        assert dehn_twist_central_charge(SeparatingCurveData(g, h)) == 4 * h * (g - h)

    @pytest.mark.parametrize(("g", "h"), [(g, h) for g, h in SPLITS if h >= 2])
    def test_breakdown_values(self, g: int, h: int) -> None:
        """Intermediate sums on the genus-h block."""
        b = central_charge_breakdown(SeparatingCurveData(g, h))
        assert b.block == tuple(range(1, h + 1))
        assert b.pairing_w_prime == h * (h - 1)
        assert b.pairing_w_double_prime == h * (g - h)
        assert b.q_sum == h * (h - 1) * (g - h)

    def test_genus_one_side_uses_complement(self) -> None:
        """For h = 1 the complementary block is summed."""
        b = central_charge_breakdown(SeparatingCurveData(5, 1))
        assert b.block == (2, 3, 4, 5)
        assert b.q_sum == 4 * 3 * 1
        assert b.charge == 16

    def test_symmetric_in_h(self) -> None:
        """tau(sigma_h) = tau(sigma_{g-h})."""
        for g in range(3, 7):
            for h in range(1, g):
                c = SeparatingCurveData(g, h)
                assert dehn_twist_central_charge(c) == dehn_twist_central_charge(
                    c.complement()
                )

    def test_genus_two_rejected(self) -> None:
        """G_Z does not exist in genus 2."""
        with pytest.raises(DimensionError):
            dehn_twist_central_charge(SeparatingCurveData(2, 1))


class TestSplitIdentities:
    """Tests for the split of j and the orthogonality of the two sides."""

    @pytest.mark.parametrize(("g", "h"), [(3, 1), (4, 2), (5, 2), (6, 3), (7, 5)])
    def test_j_split(self, g: int, h: int, rng: random.Random) -> None:
        """j(x ^ w') = (g-h) x ^ w' - (h-1) x ^ w'' for x on the h-side."""
        for _ in range(5):
            coords = [0] * (2 * g)
            for j in range(h):
                coords[j] = rng.randint(-4, 4)
                coords[g + j] = rng.randint(-4, 4)
            assert j_split_identity_check(g, h, HVector(g, tuple(coords)))

    def test_j_split_rejects_outside_support(self) -> None:
        """x must live on the first h pairs."""
        with pytest.raises(DimensionError, match="outside"):
            j_split_identity_check(4, 2, HVector.a(4, 3))

    @pytest.mark.parametrize(("g", "h"), SPLITS)
    def test_orthogonal(self, g: int, h: int) -> None:
        """<x ^ w'', y ^ w'> = 0 across the curve."""
        assert ortho_split_check(g, h)


class TestFiberMetric:
    """Tests for the biextension fiber norm and its curvature."""

    def test_single_coordinate(self) -> None:
        """z = 1, u = i gives 4 pi."""
        assert fiber_log_norm(FiberPoint((1,), (1j,))) == pytest.approx(4 * math.pi)

    def test_antisymmetric(self, rng: random.Random) -> None:
        """Swapping z and u negates the log norm."""
        z = tuple(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(3))
        u = tuple(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(3))
        assert fiber_log_norm(FiberPoint(z, u)) == pytest.approx(
            -fiber_log_norm(FiberPoint(u, z))
        )

    def test_real_points_vanish(self) -> None:
        """Real z and u give a zero log norm."""
        assert fiber_log_norm(FiberPoint((0.5, -2.0), (1.5, 3.0))) == pytest.approx(0)

    def test_length_mismatch(self) -> None:
        """z and u must have the same length."""
        with pytest.raises(DimensionError, match="differ"):
            FiberPoint((1, 2), (1,))

    def test_expected_curvature_shape(self) -> None:
        """The constant form pairs z_j with u_j."""
        m = expected_curvature(2)
        assert m.shape == (4, 4)
        assert m[0, 2] == 1.0
        assert m[2, 0] == -1.0
        assert np.count_nonzero(m) == 4

    @pytest.mark.parametrize("n", [1, 2])
    def test_curvature_constant(self, n: int, rng: random.Random) -> None:
        """The numeric curvature matches the constant form at random points."""
        for _ in range(3):
            z = tuple(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(n))
            u = tuple(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(n))
            assert curvature_check(FiberPoint(z, u), step=1e-2) < 1e-8
