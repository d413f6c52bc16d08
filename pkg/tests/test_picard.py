"""Tests for divisor classes, the Chern class and the r0 solve."""

from fractions import Fraction

import pytest

from src.core.exceptions import DimensionError
from src.core.picard import (
    DivisorClass,
    DivisorRelation,
    boundary_basis,
    chern_biextension,
    compact_basis,
    compact_part_class,
    cornalba_harris_relation,
    hyperelliptic_basis,
    morita_class,
    restrict_to_interior,
    solve_r0,
)


class TestBases:
    """Tests for the divisor bases."""

    def test_boundary_basis(self) -> None:
        """lambda and delta_0 .. delta_[g/2]."""
        assert boundary_basis(5) == ("lambda", "delta_0", "delta_1", "delta_2")

    def test_compact_basis(self) -> None:
        """delta_0 is dropped."""
        assert compact_basis(4) == ("lambda", "delta_1", "delta_2")

    def test_hyperelliptic_basis(self) -> None:
        """xi_0 .. xi_[(g-1)/2] sit between lambda and the delta_h."""
        assert hyperelliptic_basis(5) == (
            "lambda",
            "xi_0",
            "xi_1",
            "xi_2",
            "delta_1",
            "delta_2",
        )


class TestDivisorClass:
    """Tests for DivisorClass arithmetic."""

    def test_missing_labels_are_zero(self) -> None:
        """Unlisted basis labels get coefficient 0."""
        d = DivisorClass(("lambda", "delta_0"), {"lambda": Fraction(3)})
        assert d.coefficient("delta_0") == 0

    def test_unknown_label(self) -> None:
        """Labels outside the basis are rejected."""
        with pytest.raises(DimensionError, match="not in basis"):
            DivisorClass(("lambda",), {"delta_0": Fraction(1)})
        with pytest.raises(DimensionError):
            DivisorClass(("lambda",)).coefficient("delta_0")

    def test_arithmetic(self) -> None:
        """Sums, differences and scalings are coefficientwise."""
        basis = ("lambda", "delta_0")
        a = DivisorClass(basis, {"lambda": Fraction(1), "delta_0": Fraction(2)})
        b = DivisorClass(basis, {"lambda": Fraction(1, 2)})
        assert (a + b).coefficient("lambda") == Fraction(3, 2)
        assert (a - b).coefficient("delta_0") == 2
        assert (2 * a).coefficient("delta_0") == 4

    def test_basis_mismatch(self) -> None:
        """Classes on different bases cannot be added."""
        with pytest.raises(DimensionError, match="mismatch"):
            DivisorClass(("lambda",)) + DivisorClass(("lambda", "delta_0"))
        with pytest.raises(DimensionError):
            DivisorRelation(DivisorClass(("lambda",)), DivisorClass(("delta_0",)))

    def test_str(self) -> None:
        """Zero terms are hidden and negatives read naturally."""
        d = DivisorClass(
            ("lambda", "delta_0", "delta_1"),
            {"lambda": Fraction(16), "delta_0": Fraction(-3)},
        )
        assert str(d) == "16*lambda - 3*delta_0"
        assert str(DivisorClass(("lambda",))) == "0"


class TestChernClass:
    """Tests for the Chern class of the biextension bundle."""

    def test_genus_four(self) -> None:
        """Coefficients in genus 4."""
        c1 = chern_biextension(4)
        assert c1.coefficient("lambda") == 36
        assert c1.coefficient("delta_0") == -4
        assert c1.coefficient("delta_1") == -12
        assert c1.coefficient("delta_2") == -16

    @pytest.mark.parametrize("g", range(3, 9))
    def test_delta_h_matches_central_charge(self, g: int) -> None:
        """delta_h coefficient is -4h(g-h)."""
        c1 = chern_biextension(g)
        for h in range(1, g // 2 + 1):
            assert c1.coefficient(f"delta_{h}") == -4 * h * (g - h)

    def test_needs_genus_three(self) -> None:
        """The biextension bundle is built for g >= 3."""
        with pytest.raises(DimensionError):
            chern_biextension(2)

    @pytest.mark.parametrize("g", range(3, 8))
    def test_interior_is_morita(self, g: int) -> None:
        """On the interior only (8g+4) lambda survives."""
        restricted = restrict_to_interior(chern_biextension(g))
        assert restricted.coeffs == morita_class(g).coeffs

    def test_compact_part(self) -> None:
        """The compact part drops delta_0 and keeps the rest."""
        part = compact_part_class(5)
        assert part.basis == ("lambda", "delta_1", "delta_2")
        assert part.coefficient("delta_2") == -24


class TestR0:
    """Tests for the hyperelliptic r0 solve."""

    @pytest.mark.parametrize("g", range(3, 13))
    def test_r0_is_minus_g(self, g: int) -> None:
        """r0 = -g."""
        assert solve_r0(g).r0 == -g

    def test_r0_agrees_with_chern_class(self) -> None:
        """The solved r0 is the delta_0 coefficient of the Chern class."""
        for g in range(3, 9):
            assert solve_r0(g).r0 == chern_biextension(g).coefficient("delta_0")

    def test_c_values(self) -> None:
        """c_j = (j+1)(g-j) for the higher xi_j."""
        solution = solve_r0(6)
        assert solution.c == {"c_1": Fraction(10), "c_2": Fraction(12)}

    def test_single_c_in_low_genus(self) -> None:
        """Genus 3 and 4 carry only xi_1 beyond xi_0."""
        assert solve_r0(3).c == {"c_1": Fraction(4)}
        assert solve_r0(4).c == {"c_1": Fraction(6)}

    def test_needs_genus_three(self) -> None:
        """The solve uses the Chern class, defined for g >= 3."""
        with pytest.raises(DimensionError):
            solve_r0(2)

    def test_cornalba_harris_relation(self) -> None:
        """(8g+4) lambda = g xi_0 + sum (j+1)(g-j) xi_j + 4 sum h(g-h) delta_h."""
        relation = cornalba_harris_relation(5)
        assert relation.lhs.coefficient("lambda") == 44
        assert relation.rhs.coefficient("xi_0") == 5
        assert relation.rhs.coefficient("xi_1") == 8
        assert relation.rhs.coefficient("xi_2") == 9
        assert relation.rhs.coefficient("delta_1") == 16
        assert relation.rhs.coefficient("delta_2") == 24
