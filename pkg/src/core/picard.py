"""Rational divisor-class bookkeeping on the moduli space of curves."""

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from src.core.exceptions import (
    DimensionError,
    InconsistentSystemError,
    LatticeArithmeticError,
)
from src.core.heisenberg import SeparatingCurveData, dehn_twist_central_charge
from src.core.symplectic_core import require_genus

logger = logging.getLogger(__name__)

INTERIOR_BASIS: tuple[str, ...] = ("lambda",)


def boundary_basis(g: int) -> tuple[str, ...]:
    """lambda, delta_0 .. delta_[g/2]."""
    require_genus(g, 2)
    return ("lambda", *(f"delta_{h}" for h in range(g // 2 + 1)))


def compact_basis(g: int) -> tuple[str, ...]:
    """lambda, delta_1 .. delta_[g/2], for the complement of delta_0."""
    require_genus(g, 2)
    return ("lambda", *(f"delta_{h}" for h in range(1, g // 2 + 1)))


def hyperelliptic_basis(g: int) -> tuple[str, ...]:
    """lambda, xi_0 .. xi_[(g-1)/2], delta_1 .. delta_[g/2]."""
    require_genus(g, 2)
    return (
        "lambda",
        *(f"xi_{j}" for j in range((g - 1) // 2 + 1)),
        *(f"delta_{h}" for h in range(1, g // 2 + 1)),
    )


@dataclass(frozen=True)
class DivisorClass:
    """Rational combination of the labels in basis; missing labels are 0."""

    basis: tuple[str, ...]
    coeffs: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        unknown = set(self.coeffs) - set(self.basis)
        if unknown:
            raise DimensionError(f"labels {sorted(unknown)} not in basis {self.basis}")
        full = {label: Fraction(self.coeffs.get(label, 0)) for label in self.basis}
        object.__setattr__(self, "coeffs", full)

    def coefficient(self, label: str) -> Fraction:
        try:
            return self.coeffs[label]
        except KeyError as e:
            raise DimensionError(f"label {label!r} not in basis {self.basis}") from e

    def _check(self, other: "DivisorClass") -> None:
        if self.basis != other.basis:
            raise DimensionError(f"basis mismatch: {self.basis} vs {other.basis}")

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._check(other)
        return DivisorClass(
            self.basis, {k: self.coeffs[k] + other.coeffs[k] for k in self.basis}
        )

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self + (-other)

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(self.basis, {k: -v for k, v in self.coeffs.items()})

    def __mul__(self, scalar: int | Fraction) -> "DivisorClass":
        return DivisorClass(self.basis, {k: scalar * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __str__(self) -> str:
        terms = [f"{v}*{k}" for k, v in self.coeffs.items() if v]
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


@dataclass(frozen=True)
class DivisorRelation:
    """lhs = rhs in the rational Picard group."""

    lhs: DivisorClass
    rhs: DivisorClass

    def __post_init__(self) -> None:
        self.lhs._check(self.rhs)


@dataclass(frozen=True)
class R0Solution:
    """Solved coefficients of the delta_0 coefficient matching.

    r0 is the theorem-backed value; the c_j are derived by the same solve
    and have no independent check.
    """

    g: int
    r0: Fraction
    c: dict[str, Fraction]


def chern_biextension(g: int) -> DivisorClass:
    """First Chern class of the biextension line bundle on the boundary basis.

    (8g+4) lambda - g delta_0 - sum_h 4h(g-h) delta_h. Each delta_h
    coefficient is minus the central charge of the separating twist.

    Raises:
        DimensionError: If g < 3.
    """
    require_genus(g, 3)
    coeffs: dict[str, Fraction] = {
        "lambda": Fraction(8 * g + 4),
        "delta_0": Fraction(-g),
    }
    for h in range(1, g // 2 + 1):
        charge = dehn_twist_central_charge(SeparatingCurveData(g, h))
        if charge != 4 * h * (g - h):
            raise LatticeArithmeticError(
                f"central charge {charge} for g={g} h={h} disagrees with 4h(g-h)"
            )
        coeffs[f"delta_{h}"] = Fraction(-charge)
    return DivisorClass(boundary_basis(g), coeffs)


def cornalba_harris_relation(g: int) -> DivisorRelation:
    """(8g+4) lambda = g xi_0 + sum (j+1)(g-j) xi_j + 4 sum h(g-h) delta_h.

    Holds on the closure of the hyperelliptic locus.
    """
    basis = hyperelliptic_basis(g)
    rhs: dict[str, Fraction] = {"xi_0": Fraction(g)}
    for j in range(1, (g - 1) // 2 + 1):
        rhs[f"xi_{j}"] = Fraction((j + 1) * (g - j))
    for h in range(1, g // 2 + 1):
        rhs[f"delta_{h}"] = Fraction(4 * h * (g - h))
    return DivisorRelation(
        DivisorClass(basis, {"lambda": Fraction(8 * g + 4)}),
        DivisorClass(basis, rhs),
    )


def solve_r0(g: int) -> R0Solution:
    """Solve for r0 by matching two expressions for (8g+4) lambda.

    Restricting the biextension class to the hyperelliptic locus, where
    delta_0 pulls back to xi_0 plus unknown multiples c_j of xi_j, gives
    (8g+4) lambda = -r0 xi_0 + 4 sum h(g-h) delta_h + sum c_j xi_j. This
    is matched label by label against the Cornalba-Harris relation.

    Raises:
        DimensionError: If g < 3.
        InconsistentSystemError: If the system has no unique solution.
    """
    require_genus(g, 3)
    relation = cornalba_harris_relation(g)
    r0 = sympy.Symbol("r0")
    c_labels = [f"c_{j}" for j in range(1, (g - 1) // 2 + 1)]
    c_symbols = [sympy.Symbol(label) for label in c_labels]

    restricted: dict[str, sympy.Expr] = {
        "lambda": sympy.Integer(8 * g + 4),
        "xi_0": -r0,
    }
    for j, symbol in enumerate(c_symbols, start=1):
        restricted[f"xi_{j}"] = symbol
    for h in range(1, g // 2 + 1):
        restricted[f"delta_{h}"] = sympy.Integer(4 * h * (g - h))

    equations = []
    for label in relation.lhs.basis:
        side = relation.lhs if label == "lambda" else relation.rhs
        known = side.coefficient(label)
        target = sympy.Rational(known.numerator, known.denominator)
        equation = restricted[label] - target
        if equation != 0:
            equations.append(equation)

    unknowns = [r0, *c_symbols]
    solutions = sympy.linsolve(equations, unknowns)
    if not solutions:
        raise InconsistentSystemError(f"no solution for r0 in genus {g}")
    (solution,) = solutions
    if any(value.free_symbols for value in solution):
        raise InconsistentSystemError(f"r0 system in genus {g} is underdetermined")

    values = [Fraction(int(v.p), int(v.q)) for v in solution]
    logger.info("Solved r0 = %s in genus %d", values[0], g)
    return R0Solution(g=g, r0=values[0], c=dict(zip(c_labels, values[1:])))


def morita_class(g: int) -> DivisorClass:
    """(8g+4) lambda on the interior."""
    require_genus(g)
    return DivisorClass(INTERIOR_BASIS, {"lambda": Fraction(8 * g + 4)})


def compact_part_class(g: int) -> DivisorClass:
    """Chern class restricted to the complement of delta_0."""
    full = chern_biextension(g)
    basis = compact_basis(g)
    return DivisorClass(basis, {label: full.coefficient(label) for label in basis})


def restrict_to_interior(cls: DivisorClass) -> DivisorClass:
    return DivisorClass(INTERIOR_BASIS, {"lambda": cls.coefficient("lambda")})
