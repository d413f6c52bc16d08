"""Exact integer linear algebra of the symplectic lattice H and of Lambda^3 H.

Coordinates of H are ordered a_1..a_g, b_1..b_g and numbered 0..2g-1. The
intersection form is fixed by a_i . b_j = delta_ij and a_i . a_j =
b_i . b_j = 0; every sign downstream is taken against this choice.
Lambda^3 H uses the lexicographic order on index triples i < j < k.

All values are immutable and all arithmetic is in Python integers.
"""

import itertools
import logging
import operator
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache
from math import comb

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DM
from sympy.polys.matrices.normalforms import hermite_normal_form

from src.core.exceptions import DimensionError, LatticeArithmeticError

logger = logging.getLogger(__name__)

IntMatrix = tuple[tuple[int, ...], ...]
Triple = tuple[int, int, int]


def require_genus(g: int, minimum: int = 1) -> int:
    """Validate a genus.

    Args:
        g: Candidate genus.
        minimum: Smallest genus the caller supports.

    Returns:
        The genus, unchanged.

    Raises:
        DimensionError: If g is not an integer or is below minimum.
    """
    if isinstance(g, bool) or not isinstance(g, int):
        raise DimensionError(f"genus must be an integer, got {g!r}")
    if g < minimum:
        raise DimensionError(f"genus must be >= {minimum}, got {g}")
    return g


def _as_integers(values: Iterable[int], what: str) -> tuple[int, ...]:
    try:
        return tuple(operator.index(v) for v in values)
    except TypeError as e:
        raise DimensionError(f"{what} must be integers: {e}") from e


def _basis_dot(g: int, i: int, j: int) -> int:
    """Intersection number of basis vectors e_i and e_j."""
    if i < g and j == i + g:
        return 1
    if i >= g and j == i - g:
        return -1
    return 0


@lru_cache(maxsize=None)
def basis_triples(g: int) -> tuple[Triple, ...]:
    """Lexicographic basis of Lambda^3 H as index triples."""
    return tuple(itertools.combinations(range(2 * g), 3))  # type: ignore[arg-type]


@lru_cache(maxsize=None)
def _triple_index(g: int) -> dict[Triple, int]:
    return {t: n for n, t in enumerate(basis_triples(g))}


def _signed_triple(i: int, j: int, k: int) -> tuple[Triple, int] | None:
    """Sort an index triple, returning the permutation sign.

    Returns None when two indices coincide (the wedge vanishes).
    """
    if i == j or j == k or i == k:
        return None
    sign = 1
    if i > j:
        i, j = j, i
        sign = -sign
    if j > k:
        j, k = k, j
        sign = -sign
    if i > j:
        i, j = j, i
        sign = -sign
    return (i, j, k), sign


def _det3(m: Sequence[Sequence[int]]) -> int:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


@dataclass(frozen=True)
class HVector:
    """Integer vector in H, coordinates (a_1..a_g, b_1..b_g)."""

    genus: int
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        require_genus(self.genus)
        coords = _as_integers(self.coords, "HVector coordinates")
        if len(coords) != 2 * self.genus:
            raise DimensionError(
                f"HVector of genus {self.genus} needs {2 * self.genus} "
                f"coordinates, got {len(coords)}"
            )
        object.__setattr__(self, "coords", coords)

    @classmethod
    def zero(cls, g: int) -> "HVector":
        return cls(g, (0,) * (2 * g))

    @classmethod
    def basis(cls, g: int, index: int) -> "HVector":
        """The basis vector e_index, 0-based over a_1..a_g, b_1..b_g."""
        if not 0 <= index < 2 * g:
            raise DimensionError(f"basis index {index} outside 0..{2 * g - 1}")
        coords = [0] * (2 * g)
        coords[index] = 1
        return cls(g, tuple(coords))

    @classmethod
    def a(cls, g: int, i: int) -> "HVector":
        """The symplectic basis vector a_i (1-based)."""
        if not 1 <= i <= g:
            raise DimensionError(f"a_{i} does not exist in genus {g}")
        return cls.basis(g, i - 1)

    @classmethod
    def b(cls, g: int, i: int) -> "HVector":
        """The symplectic basis vector b_i (1-based)."""
        if not 1 <= i <= g:
            raise DimensionError(f"b_{i} does not exist in genus {g}")
        return cls.basis(g, g + i - 1)

    def _check(self, other: "HVector") -> None:
        if self.genus != other.genus:
            raise DimensionError(
                f"genus mismatch: {self.genus} vs {other.genus}"
            )

    def __add__(self, other: "HVector") -> "HVector":
        self._check(other)
        return HVector(
            self.genus, tuple(x + y for x, y in zip(self.coords, other.coords))
        )

    def __sub__(self, other: "HVector") -> "HVector":
        self._check(other)
        return HVector(
            self.genus, tuple(x - y for x, y in zip(self.coords, other.coords))
        )

    def __neg__(self) -> "HVector":
        return HVector(self.genus, tuple(-x for x in self.coords))

    def __mul__(self, scalar: int) -> "HVector":
        return HVector(self.genus, tuple(scalar * x for x in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True)
class Wedge3:
    """Integer element of Lambda^3 H on the lexicographic triple basis."""

    genus: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        require_genus(self.genus)
        coeffs = _as_integers(self.coeffs, "Wedge3 coefficients")
        expected = comb(2 * self.genus, 3)
        if len(coeffs) != expected:
            raise DimensionError(
                f"Wedge3 of genus {self.genus} needs {expected} "
                f"coefficients, got {len(coeffs)}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, g: int) -> "Wedge3":
        return cls(g, (0,) * comb(2 * g, 3))

    @classmethod
    def from_terms(cls, g: int, terms: dict[Triple, int]) -> "Wedge3":
        """Build from a mapping of sorted index triples to coefficients."""
        index = _triple_index(g)
        coeffs = [0] * len(index)
        for triple, value in terms.items():
            try:
                coeffs[index[triple]] += value
            except KeyError as e:
                raise DimensionError(
                    f"{triple} is not a basis triple in genus {g}"
                ) from e
        return cls(g, tuple(coeffs))

    def terms(self) -> Iterable[tuple[Triple, int]]:
        """Non-zero (triple, coefficient) pairs in basis order."""
        for triple, value in zip(basis_triples(self.genus), self.coeffs):
            if value:
                yield triple, value

    def _check(self, other: "Wedge3") -> None:
        if self.genus != other.genus:
            raise DimensionError(
                f"genus mismatch: {self.genus} vs {other.genus}"
            )

    def __add__(self, other: "Wedge3") -> "Wedge3":
        self._check(other)
        return Wedge3(
            self.genus, tuple(x + y for x, y in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: "Wedge3") -> "Wedge3":
        self._check(other)
        return Wedge3(
            self.genus, tuple(x - y for x, y in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self) -> "Wedge3":
        return Wedge3(self.genus, tuple(-x for x in self.coeffs))

    def __mul__(self, scalar: int) -> "Wedge3":
        return Wedge3(self.genus, tuple(scalar * x for x in self.coeffs))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coeffs)


@dataclass(frozen=True, eq=False)
class VClass:
    """Coset of a Lambda^3 H element in V = Lambda^3 H / (theta ^ H).

    Equality is coset equality and is decided by lattice membership, so
    instances are not hashable.
    """

    lift: Wedge3

    @property
    def genus(self) -> int:
        return self.lift.genus

    @classmethod
    def zero(cls, g: int) -> "VClass":
        return cls(Wedge3.zero(g))

    def __add__(self, other: "VClass") -> "VClass":
        return VClass(self.lift + other.lift)

    def __sub__(self, other: "VClass") -> "VClass":
        return VClass(self.lift - other.lift)

    def __neg__(self) -> "VClass":
        return VClass(-self.lift)

    def __mul__(self, scalar: int) -> "VClass":
        return VClass(self.lift * scalar)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VClass):
            return NotImplemented
        return vclass_equal(self, other)

    __hash__ = None  # type: ignore[assignment]


def intersection(x: HVector, y: HVector) -> int:
    """Intersection number x . y."""
    x._check(y)
    g = x.genus
    return sum(
        x.coords[i] * y.coords[i + g] - x.coords[i + g] * y.coords[i]
        for i in range(g)
    )


@lru_cache(maxsize=None)
def intersection_matrix(g: int) -> IntMatrix:
    """The Gram matrix J of the intersection form, x . y = x^T J y."""
    return tuple(
        tuple(_basis_dot(g, i, j) for j in range(2 * g)) for i in range(2 * g)
    )


def wedge(x: HVector, y: HVector, z: HVector) -> Wedge3:
    """Exterior product x ^ y ^ z."""
    x._check(y)
    x._check(z)
    terms: dict[Triple, int] = {}
    nz_x = [(i, c) for i, c in enumerate(x.coords) if c]
    nz_y = [(i, c) for i, c in enumerate(y.coords) if c]
    nz_z = [(i, c) for i, c in enumerate(z.coords) if c]
    for i, cx in nz_x:
        for j, cy in nz_y:
            if i == j:
                continue
            for k, cz in nz_z:
                signed = _signed_triple(i, j, k)
                if signed is None:
                    continue
                triple, sign = signed
                terms[triple] = terms.get(triple, 0) + sign * cx * cy * cz
    return Wedge3.from_terms(x.genus, terms)


def wedge_with_partial_theta(x: HVector, pairs: Iterable[int]) -> Wedge3:
    """x ^ sum_{j in pairs} a_j ^ b_j for 1-based pair indices."""
    g = x.genus
    terms: dict[Triple, int] = {}
    for j in pairs:
        if not 1 <= j <= g:
            raise DimensionError(f"pair index {j} outside 1..{g}")
        a_idx, b_idx = j - 1, g + j - 1
        for i, c in enumerate(x.coords):
            if not c:
                continue
            signed = _signed_triple(i, a_idx, b_idx)
            if signed is None:
                continue
            triple, sign = signed
            terms[triple] = terms.get(triple, 0) + sign * c
    return Wedge3.from_terms(g, terms)


def wedge_with_theta(x: HVector) -> Wedge3:
    """x ^ theta, with theta = sum_j a_j ^ b_j.

    Raises:
        DimensionError: If g < 2.
    """
    require_genus(x.genus, 2)
    return wedge_with_partial_theta(x, range(1, x.genus + 1))


def contraction_c(w: Wedge3) -> HVector:
    """The contraction c(x^y^z) = (x.y)z + (y.z)x + (z.x)y."""
    g = w.genus
    out = [0] * (2 * g)
    for (i, j, k), value in w.terms():
        ij = _basis_dot(g, i, j)
        jk = _basis_dot(g, j, k)
        ki = _basis_dot(g, k, i)
        if ij:
            out[k] += value * ij
        if jk:
            out[i] += value * jk
        if ki:
            out[j] += value * ki
    return HVector(g, tuple(out))


@lru_cache(maxsize=None)
def _pairing_partners(g: int) -> tuple[tuple[int, int], ...]:
    """For each basis triple, the unique triple it pairs with and the value."""
    index = _triple_index(g)
    partners = []
    for triple in basis_triples(g):
        dual = tuple(sorted(t + g if t < g else t - g for t in triple))
        gram = [[_basis_dot(g, r, s) for s in dual] for r in triple]
        partners.append((index[dual], _det3(gram)))  # type: ignore[index]
    return tuple(partners)


def wedge3_pairing(u: Wedge3, v: Wedge3) -> int:
    """<x1^x2^x3, y1^y2^y3> = det(x_i . y_j), extended bilinearly."""
    u._check(v)
    partners = _pairing_partners(u.genus)
    return sum(
        value * v.coeffs[partners[n][0]] * partners[n][1]
        for n, value in enumerate(u.coeffs)
        if value
    )


def j_map(v: VClass) -> Wedge3:
    """j(u) = (g-1) u - theta ^ c(u); independent of the lift of v."""
    u = v.lift
    g = require_genus(u.genus, 2)
    return u * (g - 1) - wedge_with_theta(contraction_c(u))


def q_form(u: VClass, v: VClass) -> int:
    """The integral form q(u, v) = <j(u), j(v)> / (g-1).

    Raises:
        DimensionError: If g < 3 or the genera differ.
        LatticeArithmeticError: If the division is not exact.
    """
    u.lift._check(v.lift)
    g = require_genus(u.genus, 3)
    numerator = wedge3_pairing(j_map(u), j_map(v))
    quotient, remainder = divmod(numerator, g - 1)
    if remainder:
        raise LatticeArithmeticError(
            f"<j(u), j(v)> = {numerator} is not divisible by g-1 = {g - 1}"
        )
    return quotient


@lru_cache(maxsize=None)
def theta_wedge_lattice(g: int) -> tuple[Wedge3, ...]:
    """Generators theta ^ a_i, theta ^ b_i of the sublattice theta ^ H."""
    require_genus(g, 2)
    return tuple(wedge_with_theta(HVector.basis(g, i)) for i in range(2 * g))


def _lattice_rows(columns: Sequence[Wedge3]) -> list[list[int]]:
    size = len(columns[0].coeffs)
    return [[col.coeffs[r] for col in columns] for r in range(size)]


@lru_cache(maxsize=None)
def _theta_lattice_hnf(g: int) -> list[list[int]]:
    hnf = hermite_normal_form(DM(_lattice_rows(theta_wedge_lattice(g)), ZZ))
    return [[int(x) for x in row] for row in hnf.to_list()]


def in_theta_lattice(w: Wedge3) -> bool:
    """Whether w lies in theta ^ H, by Hermite normal form comparison."""
    if w.is_zero():
        return True
    g = require_genus(w.genus, 2)
    columns = (*theta_wedge_lattice(g), w)
    hnf = hermite_normal_form(DM(_lattice_rows(columns), ZZ))
    return [[int(x) for x in row] for row in hnf.to_list()] == _theta_lattice_hnf(g)


def vclass_equal(u: VClass, v: VClass) -> bool:
    """Coset equality in V: lift(u) - lift(v) lies in theta ^ H."""
    return in_theta_lattice(u.lift - v.lift)


def _transvection(g: int, v: HVector, sign: int) -> IntMatrix:
    """Matrix of x -> x + sign * (x . v) v."""
    columns = []
    for c in range(2 * g):
        e = HVector.basis(g, c)
        columns.append(e + v * (sign * intersection(e, v)))
    return tuple(tuple(col.coords[r] for col in columns) for r in range(2 * g))


def _rotation(g: int, i: int) -> IntMatrix:
    """a_i -> b_i, b_i -> -a_i, identity elsewhere."""
    rows = [[int(r == c) for c in range(2 * g)] for r in range(2 * g)]
    a_idx, b_idx = i - 1, g + i - 1
    rows[a_idx][a_idx] = 0
    rows[b_idx][b_idx] = 0
    rows[b_idx][a_idx] = 1
    rows[a_idx][b_idx] = -1
    return tuple(tuple(row) for row in rows)


@lru_cache(maxsize=None)
def sp_generators(g: int) -> tuple[IntMatrix, ...]:
    """A generating set of Sp_g(Z) acting on coordinate columns.

    For each i: the transvection x -> x - (x.a_i) a_i and the rotation
    a_i -> b_i, b_i -> -a_i. For each i < g: the transvection along
    a_i - a_{i+1}. Conjugating the first by the second gives the
    transvections along b_i, so the set contains the images of the
    Lickorish twists. In genus 1 it is T = [[1,1],[0,1]], S = [[0,-1],[1,0]].
    """
    require_genus(g)
    gens: list[IntMatrix] = []
    for i in range(1, g + 1):
        gens.append(_transvection(g, HVector.a(g, i), -1))
        gens.append(_rotation(g, i))
    for i in range(1, g):
        gens.append(_transvection(g, HVector.a(g, i) - HVector.a(g, i + 1), -1))
    logger.debug("Built %d generators of Sp_%d(Z)", len(gens), g)
    return tuple(gens)


def matmul(m: IntMatrix, n: IntMatrix) -> IntMatrix:
    cols = list(zip(*n))
    return tuple(
        tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in m
    )


def transpose(m: IntMatrix) -> IntMatrix:
    return tuple(zip(*m))


def is_symplectic(m: IntMatrix) -> bool:
    """Whether M^T J M = J."""
    g = len(m) // 2
    j = intersection_matrix(g)
    return matmul(matmul(transpose(m), j), m) == j


def act_on_hvector(m: IntMatrix, x: HVector) -> HVector:
    if len(m) != 2 * x.genus:
        raise DimensionError(f"{len(m)}x{len(m)} matrix cannot act in genus {x.genus}")
    return HVector(
        x.genus, tuple(sum(a * b for a, b in zip(row, x.coords)) for row in m)
    )


def _image_columns(m: IntMatrix, g: int) -> list[HVector]:
    if len(m) != 2 * g:
        raise DimensionError(f"{len(m)}x{len(m)} matrix cannot act in genus {g}")
    return [HVector(g, tuple(row[c] for row in m)) for c in range(2 * g)]


def act_on_wedge3(m: IntMatrix, w: Wedge3) -> Wedge3:
    """Induced action M x ^ M y ^ M z on Lambda^3 H."""
    g = w.genus
    images = _image_columns(m, g)
    total = Wedge3.zero(g)
    for (i, j, k), value in w.terms():
        total = total + wedge(images[i], images[j], images[k]) * value
    return total


def act_on_vclass(m: IntMatrix, v: VClass) -> VClass:
    return VClass(act_on_wedge3(m, v.lift))


@lru_cache(maxsize=256)
def wedge3_action(m: IntMatrix) -> IntMatrix:
    """Matrix of the induced action of M on Lambda^3 H, columns on the basis."""
    g = len(m) // 2
    images = _image_columns(m, g)
    columns = [
        wedge(images[i], images[j], images[k]).coeffs for i, j, k in basis_triples(g)
    ]
    return tuple(zip(*columns))
