"""Fixed vectors of the Sp_g action on Lambda^3 H over F_p."""

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb
from typing import Literal

from sympy import isprime
from sympy.polys.domains import GF
from sympy.polys.matrices import DM, DomainMatrix

from src.core.exceptions import DimensionError, DomainError
from src.core.symplectic_core import (
    IntMatrix,
    require_genus,
    sp_generators,
    wedge3_action,
)

logger = logging.getLogger(__name__)

Side = Literal["invariants", "dual"]


def require_prime(p: int) -> int:
    if isinstance(p, bool) or not isinstance(p, int) or not isprime(p):
        raise DomainError(f"p must be a prime, got {p!r}")
    return p


@dataclass(frozen=True, eq=False)
class ModPMatrix:
    """Square matrix over F_p backed by a sympy DomainMatrix."""

    p: int
    matrix: DomainMatrix

    @classmethod
    def from_integers(cls, rows: Sequence[Sequence[int]], p: int) -> "ModPMatrix":
        require_prime(p)
        return cls(p, DM([[x % p for x in row] for row in rows], GF(p)))

    def __matmul__(self, other: "ModPMatrix") -> "ModPMatrix":
        if self.p != other.p:
            raise DimensionError(f"moduli differ: {self.p} vs {other.p}")
        return ModPMatrix(self.p, self.matrix.matmul(other.matrix))

    def det(self) -> int:
        return int(self.matrix.det()) % self.p

    def to_list(self) -> list[list[int]]:
        return [[int(x) % self.p for x in row] for row in self.matrix.to_list()]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModPMatrix):
            return NotImplemented
        return self.p == other.p and self.to_list() == other.to_list()

    __hash__ = None  # type: ignore[assignment]


def wedge3_action_modp(m: IntMatrix, p: int) -> ModPMatrix:
    """Induced action of M on Lambda^3 H, reduced mod p.

    Raises:
        DomainError: If p is not prime or M is singular mod p.
    """
    require_prime(p)
    if ModPMatrix.from_integers(m, p).det() == 0:
        raise DomainError(f"matrix is singular mod {p}")
    return ModPMatrix.from_integers(wedge3_action(m), p)


def _fixed_rows(action: IntMatrix, p: int, side: Side) -> list[dict[int, int]]:
    """Non-zero rows of (rho - I) or (rho^T - I) mod p, as sparse dicts."""
    n = len(action)
    rows = []
    for r in range(n):
        entries = {}
        for c in range(n):
            value = action[c][r] if side == "dual" else action[r][c]
            value = (value - (r == c)) % p
            if value:
                entries[c] = value
        if entries:
            rows.append(entries)
    return rows


def fixed_space_dim(actions: Sequence[IntMatrix], p: int, side: Side) -> int:
    """Dimension over F_p of the common fixed space of the given actions.

    Raises:
        DimensionError: If actions is empty or the sizes differ.
    """
    require_prime(p)
    if side not in ("invariants", "dual"):
        raise DimensionError(f"side must be 'invariants' or 'dual', got {side!r}")
    if not actions:
        raise DimensionError("need at least one action")
    n = len(actions[0])
    if any(len(a) != n for a in actions):
        raise DimensionError("actions differ in size")

    field = GF(p)
    stacked: dict[int, dict[int, object]] = {}
    for action in actions:
        for row in _fixed_rows(action, p, side):
            stacked[len(stacked)] = {c: field(v) for c, v in row.items()}
    if not stacked:
        return n
    rank = DomainMatrix(stacked, (len(stacked), n), field).rank()
    return n - rank


def invariant_dim(
    g: int, p: int, side: Side = "invariants", max_workers: int = 4
) -> int:
    """Dimension of the Sp_g(Z)-fixed space of Lambda^3 (H tensor F_p).

    side="dual" computes the fixed space of the dual representation.
    Generator actions are built in a thread pool; the rank itself is
    computed once on the stacked system.
    """
    require_genus(g, 2)
    require_prime(p)
    gens = sp_generators(g)
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        actions = list(executor.map(wedge3_action, gens))
    dim = fixed_space_dim(actions, p, side)
    logger.info("Fixed space g=%d p=%d side=%s: dim %d", g, p, side, dim)
    return dim


def dimension_identity(g: int) -> bool:
    """C(2g, 3) == 2g(g-1) + 8 C(g, 3)."""
    require_genus(g, 3)
    return comb(2 * g, 3) == 2 * g * (g - 1) + 8 * comb(g, 3)
