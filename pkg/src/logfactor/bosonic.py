"""Symmetrized many-boson states and contact-interaction matrix elements.

A bosonic configuration is stored as its non-decreasing tuple of
single-particle levels, which is the representative picked by the bosonic
sum.  For the delta-chain contact interaction every coordinate collapses
onto one, so for any permutation of bra and ket the ordinary element is the
same single integral ``int prod(phi_bra) prod(phi_ket) dxi``; the bosonic
element multiplies it by the inverse normalization factors of both sides.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, LevelOutOfRangeError
from .potential import PotentialGrid


def permutation_count(multiplicities: Sequence[int]) -> int:
    """Distinct orderings ``n!/(nu_1! ... nu_m!)``."""
    if any(nu < 1 for nu in multiplicities):
        raise DomainError("multiplicities must be positive")
    out = math.factorial(sum(multiplicities))
    for nu in multiplicities:
        out //= math.factorial(nu)
    return out


def normalization(multiplicities: Sequence[int]) -> float:
    """``sqrt(nu_1! ... nu_m! / n!)``, the factor giving a unit-norm symmetric state."""
    return 1.0 / math.sqrt(permutation_count(multiplicities))


def bosonic_amplitude_from_ordinary(b, multiplicities: Sequence[int]):
    return b / normalization(multiplicities)


def ordinary_amplitude_from_bosonic(bB, multiplicities: Sequence[int]):
    return bB * normalization(multiplicities)


@dataclass(frozen=True, order=True)
class BosonicConfig:
    levels: tuple[int, ...]

    def __post_init__(self):
        lv = tuple(sorted(int(x) for x in self.levels))
        if not lv or lv[0] < 0:
            raise DomainError(f"levels must be non-empty and non-negative, got {self.levels}")
        object.__setattr__(self, "levels", lv)

    @classmethod
    def of(cls, *levels: int) -> "BosonicConfig":
        return cls(tuple(levels))

    @classmethod
    def ground(cls, n: int) -> "BosonicConfig":
        return cls((0,) * n)

    @property
    def n(self) -> int:
        return len(self.levels)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        c = Counter(self.levels)
        return tuple(c[k] for k in sorted(c))

    @property
    def norm_factor(self) -> float:
        return normalization(self.multiplicities)

    @property
    def permutation_count(self) -> int:
        return permutation_count(self.multiplicities)

    @property
    def index_sum(self) -> int:
        return sum(self.levels)

    @property
    def parity(self) -> int:
        """+1 for an even, -1 for an odd many-body wavefunction."""
        return -1 if self.index_sum % 2 else 1

    @property
    def max_level(self) -> int:
        return self.levels[-1]

    def __str__(self):
        return "(" + ",".join(map(str, self.levels)) + ")"


def bosonic_configs(n: int, max_level: int) -> list[BosonicConfig]:
    """Every ``n``-boson configuration with levels ``0..max_level``, in bosonic-sum order."""
    return [BosonicConfig(c) for c in combinations_with_replacement(range(max_level + 1), n)]


def simpson_weights(n_points: int, h: float) -> np.ndarray:
    if n_points % 2 == 0:
        raise DomainError("composite Simpson needs an odd number of points")
    w = np.ones(n_points)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * h / 3.0


def trapezoid_weights(n_points: int, h: float) -> np.ndarray:
    w = np.full(n_points, h)
    w[[0, -1]] = h / 2
    return w


def _product(grid: PotentialGrid, levels: Iterable[int]) -> np.ndarray:
    out = np.ones_like(grid.xi)
    for ell in levels:
        out = out * grid.phi(ell)
    return out


def contact_overlap(grid: PotentialGrid, levels: Sequence[int], rule: str = "simpson") -> float:
    """``int prod_i phi_{levels_i}(xi) dxi`` on the grid."""
    f = _product(grid, levels)
    if rule == "simpson":
        w = simpson_weights(len(f), grid.h)
    elif rule == "trapezoid":
        w = trapezoid_weights(len(f), grid.h)
    else:
        raise DomainError(f"unknown quadrature rule {rule!r}")
    return float(w @ f)


def contact_matrix_element(grid: PotentialGrid, bra: BosonicConfig, ket: BosonicConfig, rule: str = "simpson") -> float:
    """Bosonic matrix element of the contact interaction (dimensionless)."""
    if bra.n != ket.n:
        raise DomainError(f"particle numbers differ: {bra.n} vs {ket.n}")
    top = max(bra.max_level, ket.max_level)
    if top >= grid.M:
        raise LevelOutOfRangeError(f"level {top} not available (grid holds {grid.M} levels)")
    if (bra.index_sum + ket.index_sum) % 2:
        return 0.0
    # sorted product order makes W(a, b) and W(b, a) bitwise identical
    raw = contact_overlap(grid, sorted(bra.levels + ket.levels), rule)
    return raw / (bra.norm_factor * ket.norm_factor)


def contact_matrix(grid: PotentialGrid, basis: Sequence[BosonicConfig]) -> np.ndarray:
    """Symmetric matrix of bosonic contact elements over ``basis``."""
    if not basis:
        return np.zeros((0, 0))
    top = max(c.max_level for c in basis)
    if top >= grid.M:
        raise LevelOutOfRangeError(f"level {top} not available (grid holds {grid.M} levels)")
    P = np.array([_product(grid, c.levels) / c.norm_factor for c in basis])
    w = simpson_weights(len(grid.xi), grid.h)
    W = (P * w) @ P.T
    par = np.array([c.index_sum % 2 for c in basis])
    W[par[:, None] != par[None, :]] = 0.0
    return 0.5 * (W + W.T)
