"""Single-particle spectra with logarithmic level energies.

Two level schemes are supported.  In log-integer mode level ``l`` has energy
``ln(l/L + 1)`` (units of hbar*omega0), so a level encodes the integer
``q = l + L`` and a sum of energies encodes a product.  In prime mode level
``l`` has energy ``ln p_l`` with ``p_0 = 1, p_1 = 2, p_2 = 3, ...``.

Yes/no decisions (does an energy decompose?) are made on the integer
arguments of the logarithms; floating-point energies are for reporting only.
"""
from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .degeneracy import enumerate_factorizations, prime_factors
from .errors import DomainError, PrimeTableError


class Mode(enum.Enum):
    LOG_INTEGER = "log-integer"
    PRIME = "prime"


class PrimeTable:
    """Growable table of primes; index 0 holds the unit ``p_0 = 1``."""

    def __init__(self, size: int = 64):
        self._lock = threading.Lock()
        self._primes = [1]
        self._limit = 1
        self.extend(size)

    def __len__(self):
        return len(self._primes)

    def extend(self, size: int) -> None:
        """Grow until at least ``size`` entries (including ``p_0``) exist."""
        with self._lock:
            while len(self._primes) < size:
                self._sieve(max(2 * self._limit, 64))

    def _sieve(self, limit: int) -> None:
        is_p = np.ones(limit + 1, dtype=bool)
        is_p[:2] = False
        for i in range(2, math.isqrt(limit) + 1):
            if is_p[i]:
                is_p[i * i :: i] = False
        self._primes = [1] + np.flatnonzero(is_p).tolist()
        self._limit = limit

    def __getitem__(self, index: int) -> int:
        if index < 0:
            raise DomainError(f"level index must be >= 0, got {index}")
        if index >= len(self._primes):
            raise PrimeTableError(index, len(self._primes))
        return self._primes[index]

    def get(self, index: int, grow: bool = True) -> int:
        if grow and index >= len(self._primes):
            self.extend(index + 1)
        return self[index]

    def index_of(self, p: int) -> int:
        """Level index of prime ``p`` (1 maps to 0)."""
        while self._primes[-1] < p:
            self.extend(2 * len(self._primes))
        lo, hi = 0, len(self._primes)
        while lo < hi:
            mid = (lo + hi) // 2
            if self._primes[mid] < p:
                lo = mid + 1
            else:
                hi = mid
        if self._primes[lo] != p:
            raise DomainError(f"{p} is not prime")
        return lo


DEFAULT_PRIME_TABLE = PrimeTable()


@dataclass(frozen=True)
class Spectrum:
    mode: Mode
    L: int | None = None
    table: PrimeTable = field(default=DEFAULT_PRIME_TABLE, compare=False, repr=False)

    def __post_init__(self):
        if self.mode is Mode.LOG_INTEGER:
            if self.L is None or self.L < 3 or self.L % 2 == 0:
                raise DomainError(f"L must be an odd integer >= 3, got {self.L}")
        elif self.L is not None:
            raise DomainError("prime mode takes no scaling parameter")

    @classmethod
    def log_integer(cls, L: int = 3) -> "Spectrum":
        return cls(Mode.LOG_INTEGER, L)

    @classmethod
    def prime(cls, table: PrimeTable | None = None) -> "Spectrum":
        return cls(Mode.PRIME, None, table or DEFAULT_PRIME_TABLE)

    def level_value(self, ell: int, grow: bool = True) -> Fraction:
        """Exact argument of the logarithm for level ``ell``."""
        if ell < 0:
            raise DomainError(f"level index must be >= 0, got {ell}")
        if self.mode is Mode.LOG_INTEGER:
            return Fraction(ell + self.L, self.L)
        return Fraction(self.table.get(ell, grow=grow))

    def energy(self, ell: int, grow: bool = True) -> float:
        v = self.level_value(ell, grow=grow)
        return math.log(v.numerator) - math.log(v.denominator)

    def energies(self, M: int) -> np.ndarray:
        return np.array([self.energy(ell) for ell in range(M)])

    def decode(self, ell: int) -> int:
        """Integer encoded by level ``ell`` (``l + L`` or ``p_l``)."""
        if self.mode is Mode.LOG_INTEGER:
            return ell + self.L
        return self.table.get(ell)

    def encode(self, q: int) -> int:
        """Level index encoding the integer ``q``."""
        if self.mode is Mode.LOG_INTEGER:
            if q < self.L:
                raise DomainError(f"factor {q} below L={self.L} has no level")
            return q - self.L
        return self.table.index_of(q)

    def describe(self) -> dict:
        return {"mode": self.mode.value, "L": self.L}


def energy(spectrum: Spectrum, ell: int, grow: bool = True) -> float:
    """Energy of level ``ell`` in units of hbar*omega0."""
    return spectrum.energy(ell, grow=grow)


def total_energy_argument(spectrum: Spectrum, N: int, k: int) -> Fraction:
    """Exact ``N/L^k`` (log-integer) or ``N`` (prime) whose log is the target energy."""
    if spectrum.mode is Mode.LOG_INTEGER:
        return Fraction(N, spectrum.L ** k)
    return Fraction(N)


def total_energy(spectrum: Spectrum, N: int, k: int = 1) -> float:
    """Target energy ``ln(N/L^k)`` or ``ln N``; must be positive."""
    arg = total_energy_argument(spectrum, N, k)
    if arg <= 1:
        raise DomainError(f"target energy ln({arg}) is not positive; need N > L^k")
    return math.log(arg.numerator) - math.log(arg.denominator)


def levels_energy_argument(spectrum: Spectrum, levels) -> Fraction:
    """Exact product of the level values, i.e. exp of the summed energies."""
    out = Fraction(1)
    for ell in levels:
        out *= spectrum.level_value(ell)
    return out


def check_no_small_factors(N: int, L: int) -> None:
    small = [p for p in prime_factors(N) if p <= L]
    if small:
        raise DomainError(f"N={N} has prime factors <= L={L}: {sorted(set(small))}; strip them first")


def decompose_energy(spectrum: Spectrum, N: int, k: int) -> list[tuple[int, ...]]:
    """All non-decreasing level vectors of length ``k`` whose energies sum to the target.

    Log-integer mode: the target is ``ln(N/L^k)`` and solutions are the
    factorizations of ``N`` into ``k`` parts, each part ``> L``, shifted by
    ``-L``.  Prime mode: the target is ``ln N``; the unique solution is the
    prime factorization padded with ground levels, or nothing when ``k`` is
    smaller than the number of prime factors.
    """
    if N < 2 or k < 1:
        raise DomainError(f"need N >= 2 and k >= 1, got N={N}, k={k}")
    if spectrum.mode is Mode.LOG_INTEGER:
        L = spectrum.L
        check_no_small_factors(N, L)
        fs = enumerate_factorizations(N, k, min_part=L + 1)
        return [tuple(q - L for q in sol) for sol in fs.solutions]
    primes = prime_factors(N)
    if len(primes) > k:
        return []
    levels = [0] * (k - len(primes)) + [spectrum.encode(p) for p in primes]
    return [tuple(sorted(levels))]
