"""Unordered factorizations of an integer and the closed-form counts for them."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .errors import DomainError


def prime_factors(N: int) -> list[int]:
    """Prime factors of ``N`` with multiplicity, ascending (trial division)."""
    if N < 1:
        raise DomainError(f"N must be positive, got {N}")
    out = []
    d = 2
    while d * d <= N:
        while N % d == 0:
            out.append(d)
            N //= d
        d += 1 if d == 2 else 2
    if N > 1:
        out.append(N)
    return out


def is_prime(N: int) -> bool:
    return N >= 2 and prime_factors(N) == [N]


def _descend(n: int, k: int, lo: int) -> Iterator[tuple[int, ...]]:
    # parts are generated non-decreasing, so each multiset appears once
    if k == 1:
        if n >= lo:
            yield (n,)
        return
    d = lo
    while d ** k <= n:
        if n % d == 0:
            for rest in _descend(n // d, k - 1, d):
                yield (d,) + rest
        d += 1


@dataclass(frozen=True)
class FactorizationSet:
    N: int
    k: int
    min_part: int
    solutions: tuple[tuple[int, ...], ...]

    @property
    def d(self) -> int:
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    def __len__(self):
        return len(self.solutions)


def enumerate_factorizations(N: int, k: int, min_part: int = 2) -> FactorizationSet:
    """All multisets ``{q_1..q_k}`` with ``prod q = N`` and every ``q >= min_part``.

    Tuples are non-decreasing and pairwise distinct.  ``min_part`` must be at
    least 2 (unit parts would make the count infinite in spirit and are never
    meaningful for the protocol).
    """
    if N < 2 or k < 1:
        raise DomainError(f"need N >= 2 and k >= 1, got N={N}, k={k}")
    if min_part < 2:
        raise DomainError("min_part must be >= 2")
    sols = tuple(_descend(N, k, min_part))
    return FactorizationSet(N, k, min_part, sols)


@lru_cache(maxsize=None)
def stirling_count(n: int, k: int) -> int:
    """Stirling number of the second kind S(n, k)."""
    if k < 0 or n < 0:
        raise DomainError("n and k must be non-negative")
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling_count(n - 1, k) + stirling_count(n - 1, k - 1)


@lru_cache(maxsize=None)
def partitions_at_most(n: int, k: int) -> int:
    """p_k(n): partitions of ``n`` into at most ``k`` parts."""
    if n < 0 or k < 0:
        raise DomainError("n and k must be non-negative")
    if n == 0:
        return 1
    if k == 0:
        return 0
    # either fewer than k parts, or exactly k parts (subtract 1 from each)
    return partitions_at_most(n, k - 1) + (partitions_at_most(n - k, k) if n >= k else 0)


def partition_count_diff(n: int, k: int) -> int:
    """p_k(n) - p_{k-1}(n), the number of partitions of ``n`` into exactly ``k`` parts."""
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got n={n}, k={k}")
    return partitions_at_most(n, k) - partitions_at_most(n, k - 1)
