"""Independent reference implementations and frozen reference values.

Nothing here imports the package; each oracle takes a different route
from the code under test (brute force, direct enumeration, quadrature).
"""
import itertools
import math

import numpy as np
from scipy.integrate import quad, trapezoid


def factorizations_brute(N, k, lo=2):
    """Multisets of k divisors >= lo with product N, by trying every k-tuple."""
    divs = [d for d in range(lo, N + 1) if N % d == 0]
    return {tuple(sorted(c)) for c in itertools.product(divs, repeat=k) if math.prod(c) == N}


def set_partitions(items):
    """Every partition of a list into non-empty blocks."""
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[head]] + part
        for i in range(len(part)):
            yield part[:i] + [[head] + part[i]] + part[i + 1 :]


def set_partition_count(n, k):
    return sum(1 for p in set_partitions(list(range(n))) if len(p) == k)


def integer_partitions_exact(n, k, largest=None):
    """Partitions of n into exactly k parts, by recursion on the largest part."""
    largest = n if largest is None else largest
    if k == 0:
        return 1 if n == 0 else 0
    return sum(integer_partitions_exact(n - p, k - 1, p) for p in range(1, min(n, largest) + 1))


def average_sin2(omega_t):
    """<sin^2> over [0, omega_t] by adaptive quadrature."""
    return quad(lambda t: math.sin(t) ** 2, 0.0, omega_t)[0] / omega_t


def trapezoid_overlap(xi, phis):
    return float(trapezoid(np.prod(phis, axis=0), xi))


def prime_factors_sieve(limit):
    """Smallest-prime-factor table, so factorizations never go through the package."""
    spf = list(range(limit + 1))
    for i in range(2, math.isqrt(limit) + 1):
        if spf[i] == i:
            for j in range(i * i, limit + 1, i):
                if spf[j] == j:
                    spf[j] = i

    def factor(n):
        out = []
        while n > 1:
            out.append(spf[n])
            n //= spf[n]
        return sorted(out)

    return factor


# frozen from the oracles above (brute force and quadrature)
FROZEN_DEGENERACY = {
    (385, 2, 2): 3,
    (385, 3, 2): 1,
    (1155, 2, 2): 7,
    (1155, 3, 2): 6,
    (625, 2, 2): 2,
    (720, 3, 2): 33,
    (35, 2, 4): 1,
    (625, 2, 4): 2,
}
FROZEN_STIRLING_5 = [1, 15, 25, 10, 1]
FROZEN_PARTITIONS_8 = [1, 4, 5, 5, 3, 2, 1, 1]
FROZEN_PT_SMALL = 0.003326673012346962  # <sin^2> over [0, 0.1]
FROZEN_PT_QUARTER = 0.18169011381620936  # <sin^2> over [0, pi/4]
