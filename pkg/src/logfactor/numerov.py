"""Numerov shooting eigensolver, used as an oracle independent of the matrix method.

States of a symmetric potential are shot from the origin with even or odd
initial data and must vanish at the grid edge.  By Sturm oscillation the
number of sign changes on the half line counts the levels of that parity
below the trial energy, which brackets each level before root polishing.
"""
from __future__ import annotations

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError


def shoot(xi, v, energy: float, parity: int) -> tuple[float, int]:
    """Integrate outward from ``xi = 0``; return (value at the edge, sign changes)."""
    h = float(xi[1] - xi[0])
    c = len(xi) // 2
    f = ((h * h / 6.0) * (energy - np.asarray(v[c:], dtype=float))).tolist()
    n = len(f)
    if parity == 0:
        p0, p1 = 1.0, (1.0 - 5.0 * f[0]) / (1.0 + f[1])
    else:
        p0, p1 = 0.0, h
    nodes = 0
    for i in range(1, n - 1):
        p2 = (2.0 * p1 * (1.0 - 5.0 * f[i]) - p0 * (1.0 + f[i - 1])) / (1.0 + f[i + 1])
        if (p2 < 0.0) != (p1 < 0.0) and p2 != 0.0:
            nodes += 1
        if abs(p2) > 1e150:
            p1 *= 1e-150
            p2 *= 1e-150
        p0, p1 = p1, p2
    return p1, nodes


def numerov_level(xi, v, ell: int, lo: float | None = None, hi: float | None = None, xtol: float = 1e-12) -> float:
    """Energy of level ``ell`` found by node-count bisection plus Brent polishing."""
    if ell < 0:
        raise DomainError("level index must be >= 0")
    parity, k = ell % 2, ell // 2
    lo = float(np.min(v)) if lo is None else lo
    hi = float(np.max(v)) if hi is None else hi

    def count(e):
        return shoot(xi, v, e, parity)[1]

    if count(hi) <= k:
        raise DomainError(f"level {ell} lies above the bracket top {hi}")
    # shrink until the bracket holds exactly the transition k -> k+1
    while hi - lo > 1e-3:
        mid = 0.5 * (lo + hi)
        if count(mid) <= k:
            lo = mid
        else:
            hi = mid
    return brentq(lambda e: shoot(xi, v, e, parity)[0], lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps)


def numerov_spectrum(xi, v, M: int) -> np.ndarray:
    return np.array([numerov_level(xi, v, ell) for ell in range(M)])
