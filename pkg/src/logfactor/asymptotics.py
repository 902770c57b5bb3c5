"""Large-N matrix elements, Rabi-frequency scaling and the feasibility region.

Near the trap centre the ground state is approximated by a harmonic
oscillator state of frequency ``omega_eff = omega0/(L - 1/2)`` and excited
even states by ``sqrt(2/(pi L)) cos(beta_l xi) / sqrt((l/L + 1) beta_l)`` with
``beta_l^2 = 2 ln(l/L + 1) - 2 V(0)``.  :func:`matrix_element_asymptotic`
keeps only the slowest Fourier term of ``cos^n`` (the closed form for
``N = p^n``); :func:`wkb_overlap` integrates the same approximate
wavefunctions exactly for any level multiset.
"""
from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError


def effective_frequency(L: int) -> float:
    """Curvature frequency of the log-integer trap at its centre, in units of omega0."""
    return 1.0 / (L - 0.5)


def cos_power_coefficients(n: int) -> dict[int, float]:
    """Coefficients ``c_m`` with ``cos^n x = sum_m c_m cos(m x)``, ``m = n, n-2, ..., >= 0``."""
    out: dict[int, float] = {}
    for i in range(n + 1):
        m = abs(n - 2 * i)
        out[m] = out.get(m, 0.0) + math.comb(n, i) / 2.0**n
    return dict(sorted(out.items()))


def d0(n: int) -> float:
    """Constant term of ``cos^n``: ``C(n, n/2)/2^n`` for even ``n``."""
    if n % 2:
        raise DomainError("d0 is defined for even n")
    return math.comb(n, n // 2) / 2.0**n


def w_prefactor(L: int, n: int) -> float:
    return (2.0 / math.pi) ** (n / 2) * (n / (math.pi * (2 * L - 1))) ** ((n - 2) / 4)


def beta_bar(N: float, n: int, L: int, v0: float = 0.0) -> float:
    """Scaled WKB wavenumber; ``v0 = 0`` gives the form that omits ``V(0)``."""
    lnarg = math.log(N / L**n) - n * v0
    return math.sqrt(2.0 * lnarg / n * (2 * L - 1) / n)


def matrix_element_asymptotic(N: float, n: int, L: int, v0: float = 0.0) -> float:
    """Ground-to-``|p-L, ..., p-L>`` contact element for ``N = p^n`` at large ``N``.

    With ``v0 = 0`` this is the closed form without the trap-bottom offset;
    passing the grid's ``V(0)`` restores it inside ``beta``.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    lnarg = math.log(N / L**n)
    if lnarg <= 0:
        raise DomainError(f"N={N} must exceed L^n={L**n}")
    lnfac = (lnarg - n * v0) ** (-n / 4)
    w = w_prefactor(L, n)
    if n % 2 == 0:
        return w * d0(n) * lnfac * N**-0.5
    decay = math.exp(-beta_bar(N, n, L, v0) ** 2 / 4)
    return 2.0 * w * d0(n + 1) * lnfac * decay * N**-0.5


def rabi_frequency_asymptotic(N: float, n: int, L: int, gamma: float, v0: float = 0.0) -> float:
    """``Omega_n = gamma W / 2`` in units of omega0 (gamma in hbar*omega0)."""
    return 0.5 * gamma * matrix_element_asymptotic(N, n, L, v0)


def expected_exponent(n: int, L: int) -> float:
    if n % 2 == 0:
        return -0.5
    return -(0.5 + (2 * L - 1) / (2 * n * n))


def wkb_overlap(levels: Sequence[int], L: int, v0: float = 0.0) -> float:
    """``int prod phi_l dxi`` with every factor replaced by its centre approximation.

    Ground levels contribute Gaussians; at least one must be present.
    Excited levels contribute ``cos(beta xi)`` (even) or ``sin(beta xi)`` (odd);
    their product is expanded into single cosines and each term integrated
    against the Gaussian in closed form.
    """
    omega = effective_frequency(L)
    n0 = sum(1 for ell in levels if ell == 0)
    excited = [ell for ell in levels if ell > 0]
    if n0 == 0:
        raise DomainError("the approximation needs at least one ground-level factor")
    a = n0 * omega / 2.0
    pref = (omega / math.pi) ** (n0 / 4) * math.sqrt(math.pi / a)
    if not excited:
        return pref
    betas, phases, amp = [], [], 1.0
    for ell in excited:
        b2 = 2.0 * math.log(ell / L + 1.0) - 2.0 * v0
        if b2 <= 0:
            raise DomainError(f"level {ell} lies below V(0)")
        b = math.sqrt(b2)
        betas.append(b)
        phases.append(0.5 * math.pi * (ell % 2))
        amp *= math.sqrt(2.0 / (math.pi * L)) / math.sqrt((ell / L + 1.0) * b)
    betas = np.array(betas)
    phases = np.array(phases)
    m = len(betas)
    signs = np.array(list(itertools.product((1.0, -1.0), repeat=m - 1))).reshape(-1, m - 1)
    B = betas[0] + signs @ betas[1:]
    Phi = phases[0] + signs @ phases[1:]
    total = np.sum(np.cos(Phi) * np.exp(-(B**2) / (4.0 * a))) / 2.0 ** (m - 1)
    return float(pref * amp * total)


@dataclass(frozen=True)
class ScalingFit:
    n: int
    L: int
    slope: float
    intercept: float
    expected: float
    residual_norm: float
    residual_norm_uncorrected: float
    N: tuple
    omega: tuple


def scaling_exponent_check(
    n: int,
    L: int,
    p_list: Sequence[int],
    gamma: float = 1.0,
    log_correction: bool = True,
    matrix_element: Callable[[int], float] | None = None,
) -> ScalingFit:
    """Fit ``log Omega_n`` against ``log N`` over ``N = p^n``.

    With ``log_correction`` the slowly varying ``[ln(N/L^n)]^(-n/4)`` factor
    is divided out first so that the fitted slope is the power-law exponent.
    ``matrix_element`` maps ``N`` to ``W``; the asymptotic closed form by default.
    """
    if len(p_list) < 4:
        raise DomainError("need at least four primes for the fit")
    mel = matrix_element or (lambda N: matrix_element_asymptotic(N, n, L))
    N = np.array([p**n for p in p_list], dtype=float)
    omega = np.array([0.5 * gamma * mel(int(x)) for x in N])
    corr = np.log(N / L**n) ** (n / 4)
    x = np.log(N)

    def fit(y):
        coef, res, *_ = np.polyfit(x, y, 1, full=True)
        return coef, float(np.sqrt(res[0])) if len(res) else 0.0

    (slope_c, icpt_c), rn_c = fit(np.log(omega * corr))
    (slope_u, icpt_u), rn_u = fit(np.log(omega))
    slope, icpt = (slope_c, icpt_c) if log_correction else (slope_u, icpt_u)
    return ScalingFit(n, L, float(slope), float(icpt), expected_exponent(n, L), rn_c, rn_u, tuple(N), tuple(omega))


def off_resonance_spacing(N: int, n: int, L: int) -> tuple[float, float, float]:
    """Exact detunings to ``N +- 1`` and the ``1/N`` estimate, in units of omega0."""
    base = math.log(N / L**n)
    up = abs(math.log((N + 1) / L**n) - base)
    down = abs(math.log((N - 1) / L**n) - base)
    return up, down, 1.0 / N


@dataclass(frozen=True)
class FeasibilityPoint:
    N: float
    gamma: float
    omega_rabi: float  # units of omega0
    rwa_ok: bool
    dec_ok: bool

    @property
    def feasible(self) -> bool:
        return self.rwa_ok and self.dec_ok


def max_feasible_N_bound(T_dec: float, nu0: float) -> float:
    """Largest N for which some gamma meets both ``Omega <= omega0/N`` and ``Omega T_dec >= 5``."""
    return 2.0 * math.pi * nu0 * T_dec / 5.0


@dataclass
class FeasibilityRegion:
    L: int
    n: int
    T_dec: float
    nu0: float
    N_grid: np.ndarray
    gamma_grid: np.ndarray
    points: list[FeasibilityPoint] = field(repr=False)

    def _flags(self, attr: str) -> np.ndarray:
        return np.array([getattr(p, attr) for p in self.points]).reshape(len(self.N_grid), len(self.gamma_grid))

    @property
    def rwa_ok(self) -> np.ndarray:
        return self._flags("rwa_ok")

    @property
    def dec_ok(self) -> np.ndarray:
        return self._flags("dec_ok")

    @property
    def feasible(self) -> np.ndarray:
        return self.rwa_ok & self.dec_ok

    def max_feasible_N(self) -> float:
        rows = np.flatnonzero(self.feasible.any(axis=1))
        return float(self.N_grid[rows.max()]) if len(rows) else float("nan")

    def boundary(self, which: str) -> list[tuple[float, float]]:
        """Per gamma, the largest grid N still satisfying the named inequality ("rwa" or "dec")."""
        flags = self.rwa_ok if which == "rwa" else self.dec_ok
        out = []
        for j, g in enumerate(self.gamma_grid):
            ok = np.flatnonzero(flags[:, j])
            out.append((float(g), float(self.N_grid[ok.max()]) if len(ok) else float("nan")))
        return out

    def write_csv(self, path) -> Path:
        path = Path(path)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["N", "gamma", "omega_rabi", "rwa_ok", "dec_ok", "feasible"])
            for p in self.points:
                w.writerow([f"{p.N:.12g}", f"{p.gamma:.12g}", f"{p.omega_rabi:.12g}", int(p.rwa_ok), int(p.dec_ok), int(p.feasible)])
        return path


def feasibility_region(
    L: int = 3,
    n: int = 4,
    T_dec: float = 2.0,
    nu0: float = 5e3,
    N_grid=None,
    gamma_grid=None,
    points: int = 200,
    matrix_element: Callable[[float], float] | None = None,
) -> FeasibilityRegion:
    """Evaluate both inequalities on a logarithmic (N, gamma) grid.

    ``T_dec`` in seconds and ``nu0 = omega0/2pi`` in Hz; gamma in hbar*omega0.
    The default N range starts at ``p^n`` for the smallest prime above ``L``.
    """
    if T_dec <= 0 or nu0 <= 0:
        raise DomainError("T_dec and nu0 must be positive")
    omega0 = 2.0 * math.pi * nu0
    if N_grid is None:
        p = L + 1
        while any(p % d == 0 for d in range(2, p)):
            p += 1
        N_grid = np.logspace(math.log10(p**n), 6, points)
    if gamma_grid is None:
        gamma_grid = np.logspace(-4, 4, points)
    N_grid = np.asarray(N_grid, dtype=float)
    gamma_grid = np.asarray(gamma_grid, dtype=float)
    mel = matrix_element or (lambda N: matrix_element_asymptotic(N, n, L))
    pts = []
    for N in N_grid:
        W = mel(N)
        for g in gamma_grid:
            om = 0.5 * g * W
            # T_dec = inf leaves only the RWA bound
            dec = math.isinf(T_dec) or om * omega0 * T_dec >= 5.0
            pts.append(FeasibilityPoint(float(N), float(g), om, om <= 1.0 / N, bool(dec)))
    return FeasibilityRegion(L, n, T_dec, nu0, N_grid, gamma_grid, pts)
