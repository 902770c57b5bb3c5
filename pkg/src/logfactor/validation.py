"""Invariant checks behind ``logfactor validate``; each returns ``(ok, detail)``."""
from __future__ import annotations

import itertools
import math
import time
import warnings

import numpy as np

from .asymptotics import matrix_element_asymptotic
from .bosonic import BosonicConfig, bosonic_configs, contact_matrix_element
from .degeneracy import enumerate_factorizations, partition_count_diff, stirling_count
from .dynamics import AmplitudeTrajectory, build_rabi_system, integrate_full
from .measurement import average_probability, sample_outcomes
from .numerov import numerov_spectrum
from .potential import build_potential
from .spectra import Spectrum


def _grid(cache={}):  # noqa: B006 - deliberate per-process cache
    if "g" not in cache:
        cache["g"] = build_potential(Spectrum.log_integer(3), M=7)
    return cache["g"]


def check_spectrum():
    g = _grid()
    err = float(np.abs(g.eigenvalues - g.target).max())
    return err < 1e-3, f"max |dE| = {err:.2e}"


def check_numerov():
    g = _grid()
    diff = float(np.abs(numerov_spectrum(g.xi, g.v, g.M) - g.eigenvalues).max())
    return diff < 1e-5, f"max |E_fd - E_numerov| = {diff:.2e}"


def check_orthonormality():
    g = _grid()
    phi = g.eigenfunctions
    gram = phi @ phi.T * g.h
    dev = float(np.abs(gram - np.eye(g.M)).max())
    return dev < 1e-8, f"max |<phi_i|phi_j> - delta_ij| = {dev:.2e}"


def check_parity():
    g = _grid()
    zero, nonzero = 0.0, math.inf
    for n in (2, 3):
        ground = BosonicConfig.ground(n)
        for c in bosonic_configs(n, g.M - 1):
            w = abs(contact_matrix_element(g, ground, c))
            if c.index_sum % 2:
                zero = max(zero, w)
            else:
                nonzero = min(nonzero, w)
    return zero == 0.0 and nonzero > 1e-10, f"odd max {zero:.1e}, even min {nonzero:.2e}"


def check_symmetry():
    g = _grid()
    basis = bosonic_configs(2, 4)
    dev = 0.0
    for a, b in itertools.combinations(basis, 2):
        dev = max(dev, abs(contact_matrix_element(g, a, b) - contact_matrix_element(g, b, a)))
    return dev < 1e-14, f"max |W_ab - W_ba| = {dev:.1e}"


def check_completeness():
    basis = bosonic_configs(2, 3)
    total = sum(c.permutation_count for c in basis)
    return len(basis) == 10 and total == 16, f"{len(basis)} configurations covering {total} ordered states"


def check_degeneracy():
    primes = [5, 7, 11, 13, 17]
    ok = True
    for n in range(1, 6):
        N = math.prod(primes[:n])
        ok &= all(enumerate_factorizations(N, k).d == stirling_count(n, k) for k in range(1, n + 1))
    for n in range(1, 9):
        ok &= all(enumerate_factorizations(5**n, k).d == partition_count_diff(n, k) for k in range(1, n + 1))
    return bool(ok), "S(n,k) for squarefree, p_k(n) - p_(k-1)(n) for 5^n"


def check_measurement():
    g = _grid()
    system = build_rabi_system(g, 35, 2)
    _, idx = sample_outcomes(system, 5.0, 100_000, 0)
    p, ref = float(np.mean(idx > 0)), average_probability(5.0)
    sigma = math.sqrt(ref * (1 - ref) / 100_000)
    return abs(p - ref) < 3 * sigma, f"P_T(5) MC {p:.4f} vs {ref:.4f}"


def _grid16(cache={}):  # noqa: B006
    if "g" not in cache:
        cache["g"] = build_potential(Spectrum.log_integer(3), M=16)
    return cache["g"]


def check_beta_bar():
    """Closed form at N=5^4 with and without V(0) in the WKB constant, against the grid element."""
    g = _grid16()
    exact = contact_matrix_element(g, BosonicConfig.ground(4), BosonicConfig.of(2, 2, 2, 2))
    literal = matrix_element_asymptotic(625, 4, 3) / exact
    with_v0 = matrix_element_asymptotic(625, 4, 3, v0=g.v_at_origin) / exact
    return abs(with_v0 - 1) < 0.3, f"ratio at 5^4: literal {literal:.3f}, with V(0)={g.v_at_origin:.4f}: {with_v0:.3f}"


def check_full_ode():
    g = _grid16()
    system = build_rabi_system(g, 35, 2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)  # edge population is reported below
        full = integrate_full(system, g, basis_cutoff=12, n_samples=801)
    rwa = AmplitudeTrajectory.from_rwa(system, full.times)
    dev = float(np.abs(full.prob_ground - rwa.prob_ground).max())
    return dev < 0.05 and full.norm_drift < 1e-6, f"sup dev {dev:.3f}, norm drift {full.norm_drift:.1e}, edge {full.leakage:.1e}"


QUICK = [
    check_spectrum, check_numerov, check_orthonormality, check_parity, check_symmetry,
    check_completeness, check_degeneracy, check_measurement, check_beta_bar,
]


def run_checks(quick: bool = True) -> list[dict]:
    checks = QUICK if quick else QUICK + [check_full_ode]
    out = []
    for fn in checks:
        t0 = time.perf_counter()
        ok, detail = fn()
        out.append({"name": fn.__name__.removeprefix("check_"), "ok": bool(ok), "detail": detail,
                    "seconds": round(time.perf_counter() - t0, 3)})
    return out
