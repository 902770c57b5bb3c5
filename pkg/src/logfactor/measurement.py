"""Projective energy measurements on the RWA Rabi system."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bosonic import BosonicConfig
from .dynamics import RabiSystem
from .errors import DomainError


@dataclass(frozen=True)
class MeasurementOutcome:
    time: float  # 1/omega0 units; nan when the Rabi frequency is unknown
    phase: float  # Omega * t_m
    state: BosonicConfig
    factors: tuple[int, ...] | None
    seed: int | None = None

    @property
    def is_factor_state(self) -> bool:
        return self.factors is not None

    def record(self) -> dict:
        return {
            "seed": self.seed,
            "t_m": None if math.isnan(self.time) else self.time,
            "outcome": list(self.state.levels),
            "factors": None if self.factors is None else list(self.factors),
        }


def as_generator(rng) -> tuple[np.random.Generator, int | None]:
    """Accept a seed or a Generator; seeds are returned so they can be recorded."""
    if isinstance(rng, np.random.Generator):
        return rng, None
    seed = int(rng) if rng is not None else int(np.random.SeedSequence().entropy % 2**63)
    return np.random.default_rng(seed), seed


def average_probability(omega_t):
    """Mean of ``sin^2(Omega t)`` over ``t`` uniform in ``[0, T]``, as a function of ``Omega T``."""
    x = np.asarray(omega_t, dtype=float)
    if np.any(x < 0):
        raise DomainError("Omega*T must be non-negative")
    safe = np.where(x == 0, 1.0, x)
    out = np.where(x == 0, 0.0, 0.5 - np.sin(2 * safe) / (4 * safe))
    return float(out) if out.ndim == 0 else out


def branch_probabilities(system: RabiSystem, phase) -> np.ndarray:
    """Probabilities ``[ground, factor_1..factor_d]`` at Rabi phase ``Omega t``."""
    if not system.resonant:
        raise DomainError("no resonance: the system stays in its ground state")
    phase = np.asarray(phase, dtype=float)
    c2 = np.cos(phase) ** 2
    shares = system.branch_weights**2
    return np.concatenate([c2[..., None], np.multiply.outer(1.0 - c2, shares)], axis=-1)


def _collapse(system: RabiSystem, phase: float, gen: np.random.Generator, seed) -> MeasurementOutcome:
    p = branch_probabilities(system, phase)
    j = int(np.searchsorted(np.cumsum(p), gen.random() * p.sum(), side="right"))
    j = min(j, len(p) - 1)
    t = phase / system.Omega if system.Omega > 0 else float("nan")
    if j == 0:
        return MeasurementOutcome(t, phase, BosonicConfig.ground(system.k), None, seed)
    state = system.factor_states[j - 1]
    return MeasurementOutcome(t, phase, state, system.decode(state), seed)


def measure_random_phase(system: RabiSystem, omega_T: float, rng=None) -> MeasurementOutcome:
    """Measure at ``t_m`` uniform in ``[0, T]`` with the window given as ``Omega T``."""
    if omega_T <= 0:
        raise DomainError("the measurement window must be positive")
    gen, seed = as_generator(rng)
    return _collapse(system, gen.uniform(0.0, omega_T), gen, seed)


def measure_random_time(system: RabiSystem, T: float, rng=None) -> MeasurementOutcome:
    """Measure at ``t_m`` uniform in ``[0, T]`` (``T`` in units of 1/omega0)."""
    if T <= 0:
        raise DomainError("T must be positive")
    return measure_random_phase(system, system.Omega * T, rng)


def sample_outcomes(system: RabiSystem, omega_T: float, n: int, rng=None) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized Monte Carlo: phases and branch indices (0 = ground, j = factor state j)."""
    gen, _ = as_generator(rng)
    phases = gen.uniform(0.0, omega_T, size=n)
    p = branch_probabilities(system, phases)
    u = gen.random(n)[:, None]
    idx = np.minimum((np.cumsum(p, axis=1) <= u).sum(axis=1), p.shape[1] - 1)
    return phases, idx


def measure_at_pi_half(system: RabiSystem, rng=None, omega_estimate: float | None = None, time: float | None = None) -> MeasurementOutcome:
    """Measure at ``t_n = pi/(2 Omega)``, which needs a non-degenerate factor state.

    ``omega_estimate`` replaces the true Rabi frequency when picking ``t_n``;
    ``time`` overrides ``t_n`` outright.
    """
    if system.d != 1:
        raise DomainError(f"the Rabi frequency cannot be estimated with d={system.d} factor states")
    gen, seed = as_generator(rng if rng is not None else 0)
    om = system.Omega if omega_estimate is None else omega_estimate
    t = math.pi / (2 * om) if time is None else time
    return _collapse(system, system.Omega * t, gen, seed)


def shor_success_probability(m: int) -> float:
    """Success probability of Shor's algorithm for ``m`` distinct prime factors."""
    if m < 1:
        raise DomainError("m must be >= 1")
    return 1.0 - 1.0 / 2 ** (m - 1)


def write_jsonl(records, path) -> Path:
    path = Path(path)
    with path.open("w") as fh:
        for r in records:
            fh.write(json.dumps(r.record() if isinstance(r, MeasurementOutcome) else r, sort_keys=True) + "\n")
    return path
