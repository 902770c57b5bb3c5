"""Factorization protocols built on the driven boson system.

``run_iterative`` raises the boson number step by step until the drive finds
no resonance; ``run_known_n`` jumps straight to the prime-factor count;
``run_prime_spectrum`` reads every prime factor off one measurement on the
prime-level spectrum.
"""
from __future__ import annotations

import enum
import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field

import numpy as np

from .bosonic import BosonicConfig, contact_matrix_element
from .degeneracy import is_prime, prime_factors
from .dynamics import DEFAULT_SAFETY, RabiSystem, build_rabi_system, integrate_full, rwa_gamma
from .errors import DomainError
from .measurement import (
    MeasurementOutcome,
    as_generator,
    average_probability,
    measure_at_pi_half,
    measure_random_phase,
)
from .potential import PotentialGrid
from .spectra import Mode, Spectrum, check_no_small_factors, decompose_energy

DEFAULT_WINDOW = 50.0  # measurement window in units of 1/Omega


class Verdict(enum.Enum):
    RUNNING = "running"
    FACTORED = "factored"
    PRIME = "prime"
    EXHAUSTED = "exhausted"
    ERROR = "error"


class ProtocolMode(enum.Enum):
    ITERATIVE = "iterative"
    KNOWN_N = "known-n"
    PRIME_SPECTRUM = "prime-spectrum"


@dataclass(frozen=True)
class GammaPolicy:
    """``gamma=None`` picks ``Omega = safety * omega0 / N`` from the step's couplings."""

    safety: float = DEFAULT_SAFETY
    gamma: float | None = None

    def resolve(self, couplings, N: int) -> float:
        return self.gamma if self.gamma is not None else rwa_gamma(couplings, N, self.safety)


@dataclass
class StepRecord:
    k: int
    system: dict
    measurements: list[dict] = field(default_factory=list)
    success: bool = False
    factors: list[int] | None = None

    @property
    def repeats(self) -> int:
        return len(self.measurements)


@dataclass
class ProtocolRun:
    N: int
    L: int | None
    mode: ProtocolMode
    seed: int | None
    params: dict = field(default_factory=dict)
    history: list[StepRecord] = field(default_factory=list)
    confirmed_factors: list[int] = field(default_factory=list)
    verdict: Verdict = Verdict.RUNNING
    k_current: int = 0
    message: str = ""
    confidence: float | None = None
    checks: dict = field(default_factory=dict)

    @property
    def steps(self) -> int:
        return len(self.history)

    @property
    def probes(self) -> int:
        """Steps that found no resonance."""
        return sum(1 for s in self.history if s.system.get("d", 0) == 0)

    @property
    def successes(self) -> int:
        return sum(1 for s in self.history if s.success)

    def finish(self, verdict: Verdict, factors=None, message: str = "") -> "ProtocolRun":
        self.verdict = verdict
        if factors is not None:
            self.confirmed_factors = sorted(int(f) for f in factors)
        self.message = message
        if verdict is Verdict.FACTORED:
            self.checks["product_ok"] = math.prod(self.confirmed_factors) == self.N
            self.checks["all_prime"] = all(is_prime(f) for f in self.confirmed_factors)
        return self

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "L": self.L,
            "mode": self.mode.value,
            "seed": self.seed,
            "params": self.params,
            "verdict": self.verdict.value,
            "factors": self.confirmed_factors,
            "k_current": self.k_current,
            "steps": [asdict(s) for s in self.history],
            "message": self.message,
            "confidence": self.confidence,
            "checks": self.checks,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)


def _system_record(system: RabiSystem) -> dict:
    s = system.summary()
    s["encoded"] = system.encoded
    return s


class _FullSampler:
    """Outcome probabilities from one full-ODE run over the measurement window."""

    def __init__(self, system: RabiSystem, grid: PotentialGrid, t_end: float):
        self.system = system
        self.traj = integrate_full(system, grid, t_end=t_end, n_samples=2, dense=True)
        self.sol = self.traj.meta["dense"]

    def collapse(self, gen: np.random.Generator, t_end: float, seed) -> MeasurementOutcome:
        t = gen.uniform(0.0, t_end)
        b = self.sol(t)
        p = np.abs(np.concatenate([[b[0]], b[self.traj.factor_indices]])) ** 2
        rest = max(0.0, 1.0 - p.sum())  # population outside the resonant set reads as "no factor"
        p = np.concatenate([p, [rest]])
        j = int(np.searchsorted(np.cumsum(p), gen.random() * p.sum(), side="right"))
        if j == 0 or j > self.system.d:
            return MeasurementOutcome(t, self.system.Omega * t, BosonicConfig.ground(self.system.k), None, seed)
        state = self.system.factor_states[j - 1]
        return MeasurementOutcome(t, self.system.Omega * t, state, self.system.decode(state), seed)


def _measure_until_factor(system, step, gen, window, max_repeats, dynamics, grid):
    """Random-time measurements until a factor state shows up; returns the outcome or ``None``."""
    sampler = _FullSampler(system, grid, window / system.Omega) if dynamics == "full" else None
    for _ in range(max_repeats):
        seed = int(gen.integers(2**63))
        if sampler is None:
            out = measure_random_phase(system, window, seed)
        else:
            out = sampler.collapse(np.random.default_rng(seed), window / system.Omega, seed)
        step.measurements.append(out.record())
        if out.is_factor_state:
            return out
    return None


def _exhausted_confidence(window: float, max_repeats: int) -> float:
    """Chance that every attempt missed a real resonance."""
    return float((1.0 - average_probability(window)) ** max_repeats)


def run_iterative(
    N: int,
    grid: PotentialGrid,
    gamma_policy: GammaPolicy | None = None,
    rng=None,
    max_repeats: int = 40,
    window: float = DEFAULT_WINDOW,
    coupling: str = "auto",
    dynamics: str = "rwa",
) -> ProtocolRun:
    """Iterative protocol on a log-integer grid, starting from two bosons.

    Each step drives ``k`` bosons at ``omega0 ln(N/L^k)`` and measures at random
    times within ``[0, window/Omega]``.  The first ``k`` without a resonance ends
    the run: at ``k=2`` that proves ``N`` prime, otherwise the factors found at
    ``k-1`` are the primes.
    """
    spectrum = grid.spectrum
    if spectrum is None or spectrum.mode is not Mode.LOG_INTEGER:
        raise DomainError("run_iterative needs a log-integer grid")
    L = spectrum.L
    if N < 2 or N % 2 == 0:
        raise DomainError(f"N must be odd and >= 3, got {N}")
    check_no_small_factors(N, L)
    policy = gamma_policy or GammaPolicy()
    gen, seed = as_generator(rng)
    run = ProtocolRun(N, L, ProtocolMode.ITERATIVE, seed,
                      {"max_repeats": max_repeats, "window": window, "safety": policy.safety,
                       "gamma": policy.gamma, "coupling": coupling, "dynamics": dynamics})
    last: tuple[int, ...] | None = None
    k = 2
    while True:
        run.k_current = k
        if N <= L**k:
            system = RabiSystem(spectrum, N, k, math.log(N) - k * math.log(L), (), (), None, "none", N)
        else:
            system = build_rabi_system(grid, N, k, gamma=policy.gamma, coupling=coupling, safety=policy.safety)
        step = StepRecord(k, _system_record(system))
        run.history.append(step)
        if not system.resonant:
            if last is None:
                return run.finish(Verdict.PRIME, [N], f"no resonance at k={k}")
            return run.finish(Verdict.FACTORED, last, f"no resonance at k={k}")
        out = _measure_until_factor(system, step, gen, window, max_repeats, dynamics, grid)
        if out is None:
            run.confidence = _exhausted_confidence(window, max_repeats)
            return run.finish(Verdict.EXHAUSTED, message=f"no factor state in {max_repeats} attempts at k={k}")
        step.success, step.factors = True, list(out.factors)
        last = out.factors
        k += 1


def run_known_n(
    N: int,
    grid: PotentialGrid,
    n: int,
    multiplicities=None,
    gamma_policy: GammaPolicy | None = None,
    rng=None,
    max_repeats: int = 40,
    window: float = DEFAULT_WINDOW,
    coupling: str = "auto",
) -> ProtocolRun:
    """Single step at ``k = n``.

    Without multiplicities the measurement is at a random time.  With them
    the Rabi frequency follows from the single factor state, and a measurement
    at ``pi/(2 Omega)`` returns the factors in one shot.
    """
    spectrum = grid.spectrum
    if spectrum is None or spectrum.mode is not Mode.LOG_INTEGER:
        raise DomainError("run_known_n needs a log-integer grid")
    policy = gamma_policy or GammaPolicy()
    gen, seed = as_generator(rng)
    run = ProtocolRun(N, spectrum.L, ProtocolMode.KNOWN_N, seed,
                      {"n": n, "multiplicities": None if multiplicities is None else list(multiplicities),
                       "max_repeats": max_repeats, "window": window, "safety": policy.safety,
                       "gamma": policy.gamma, "coupling": coupling})
    run.k_current = n
    check_no_small_factors(N, spectrum.L)
    if n < 1 or N <= spectrum.L**n:
        return run.finish(Verdict.ERROR, message=f"no resonance: N={N} cannot split into {n} factors above L")
    system = build_rabi_system(grid, N, n, gamma=policy.gamma, coupling=coupling, safety=policy.safety)
    step = StepRecord(n, _system_record(system))
    run.history.append(step)
    if not system.resonant:
        return run.finish(Verdict.ERROR, message=f"no resonance at k={n}")
    if system.d > 1:
        return run.finish(Verdict.ERROR, message=f"n={n} is not the prime-factor count (d={system.d})")
    if multiplicities is not None:
        if sum(multiplicities) != n:
            raise DomainError(f"multiplicities {list(multiplicities)} do not sum to n={n}")
        out = measure_at_pi_half(system, int(gen.integers(2**63)))
        step.measurements.append(out.record())
        state_mult = sorted(system.factor_states[0].multiplicities)
        run.checks["multiplicities_match"] = state_mult == sorted(multiplicities)
    else:
        out = _measure_until_factor(system, step, gen, window, max_repeats, "rwa", grid)
        if out is None:
            run.confidence = _exhausted_confidence(window, max_repeats)
            return run.finish(Verdict.EXHAUSTED, message=f"no factor state in {max_repeats} attempts")
    if not out.is_factor_state:
        return run.finish(Verdict.EXHAUSTED, message="measurement returned the ground state")
    step.success, step.factors = True, list(out.factors)
    return run.finish(Verdict.FACTORED, out.factors)


def prime_boson_count(N: int) -> int:
    """Bosons needed so that any factorization of ``N`` (or ``2N``) fits: ``floor(log2 N) + 1``."""
    if N < 2:
        raise DomainError(f"N must be >= 2, got {N}")
    return N.bit_length()


def prime_spectrum_target(N: int, spectrum: Spectrum | None = None) -> dict:
    """Pick the parity-allowed drive among ``ln N`` and ``ln 2N`` for ``m`` bosons.

    The ground configuration is even; the contact drive conserves parity, so
    only the target whose level indices sum to an even number is reachable.
    """
    spectrum = spectrum or Spectrum.prime()
    m = prime_boson_count(N)
    cands = {}
    for enc in (N, 2 * N):
        sols = decompose_energy(spectrum, enc, m)
        lv = sols[0] if sols else None
        cands[enc] = {"levels": lv, "parity": None if lv is None else (-1) ** sum(lv)}
    even = [enc for enc, c in cands.items() if c["parity"] == 1]
    return {"m": m, "candidates": cands, "allowed": even, "parity_claim_ok": len(even) == 1}


def run_prime_spectrum(
    N: int,
    grid: PotentialGrid,
    gamma: float | None = None,
    rng=None,
    max_repeats: int = 40,
    window: float = DEFAULT_WINDOW,
    safety: float = DEFAULT_SAFETY,
) -> ProtocolRun:
    """Single-shot factorization with ``floor(log2 N) + 1`` bosons on the prime spectrum.

    The coupling is integrated on the grid when every level fits; otherwise
    the Rabi frequency is unknown and only ``window`` (in units of 1/Omega)
    matters for the random-time measurement.
    """
    spectrum = grid.spectrum
    if spectrum is None or spectrum.mode is not Mode.PRIME:
        raise DomainError("run_prime_spectrum needs a prime-mode grid")
    gen, seed = as_generator(rng)
    target = prime_spectrum_target(N, spectrum)
    m = target["m"]
    run = ProtocolRun(N, None, ProtocolMode.PRIME_SPECTRUM, seed,
                      {"m": m, "max_repeats": max_repeats, "window": window, "gamma": gamma, "safety": safety})
    run.k_current = m
    run.checks["parity_claim_ok"] = target["parity_claim_ok"]
    run.checks["candidates"] = {str(k): v for k, v in target["candidates"].items()}
    if not target["allowed"]:
        return run.finish(Verdict.ERROR, message="neither ln N nor ln 2N is parity-allowed")
    enc = target["allowed"][0]
    state = BosonicConfig(target["candidates"][enc]["levels"])
    omega_ext = math.log(enc)
    if state.max_level < grid.M:
        W = contact_matrix_element(grid, BosonicConfig.ground(m), state)
        source = "exact"
        g = gamma if gamma is not None else rwa_gamma([W], enc, safety)
    else:
        W, source, g = 1.0, "unknown", None
    system = RabiSystem(spectrum, N, m, omega_ext, (state,), (W,), g, source, enc)
    step = StepRecord(m, _system_record(system))
    run.history.append(step)
    for _ in range(max_repeats):
        out = measure_random_phase(system, window, int(gen.integers(2**63)))
        step.measurements.append(out.record())
        if out.is_factor_state:
            break
    else:
        run.confidence = _exhausted_confidence(window, max_repeats)
        return run.finish(Verdict.EXHAUSTED, message=f"no factor state in {max_repeats} attempts")
    factors = Counter(out.factors)
    if enc == 2 * N:
        factors[2] -= 1  # the extra 2 belongs to the doubled target
    found = sorted(factors.elements())
    step.success, step.factors = True, found
    return run.finish(Verdict.PRIME if len(found) == 1 else Verdict.FACTORED, found)


def expected_factors(N: int) -> list[int]:
    """Trial-division reference, used only for post-hoc checks."""
    return sorted(prime_factors(N))
