"""Driven k-boson dynamics: closed-form RWA solution and full interaction-picture ODE.

Units: time in 1/omega0, energies and the drive strength ``gamma`` in
hbar*omega0.  The drive is ``gamma sin(omega_ext t) v(x)`` with the contact
interaction ``v``; amplitudes are in the interaction picture so that the
ground amplitude starts at 1 and stays constant without a drive.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy.integrate import solve_ivp

from .asymptotics import wkb_overlap
from .bosonic import BosonicConfig, bosonic_configs, contact_matrix, contact_matrix_element
from .errors import DomainError, IntegrationError, LevelOutOfRangeError
from .potential import PotentialGrid
from .spectra import Mode, Spectrum, decompose_energy, total_energy_argument

LEAKAGE_WARN = 1e-4
# Omega = safety * omega0 / N; 0.5 lets near-resonant ladder states pull the full dynamics off the RWA
DEFAULT_SAFETY = 0.05


@dataclass(frozen=True)
class RabiSystem:
    spectrum: Spectrum
    N: int
    k: int
    omega_ext: float
    factor_states: tuple[BosonicConfig, ...]
    couplings: tuple[float, ...]
    gamma: float | None = None
    coupling_source: str = "exact"
    encoded: int | None = None  # integer whose energy is driven (N, or 2N in prime mode)

    @property
    def L(self) -> int | None:
        return self.spectrum.L

    @property
    def d(self) -> int:
        return len(self.factor_states)

    @property
    def resonant(self) -> bool:
        return self.d > 0

    @property
    def coupling_norm(self) -> float:
        return float(np.sqrt(np.sum(np.square(self.couplings)))) if self.couplings else 0.0

    @property
    def branch_weights(self) -> np.ndarray:
        """``W_j / sqrt(sum W^2)``: amplitude share of each factor state."""
        W = np.asarray(self.couplings, dtype=float)
        return W / self.coupling_norm if self.d else W

    @property
    def Omega(self) -> float:
        if not self.resonant or self.gamma is None:
            return 0.0
        return 0.5 * self.gamma * self.coupling_norm

    def with_gamma(self, gamma: float) -> "RabiSystem":
        return replace(self, gamma=gamma)

    def decode(self, state: BosonicConfig) -> tuple[int, ...]:
        """Integers read off a measured configuration; ground levels carry no factor in prime mode."""
        if self.spectrum.mode is Mode.LOG_INTEGER:
            return tuple(self.spectrum.decode(ell) for ell in state.levels)
        return tuple(self.spectrum.decode(ell) for ell in state.levels if ell > 0)

    def summary(self) -> dict:
        return {
            "N": self.N,
            "k": self.k,
            "L": self.L,
            "omega_ext": self.omega_ext,
            "d": self.d,
            "factor_states": [list(s.levels) for s in self.factor_states],
            "couplings": list(self.couplings),
            "coupling_source": self.coupling_source,
            "gamma": self.gamma,
            "Omega": self.Omega,
        }


def rwa_gamma(couplings, N: int, safety: float = DEFAULT_SAFETY) -> float:
    """Largest drive with ``Omega <= safety * omega0 / N``."""
    norm = float(np.sqrt(np.sum(np.square(couplings))))
    if norm == 0.0:
        raise DomainError("no coupling to scale the drive against")
    return 2.0 * safety / (N * norm)


def ground_coupling(grid: PotentialGrid, state: BosonicConfig, source: str = "auto") -> tuple[float, str]:
    """Contact element between the ground configuration and ``state``.

    ``exact`` integrates the grid eigenfunctions; ``wkb`` uses the
    centre approximation, which is the only option for levels beyond the grid.
    """
    ground = BosonicConfig.ground(state.n)
    if source == "auto":
        source = "exact" if state.max_level < grid.M else "wkb"
    if source == "exact":
        return contact_matrix_element(grid, ground, state), "exact"
    if source == "wkb":
        if grid.L is None:
            raise DomainError("the WKB coupling needs a log-integer grid")
        if state.index_sum % 2:
            return 0.0, "wkb"
        raw = wkb_overlap(ground.levels + state.levels, grid.L, v0=grid.v_at_origin)
        return raw / state.norm_factor, "wkb"
    raise DomainError(f"unknown coupling source {source!r}")


def _couplings(grid, states, source):
    if source == "auto":
        source = "exact" if all(s.max_level < grid.M for s in states) else "wkb"
    vals = [ground_coupling(grid, s, source)[0] for s in states]
    return tuple(vals), source


def build_rabi_system(
    grid: PotentialGrid,
    N: int,
    k: int,
    gamma: float | None = None,
    coupling: str = "auto",
    safety: float = DEFAULT_SAFETY,
    spectrum: Spectrum | None = None,
) -> RabiSystem:
    """Resonant reduced system for ``k`` bosons driven at ``omega0 ln(N/L^k)``.

    With no factorization of ``N`` into ``k`` parts above ``L`` the returned
    system has ``d = 0`` ("no resonance").  ``gamma=None`` applies the RWA
    drive policy ``Omega = safety/N``.
    """
    spectrum = spectrum or grid.spectrum
    if spectrum is None or spectrum.mode is not Mode.LOG_INTEGER:
        raise DomainError("build_rabi_system needs a log-integer spectrum")
    arg = total_energy_argument(spectrum, N, k)
    omega_ext = math.log(arg.numerator) - math.log(arg.denominator)
    states = tuple(BosonicConfig(s) for s in decompose_energy(spectrum, N, k)) if arg > 1 else ()
    if not states:
        return RabiSystem(spectrum, N, k, omega_ext, (), (), gamma, "none", N)
    W, source = _couplings(grid, states, coupling)
    if gamma is None:
        gamma = rwa_gamma(W, N, safety)
    return RabiSystem(spectrum, N, k, omega_ext, states, W, gamma, source, N)


def rwa_amplitudes(system: RabiSystem, t):
    """Closed-form RWA amplitudes ``(b0, b)``; ``b`` has shape ``t.shape + (d,)``."""
    if not system.resonant:
        raise DomainError("no resonance: the reduced system has no factor states")
    t = np.asarray(t, dtype=float)
    ph = system.Omega * t
    return np.cos(ph), np.multiply.outer(np.sin(ph), system.branch_weights)


@dataclass
class AmplitudeTrajectory:
    times: np.ndarray
    amplitudes: np.ndarray  # (n_times, n_basis) bosonic amplitudes
    basis: list[BosonicConfig]
    factor_indices: list[int]
    ground_index: int = 0
    leakage: float = 0.0
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_rwa(cls, system: RabiSystem, times) -> "AmplitudeTrajectory":
        times = np.asarray(times, dtype=float)
        b0, b = rwa_amplitudes(system, times)
        amps = np.column_stack([b0, b.reshape(len(times), -1)])
        basis = [BosonicConfig.ground(system.k), *system.factor_states]
        return cls(times, amps, basis, list(range(1, len(basis))), 0, 0.0, {"method": "rwa"})

    @property
    def b0(self) -> np.ndarray:
        return self.amplitudes[:, self.ground_index]

    @property
    def b_factors(self) -> np.ndarray:
        return self.amplitudes[:, self.factor_indices]

    @property
    def prob_ground(self) -> np.ndarray:
        return np.abs(self.b0) ** 2

    @property
    def prob_factors(self) -> np.ndarray:
        return np.abs(self.b_factors) ** 2

    @property
    def prob_factor_total(self) -> np.ndarray:
        return self.prob_factors.sum(axis=1)

    @property
    def norm(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    @property
    def norm_drift(self) -> float:
        return float(np.abs(self.norm - 1.0).max())

    def ordinary_amplitudes(self) -> np.ndarray:
        """Amplitudes of a single ordered product state, ``b = N({nu}) b^B``."""
        nf = np.array([c.norm_factor for c in self.basis])
        return self.amplitudes * nf

    def write_csv(self, path) -> Path:
        path = Path(path)
        names = [f"prob_{'_'.join(map(str, self.basis[i].levels))}" for i in self.factor_indices]
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "re_b0", "im_b0", "prob_ground", "prob_factor_total", *names])
            pf = self.prob_factors
            for i, t in enumerate(self.times):
                b0 = complex(self.b0[i])
                w.writerow(
                    [f"{t:.12g}", f"{b0.real:.12g}", f"{b0.imag:.12g}", f"{self.prob_ground[i]:.12g}",
                     f"{self.prob_factor_total[i]:.12g}", *(f"{x:.12g}" for x in pf[i])]
                )
        return path


def default_cutoff(system: RabiSystem, margin: int = 8) -> int:
    if system.resonant:
        return max(s.max_level for s in system.factor_states) + margin
    # no factor states: cover every level a single boson could reach with the drive energy
    ell = 0
    while system.spectrum.energy(ell) <= system.omega_ext:
        ell += 1
    return ell + margin


def integrate_full(
    system: RabiSystem,
    grid: PotentialGrid,
    basis_cutoff: int | None = None,
    t_end: float | None = None,
    n_samples: int = 2001,
    rtol: float = 1e-8,
    atol: float = 1e-11,
    method: str = "DOP853",
    energies: str = "exact",
    dense: bool = False,
) -> AmplitudeTrajectory:
    """Integrate the full driven system on a truncated bosonic basis, without the RWA.

    ``i db_m/dt = gamma sin(w t) sum_n exp(i (E_m - E_n) t) W_mn b_n`` over every
    ``k``-boson configuration with levels up to ``basis_cutoff``, starting in
    the ground configuration.  ``energies="exact"`` uses the target spectrum,
    ``"grid"`` the eigenvalues of the discretized potential.
    """
    if system.gamma is None:
        raise DomainError("system has no drive strength")
    cutoff = default_cutoff(system) if basis_cutoff is None else basis_cutoff
    if cutoff >= grid.M:
        raise LevelOutOfRangeError(f"basis cutoff {cutoff} needs a grid with more than {grid.M} levels")
    if t_end is None:
        if not system.resonant:
            raise DomainError("t_end is required when there is no resonance")
        t_end = 2.0 * math.pi / system.Omega
    basis = bosonic_configs(system.k, cutoff)
    if energies == "exact":
        e1 = system.spectrum.energies(cutoff + 1)
    elif energies == "grid":
        e1 = np.asarray(grid.eigenvalues[: cutoff + 1])
    else:
        raise DomainError(f"unknown energy source {energies!r}")
    E = np.array([e1[list(c.levels)].sum() for c in basis])
    W = contact_matrix(grid, basis)
    g, w = system.gamma, system.omega_ext

    def rhs(t, b):
        ph = np.exp(1j * E * t)
        return -1j * g * math.sin(w * t) * ph * (W @ (np.conj(ph) * b))

    b0 = np.zeros(len(basis), dtype=complex)
    b0[0] = 1.0
    times = np.linspace(0.0, t_end, n_samples)
    sol = solve_ivp(rhs, (0.0, t_end), b0, method=method, t_eval=times, rtol=rtol, atol=atol, dense_output=dense)
    if not sol.success:
        raise IntegrationError(sol.message)
    amps = sol.y.T
    index = {c: i for i, c in enumerate(basis)}
    edge = [i for i, c in enumerate(basis) if c.max_level == cutoff]
    leakage = float(np.max(np.sum(np.abs(amps[:, edge]) ** 2, axis=1))) if edge else 0.0
    traj = AmplitudeTrajectory(
        times, amps, basis, [index[s] for s in system.factor_states], 0, leakage,
        {"method": method, "cutoff": cutoff, "rtol": rtol, "energies": energies, "nfev": int(sol.nfev)},
    )
    if sol.sol is not None:
        traj.meta["dense"] = sol.sol
    if traj.norm_drift > LEAKAGE_WARN or leakage > LEAKAGE_WARN:
        warnings.warn(
            f"basis cutoff {cutoff}: norm drift {traj.norm_drift:.1e}, edge population {leakage:.1e}",
            RuntimeWarning,
            stacklevel=2,
        )
    return traj
