"""Inverse spectral construction of a symmetric 1-D trap potential.

Everything is dimensionless: ``xi = alpha*x`` with ``alpha^2 = mu*omega0/hbar``
and energies in units of hbar*omega0, so the eigenproblem reads
``-phi''/2 + V phi = E phi``.  Eigenpairs come from a three-point finite
difference Laplacian with Dirichlet walls at ``+-xi_max``.

The potential is steered toward a target spectrum by first-order
perturbation theory: by Hellmann-Feynman a change ``dV`` moves level ``m`` by
``<phi_m|dV|phi_m>``, so each sweep solves for ``dV`` in a small function
basis and re-diagonalizes.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import ConvergenceError, DomainError, GridTooSmallError, LevelOutOfRangeError
from .spectra import Mode, Spectrum


@dataclass
class BuildConfig:
    xi_max: float | None = None  # None picks an extent from the target
    h: float = 0.01
    tol: float = 1e-3  # acceptance bound on max |E_computed - E_target|
    target_residual: float = 1e-5  # sweeps continue until this is met
    max_iter: int = 500
    update: str = "newton"  # "newton" or "diagonal"
    initial: str = "log-harmonic"  # or "harmonic"
    omega_eff: float | None = None
    eta: float = 0.5  # damping of the diagonal rule
    step_cap: float = 0.5  # max |dV| per Newton sweep
    levenberg: float = 1e-3
    regularization: float = 1e-6
    decay_tol: float = 1e-10
    auto_extend: int = 2  # retries with a larger grid on decay failure


def make_grid(xi_max: float, h: float) -> np.ndarray:
    n = int(round(xi_max / h))
    if n < 4:
        raise DomainError("grid needs at least a few points per side")
    return np.linspace(-n * h, n * h, 2 * n + 1)


def _edge_ratio(xi: np.ndarray, phi: np.ndarray, edge: float = 1.0) -> float:
    mask = np.abs(xi) >= xi[-1] - edge
    peak = np.abs(phi).max(axis=1)
    return float((np.abs(phi[:, mask]).max(axis=1) / peak).max())


def solve_eigenproblem(xi, v, M: int, decay_tol: float | None = 1e-10):
    """Lowest ``M`` eigenpairs of ``-phi''/2 + v phi`` on the uniform grid ``xi``.

    Returns ``(energies, phi)`` with ``phi`` of shape ``(M, len(xi))``,
    normalized so that the trapezoid rule gives unit norm, and with the
    sign fixed by ``phi(0) > 0`` (even levels) or ``phi'(0) > 0`` (odd).
    Passing ``decay_tol=None`` skips the boundary check.
    """
    xi = np.asarray(xi, dtype=float)
    v = np.asarray(v, dtype=float)
    h = xi[1] - xi[0]
    if M < 1 or M > len(xi) - 2:
        raise DomainError(f"cannot extract {M} levels from {len(xi)} grid points")
    diag = 1.0 / h**2 + v[1:-1]
    off = np.full(len(diag) - 1, -0.5 / h**2)
    energies, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, M - 1))
    phi = np.zeros((M, len(xi)))
    phi[:, 1:-1] = vecs.T / np.sqrt(h)
    c = len(xi) // 2
    for ell in range(M):
        ref = phi[ell, c] if ell % 2 == 0 else phi[ell, c + 1] - phi[ell, c - 1]
        if ref < 0:
            phi[ell] *= -1
    if decay_tol is not None:
        ratio = _edge_ratio(xi, phi)
        if ratio > decay_tol:
            raise GridTooSmallError(
                f"level {M - 1} has relative amplitude {ratio:.1e} at the boundary",
                suggested_extent=1.5 * xi[-1],
            )
    return energies, phi


def count_nodes(phi, rel_floor: float = 1e-6) -> int:
    """Sign changes of ``phi``, ignoring the numerically empty tails."""
    phi = np.asarray(phi)
    s = phi[np.abs(phi) > rel_floor * np.abs(phi).max()]
    return int(np.count_nonzero(np.signbit(s[1:]) != np.signbit(s[:-1])))


@dataclass(frozen=True)
class PotentialGrid:
    xi: np.ndarray
    v: np.ndarray
    eigenvalues: np.ndarray
    eigenfunctions: np.ndarray
    target: np.ndarray | None = None
    spectrum: Spectrum | None = None
    history: tuple = field(default=(), repr=False)

    def __post_init__(self):
        for a in (self.xi, self.v, self.eigenvalues, self.eigenfunctions):
            a.setflags(write=False)

    @property
    def h(self) -> float:
        return float(self.xi[1] - self.xi[0])

    @property
    def M(self) -> int:
        return len(self.eigenvalues)

    @property
    def iterations(self) -> int:
        return max(len(self.history) - 1, 0)

    @property
    def v_at_origin(self) -> float:
        return float(self.v[len(self.xi) // 2])

    @property
    def L(self) -> int | None:
        return self.spectrum.L if self.spectrum is not None else None

    def phi(self, ell: int) -> np.ndarray:
        if not 0 <= ell < self.M:
            raise LevelOutOfRangeError(f"level {ell} not available (grid holds {self.M} levels)")
        return self.eigenfunctions[ell]

    def residual(self) -> float:
        if self.target is None:
            return float("nan")
        return float(np.abs(self.eigenvalues - self.target).max())

    def write_potential_csv(self, path) -> Path:
        path = Path(path)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["xi", "v"])
            for x, y in zip(self.xi, self.v):
                w.writerow([f"{x:.12g}", f"{y:.12g}"])
        return path

    def write_eigen_csv(self, path) -> Path:
        path = Path(path)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["xi"] + [f"phi{ell}" for ell in range(self.M)])
            for i, x in enumerate(self.xi):
                w.writerow([f"{x:.12g}"] + [f"{p:.12g}" for p in self.eigenfunctions[:, i]])
        return path


def default_omega(spectrum: Spectrum | None, target: np.ndarray) -> float:
    if spectrum is not None and spectrum.mode is Mode.LOG_INTEGER:
        return 1.0 / (spectrum.L - 0.5)
    if spectrum is not None:
        return 2.0 * np.log(2.0)
    return float(target[1] - target[0])


def default_extent(spectrum: Spectrum | None, M: int) -> float:
    if spectrum is not None and spectrum.mode is Mode.PRIME:
        return 150.0
    if M <= 8:
        return 40.0
    if M <= 16:
        return 60.0
    return 40.0 + 3.0 * M


def initial_potential(xi, omega: float, kind: str = "log-harmonic") -> np.ndarray:
    """Start guess: harmonic with ``omega`` at the origin.

    ``log-harmonic`` is ``ln(1 + omega^2 xi^2)/2``, which has the same
    curvature at the origin but grows like ``ln|xi|`` far out.
    """
    if kind == "harmonic":
        return 0.5 * omega**2 * xi**2
    if kind == "log-harmonic":
        return 0.5 * np.log1p(omega**2 * xi**2)
    raise DomainError(f"unknown initial potential {kind!r}")


def _newton_step(phi, r, h, cfg: BuildConfig, cap: float):
    w = phi**2
    J = (w * h) @ w.T  # J[m, l] = <phi_m| phi_l^2 |phi_m>
    JtJ = J.T @ J
    lam = cfg.levenberg * np.trace(JtJ) / len(r)
    c = np.linalg.solve(JtJ + lam * np.eye(len(r)), J.T @ r)
    dv = c @ w
    peak = np.abs(dv).max()
    if peak > cap:
        dv *= cap / peak
    return dv


def _diagonal_step(phi, r, cfg: BuildConfig, eta: float):
    w = phi**2
    den = w.sum(axis=0)
    return eta * (r @ w) / (den + cfg.regularization * den.max())


def _iterate(xi, target, cfg: BuildConfig, omega: float):
    h = xi[1] - xi[0]
    M = len(target)
    v = initial_potential(xi, omega, cfg.initial)
    history = []
    cap, eta = cfg.step_cap, cfg.eta
    best = np.inf
    for _ in range(cfg.max_iter + 1):
        E, phi = solve_eigenproblem(xi, v, M, decay_tol=None)
        r = target - E
        res = float(np.abs(r).max())
        history.append(res)
        if res < cfg.target_residual:
            break
        if res > best:
            cap, eta = max(cap / 2, 1e-4), eta / 2
        best = min(best, res)
        if cfg.update == "newton":
            v = v + _newton_step(phi, r, h, cfg, cap)
        elif cfg.update == "diagonal":
            v = v + _diagonal_step(phi, r, cfg, eta)
        else:
            raise DomainError(f"unknown update rule {cfg.update!r}")
        v = 0.5 * (v + v[::-1])
    return v, history


def build_potential(target, M: int | None = None, config: BuildConfig | None = None) -> PotentialGrid:
    """Construct ``V(xi)`` whose lowest ``M`` levels match ``target``.

    ``target`` is a :class:`Spectrum` (then ``M`` is required) or a sequence
    of strictly increasing energies.  After convergence the potential is
    shifted so that the ground level sits exactly at ``target[0]``.
    """
    cfg = config or BuildConfig()
    spectrum = target if isinstance(target, Spectrum) else None
    if spectrum is not None:
        if M is None:
            raise DomainError("M is required when the target is a Spectrum")
        tgt = spectrum.energies(M)
    else:
        tgt = np.asarray(target, dtype=float)
        if M is not None:
            tgt = tgt[:M]
    M = len(tgt)
    if M < 2 or np.any(np.diff(tgt) <= 0):
        raise DomainError("target needs at least two strictly increasing energies")
    omega = cfg.omega_eff if cfg.omega_eff is not None else default_omega(spectrum, tgt)
    xi_max = cfg.xi_max if cfg.xi_max is not None else default_extent(spectrum, M)

    for attempt in range(cfg.auto_extend + 1):
        xi = make_grid(xi_max, cfg.h)
        v, history = _iterate(xi, tgt, cfg, omega)
        if history[-1] > cfg.tol:
            raise ConvergenceError(
                f"residual {history[-1]:.2e} above tol {cfg.tol:.1e} after {len(history) - 1} sweeps",
                history,
            )
        E, _ = solve_eigenproblem(xi, v, M, decay_tol=None)
        v = v + (tgt[0] - E[0])
        try:
            E, phi = solve_eigenproblem(xi, v, M, decay_tol=cfg.decay_tol)
        except GridTooSmallError as err:
            if attempt == cfg.auto_extend:
                raise
            xi_max = err.suggested_extent
            continue
        return PotentialGrid(xi, v, E, phi, tgt.copy(), spectrum, tuple(history))
    raise AssertionError("unreachable")
