"""Command-line front end: ``logfactor <subcommand> ...``.

Structured results go out as JSON, plottable series as CSV with a
``<name>.config.json`` sidecar holding the resolved configuration.  Relative
output paths are placed under ``$LOGFACTOR_OUTPUT_DIR`` when it is set.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .asymptotics import feasibility_region, max_feasible_N_bound
from .degeneracy import enumerate_factorizations, partition_count_diff, prime_factors, stirling_count
from .bosonic import BosonicConfig
from .dynamics import DEFAULT_SAFETY, AmplitudeTrajectory, RabiSystem, build_rabi_system, integrate_full
from .errors import DomainError, LogFactorError
from .measurement import average_probability, sample_outcomes
from .potential import BuildConfig, build_potential
from .protocol import DEFAULT_WINDOW, GammaPolicy, run_iterative, run_known_n, run_prime_spectrum
from .spectra import Spectrum

OUTPUT_ENV = "LOGFACTOR_OUTPUT_DIR"


@dataclass
class RunConfig:
    subcommand: str
    params: dict = field(default_factory=dict)
    version: str = __version__


def resolve_path(path: str | None) -> Path | None:
    if path is None:
        return None
    p = Path(path)
    base = os.environ.get(OUTPUT_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_json_default)


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def _emit(result: dict, cfg: RunConfig, out: str | None) -> None:
    """JSON result with the config embedded, to ``out`` or stdout."""
    text = _dump({"config": asdict(cfg), "result": result}) + "\n"
    path = resolve_path(out)
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)
        print(f"wrote {path}")


def _sidecar(csv_path: Path, cfg: RunConfig, extra: dict | None = None) -> None:
    side = csv_path.with_name(csv_path.name + ".config.json")
    side.write_text(_dump({"config": asdict(cfg), **(extra or {})}) + "\n")


def _spectrum(args) -> Spectrum:
    return Spectrum.prime() if getattr(args, "spectrum", "log-integer") == "prime" else Spectrum.log_integer(args.L)


def _grid(spectrum: Spectrum, M: int, h: float = 0.01, xi_max: float | None = None, update: str = "newton"):
    return build_potential(spectrum, M=M, config=BuildConfig(h=h, xi_max=xi_max, update=update))


def cmd_build_potential(args, cfg: RunConfig) -> int:
    from .numerov import numerov_spectrum

    spectrum = _spectrum(args)
    M = args.M if args.M is not None else (14 if spectrum.mode.value == "prime" else 7)
    grid = _grid(spectrum, M, args.h, args.xi_max, args.update)
    out_dir = resolve_path(args.out_dir) or Path(".")
    out_dir.mkdir(parents=True, exist_ok=True)
    pot = grid.write_potential_csv(out_dir / "potential.csv")
    eig = grid.write_eigen_csv(out_dir / "eigenfunctions.csv")
    summary = {
        "mode": spectrum.mode.value,
        "L": spectrum.L,
        "M": grid.M,
        "xi_max": float(grid.xi[-1]),
        "h": grid.h,
        "iterations": grid.iterations,
        "residual": grid.residual(),
        "v_at_origin": grid.v_at_origin,
        "target": grid.target.tolist(),
        "eigenvalues": grid.eigenvalues.tolist(),
    }
    if args.numerov:
        num = numerov_spectrum(grid.xi, grid.v, grid.M)
        summary["numerov"] = num.tolist()
        summary["numerov_max_diff"] = float(np.abs(num - grid.eigenvalues).max())
    for p in (pot, eig):
        _sidecar(p, cfg)
    _emit(summary, cfg, str(out_dir / "spectrum.json") if args.out_dir else None)
    return 0


def cmd_factor(args, cfg: RunConfig) -> int:
    policy = GammaPolicy(args.safety, args.gamma)
    if args.mode == "prime-spectrum":
        grid = _grid(Spectrum.prime(), args.M or 14)
        run = run_prime_spectrum(args.N, grid, args.gamma, args.seed, args.max_repeats, args.window, args.safety)
    else:
        grid = _grid(Spectrum.log_integer(args.L), args.M or 16)
        if args.mode == "iterative":
            run = run_iterative(args.N, grid, policy, args.seed, args.max_repeats, args.window, args.coupling, args.dynamics)
        else:
            if args.n is None:
                raise DomainError("--n is required for --mode known-n")
            run = run_known_n(args.N, grid, args.n, args.multiplicities, policy, args.seed, args.max_repeats, args.window, args.coupling)
    _emit(run.to_dict(), cfg, args.out)
    return 0


def cmd_degeneracy(args, cfg: RunConfig) -> int:
    fs = enumerate_factorizations(args.N, args.k, min_part=args.L + 1 if args.L else 2)
    primes = prime_factors(args.N)
    result = {"N": args.N, "k": args.k, "min_part": fs.min_part, "d": fs.d, "solutions": [list(s) for s in fs.solutions]}
    n = len(primes)
    if len(set(primes)) == n:
        result["stirling"] = stirling_count(n, args.k)
    elif len(set(primes)) == 1:
        result["partition_diff"] = partition_count_diff(n, args.k)
    _emit(result, cfg, args.out)
    return 0


def cmd_simulate(args, cfg: RunConfig) -> int:
    grid = _grid(Spectrum.log_integer(args.L), args.M)
    system = build_rabi_system(grid, args.N, args.k, safety=args.safety, gamma=args.gamma)
    if not system.resonant:
        raise DomainError(f"no resonance for N={args.N} with k={args.k}")
    t_end = args.periods * math.pi / system.Omega
    out_dir = resolve_path(args.out_dir) or Path(".")
    out_dir.mkdir(parents=True, exist_ok=True)
    full = integrate_full(system, grid, basis_cutoff=args.cutoff, t_end=t_end, n_samples=args.samples)
    rwa = AmplitudeTrajectory.from_rwa(system, full.times)
    rwa.write_csv(out_dir / "rwa.csv")
    full.write_csv(out_dir / "full.csv")
    for name in ("rwa.csv", "full.csv"):
        _sidecar(out_dir / name, cfg)
    result = {
        "system": system.summary(),
        "t_end": t_end,
        "cutoff": full.meta["cutoff"],
        "sup_ground_deviation": float(np.abs(full.prob_ground - rwa.prob_ground).max()),
        "norm_drift": full.norm_drift,
        "edge_population": full.leakage,
    }
    _emit(result, cfg, str(out_dir / "simulate.json") if args.out_dir else None)
    return 0


def cmd_pt_curve(args, cfg: RunConfig) -> int:
    x = np.linspace(0.0, args.max_omega_t, args.points)
    pt = average_probability(x)
    path = resolve_path(args.out) or Path("pt.csv")
    cols = ["omega_t", "p_t"]
    mc = None
    if args.mc:
        # unit-frequency two-level toy: only Omega*T matters
        toy = RabiSystem(Spectrum.log_integer(3), 35, 2, 0.0, (BosonicConfig.of(2, 4),), (1.0,), 2.0, "toy", 35)
        gen = np.random.default_rng(args.seed)
        mc = []
        for xv in x:
            if xv == 0:
                mc.append(0.0)
                continue
            _, idx = sample_outcomes(toy, xv, args.mc, gen)
            mc.append(float(np.mean(idx > 0)))
        cols.append("p_t_mc")
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for i, xv in enumerate(x):
            row = [f"{xv:.12g}", f"{pt[i]:.12g}"]
            if mc is not None:
                row.append(f"{mc[i]:.12g}")
            w.writerow(row)
    _sidecar(path, cfg)
    print(f"wrote {path}")
    return 0


def cmd_feasibility(args, cfg: RunConfig) -> int:
    tdec = math.inf if args.tdec <= 0 else args.tdec
    region = feasibility_region(args.L, args.n, tdec, args.nu0, points=args.points)
    result = {
        "L": args.L,
        "n": args.n,
        "T_dec": None if math.isinf(tdec) else tdec,
        "nu0": args.nu0,
        "max_feasible_N": region.max_feasible_N(),
        "analytic_bound": None if math.isinf(tdec) else max_feasible_N_bound(tdec, args.nu0),
    }
    if args.out:
        path = resolve_path(args.out)
        region.write_csv(path)
        _sidecar(path, cfg, {"summary": result})
        print(f"wrote {path}")
    _emit(result, cfg, None)
    return 0


def cmd_validate(args, cfg: RunConfig) -> int:
    from .validation import run_checks

    report = run_checks(quick=not args.full)
    width = max(len(r["name"]) for r in report)
    for r in report:
        print(f"{'PASS' if r['ok'] else 'FAIL'}  {r['name']:<{width}}  {r['detail']}")
    if args.out:
        _emit({"checks": report}, cfg, args.out)
    return 0 if all(r["ok"] for r in report) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="logfactor", description="Factorization with a logarithmic single-particle spectrum.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("build-potential", help="reconstruct V(x) for a log-integer or prime spectrum")
    p.add_argument("--spectrum", choices=["log-integer", "prime"], default="log-integer")
    p.add_argument("--L", type=int, default=3)
    p.add_argument("--M", type=int, default=None, help="levels to match (default 7, or 14 for prime)")
    p.add_argument("--h", type=float, default=0.01)
    p.add_argument("--xi-max", type=float, default=None)
    p.add_argument("--update", choices=["newton", "diagonal"], default="newton")
    p.add_argument("--numerov", action="store_true", help="cross-check eigenvalues by shooting")
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_build_potential)

    p = sub.add_parser("factor", help="run a factorization protocol")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--L", type=int, default=3)
    p.add_argument("--mode", choices=["iterative", "known-n", "prime-spectrum"], default="iterative")
    p.add_argument("--n", type=int, default=None, help="prime-factor count for known-n")
    p.add_argument("--multiplicities", type=int, nargs="+", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-repeats", type=int, default=40)
    p.add_argument("--window", type=float, default=DEFAULT_WINDOW, help="measurement window Omega*T")
    p.add_argument("--safety", type=float, default=DEFAULT_SAFETY)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--coupling", choices=["auto", "exact", "wkb"], default="auto")
    p.add_argument("--dynamics", choices=["rwa", "full"], default="rwa")
    p.add_argument("--M", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("degeneracy", help="enumerate unordered factorizations")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--L", type=int, default=None, help="only parts above L")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_degeneracy)

    p = sub.add_parser("simulate", help="RWA against full-ODE trajectories")
    p.add_argument("--N", type=int, default=35)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--L", type=int, default=3)
    p.add_argument("--M", type=int, default=16)
    p.add_argument("--safety", type=float, default=DEFAULT_SAFETY)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--periods", type=float, default=1.0, help="duration in units of pi/Omega")
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--samples", type=int, default=2001)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("pt-curve", help="average factor-state probability versus Omega*T")
    p.add_argument("--max-omega-t", type=float, default=20.0)
    p.add_argument("--points", type=int, default=400)
    p.add_argument("--mc", type=int, default=0, help="Monte Carlo samples per point (0: none)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="pt.csv")
    p.set_defaults(func=cmd_pt_curve)

    p = sub.add_parser("feasibility", help="(N, gamma) region meeting the RWA and decoherence bounds")
    p.add_argument("--L", type=int, default=3)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--tdec", type=float, default=2.0, help="seconds; <= 0 means no decoherence")
    p.add_argument("--nu0", type=float, default=5000.0, help="Hz")
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_feasibility)

    p = sub.add_parser("validate", help="run the invariant checks and print a report")
    p.add_argument("--full", action="store_true", help="include the slower full-ODE checks")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    params = {k: v for k, v in vars(args).items() if k not in ("func", "subcommand")}
    cfg = RunConfig(args.subcommand, params)
    try:
        return args.func(args, cfg)
    except LogFactorError as err:
        print(f"error [{err.category}]: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
