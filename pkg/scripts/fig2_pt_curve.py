"""Average factor-state probability P_T against Omega*T, analytic and sampled."""
import argparse
import csv
from pathlib import Path

import numpy as np

from logfactor import Spectrum, build_potential, build_rabi_system
from logfactor.measurement import average_probability, sample_outcomes

ap = argparse.ArgumentParser()
ap.add_argument("--max-omega-t", type=float, default=20.0)
ap.add_argument("--points", type=int, default=81)
ap.add_argument("--samples", type=int, default=100_000)
ap.add_argument("--seed", type=int, default=0)
ap.add_argument("--out", default="out/fig2/pt.csv")
args = ap.parse_args()

grid = build_potential(Spectrum.log_integer(3), M=16)
system = build_rabi_system(grid, 35, 2)
rng = np.random.default_rng(args.seed)
path = Path(args.out)
path.parent.mkdir(parents=True, exist_ok=True)
with path.open("w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["omega_t", "p_t", "p_t_mc", "sigma"])
    for x in np.linspace(0, args.max_omega_t, args.points)[1:]:
        _, idx = sample_outcomes(system, x, args.samples, rng)
        ref = average_probability(x)
        w.writerow([f"{x:.6g}", f"{ref:.8f}", f"{np.mean(idx > 0):.8f}", f"{np.sqrt(ref * (1 - ref) / args.samples):.2e}"])
print(f"wrote {path}")
