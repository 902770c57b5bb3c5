"""Potential and lowest eigenfunctions for the L=3 log-integer spectrum."""
import argparse
import json
from pathlib import Path

import numpy as np

from logfactor import Spectrum, build_potential
from logfactor.numerov import numerov_spectrum

ap = argparse.ArgumentParser()
ap.add_argument("--L", type=int, default=3)
ap.add_argument("--M", type=int, default=7)
ap.add_argument("--out", default="out/fig1")
args = ap.parse_args()

out = Path(args.out)
out.mkdir(parents=True, exist_ok=True)
grid = build_potential(Spectrum.log_integer(args.L), M=args.M)
grid.write_potential_csv(out / "potential.csv")
grid.write_eigen_csv(out / "eigenfunctions.csv")
num = numerov_spectrum(grid.xi, grid.v, grid.M)
summary = {
    "L": args.L,
    "iterations": grid.iterations,
    "target": grid.target.tolist(),
    "eigenvalues": grid.eigenvalues.tolist(),
    "numerov": num.tolist(),
    "max_abs_dE": float(np.abs(grid.eigenvalues - grid.target).max()),
}
(out / "summary.json").write_text(json.dumps(summary, indent=2))
print(json.dumps(summary, indent=2))
