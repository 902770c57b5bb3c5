"""Potential whose 14 lowest levels are ln p with p = 1, 2, 3, 5, ..."""
import argparse
import json
from pathlib import Path

import numpy as np

from logfactor import Spectrum, build_potential

ap = argparse.ArgumentParser()
ap.add_argument("--M", type=int, default=14)
ap.add_argument("--out", default="out/fig4")
args = ap.parse_args()

out = Path(args.out)
out.mkdir(parents=True, exist_ok=True)
grid = build_potential(Spectrum.prime(), M=args.M)
grid.write_potential_csv(out / "potential.csv")
grid.write_eigen_csv(out / "eigenfunctions.csv")
err = np.abs(grid.eigenvalues - grid.target)
print(json.dumps({"max_abs_dE": float(err.max()), "iterations": grid.iterations, "xi_max": float(grid.xi[-1])}))
