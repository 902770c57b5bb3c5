"""Feasible (N, gamma) region for the n=4 family: RWA bound and decoherence bound."""
import argparse
import csv
import json
from pathlib import Path

from logfactor.asymptotics import feasibility_region, max_feasible_N_bound

ap = argparse.ArgumentParser()
ap.add_argument("--L", type=int, default=3)
ap.add_argument("--n", type=int, default=4)
ap.add_argument("--tdec", type=float, default=2.0)
ap.add_argument("--nu0", type=float, default=5000.0)
ap.add_argument("--points", type=int, default=200)
ap.add_argument("--out", default="out/fig3")
args = ap.parse_args()

out = Path(args.out)
out.mkdir(parents=True, exist_ok=True)
region = feasibility_region(args.L, args.n, args.tdec, args.nu0, points=args.points)
region.write_csv(out / "region.csv")
with (out / "boundaries.csv").open("w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["gamma", "N_rwa", "N_dec"])
    for (g, n_rwa), (_, n_dec) in zip(region.boundary("rwa"), region.boundary("dec")):
        w.writerow([f"{g:.6g}", f"{n_rwa:.6g}", f"{n_dec:.6g}"])
print(json.dumps({"max_feasible_N": region.max_feasible_N(), "analytic_bound": max_feasible_N_bound(args.tdec, args.nu0)}))
