"""Iterative protocol over every odd N up to a bound with no factor 3."""
import argparse
import csv
import time
from pathlib import Path

from logfactor import Spectrum, build_potential, run_iterative
from logfactor.degeneracy import prime_factors

ap = argparse.ArgumentParser()
ap.add_argument("--max-n", type=int, default=10_000)
ap.add_argument("--out", default="out/sweep/protocol.csv")
args = ap.parse_args()

grid = build_potential(Spectrum.log_integer(3), M=16)
path = Path(args.out)
path.parent.mkdir(parents=True, exist_ok=True)
t0 = time.perf_counter()
wrong = 0
with path.open("w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["N", "verdict", "factors", "steps", "measurements", "correct"])
    for N in range(5, args.max_n + 1):
        if N % 2 == 0 or N % 3 == 0:
            continue
        run = run_iterative(N, grid, rng=N)
        ok = run.confirmed_factors == prime_factors(N)
        wrong += not ok
        reps = sum(s.repeats for s in run.history)
        w.writerow([N, run.verdict.value, "x".join(map(str, run.confirmed_factors)), run.steps, reps, int(ok)])
print(f"{wrong} wrong, {time.perf_counter() - t0:.1f}s, wrote {path}")
