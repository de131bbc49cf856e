#!/usr/bin/env python3
"""Produce the full CSV artifact set through the ergoliq CLI.

Writes one subdirectory per experiment under --out:

  gamma/         closed-form long-run reward at the baseline parameters
  compare/       ergodic vs half-inventory, both cash modes, with sampled
                 trajectories (feeds the PnL figures)
  sweep_r_eta/   closed-form reward surfaces over (r, eta), (r, lambda),
  sweep_r_lambda/  (r, k) and (r, b)
  sweep_r_k/
  sweep_r_b/
  sweep_sigma/   Monte-Carlo reward vs sigma under full cash dynamics
                 (feeds the robustness figure)

Use --quick for a fast smoke-sized run.
"""

import argparse
import subprocess
import sys
from pathlib import Path


def run(args):
    cmd = [sys.executable, "-m", "ergoliq"] + [str(a) for a in args]
    print("+", " ".join(cmd[2:]))
    subprocess.run(cmd, check=True)


def frange(lo, hi, n):
    step = (hi - lo) / (n - 1)
    return ",".join(f"{lo + i * step:g}" for i in range(n))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("runs"))
    ap.add_argument("--seed", type=int, default=20240001)
    ap.add_argument("--paths", type=int, default=500)
    ap.add_argument("--sweep-paths", type=int, default=1000)
    ap.add_argument("--horizon", type=float, default=2000.0)
    ap.add_argument("--quick", action="store_true", help="smoke-sized run")
    opts = ap.parse_args()

    paths = 40 if opts.quick else opts.paths
    sweep_paths = 40 if opts.quick else opts.sweep_paths
    horizon = 200.0 if opts.quick else opts.horizon
    grid_n = 4 if opts.quick else 11
    out = opts.out

    run(["gamma", "--out", out / "gamma", "--seed", opts.seed])

    run([
        "compare", "--out", out / "compare", "--seed", opts.seed,
        "--paths", paths, "--horizon", horizon, "--dt", 0.1,
        "--timeseries", 100,
    ])

    r_axis = "r=" + frange(0.0, 0.1, grid_n)
    for name, axis2 in (
        ("sweep_r_eta", "eta=" + frange(2.0, 20.0, grid_n)),
        ("sweep_r_lambda", "lambda=" + frange(0.01, 0.1, grid_n)),
        ("sweep_r_k", "k=" + frange(2e-4, 2e-3, grid_n)),
        ("sweep_r_b", "b=" + frange(2e-6, 2e-5, grid_n)),
    ):
        run(["sweep", "--out", out / name, "--axis", r_axis, "--axis", axis2])

    run([
        "sweep", "--out", out / "sweep_sigma", "--seed", opts.seed + 2,
        "--axis", "sigma=" + frange(0.1, 1.0, 4 if opts.quick else 10),
        "--mc", "--cash-mode", "full",
        "--paths", sweep_paths, "--horizon", horizon, "--dt", 0.1,
    ])
    print(f"artifacts under {out}/")


if __name__ == "__main__":
    main()
