#!/usr/bin/env python3
"""Volatility robustness of the Monte-Carlo long-run reward.

From a sigma-axis Monte-Carlo sweep: the mean with its 95% confidence band,
the VaR and ES curves, and the closed form evaluated at the manifest's
parameters as a dotted reference line (it does not depend on sigma).
"""

from __future__ import annotations

import argparse
import warnings
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from figcsv import manifest_gamma, read_manifest, read_rows

FIGSIZE = (7.0, 4.5)


def build(in_dir: Path, out_dir: Path) -> Path:
    rows = read_rows(in_dir / "sweep.csv",
                     ["axis1", "value1", "mode", "gamma_or_mean", "std_err", "var95", "es95"])
    if not rows:
        raise ValueError(f"{in_dir / 'sweep.csv'} has no data rows")
    out_dir.mkdir(parents=True, exist_ok=True)
    axis = rows[0]["axis1"]
    order = np.argsort([float(r["value1"]) for r in rows])
    rows = [rows[i] for i in order]
    x = np.array([float(r["value1"]) for r in rows])
    mean = np.array([float(r["gamma_or_mean"]) for r in rows])

    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(x, mean, marker="o", color="tab:blue", label="mean")
    if all(r["std_err"] for r in rows):
        se = np.array([float(r["std_err"]) for r in rows])
        ax.fill_between(x, mean - 1.96 * se, mean + 1.96 * se,
                        color="tab:blue", alpha=0.2, label="95% CI")
    else:
        warnings.warn("std_err column empty; confidence band omitted")
    if all(r["var95"] for r in rows):
        var = np.array([float(r["var95"]) for r in rows])
        es = np.array([float(r["es95"]) for r in rows])
        ax.plot(x, var, marker="s", color="tab:orange", label="VaR 95%")
        ax.plot(x, es, marker="^", color="tab:red", label="ES 95%")
    gamma = manifest_gamma(read_manifest(in_dir))
    ax.axhline(gamma, linestyle=":", color="black", label="closed form")
    ax.set_xlabel(axis)
    ax.set_ylabel("long-run average reward")
    ax.legend()
    fig.tight_layout()
    out = out_dir / "sigma_robustness.png"
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--in", dest="in_dir", type=Path, required=True)
    ap.add_argument("--out", dest="out_dir", type=Path, required=True)
    opts = ap.parse_args(argv)
    print(build(opts.in_dir, opts.out_dir))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
