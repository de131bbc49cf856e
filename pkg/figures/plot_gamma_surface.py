#!/usr/bin/env python3
"""Long-run reward over a swept parameter grid.

Two-axis sweeps render as a heatmap (gamma_surface_<axis1>_<axis2>.png);
single-axis sweeps fall back to a line plot (gamma_line_<axis1>.png).
"""

from __future__ import annotations

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from figcsv import read_rows

FIGSIZE = (6.0, 4.5)


def build(in_dir: Path, out_dir: Path) -> Path:
    path = in_dir / "sweep.csv"
    rows = read_rows(path, ["axis1", "value1", "mode", "gamma_or_mean"])
    if not rows:
        raise ValueError(f"{path} has no data rows")
    out_dir.mkdir(parents=True, exist_ok=True)
    axis1 = rows[0]["axis1"]
    two_axis = "axis2" in rows[0]

    fig, ax = plt.subplots(figsize=FIGSIZE)
    if not two_axis:
        xs = [float(r["value1"]) for r in rows]
        ys = [float(r["gamma_or_mean"]) for r in rows]
        order = np.argsort(xs)
        ax.plot(np.asarray(xs)[order], np.asarray(ys)[order], marker="o")
        ax.set_xlabel(axis1)
        ax.set_ylabel("long-run average reward")
        out = out_dir / f"gamma_line_{axis1}.png"
    else:
        axis2 = rows[0]["axis2"]
        v1 = sorted({float(r["value1"]) for r in rows})
        v2 = sorted({float(r["value2"]) for r in rows})
        grid = np.full((len(v2), len(v1)), np.nan)
        i1 = {v: i for i, v in enumerate(v1)}
        i2 = {v: i for i, v in enumerate(v2)}
        for r in rows:
            grid[i2[float(r["value2"])], i1[float(r["value1"])]] = float(r["gamma_or_mean"])
        mesh = ax.pcolormesh(v1, v2, grid, shading="nearest", cmap="viridis")
        fig.colorbar(mesh, ax=ax, label="long-run average reward")
        ax.set_xlabel(axis1)
        ax.set_ylabel(axis2)
        out = out_dir / f"gamma_surface_{axis1}_{axis2}.png"
    fig.tight_layout()
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
