#!/usr/bin/env python3
"""PnL figures from compare/paths/timeseries artifacts.

Left figure (pnl_running.png): ensemble-mean running time-averaged PnL per
strategy and cash mode, one labeled series per timeseries file. Right
figure (pnl_hist.png): overlaid avg_pnl histograms for the full and
simplified cash dynamics with dashed vertical lines at the means taken
verbatim from compare.csv.
"""

from __future__ import annotations

import argparse
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from figcsv import read_rows

FIGSIZE = (7.0, 4.5)
HIST_STRATEGY = "ergodic"


def _timeseries_files(in_dir: Path) -> list[tuple[str, Path]]:
    named = sorted(in_dir.glob("timeseries_*.csv"))
    if named:
        return [(p.stem.removeprefix("timeseries_"), p) for p in named]
    single = in_dir / "timeseries.csv"
    if single.exists():
        return [("simulated", single)]
    raise FileNotFoundError(
        f"missing input {in_dir}/timeseries_*.csv (run compare with --timeseries)"
    )


def plot_running_pnl(in_dir: Path, out_dir: Path) -> Path:
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for label, path in _timeseries_files(in_dir):
        rows = read_rows(path, ["path_id", "t", "running_avg_pnl"])
        by_t: dict[float, list[float]] = defaultdict(list)
        for row in rows:
            by_t[float(row["t"])].append(float(row["running_avg_pnl"]))
        ts = sorted(by_t)
        ax.plot(ts, [sum(by_t[t]) / len(by_t[t]) for t in ts], label=label.replace("_", " "))
    ax.set_xlabel("time (s)")
    ax.set_ylabel("running time-averaged PnL")
    ax.legend()
    fig.tight_layout()
    out = out_dir / "pnl_running.png"
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def plot_pnl_hist(in_dir: Path, out_dir: Path) -> tuple[Path, dict[tuple[str, str], str]]:
    paths_rows = read_rows(in_dir / "paths.csv", ["strategy", "cash_mode", "avg_pnl"])
    if not paths_rows:
        raise ValueError(f"{in_dir / 'paths.csv'} has no data rows")
    compare_rows = read_rows(in_dir / "compare.csv", ["strategy", "cash_mode", "mean"])
    strategies = {r["strategy"] for r in paths_rows}
    strategy = HIST_STRATEGY if HIST_STRATEGY in strategies else sorted(strategies)[0]

    fig, ax = plt.subplots(figsize=FIGSIZE)
    annotations: dict[tuple[str, str], str] = {}
    colors = {"full": "tab:orange", "simplified": "tab:blue"}
    for mode in ("full", "simplified"):
        sample = [float(r["avg_pnl"]) for r in paths_rows
                  if r["strategy"] == strategy and r["cash_mode"] == mode]
        if not sample:
            continue
        color = colors[mode]
        ax.hist(sample, bins=30, alpha=0.55, color=color, label=f"{strategy} {mode}")
        mean_str = next(
            r["mean"] for r in compare_rows
            if r["strategy"] == strategy and r["cash_mode"] == mode
        )
        ax.axvline(float(mean_str), linestyle="--", color=color)
        annotations[(strategy, mode)] = mean_str
    if not annotations:
        raise ValueError(f"no rows for any cash mode in {in_dir / 'paths.csv'}")
    ax.annotate(
        "\n".join(f"mean {m}: {s}" for (_, m), s in sorted(annotations.items())),
        xy=(0.02, 0.98), xycoords="axes fraction", va="top", fontsize=8,
    )
    ax.set_xlabel("time-averaged PnL")
    ax.set_ylabel("paths")
    ax.legend()
    fig.tight_layout()
    out = out_dir / "pnl_hist.png"
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out, annotations


def build(in_dir: Path, out_dir: Path) -> dict[tuple[str, str], str]:
    out_dir.mkdir(parents=True, exist_ok=True)
    plot_running_pnl(in_dir, out_dir)
    _, annotations = plot_pnl_hist(in_dir, out_dir)
    return annotations


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--in", dest="in_dir", type=Path, required=True)
    ap.add_argument("--out", dest="out_dir", type=Path, required=True)
    opts = ap.parse_args(argv)
    annotations = build(opts.in_dir, opts.out_dir)
    for (strategy, mode), mean in sorted(annotations.items()):
        print(f"{strategy}/{mode}: mean {mean}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
