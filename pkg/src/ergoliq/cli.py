"""Command-line front end: gamma, simulate, compare, sweep, calibrate.

Every command resolves its configuration from defaults < config file <
flags, runs the corresponding engine or calibration routine, and writes CSV
artifacts plus a manifest.json that records the resolved parameters, seed
and tool version, so any artifact can be regenerated from its manifest
alone. All floats are serialized with 9 significant digits, columns in a
fixed order and "\n" line endings, making repeated runs byte-identical.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numeric
precondition failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .calibration import (
    BookSide,
    BookSnapshot,
    DataError,
    FlowInterval,
    LiquidationRecord,
    estimate_b,
    estimate_k,
    estimate_lambda_eta,
)
from .engine import (
    AXIS_FIELDS,
    CompareRow,
    SimConfig,
    compare_strategies,
    run_ensemble,
    sweep_gamma,
)
from .market import CashMode, MarketParams, ParamError
from .strategies import PreconditionError, ergodic_gamma, strategy_from_spec


class ConfigError(ValueError):
    """Bad flag, config file or option combination."""


_MARKET_KEYS = (
    "lambda_plus", "lambda_minus", "eta_mean", "eta_std", "sigma",
    "b", "k", "phi", "r", "s0", "q0", "x0",
)
_SIM_KEYS = ("dt", "horizon", "paths", "seed", "cash_mode", "strategy")

_SIM_DEFAULTS = {
    "dt": 0.1,
    "horizon": 2000.0,
    "paths": 500,
    "seed": 0,
    "cash_mode": "simplified",
    "strategy": "ergodic",
}


def _fmt(x) -> str:
    return format(float(x), ".9g")


def _fmt_opt(x) -> str:
    return "" if x is None else _fmt(x)


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[str]]):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def load_config(path: Path) -> dict:
    """Flat ``key = value`` file: one assignment per line, full-line ``#``
    comments, quoted strings, ints, floats and true/false."""
    out = {}
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        if value[0] in "\"'" and value[-1] == value[0] and len(value) >= 2:
            out[key] = value[1:-1]
        elif value in ("true", "false"):
            out[key] = value == "true"
        else:
            try:
                out[key] = int(value)
            except ValueError:
                try:
                    out[key] = float(value)
                except ValueError:
                    raise ConfigError(f"{path}:{lineno}: cannot parse value {value!r}")
    return out


def _resolve(args) -> tuple[MarketParams, dict]:
    """Merge defaults, config file and flags into params + sim settings."""
    market = {}
    sim = dict(_SIM_DEFAULTS)
    if args.config is not None:
        for key, value in load_config(args.config).items():
            if key in _MARKET_KEYS:
                market[key] = float(value)
            elif key == "lambda":  # symmetric shorthand
                market["lambda_plus"] = market["lambda_minus"] = float(value)
            elif key in _SIM_KEYS:
                sim[key] = value
            else:
                raise ConfigError(f"unknown config key {key!r}")
    for flag, key in (("seed", "seed"), ("paths", "paths"), ("horizon", "horizon"),
                      ("dt", "dt"), ("cash_mode", "cash_mode"), ("strategy", "strategy")):
        value = getattr(args, flag, None)
        if value is not None:
            sim[key] = value
    try:
        params = MarketParams(**market)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    return params, sim


def _sim_config(params: MarketParams, sim: dict, stride: int | None) -> SimConfig:
    try:
        mode = CashMode(str(sim["cash_mode"]))
    except ValueError:
        raise ConfigError(f"cash_mode must be full|simplified (got {sim['cash_mode']!r})")
    strategy = sim["strategy"]
    if isinstance(strategy, str):
        try:
            strategy = strategy_from_spec(strategy, params)
        except PreconditionError:
            raise
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    return SimConfig(
        dt=float(sim["dt"]),
        horizon=float(sim["horizon"]),
        n_paths=int(sim["paths"]),
        seed=int(sim["seed"]),
        cash_mode=mode,
        strategy=strategy,
        timeseries_stride=stride,
    )


def _write_manifest(out_dir: Path, command: str, params: MarketParams,
                    sim: dict | None, outputs: Sequence[str], **extra):
    manifest = {
        "command": command,
        "version": __version__,
        "params": asdict(params),
        "outputs": list(outputs),
    }
    if sim is not None:
        manifest["sim"] = {k: (v if isinstance(v, (int, float, str)) else str(v)) for k, v in sim.items()}
        manifest["seed"] = int(sim["seed"])
    manifest.update(extra)
    with open(out_dir / "manifest.json", "w", newline="") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _paths_rows(rows: Sequence[CompareRow]) -> list[list[str]]:
    out = []
    for row in rows:
        for p in row.paths:
            out.append([
                str(p.path_id), row.strategy, row.cash_mode.value,
                _fmt(p.avg_pnl), _fmt(p.terminal.Q), _fmt(p.terminal.X),
                _fmt(p.penalty_integral),
            ])
    return out


_PATHS_HEADER = ["path_id", "strategy", "cash_mode", "avg_pnl", "terminal_q", "terminal_x", "penalty_integral"]
_TS_HEADER = ["path_id", "t", "S", "Q", "X", "running_avg_pnl"]


def _write_timeseries(path: Path, paths) -> None:
    rows = []
    for p in paths:
        ts = p.timeseries
        if ts is None:
            continue
        for j in range(ts.t.size):
            rows.append([
                str(p.path_id), _fmt(ts.t[j]), _fmt(ts.S[j]), _fmt(ts.Q[j]),
                _fmt(ts.X[j]), _fmt(ts.running_avg_pnl[j]),
            ])
    _write_csv(path, _TS_HEADER, rows)


def cmd_gamma(args) -> int:
    params, sim = _resolve(args)
    gamma = ergodic_gamma(params)
    out_dir = args.out
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(
        out_dir / "gamma.csv",
        ["r", "lambda", "eta", "k", "b", "phi", "s0", "gamma"],
        [[_fmt(params.r), _fmt(params.lambda_plus), _fmt(params.eta_mean),
          _fmt(params.k), _fmt(params.b), _fmt(params.phi), _fmt(params.s0), _fmt(gamma)]],
    )
    _write_manifest(out_dir, "gamma", params, None, ["gamma.csv"], seed=int(sim["seed"]))
    print(f"gamma = {_fmt(gamma)}")
    return 0


def cmd_simulate(args) -> int:
    params, sim = _resolve(args)
    config = _sim_config(params, sim, args.timeseries)
    stats, paths = run_ensemble(config, params)
    out_dir = args.out
    out_dir.mkdir(parents=True, exist_ok=True)
    row = CompareRow(strategy=config.strategy.name, cash_mode=config.cash_mode,
                     stats=stats, paths=tuple(paths))
    _write_csv(out_dir / "paths.csv", _PATHS_HEADER, _paths_rows([row]))
    outputs = ["paths.csv"]
    if args.timeseries:
        _write_timeseries(out_dir / "timeseries.csv", paths)
        outputs.append("timeseries.csv")
    _write_manifest(out_dir, "simulate", params, sim, outputs)
    print(f"mean avg_pnl = {_fmt(stats.mean)} +- {_fmt(stats.std_err)} (n={stats.n})")
    return 0


def cmd_compare(args) -> int:
    params, sim = _resolve(args)
    config = _sim_config(params, sim, args.timeseries)
    if args.cash_mode is not None:
        modes = [CashMode(args.cash_mode)]
    else:
        modes = [CashMode.FULL, CashMode.SIMPLIFIED]
    try:
        strategies = [strategy_from_spec(s.strip(), params) for s in args.strategies.split(",") if s.strip()]
    except PreconditionError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if not strategies:
        raise ConfigError("no strategies given")
    rows = compare_strategies(config, params, strategies, modes)
    out_dir = args.out
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(
        out_dir / "compare.csv",
        ["strategy", "cash_mode", "mean", "std_err", "ci_low", "ci_high", "var95", "es95"],
        [[row.strategy, row.cash_mode.value, _fmt(row.stats.mean), _fmt(row.stats.std_err),
          _fmt(row.stats.ci95_low), _fmt(row.stats.ci95_high), _fmt(row.stats.var95),
          _fmt(row.stats.es95)] for row in rows],
    )
    _write_csv(out_dir / "paths.csv", _PATHS_HEADER, _paths_rows(rows))
    outputs = ["compare.csv", "paths.csv"]
    if args.timeseries:
        for row in rows:
            name = f"timeseries_{row.strategy}_{row.cash_mode.value}.csv"
            _write_timeseries(out_dir / name, row.paths)
            outputs.append(name)
    _write_manifest(out_dir, "compare", params, sim, outputs,
                    strategies=args.strategies, modes=[m.value for m in modes])
    for row in rows:
        print(f"{row.strategy:10s} {row.cash_mode.value:10s} "
              f"mean={_fmt(row.stats.mean)} se={_fmt(row.stats.std_err)}")
    return 0


def _parse_axis(text: str) -> tuple[str, list[float]]:
    name, sep, values = text.partition("=")
    name = name.strip()
    if not sep or name not in AXIS_FIELDS:
        raise ConfigError(
            f"bad axis {text!r} (expected name=v1,v2,... with name in {sorted(AXIS_FIELDS)})"
        )
    try:
        parsed = [float(v) for v in values.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad axis values in {text!r}: {exc}") from exc
    if not parsed:
        raise ConfigError(f"axis {name!r} has no values")
    return name, parsed


def cmd_sweep(args) -> int:
    params, sim = _resolve(args)
    if not args.axis:
        raise ConfigError("sweep needs at least one --axis")
    if len(args.axis) > 2:
        raise ConfigError("sweep supports at most two axes")
    axes = [_parse_axis(a) for a in args.axis]
    mc_config = _sim_config(params, sim, None) if args.mc else None
    points = sweep_gamma(axes, params, mc_config=mc_config)

    two = len(axes) == 2
    header = ["axis1", "value1"] + (["axis2", "value2"] if two else []) + \
        ["mode", "gamma_or_mean", "std_err", "var95", "es95"]
    rows = []
    for pt in points:
        cells = []
        for name, value in pt.axes:
            cells.extend([name, _fmt(value)])
        cells.extend([pt.mode, _fmt(pt.value), _fmt_opt(pt.std_err),
                      _fmt_opt(pt.var95), _fmt_opt(pt.es95)])
        rows.append(cells)
    out_dir = args.out
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(out_dir / "sweep.csv", header, rows)
    _write_manifest(out_dir, "sweep", params, sim if args.mc else None, ["sweep.csv"],
                    axes=[{"name": n, "values": v} for n, v in axes],
                    mc=bool(args.mc), seed=int(sim["seed"]))
    print(f"sweep: {len(points)} points -> {out_dir / 'sweep.csv'}")
    return 0


def _read_rows(path: Path, header: Sequence[str]) -> list[tuple[int, list[str]]]:
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        rows = []
        for lineno, row in enumerate(reader, 1):
            if lineno == 1:
                if [c.strip() for c in row] != list(header):
                    raise DataError(
                        f"{path}:1: expected header {','.join(header)!r}, got {','.join(row)!r}"
                    )
                continue
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
            rows.append((lineno, row))
        return rows


def _float_field(path: Path, lineno: int, name: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise DataError(f"{path}:{lineno}: bad {name} value {raw!r}")


def read_liquidations(path: Path) -> list[LiquidationRecord]:
    records = []
    for lineno, row in _read_rows(path, ["time", "size"]):
        try:
            records.append(LiquidationRecord(
                time=_float_field(path, lineno, "time", row[0]),
                size=_float_field(path, lineno, "size", row[1]),
            ))
        except DataError:
            raise
    return records


def read_book(path: Path) -> list[BookSnapshot]:
    groups: dict[tuple[float, str], list[tuple[float, float, float]]] = {}
    for lineno, row in _read_rows(path, ["snapshot_time", "side", "price", "volume", "mid"]):
        t = _float_field(path, lineno, "snapshot_time", row[0])
        side = row[1].strip().lower()
        if side not in ("bid", "ask"):
            raise DataError(f"{path}:{lineno}: side must be bid|ask (got {row[1]!r})")
        price = _float_field(path, lineno, "price", row[2])
        volume = _float_field(path, lineno, "volume", row[3])
        mid = _float_field(path, lineno, "mid", row[4])
        groups.setdefault((t, side), []).append((price, volume, mid))
    snapshots = []
    for (t, side), levels in groups.items():
        mids = {m for _, _, m in levels}
        if len(mids) != 1:
            raise DataError(f"{path}: snapshot {t}/{side} has inconsistent mid values")
        snapshots.append(BookSnapshot(
            time=t,
            side=BookSide(side),
            levels=tuple((p, v) for p, v, _ in levels),
            mid=levels[0][2],
        ))
    return snapshots


def read_flow(path: Path) -> list[FlowInterval]:
    return [
        FlowInterval(
            net_flow=_float_field(path, lineno, "net_flow", row[0]),
            delta_mid=_float_field(path, lineno, "delta_mid", row[1]),
        )
        for lineno, row in _read_rows(path, ["net_flow", "delta_mid"])
    ]


def _parse_trade_sizes(text: str) -> list[float]:
    if ":" in text:
        lo, _, hi = text.partition(":")
        try:
            return [float(v) for v in range(int(lo), int(hi) + 1)]
        except ValueError as exc:
            raise ConfigError(f"bad --trade-sizes {text!r}: {exc}") from exc
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --trade-sizes {text!r}: {exc}") from exc


def cmd_calibrate(args) -> int:
    if args.liquidations is None and args.book is None and args.flow is None:
        raise ConfigError("calibrate needs at least one of --liquidations/--book/--flow")
    params, sim = _resolve(args)
    rows = []
    inputs = {}
    if args.liquidations is not None:
        records = read_liquidations(args.liquidations)
        lam, eta = estimate_lambda_eta(records)
        rows.append(["lambda", _fmt(lam), str(len(records)), "0", "", ""])
        rows.append(["eta", _fmt(eta), str(len(records)), "0", "", ""])
        inputs["liquidations"] = args.liquidations.name
    if args.book is not None:
        snapshots = read_book(args.book)
        est = estimate_k(snapshots, _parse_trade_sizes(args.trade_sizes),
                         include_intercept=not args.k_through_origin)
        mean_r2 = sum(f.r2 for f in est.fits) / len(est.fits)
        mean_resid = sum(f.resid_std for f in est.fits) / len(est.fits)
        rows.append(["k", _fmt(est.k), str(len(est.fits)),
                     str(est.n_snapshots_skipped), _fmt(mean_r2), _fmt(mean_resid)])
        inputs["book"] = args.book.name
    if args.flow is not None:
        est_b = estimate_b(read_flow(args.flow))
        rows.append(["b", _fmt(est_b.b), str(est_b.n), "0", _fmt(est_b.r2), _fmt(est_b.resid_std)])
        inputs["flow"] = args.flow.name
    out_dir = args.out
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(out_dir / "params_estimated.csv",
               ["parameter", "estimate", "n_samples", "n_skipped", "r2", "resid_std"], rows)
    _write_manifest(out_dir, "calibrate", params, None, ["params_estimated.csv"],
                    inputs=inputs, seed=int(sim["seed"]))
    for row in rows:
        print(f"{row[0]} = {row[1]} (n={row[2]})")
    return 0


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="flat key = value config file")
    p.add_argument("--seed", type=int, help="master seed (64-bit)")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    p.add_argument("--paths", type=int, help="number of Monte-Carlo paths")
    p.add_argument("--horizon", type=float, help="simulation horizon, seconds")
    p.add_argument("--dt", type=float, help="Euler step, seconds")
    p.add_argument("--cash-mode", dest="cash_mode", choices=["full", "simplified"])
    p.add_argument("--strategy",
                   help="ergodic | half | finite:<T>:<alpha> | discounted:<beta>")
    p.add_argument("--timeseries", type=int, metavar="STRIDE",
                   help="emit trajectories sampled every STRIDE steps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ergoliq",
        description="Ergodic liquidation experiments: closed forms, Monte-Carlo, calibration.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gamma", help="closed-form long-run average reward")
    _add_common(p)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("simulate", help="Monte-Carlo ensemble for one strategy")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="strategies x cash modes under shared seeds")
    _add_common(p)
    p.add_argument("--strategies", default="ergodic,half",
                   help="comma-separated strategy specs (default ergodic,half)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="gamma over a 1- or 2-axis parameter grid")
    _add_common(p)
    p.add_argument("--axis", action="append", metavar="NAME=V1,V2,...",
                   help=f"sweep axis, up to two; names: {sorted(AXIS_FIELDS)}")
    p.add_argument("--mc", action="store_true",
                   help="Monte-Carlo per grid point instead of the closed form")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("calibrate", help="estimate (lambda, eta, k, b) from data files")
    _add_common(p)
    p.add_argument("--liquidations", type=Path, help="CSV time,size")
    p.add_argument("--book", type=Path, help="CSV snapshot_time,side,price,volume,mid")
    p.add_argument("--flow", type=Path, help="CSV net_flow,delta_mid")
    p.add_argument("--trade-sizes", dest="trade_sizes", default="1:100",
                   help="lo:hi range or comma list of book-walk trade sizes")
    p.add_argument("--k-through-origin", dest="k_through_origin", action="store_true",
                   help="drop the intercept in the k regression")
    p.set_defaults(func=cmd_calibrate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ParamError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


def entry():  # console-script hook
    raise SystemExit(main())
