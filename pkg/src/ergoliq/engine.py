"""Monte-Carlo experiment harness.

Simulates controlled (S, Q, X) paths on an Euler grid, accumulates the
running inventory penalty and the reduced running reward, and reduces
ensembles to time-averaged-PnL statistics (mean, CI, VaR/ES). Paths are
vectorised across a block dimension for speed, but every path owns its own
random stream (master seed spawned per path), so results are independent of
block size and of any parallel scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .market import CashMode, MarketParams, MarketState, ParamError, sample_jumps
from .strategies import ErgodicStrategy, Strategy, ergodic_gamma

_DEFAULT_BLOCK = 256

# sweepable parameter name -> MarketParams field(s)
AXIS_FIELDS = {
    "r": ("r",),
    "eta": ("eta_mean",),
    "lambda": ("lambda_plus", "lambda_minus"),
    "k": ("k",),
    "b": ("b",),
    "sigma": ("sigma",),
}


@dataclass(frozen=True)
class SimConfig:
    """Grid, ensemble size, seeding and strategy for one experiment."""

    dt: float = 0.1
    horizon: float = 2000.0
    n_paths: int = 500
    seed: int = 0
    cash_mode: CashMode = CashMode.SIMPLIFIED
    strategy: Strategy = field(default_factory=ErgodicStrategy)
    timeseries_stride: int | None = None

    def __post_init__(self):
        if not self.dt > 0:
            raise ParamError(f"dt must be > 0 (got {self.dt})")
        if not self.horizon >= self.dt:
            raise ParamError(f"horizon must be >= dt (got {self.horizon})")
        if self.n_paths < 1:
            raise ParamError(f"n_paths must be >= 1 (got {self.n_paths})")
        if self.timeseries_stride is not None and self.timeseries_stride < 1:
            raise ParamError(f"timeseries stride must be >= 1 (got {self.timeseries_stride})")

    @property
    def n_steps(self) -> int:
        return int(round(self.horizon / self.dt))


@dataclass(frozen=True)
class TimeSeries:
    """Trajectory sampled every `stride` steps."""

    t: np.ndarray
    S: np.ndarray
    Q: np.ndarray
    X: np.ndarray
    running_avg_pnl: np.ndarray


@dataclass(frozen=True)
class PathResult:
    """Per-trajectory summary.

    avg_pnl = (X_T + S_T*Q_T - x0 - s0*q0 - phi*penalty_integral) / T, the
    realized time-averaged reward; penalty_integral is the left-Riemann
    integral of Q^2; reward_integral is the integral of the reduced running
    reward -k*nu^2 - b*nu*Q - phi*Q^2 + r*s0*eta*(lambda+ + lambda-).
    """

    path_id: int
    terminal: MarketState
    penalty_integral: float
    reward_integral: float
    avg_pnl: float
    timeseries: TimeSeries | None = None


@dataclass(frozen=True)
class EnsembleStats:
    """Moments and tail statistics of avg_pnl across paths.

    var95 is the 5th-percentile sample by nearest rank (index ceil(n/20) in
    the sorted sample); es95 is the mean of all samples <= var95.
    """

    n: int
    mean: float
    std_err: float
    ci95_low: float
    ci95_high: float
    var95: float
    es95: float

    @classmethod
    def from_samples(cls, samples: Sequence[float]) -> "EnsembleStats":
        a = np.asarray(samples, dtype=float)
        n = a.size
        if n < 1:
            raise ParamError("need at least one sample")
        mean = float(a.mean())
        std_err = float(a.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        rank = -(-n // 20)  # ceil(n/20), exact in integers
        var95 = float(np.sort(a)[rank - 1])
        es95 = float(a[a <= var95].mean())
        return cls(
            n=n,
            mean=mean,
            std_err=std_err,
            ci95_low=mean - 1.96 * std_err,
            ci95_high=mean + 1.96 * std_err,
            var95=var95,
            es95=es95,
        )


def _path_seeds(master_seed: int | np.random.SeedSequence, n: int) -> list[np.random.SeedSequence]:
    """Path i draws from child i of the master SeedSequence (spawn_key=(i,))."""
    if isinstance(master_seed, np.random.SeedSequence):
        return master_seed.spawn(n)
    return np.random.SeedSequence(master_seed).spawn(n)


def _simulate_block(
    params: MarketParams,
    config: SimConfig,
    seeds: Sequence[np.random.SeedSequence],
    first_id: int,
) -> list[PathResult]:
    """Run len(seeds) paths lockstep over the time grid.

    Per path the stream order is: jump events (see sample_jumps), then the
    n_steps Brownian increments in one draw. Expression order inside the
    step mirrors market.step exactly, so a path simulated here matches a
    scalar step-by-step replay bit for bit.
    """
    n_paths = len(seeds)
    n_steps = config.n_steps
    dt = config.dt
    horizon = n_steps * dt
    strategy = config.strategy
    simplified = config.cash_mode is CashMode.SIMPLIFIED
    k, b, phi, r, s0, sigma = params.k, params.b, params.phi, params.r, params.s0, params.sigma

    jump_cash = np.zeros((n_paths, n_steps))
    jump_net = np.zeros((n_paths, n_steps))
    dw = np.empty((n_paths, n_steps))
    for i, seq in enumerate(seeds):
        rng = np.random.default_rng(seq)
        events = sample_jumps(params, horizon, rng)
        if events:
            times = np.array([ev.time for ev in events])
            sizes = np.array([ev.size for ev in events])
            signed = np.array([ev.signed_size for ev in events])
            # event at time tau belongs to the step covering (n*dt, (n+1)*dt]
            idx = np.ceil(times / dt).astype(np.int64) - 1
            idx = np.clip(idx, 0, n_steps - 1)
            np.add.at(jump_cash[i], idx, sizes)
            np.add.at(jump_net[i], idx, signed)
        dw[i] = rng.normal(0.0, math.sqrt(dt), n_steps)

    stride = config.timeseries_stride
    n_samples = n_steps // stride if stride else 0
    ts_t = np.empty(n_samples)
    ts = {name: np.empty((n_paths, n_samples)) for name in ("S", "Q", "X", "pnl")} if stride else {}

    S = np.full(n_paths, s0)
    Q = np.full(n_paths, params.q0)
    X = np.full(n_paths, params.x0)
    penalty = np.zeros(n_paths)
    impact_cost = np.zeros(n_paths)  # integral of k*nu^2 + b*nu*Q
    x0, q0 = params.x0, params.q0
    sample_col = 0
    for n in range(n_steps):
        t = n * dt
        nu = strategy.rate(t, Q, params, dt)
        penalty += Q * Q * dt
        impact_cost += (k * nu * nu + b * nu * Q) * dt
        S_new = S - b * nu * dt + sigma * dw[:, n]
        mark = s0 if simplified else S_new
        X = X + (S - k * nu) * nu * dt
        X = X + r * jump_cash[:, n] * mark
        Q = (Q - nu * dt) + jump_net[:, n]
        S = S_new
        if stride and (n + 1) % stride == 0:
            t_now = (n + 1) * dt
            ts_t[sample_col] = t_now
            ts["S"][:, sample_col] = S
            ts["Q"][:, sample_col] = Q
            ts["X"][:, sample_col] = X
            ts["pnl"][:, sample_col] = (X + S * Q - x0 - s0 * q0 - phi * penalty) / t_now
            sample_col += 1

    avg_pnl = (X + S * Q - x0 - s0 * q0 - phi * penalty) / horizon
    reward_const = r * s0 * params.eta_mean * (params.lambda_plus + params.lambda_minus)
    reward = reward_const * horizon - impact_cost - phi * penalty

    results = []
    for i in range(n_paths):
        series = None
        if stride:
            series = TimeSeries(
                t=ts_t.copy(),
                S=ts["S"][i].copy(),
                Q=ts["Q"][i].copy(),
                X=ts["X"][i].copy(),
                running_avg_pnl=ts["pnl"][i].copy(),
            )
        results.append(
            PathResult(
                path_id=first_id + i,
                terminal=MarketState(t=horizon, S=float(S[i]), Q=float(Q[i]), X=float(X[i])),
                penalty_integral=float(penalty[i]),
                reward_integral=float(reward[i]),
                avg_pnl=float(avg_pnl[i]),
                timeseries=series,
            )
        )
    return results


def run_path(
    config: SimConfig,
    params: MarketParams,
    path_seed: int | np.random.SeedSequence,
) -> PathResult:
    """Simulate one trajectory; deterministic in (params, config, path_seed)."""
    seq = path_seed if isinstance(path_seed, np.random.SeedSequence) else np.random.SeedSequence(path_seed)
    return _simulate_block(params, config, [seq], first_id=0)[0]


def run_ensemble(
    config: SimConfig,
    params: MarketParams,
    *,
    seed_seq: np.random.SeedSequence | None = None,
    block_size: int = _DEFAULT_BLOCK,
) -> tuple[EnsembleStats, list[PathResult]]:
    """Simulate config.n_paths independent paths and reduce their avg_pnl.

    Results are invariant to block_size: path i always uses spawn child i of
    the master seed, and the reduction is in path order.
    """
    seeds = _path_seeds(seed_seq if seed_seq is not None else config.seed, config.n_paths)
    results: list[PathResult] = []
    for start in range(0, config.n_paths, block_size):
        chunk = seeds[start:start + block_size]
        results.extend(_simulate_block(params, config, chunk, first_id=start))
    stats = EnsembleStats.from_samples([p.avg_pnl for p in results])
    return stats, results


@dataclass(frozen=True)
class CompareRow:
    strategy: str
    cash_mode: CashMode
    stats: EnsembleStats
    paths: tuple[PathResult, ...]


def compare_strategies(
    config: SimConfig,
    params: MarketParams,
    strategies: Sequence[Strategy],
    cash_modes: Sequence[CashMode] = (CashMode.FULL, CashMode.SIMPLIFIED),
    *,
    block_size: int = _DEFAULT_BLOCK,
) -> list[CompareRow]:
    """One ensemble per (strategy, cash_mode), all sharing the same master
    seed, i.e. common random numbers: identical jump streams and Brownian
    increments across rows."""
    rows = []
    for strategy in strategies:
        for mode in cash_modes:
            cfg = replace(config, strategy=strategy, cash_mode=mode)
            stats, paths = run_ensemble(cfg, params, block_size=block_size)
            rows.append(CompareRow(strategy=strategy.name, cash_mode=mode, stats=stats, paths=tuple(paths)))
    return rows


@dataclass(frozen=True)
class SweepPoint:
    """One grid point of a parameter sweep; std_err/var95/es95 are None for
    closed-form points."""

    axes: tuple[tuple[str, float], ...]
    mode: str
    value: float
    std_err: float | None = None
    var95: float | None = None
    es95: float | None = None


def _axis_params(params: MarketParams, assignment: Iterable[tuple[str, float]]) -> MarketParams:
    updates = {}
    for name, value in assignment:
        try:
            fields = AXIS_FIELDS[name]
        except KeyError:
            raise ParamError(f"unknown sweep axis {name!r} (choose from {sorted(AXIS_FIELDS)})")
        for f in fields:
            updates[f] = value
    return replace(params, **updates)


def sweep_gamma(
    axes: Sequence[tuple[str, Sequence[float]]],
    params: MarketParams,
    *,
    mc_config: SimConfig | None = None,
    block_size: int = _DEFAULT_BLOCK,
) -> list[SweepPoint]:
    """Evaluate the long-run average reward over a 1- or 2-axis grid.

    Without mc_config each point is the closed-form ergodic constant. With
    mc_config each point runs a Monte-Carlo ensemble under mc_config's
    strategy and cash mode; grid point j uses spawn child j of the master
    seed, so points are statistically independent of each other.
    """
    if not 1 <= len(axes) <= 2:
        raise ParamError(f"sweep needs 1 or 2 axes (got {len(axes)})")
    grid: list[tuple[tuple[str, float], ...]] = []
    if len(axes) == 1:
        name, values = axes[0]
        grid = [((name, float(v)),) for v in values]
    else:
        (n1, v1), (n2, v2) = axes
        grid = [((n1, float(a)), (n2, float(b))) for a in v1 for b in v2]

    points = []
    if mc_config is None:
        for assignment in grid:
            p = _axis_params(params, assignment)
            points.append(SweepPoint(axes=assignment, mode="closed_form", value=ergodic_gamma(p)))
    else:
        point_seeds = np.random.SeedSequence(mc_config.seed).spawn(len(grid))
        for assignment, seq in zip(grid, point_seeds):
            p = _axis_params(params, assignment)
            stats, _ = run_ensemble(mc_config, p, seed_seq=seq, block_size=block_size)
            points.append(
                SweepPoint(
                    axes=assignment,
                    mode="monte_carlo",
                    value=stats.mean,
                    std_err=stats.std_err,
                    var95=stats.var95,
                    es95=stats.es95,
                )
            )
    return points
