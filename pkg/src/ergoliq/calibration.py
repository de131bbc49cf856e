"""Parameter estimation from exchange data.

Three independent estimators:
  * (lambda, eta) from a liquidation event log: lambda = N / tau_N with
    tau_N the last event time (not the observation window), eta the mean
    absolute size;
  * k from order-book snapshots, by walking each book over a grid of trade
    sizes and regressing the per-unit execution deviation |P_hat - mid| on
    trade size, one slope per snapshot, averaged;
  * b from net-order-flow intervals, through-origin regression of the
    midprice change on the signed flow.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class DataError(ValueError):
    """Input data cannot support the requested estimate."""


@dataclass(frozen=True)
class LiquidationRecord:
    """One liquidation: event time and absolute distressed-position size."""

    time: float
    size: float

    def __post_init__(self):
        if not self.size > 0:
            raise DataError(f"liquidation size must be > 0 (got {self.size})")
        if self.time < 0:
            raise DataError(f"liquidation time must be >= 0 (got {self.time})")


class BookSide(enum.Enum):
    BID = "bid"
    ASK = "ask"


@dataclass(frozen=True)
class BookSnapshot:
    """One side of the limit order book at a point in time.

    Levels are (price, volume) best-first: strictly ascending prices on the
    ask side, strictly descending on the bid side, all volumes positive.
    """

    time: float
    side: BookSide
    levels: tuple[tuple[float, float], ...]
    mid: float

    def __post_init__(self):
        if not self.levels:
            raise DataError("book snapshot has no levels")
        prices = [p for p, _ in self.levels]
        for _, v in self.levels:
            if not v > 0:
                raise DataError(f"level volume must be > 0 (got {v})")
        diffs = np.diff(prices)
        if self.side is BookSide.ASK:
            if prices[0] < self.mid:
                raise DataError(f"best ask {prices[0]} below mid {self.mid}")
            if not (diffs > 0).all():
                raise DataError("ask prices must be strictly ascending")
        else:
            if prices[0] > self.mid:
                raise DataError(f"best bid {prices[0]} above mid {self.mid}")
            if not (diffs < 0).all():
                raise DataError("bid prices must be strictly descending")

    @property
    def depth(self) -> float:
        return sum(v for _, v in self.levels)


@dataclass(frozen=True)
class FlowInterval:
    """Net signed order flow over a subinterval and the midprice change across it."""

    net_flow: float
    delta_mid: float


def estimate_lambda_eta(records: Sequence[LiquidationRecord]) -> tuple[float, float]:
    """MLE intensity and mean size: lambda = N / tau_N, eta = mean(sizes)."""
    if not records:
        raise DataError("empty liquidation log")
    times = [rec.time for rec in records]
    if any(b < a for a, b in zip(times, times[1:])):
        raise DataError("liquidation times must be nondecreasing")
    tau_n = times[-1]
    if not tau_n > 0:
        raise DataError(f"last event time must be > 0 (got {tau_n})")
    lam = len(records) / tau_n
    eta = sum(rec.size for rec in records) / len(records)
    return lam, eta


def walk_book(snapshot: BookSnapshot, trade_size: float) -> float:
    """Volume-weighted price per unit for a trade of `trade_size`, consuming
    levels best-first and partially consuming the last one."""
    if not trade_size > 0:
        raise DataError(f"trade size must be > 0 (got {trade_size})")
    remaining = trade_size
    cost = 0.0
    for price, volume in snapshot.levels:
        take = min(remaining, volume)
        cost += price * take
        remaining -= take
        if remaining <= 0:
            return cost / trade_size
    raise DataError(
        f"insufficient depth: book holds {snapshot.depth} < trade size {trade_size}"
    )


def _ols_line(x: np.ndarray, y: np.ndarray, intercept: bool) -> tuple[float, float]:
    """Least-squares slope and intercept (intercept fixed at 0 when disabled)."""
    if intercept:
        xbar, ybar = x.mean(), y.mean()
        dx = x - xbar
        slope = float((dx * (y - ybar)).sum() / (dx * dx).sum())
        return slope, float(ybar - slope * xbar)
    return float((x * y).sum() / (x * x).sum()), 0.0


@dataclass(frozen=True)
class SnapshotFit:
    """Per-snapshot regression of execution deviation on trade size."""

    time: float
    side: BookSide
    slope: float
    intercept: float
    r2: float
    resid_std: float
    n_sizes_used: int
    n_sizes_skipped: int


@dataclass(frozen=True)
class KEstimate:
    """Temporary-impact slope: mean of per-snapshot regression slopes."""

    k: float
    fits: tuple[SnapshotFit, ...]
    n_snapshots_skipped: int


def estimate_k(
    snapshots: Sequence[BookSnapshot],
    trade_sizes: Sequence[float],
    *,
    include_intercept: bool = True,
) -> KEstimate:
    """Fit |walk_book(Q) - mid| against Q per snapshot; k is the mean slope.

    Trade sizes deeper than a snapshot are skipped (counted per snapshot);
    snapshots left with fewer than two usable sizes are skipped entirely.
    The intercept soaks up the half-spread so the slope stays a pure
    impact-per-unit-rate reading; disable it to force the fit through the
    origin.
    """
    sizes = np.asarray(sorted(trade_sizes), dtype=float)
    if sizes.size < 2:
        raise DataError(f"need at least 2 trade sizes (got {sizes.size})")
    if not (sizes > 0).all():
        raise DataError("trade sizes must be > 0")
    fits = []
    skipped_snapshots = 0
    for snap in snapshots:
        usable = sizes[sizes <= snap.depth]
        n_skipped = sizes.size - usable.size
        if usable.size < 2:
            skipped_snapshots += 1
            continue
        deviation = np.array([abs(walk_book(snap, q) - snap.mid) for q in usable])
        slope, intercept = _ols_line(usable, deviation, include_intercept)
        resid = deviation - (slope * usable + intercept)
        sst = float(((deviation - deviation.mean()) ** 2).sum())
        ssr = float((resid**2).sum())
        r2 = 1.0 - ssr / sst if sst > 0 else 1.0
        dof = usable.size - (2 if include_intercept else 1)
        resid_std = math.sqrt(ssr / dof) if dof > 0 else 0.0
        fits.append(
            SnapshotFit(
                time=snap.time,
                side=snap.side,
                slope=slope,
                intercept=intercept,
                r2=r2,
                resid_std=resid_std,
                n_sizes_used=int(usable.size),
                n_sizes_skipped=int(n_skipped),
            )
        )
    if not fits:
        raise DataError("no snapshot had two usable trade sizes")
    k = sum(f.slope for f in fits) / len(fits)
    return KEstimate(k=k, fits=tuple(fits), n_snapshots_skipped=skipped_snapshots)


@dataclass(frozen=True)
class BEstimate:
    """Permanent-impact slope from the through-origin flow regression."""

    b: float
    std_err: float
    r2: float
    resid_std: float
    n: int


def estimate_b(intervals: Sequence[FlowInterval]) -> BEstimate:
    """Through-origin least squares b = sum(mu * dS) / sum(mu^2); the flow
    model has no constant term. r2 is the uncentered version."""
    if not intervals:
        raise DataError("no flow intervals")
    mu = np.array([iv.net_flow for iv in intervals])
    ds = np.array([iv.delta_mid for iv in intervals])
    denom = float((mu * mu).sum())
    if denom == 0.0:
        raise DataError("all net flows are zero")
    b = float((mu * ds).sum() / denom)
    resid = ds - b * mu
    ssr = float((resid**2).sum())
    sst = float((ds**2).sum())
    n = mu.size
    resid_std = math.sqrt(ssr / (n - 1)) if n > 1 else 0.0
    std_err = resid_std / math.sqrt(denom) if n > 1 else float("nan")
    r2 = 1.0 - ssr / sst if sst > 0 else 1.0
    return BEstimate(b=b, std_err=std_err, r2=r2, resid_std=resid_std, n=n)
