"""Jump-diffusion market model for an exchange that absorbs liquidated positions.

The controlled state is (t, S, Q, X): time, midprice, signed inventory and
cash. Trading at rate nu (contracts/second, positive = selling) drags the
midprice permanently (slope b) and executes at a temporary concession
(slope k). Liquidation events arrive as two independent Poisson streams
(long / short distressed positions); each event moves inventory by its size
and pays a margin inflow of r * size * mark price into cash, where the mark
is either the live pre-jump midprice (full cash dynamics) or the initial
midprice (simplified dynamics).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class ParamError(ValueError):
    """A model parameter violates its admissible range."""


class CashMode(enum.Enum):
    """Mark price used for the margin inflow on a liquidation event."""

    FULL = "full"            # r * size * S_{t-}, the pre-jump midprice
    SIMPLIFIED = "simplified"  # r * size * s0, the initial midprice


class Side(enum.Enum):
    LONG = "long"
    SHORT = "short"


@dataclass(frozen=True)
class MarketParams:
    """Model constants. Defaults are the baseline experiment configuration.

    lambda_plus / lambda_minus: liquidation intensities (events/second).
    eta_mean, eta_std: mean and std of the (positive) distressed-position
        size distribution; sizes are Gaussian redrawn while non-positive.
    sigma: midprice volatility (currency / sqrt(second)).
    b: permanent impact slope, k: temporary impact slope.
    phi: running inventory penalty weight.
    r: inverse leverage (margin fraction collected per unit notional).
    s0, q0, x0: initial midprice, inventory, cash.
    """

    lambda_plus: float = 0.05
    lambda_minus: float = 0.05
    eta_mean: float = 10.0
    eta_std: float = 0.5
    sigma: float = 0.5
    b: float = 1e-5
    k: float = 1e-3
    phi: float = 1e-4
    r: float = 0.05
    s0: float = 10.0
    q0: float = 0.0
    x0: float = 0.0

    def __post_init__(self):
        for name, low_open in (("k", True), ("phi", True), ("eta_mean", True), ("s0", True)):
            v = getattr(self, name)
            if not v > 0:
                raise ParamError(f"{name} must be > 0 (got {v})")
        for name in ("sigma", "b", "lambda_plus", "lambda_minus", "eta_std"):
            v = getattr(self, name)
            if not v >= 0:
                raise ParamError(f"{name} must be >= 0 (got {v})")
        if not 0.0 <= self.r <= 1.0:
            raise ParamError(f"r must be in [0, 1] (got {self.r})")

    @property
    def symmetric(self) -> bool:
        return self.lambda_plus == self.lambda_minus

    def require_symmetric(self, what: str):
        if not self.symmetric:
            raise ParamError(
                f"{what} requires symmetric intensities "
                f"(lambda_plus={self.lambda_plus} != lambda_minus={self.lambda_minus})"
            )


@dataclass(frozen=True)
class MarketState:
    """Snapshot of the controlled system at time t."""

    t: float
    S: float
    Q: float
    X: float


@dataclass(frozen=True)
class JumpEvent:
    """One liquidation: a distressed position of `size` > 0 transferred at `time`."""

    time: float
    side: Side
    size: float

    def __post_init__(self):
        if not self.size > 0:
            raise ParamError(f"jump size must be > 0 (got {self.size})")

    @property
    def signed_size(self) -> float:
        return self.size if self.side is Side.LONG else -self.size


# Exponential gaps are drawn in fixed batches; the batch size is part of the
# stream contract (changing it would change which numbers a seed produces).
_GAP_BATCH = 64


def _arrival_times(rng: np.random.Generator, lam: float, horizon: float) -> np.ndarray:
    if lam == 0.0:
        return np.empty(0)
    chunks = []
    t = 0.0
    while True:
        cum = t + np.cumsum(rng.exponential(1.0 / lam, _GAP_BATCH))
        if cum[-1] > horizon:
            chunks.append(cum[cum <= horizon])
            break
        chunks.append(cum)
        t = cum[-1]
    return np.concatenate(chunks)


def _positive_sizes(rng: np.random.Generator, mean: float, std: float, n: int) -> np.ndarray:
    sizes = rng.normal(mean, std, n)
    while True:
        bad = sizes <= 0
        if not bad.any():
            return sizes
        sizes[bad] = rng.normal(mean, std, int(bad.sum()))


def sample_jumps(params: MarketParams, horizon: float, rng: np.random.Generator) -> list[JumpEvent]:
    """Draw the liquidation events on (0, horizon] for both sides.

    Interarrival times are exact exponentials, independent of any stepping
    grid. Sizes are N(eta_mean, eta_std) redrawn while non-positive. The
    stream consumption order is fixed (long times, long sizes, short times,
    short sizes) so a given generator state always yields the same events.
    Returns one list merged in time order.
    """
    if not horizon > 0:
        raise ParamError(f"horizon must be > 0 (got {horizon})")
    events: list[JumpEvent] = []
    for side, lam in ((Side.LONG, params.lambda_plus), (Side.SHORT, params.lambda_minus)):
        times = _arrival_times(rng, lam, horizon)
        sizes = _positive_sizes(rng, params.eta_mean, params.eta_std, times.size)
        events.extend(
            JumpEvent(time=float(t), side=side, size=float(z)) for t, z in zip(times, sizes)
        )
    events.sort(key=lambda e: e.time)
    return events


def execution_price(s: float, nu: float, k: float) -> float:
    """Price per unit received when trading at rate nu: the midprice minus
    the temporary impact concession k*nu (selling below mid, buying above)."""
    return s - k * nu


def step(
    state: MarketState,
    nu: float,
    dt: float,
    dw: float,
    jumps: Sequence[JumpEvent],
    params: MarketParams,
    mode: CashMode,
) -> MarketState:
    """One explicit Euler step of length dt under trading rate nu.

    `dw` is the Brownian increment over the step (variance dt); `jumps` are
    the events with timestamps inside (t, t + dt]. Update order: midprice
    drift + diffusion first, then jump inflows (the post-diffusion midprice
    stands in for the pre-jump left limit), then the inventory and cash
    control terms. Trading cash flows are priced at the step's left-endpoint
    midprice.
    """
    if not dt > 0:
        raise ParamError(f"dt must be > 0 (got {dt})")
    tol = 1e-9 * max(1.0, abs(state.t) + dt)
    for ev in jumps:
        if not (state.t - tol < ev.time <= state.t + dt + tol):
            raise ParamError(
                f"jump at t={ev.time} outside step ({state.t}, {state.t + dt}]"
            )

    total = 0.0
    net = 0.0
    for ev in jumps:
        total += ev.size
        net += ev.signed_size

    s_new = state.S - params.b * nu * dt + params.sigma * dw
    mark = params.s0 if mode is CashMode.SIMPLIFIED else s_new
    x_new = state.X + (state.S - params.k * nu) * nu * dt
    x_new = x_new + params.r * total * mark
    q_new = (state.Q - nu * dt) + net
    return MarketState(t=state.t + dt, S=s_new, Q=q_new, X=x_new)
