"""Closed-form value coefficients and feedback disposal rates.

Three tractable control problems share the same quadratic structure: a
finite-horizon problem with terminal penalty alpha*q^2, a discounted
infinite-horizon problem with rate beta, and the long-run-average (ergodic)
problem. Each admits a value function h0 + h2*q^2 and a feedback rate that
is linear in inventory. The ergodic rate sqrt(phi/k)*q is the beta -> 0 and
T -> infinity limit of the other two. A per-step "halve the position"
heuristic is included as the mis-calibrated benchmark.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from .market import MarketParams


class PreconditionError(ValueError):
    """A closed-form coefficient inequality is violated."""


# ---------------------------------------------------------------------------
# ergodic problem


def ergodic_rate(q, params: MarketParams):
    """Optimal long-run disposal rate sqrt(phi/k) * q; always shrinks |Q|."""
    return math.sqrt(params.phi / params.k) * q


def ergodic_gamma(params: MarketParams) -> float:
    """Optimal average reward per unit time.

    2*r*lambda*eta*s0 - lambda*eta^2*b - 2*lambda*eta^2*sqrt(k*phi); needs
    symmetric intensities. Reads only (lambda, eta, r, s0, b, k, phi) -- in
    particular it is independent of sigma and of the initial state.
    """
    params.require_symmetric("ergodic_gamma")
    lam, eta = params.lambda_plus, params.eta_mean
    return (
        2.0 * params.r * lam * eta * params.s0
        - lam * eta**2 * params.b
        - 2.0 * lam * eta**2 * math.sqrt(params.k * params.phi)
    )


# ---------------------------------------------------------------------------
# finite horizon


@dataclass(frozen=True)
class FiniteHorizonCoeffs:
    """Derived constants for the horizon-T problem with terminal weight alpha.

    rate_root = sqrt(phi/k); xi = (alpha - b/2 + sqrt(k*phi)) / (alpha - b/2
    - sqrt(k*phi)) > 1.
    """

    T: float
    alpha: float
    xi: float
    rate_root: float


def finite_horizon_coeffs(T: float, alpha: float, params: MarketParams) -> FiniteHorizonCoeffs:
    if not T > 0:
        raise PreconditionError(f"T must be > 0 (got {T})")
    root = math.sqrt(params.k * params.phi)
    threshold = params.b / 2.0 + root
    if not alpha > threshold:
        raise PreconditionError(
            f"alpha must exceed b/2 + sqrt(k*phi) = {threshold} (got {alpha})"
        )
    xi = (alpha - params.b / 2.0 + root) / (alpha - params.b / 2.0 - root)
    return FiniteHorizonCoeffs(T=T, alpha=alpha, xi=xi, rate_root=math.sqrt(params.phi / params.k))


def _check_t(t, T):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0) or np.any(t > T):
        raise PreconditionError(f"t outside [0, {T}]")
    return t


def finite_h2(t, c: FiniteHorizonCoeffs, params: MarketParams):
    """Quadratic value coefficient h2(t); h2(T) = -alpha.

    Evaluated through exp(-2*rate_root*(T-t)) so long horizons never
    overflow (2*rate_root*T can exceed 700).
    """
    t = _check_t(t, c.T)
    decay = np.exp(-2.0 * c.rate_root * (c.T - t))
    h2 = params.k * c.rate_root * (decay + c.xi) / (decay - c.xi) - params.b / 2.0
    return h2 if h2.ndim else float(h2)


def finite_h0(t, c: FiniteHorizonCoeffs, params: MarketParams):
    """Constant value coefficient h0(t); h0(T) = 0. Needs symmetric intensities."""
    params.require_symmetric("finite_h0")
    t = _check_t(t, c.T)
    lam, eta = params.lambda_plus, params.eta_mean
    tau = c.T - t
    log_term = (
        math.log(c.xi - 1.0)
        - c.rate_root * tau
        - np.log(c.xi - np.exp(-2.0 * c.rate_root * tau))
    )
    h0 = (
        2.0 * lam * eta**2 * params.k * log_term
        + (lam * eta**2 * params.b - 2.0 * params.r * lam * eta * params.s0) * (t - c.T)
    )
    return h0 if h0.ndim else float(h0)


def finite_rate(t, q, c: FiniteHorizonCoeffs, params: MarketParams):
    """Feedback rate rate_root * (xi*e^{2*rate_root*(T-t)} + 1) /
    (xi*e^{2*rate_root*(T-t)} - 1) * q; tends to the ergodic rate far from T
    and to (alpha - b/2)/k * q at t = T."""
    t = _check_t(t, c.T)
    decay = np.exp(-2.0 * c.rate_root * (c.T - t))
    coeff = c.rate_root * (c.xi + decay) / (c.xi - decay)
    return coeff * q


# ---------------------------------------------------------------------------
# discounted infinite horizon


@dataclass(frozen=True)
class DiscountedCoeffs:
    """Value coefficients for discount rate beta: v(q) = h0 + h2*q^2, h2 < 0."""

    beta: float
    h2: float
    h0: float


def discounted_coeffs(beta: float, params: MarketParams) -> DiscountedCoeffs:
    params.require_symmetric("discounted_coeffs")
    if not beta > 0:
        raise PreconditionError(f"beta must be > 0 (got {beta})")
    disc = (params.k * beta - params.b) ** 2 + 4.0 * params.k * params.phi - params.b**2
    if disc < 0:
        raise PreconditionError(
            f"(k*beta - b)^2 + 4*k*phi - b^2 must be >= 0 (got {disc})"
        )
    if not 2.0 * params.phi > beta * params.b:
        raise PreconditionError(
            f"2*phi > beta*b required for an admissible rate "
            f"(2*phi={2.0 * params.phi}, beta*b={beta * params.b})"
        )
    h2 = (params.k * beta - params.b) / 2.0 - math.sqrt(disc) / 2.0
    if not h2 < 0:
        raise PreconditionError(f"h2 must be negative (got {h2})")
    lam, eta = params.lambda_plus, params.eta_mean
    h0 = 2.0 * lam * eta * (eta * h2 + params.r * params.s0) / beta
    return DiscountedCoeffs(beta=beta, h2=h2, h0=h0)


def discounted_rate(q, c: DiscountedCoeffs, params: MarketParams):
    """Feedback rate [sqrt((k*beta - b)^2 + 4*k*phi - b^2) - k*beta]/(2k) * q."""
    disc = (params.k * c.beta - params.b) ** 2 + 4.0 * params.k * params.phi - params.b**2
    coeff = (math.sqrt(disc) - params.k * c.beta) / (2.0 * params.k)
    return coeff * q


# ---------------------------------------------------------------------------
# heuristic benchmark


def half_inventory_action(q, dt: float):
    """Rate that halves the position over one step of length dt (absent jumps)."""
    if not dt > 0:
        raise PreconditionError(f"dt must be > 0 (got {dt})")
    return q / (2.0 * dt)


# ---------------------------------------------------------------------------
# strategy objects consumed by the simulation engine


@dataclass(frozen=True)
class ErgodicStrategy:
    name: ClassVar[str] = "ergodic"

    def rate(self, t, q, params: MarketParams, dt: float):
        return ergodic_rate(q, params)


@dataclass(frozen=True)
class FiniteHorizonStrategy:
    coeffs: FiniteHorizonCoeffs
    name: ClassVar[str] = "finite"

    def rate(self, t, q, params: MarketParams, dt: float):
        return finite_rate(t, q, self.coeffs, params)


@dataclass(frozen=True)
class DiscountedStrategy:
    coeffs: DiscountedCoeffs
    name: ClassVar[str] = "discounted"

    def rate(self, t, q, params: MarketParams, dt: float):
        return discounted_rate(q, self.coeffs, params)


@dataclass(frozen=True)
class HalfInventoryStrategy:
    name: ClassVar[str] = "half"

    def rate(self, t, q, params: MarketParams, dt: float):
        return half_inventory_action(q, dt)


Strategy = ErgodicStrategy | FiniteHorizonStrategy | DiscountedStrategy | HalfInventoryStrategy


def strategy_from_spec(spec: str, params: MarketParams) -> Strategy:
    """Build a strategy from its textual form: ``ergodic``, ``half``,
    ``finite:<T>:<alpha>`` or ``discounted:<beta>``."""
    parts = spec.split(":")
    kind = parts[0]
    try:
        if kind == "ergodic" and len(parts) == 1:
            return ErgodicStrategy()
        if kind == "half" and len(parts) == 1:
            return HalfInventoryStrategy()
        if kind == "finite" and len(parts) == 3:
            return FiniteHorizonStrategy(
                finite_horizon_coeffs(float(parts[1]), float(parts[2]), params)
            )
        if kind == "discounted" and len(parts) == 2:
            return DiscountedStrategy(discounted_coeffs(float(parts[1]), params))
    except PreconditionError:
        raise
    except ValueError as exc:  # malformed numeric field
        raise ValueError(f"bad strategy spec {spec!r}: {exc}") from exc
    raise ValueError(
        f"bad strategy spec {spec!r} (expected ergodic | half | "
        f"finite:<T>:<alpha> | discounted:<beta>)"
    )
