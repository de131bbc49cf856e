import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ergoliq import (
    MarketParams,
    PreconditionError,
    discounted_coeffs,
    discounted_rate,
    ergodic_gamma,
    ergodic_rate,
    finite_h0,
    finite_h2,
    finite_horizon_coeffs,
    finite_rate,
    half_inventory_action,
    strategy_from_spec,
)

mp.mp.dps = 40

# frozen against the arbitrary-precision evaluation below (alpha=1, baseline
# params, T - t = 10)
H2_TAU10 = -0.00032236229136619119739
H0_TAU10 = 4.8942330275063810241
RATE_COEF_TAU10 = 0.31736229136619119739
GAMMA_BASELINE = 0.49678772233983162067


def _mp_finite(tau, alpha, p):
    """Independent arbitrary-precision evaluation of h2, h0 and the rate
    coefficient at horizon distance tau."""
    lam, eta = mp.mpf(p.lambda_plus), mp.mpf(p.eta_mean)
    b, k, phi = mp.mpf(p.b), mp.mpf(p.k), mp.mpf(p.phi)
    r, s0 = mp.mpf(p.r), mp.mpf(p.s0)
    varphi = mp.sqrt(phi / k)
    root = mp.sqrt(k * phi)
    xi = (alpha - b / 2 + root) / (alpha - b / 2 - root)
    grow = mp.e ** (2 * varphi * tau)
    h2 = k * varphi * (1 + xi * grow) / (1 - xi * grow) - b / 2
    h0 = 2 * lam * eta**2 * k * mp.log(
        (xi - 1) / (xi * mp.e ** (varphi * tau) - mp.e ** (-varphi * tau))
    ) - (lam * eta**2 * b - 2 * r * lam * eta * s0) * tau
    coef = varphi * (xi * grow + 1) / (xi * grow - 1)
    return h2, h0, coef


# ---------------------------------------------------------------------------
# ergodic


def test_ergodic_rate_examples(params):
    assert ergodic_rate(0.0, params) == 0.0
    assert ergodic_rate(10.0, params) == pytest.approx(3.1622776601683795, rel=1e-12)
    unit = MarketParams(k=1e-3, phi=1e-3)
    assert ergodic_rate(7.0, unit) == pytest.approx(7.0, rel=1e-12)


@given(q=st.floats(-1e4, 1e4), k=st.floats(1e-6, 1.0), phi=st.floats(1e-6, 1.0))
def test_ergodic_rate_reduces_inventory(q, k, phi):
    p = MarketParams(k=k, phi=phi)
    nu = ergodic_rate(q, p)
    assert math.copysign(1, nu) == math.copysign(1, q) or nu == q == 0


def test_ergodic_gamma_baseline(params):
    assert ergodic_gamma(params) == pytest.approx(GAMMA_BASELINE, rel=1e-14)


def test_ergodic_gamma_zero_eta_limit():
    # eta > 0 is required, but gamma scales to 0 with eta
    small = MarketParams(eta_mean=1e-12)
    assert abs(ergodic_gamma(small)) < 1e-11


def test_ergodic_gamma_pure_impact_cost():
    p = MarketParams(r=0.0, b=0.0)
    assert ergodic_gamma(p) == pytest.approx(-3.1622776601683795e-3, rel=1e-12)


def test_ergodic_gamma_rejects_asymmetric():
    p = MarketParams(lambda_plus=0.05, lambda_minus=0.02)
    with pytest.raises(Exception, match="symmetric"):
        ergodic_gamma(p)


def test_ergodic_gamma_ignores_sigma_and_initial_state(params):
    alt = MarketParams(sigma=3.0, q0=25.0, x0=-100.0)
    assert ergodic_gamma(alt) == ergodic_gamma(params)


# ---------------------------------------------------------------------------
# finite horizon


def test_finite_coeffs_require_large_alpha(params):
    with pytest.raises(PreconditionError, match="alpha"):
        finite_horizon_coeffs(10.0, 1e-5, params)
    c = finite_horizon_coeffs(10.0, 1.0, params)
    assert c.xi > 1.0
    assert c.rate_root == pytest.approx(math.sqrt(0.1), rel=1e-15)


def test_finite_terminal_conditions(params):
    c = finite_horizon_coeffs(50.0, 1.0, params)
    assert finite_h2(c.T, c, params) == pytest.approx(-1.0, rel=1e-12)
    assert finite_h0(c.T, c, params) == 0.0
    # terminal rate coefficient collapses to (alpha - b/2)/k
    got = finite_rate(c.T, 1.0, c, params)
    assert got == pytest.approx((1.0 - params.b / 2) / params.k, rel=1e-10)


def test_finite_values_match_arbitrary_precision_oracle(params):
    c = finite_horizon_coeffs(25.0, 1.0, params)
    t = 15.0  # tau = 10
    h2_mp, h0_mp, coef_mp = _mp_finite(mp.mpf(10), mp.mpf(1), params)
    assert finite_h2(t, c, params) == pytest.approx(float(h2_mp), rel=1e-12)
    assert finite_h0(t, c, params) == pytest.approx(float(h0_mp), rel=1e-12)
    assert finite_rate(t, 1.0, c, params) == pytest.approx(float(coef_mp), rel=1e-12)
    # frozen regression pins
    assert finite_h2(t, c, params) == pytest.approx(H2_TAU10, rel=1e-12)
    assert finite_h0(t, c, params) == pytest.approx(H0_TAU10, rel=1e-12)
    assert finite_rate(t, 1.0, c, params) == pytest.approx(RATE_COEF_TAU10, rel=1e-12)


def test_finite_h2_long_horizon_limit(params):
    # far from the terminal time h2 approaches the ergodic root -sqrt(k*phi) - b/2
    c = finite_horizon_coeffs(1e6, 1.0, params)
    expect = -math.sqrt(params.k * params.phi) - params.b / 2
    assert finite_h2(0.0, c, params) == pytest.approx(expect, rel=1e-12)


def test_finite_rate_long_horizon_limit(params):
    for T in (100.0, 1000.0, 1e5):
        c = finite_horizon_coeffs(T, 1.0, params)
        coef = finite_rate(0.0, 1.0, c, params)
        if c.rate_root * T >= 20:
            assert abs(coef - c.rate_root) < 1e-9


def test_finite_no_overflow_for_huge_horizons(params):
    c = finite_horizon_coeffs(1e9, 1.0, params)  # 2*rate_root*T ~ 6e8
    assert np.isfinite(finite_h2(0.0, c, params))
    assert np.isfinite(finite_h0(0.0, c, params))
    assert np.isfinite(finite_rate(0.0, 5.0, c, params))


def test_finite_h0_zero_lambda(params):
    p = MarketParams(lambda_plus=0.0, lambda_minus=0.0)
    c = finite_horizon_coeffs(20.0, 1.0, p)
    for t in (0.0, 10.0, 20.0):
        assert finite_h0(t, c, p) == pytest.approx(0.0, abs=1e-15)


def test_finite_value_over_horizon_approaches_gamma(params):
    # v(0, q; T)/T -> gamma: within 1e-3 by T = 1e4 with alpha = 1
    T = 1e4
    c = finite_horizon_coeffs(T, 1.0, params)
    gamma = ergodic_gamma(params)
    for q in (0.0, 10.0):
        v = finite_h0(0.0, c, params) + finite_h2(0.0, c, params) * q**2
        assert abs(v / T - gamma) < 1e-3


def test_finite_ops_reject_t_outside_horizon(params):
    c = finite_horizon_coeffs(10.0, 1.0, params)
    for bad in (-0.1, 10.1):
        with pytest.raises(PreconditionError):
            finite_h2(bad, c, params)
        with pytest.raises(PreconditionError):
            finite_h0(bad, c, params)
        with pytest.raises(PreconditionError):
            finite_rate(bad, 1.0, c, params)


def test_finite_h0_rejects_asymmetric():
    p = MarketParams(lambda_plus=0.05, lambda_minus=0.01)
    c = finite_horizon_coeffs(10.0, 1.0, p)
    with pytest.raises(Exception, match="symmetric"):
        finite_h0(5.0, c, p)


@given(
    alpha=st.floats(0.01, 10),
    tau=st.floats(0, 50),
    k=st.floats(1e-4, 1e-2),
    phi=st.floats(1e-5, 1e-3),
)
@settings(max_examples=80)
def test_finite_rate_coefficient_between_terminal_and_ergodic(alpha, tau, k, phi):
    p = MarketParams(k=k, phi=phi, b=0.0)
    if alpha <= math.sqrt(k * phi):
        return
    c = finite_horizon_coeffs(max(tau, 1e-6) + 1.0, alpha, p)
    t = c.T - tau
    coef = finite_rate(t, 1.0, c, p)
    lo, hi = sorted((c.rate_root, alpha / k))
    assert lo * (1 - 1e-9) - 1e-12 <= coef <= hi * (1 + 1e-9) + 1e-12


# ---------------------------------------------------------------------------
# discounted


def test_discounted_coeffs_beta_to_zero_limit(params):
    c = discounted_coeffs(1e-9, params)
    expect = -params.b / 2 - math.sqrt(params.k * params.phi)
    assert c.h2 == pytest.approx(expect, rel=1e-6)
    assert c.h2 < 0


def test_discounted_h0_identity(params):
    # beta*(h0 + h2*q^2) at q=0 equals 2*lambda*eta^2*h2 + 2*r*lambda*eta*s0
    for beta in (1e-2, 1e-3, 1e-4):
        c = discounted_coeffs(beta, params)
        lam, eta = params.lambda_plus, params.eta_mean
        expect = 2 * lam * eta**2 * c.h2 + 2 * params.r * lam * eta * params.s0
        assert beta * c.h0 == pytest.approx(expect, rel=1e-12)


def test_discounted_value_approaches_gamma(params):
    gamma = ergodic_gamma(params)
    for beta in (1e-2, 1e-3, 1e-4):
        c = discounted_coeffs(beta, params)
        for q in (0.0, 10.0, -10.0):
            assert abs(beta * (c.h0 + c.h2 * q**2) - gamma) < 5 * beta


def test_discounted_rate_limits(params):
    c = discounted_coeffs(1e-9, params)
    assert abs(discounted_rate(1.0, c, params) - ergodic_rate(1.0, params)) < 1e-9
    assert discounted_rate(0.0, c, params) == 0.0
    # b = 0: coefficient is exactly sqrt(phi/k) - beta-correction
    p0 = MarketParams(b=0.0)
    c0 = discounted_coeffs(1e-12, p0)
    assert discounted_rate(1.0, c0, p0) == pytest.approx(math.sqrt(p0.phi / p0.k), rel=1e-9)


def test_discounted_rate_positive_coefficient(params):
    for beta in (1e-4, 1e-2, 1.0):
        c = discounted_coeffs(beta, params)
        assert discounted_rate(1.0, c, params) > 0


def test_discounted_preconditions_named(params):
    with pytest.raises(PreconditionError, match="beta"):
        discounted_coeffs(0.0, params)
    # real roots exist but 2*phi > beta*b fails
    p = MarketParams(k=1.0, b=0.4, phi=0.1)
    with pytest.raises(PreconditionError, match="2\\*phi"):
        discounted_coeffs(1.0, p)
    # discriminant itself negative
    p2 = MarketParams(phi=1e-4, b=0.9)
    with pytest.raises(PreconditionError, match="4\\*k\\*phi"):
        discounted_coeffs(1.0, p2)


def test_discounted_rejects_asymmetric():
    p = MarketParams(lambda_plus=0.05, lambda_minus=0.01)
    with pytest.raises(Exception, match="symmetric"):
        discounted_coeffs(1e-3, p)


# ---------------------------------------------------------------------------
# half-inventory heuristic


def test_half_inventory_examples():
    assert half_inventory_action(8.0, 0.1) == pytest.approx(40.0)
    assert half_inventory_action(0.0, 0.1) == 0.0
    assert half_inventory_action(-8.0, 0.1) == pytest.approx(-40.0)


@given(q=st.floats(-100, 100), dt=st.floats(1e-3, 10))
def test_half_inventory_halves_per_step(q, dt):
    nu = half_inventory_action(q, dt)
    assert q - nu * dt == pytest.approx(q / 2, rel=1e-12, abs=1e-300)


# ---------------------------------------------------------------------------
# strategy objects


def test_all_strategy_rates_share_inventory_sign(params):
    strategies = [
        strategy_from_spec("ergodic", params),
        strategy_from_spec("half", params),
        strategy_from_spec("finite:1000:1", params),
        strategy_from_spec("discounted:1e-3", params),
    ]
    for q in (-12.0, -0.5, 0.0, 0.5, 12.0):
        for s in strategies:
            nu = s.rate(0.0, q, params, 0.1)
            if q == 0:
                assert nu == 0
            else:
                assert math.copysign(1, nu) == math.copysign(1, q)


def test_strategy_spec_parsing(params):
    assert strategy_from_spec("ergodic", params).name == "ergodic"
    assert strategy_from_spec("half", params).name == "half"
    fin = strategy_from_spec("finite:100:2.0", params)
    assert fin.coeffs.T == 100.0 and fin.coeffs.alpha == 2.0
    disc = strategy_from_spec("discounted:1e-3", params)
    assert disc.coeffs.beta == 1e-3
    for bad in ("", "nope", "finite:10", "finite:a:b", "discounted:", "ergodic:1"):
        with pytest.raises(ValueError):
            strategy_from_spec(bad, params)
    with pytest.raises(PreconditionError):
        strategy_from_spec("finite:10:1e-9", params)  # alpha too small
