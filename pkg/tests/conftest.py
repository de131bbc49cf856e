import pytest

from ergoliq import MarketParams


@pytest.fixture
def params():
    """Baseline experiment parameters (r = 0.05)."""
    return MarketParams()


@pytest.fixture
def quiet_params():
    """No jumps, no diffusion: the step map is fully deterministic."""
    return MarketParams(lambda_plus=0.0, lambda_minus=0.0, sigma=0.0)
