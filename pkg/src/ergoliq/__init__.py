"""Ergodic liquidation toolkit.

Simulation of an exchange's inventory/cash dynamics under liquidation
inflows, closed-form optimal disposal strategies with their long-run
average reward, Monte-Carlo experiments, and estimation of the impact and
arrival parameters from market data.
"""

__version__ = "0.1.0"

from .calibration import (
    BEstimate,
    BookSide,
    BookSnapshot,
    DataError,
    FlowInterval,
    KEstimate,
    LiquidationRecord,
    estimate_b,
    estimate_k,
    estimate_lambda_eta,
    walk_book,
)
from .engine import (
    CompareRow,
    EnsembleStats,
    PathResult,
    SimConfig,
    SweepPoint,
    TimeSeries,
    compare_strategies,
    run_ensemble,
    run_path,
    sweep_gamma,
)
from .market import (
    CashMode,
    JumpEvent,
    MarketParams,
    MarketState,
    ParamError,
    Side,
    execution_price,
    sample_jumps,
    step,
)
from .strategies import (
    DiscountedCoeffs,
    DiscountedStrategy,
    ErgodicStrategy,
    FiniteHorizonCoeffs,
    FiniteHorizonStrategy,
    HalfInventoryStrategy,
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

__all__ = [
    "BEstimate", "BookSide", "BookSnapshot", "CashMode", "CompareRow",
    "DataError", "DiscountedCoeffs", "DiscountedStrategy", "EnsembleStats",
    "ErgodicStrategy", "FiniteHorizonCoeffs", "FiniteHorizonStrategy",
    "FlowInterval", "HalfInventoryStrategy", "JumpEvent", "KEstimate",
    "LiquidationRecord", "MarketParams", "MarketState", "ParamError",
    "PathResult", "PreconditionError", "Side", "SimConfig", "SweepPoint",
    "TimeSeries", "compare_strategies", "discounted_coeffs",
    "discounted_rate", "ergodic_gamma", "ergodic_rate", "estimate_b",
    "estimate_k", "estimate_lambda_eta", "execution_price", "finite_h0",
    "finite_h2", "finite_horizon_coeffs", "finite_rate",
    "half_inventory_action", "run_ensemble", "run_path", "sample_jumps",
    "step", "strategy_from_spec", "sweep_gamma", "walk_book",
]
