"""Game pricing of European calls and weekly delta-hedging cost simulation."""

from .black_scholes import BsResult, bs_price
from .errors import (
    DegenerateMaturity,
    GameHedgeError,
    HedgeError,
    NoConvergence,
    QuadratureError,
    SingularJacobian,
    SolverError,
    TrivialOption,
)
from .game_pricing import GameGreeks, GameSolution, SolverConfig, game_delta, game_gamma, game_greeks, solve_price
from .hedge_sim import HedgeReport, HedgeScenario, Method, Rounding, compare_methods, run_ledger
from .model import MarketParams
from .quadrature import QuadratureConfig, integrate_against_density, normal_cdf

__all__ = [
    "BsResult",
    "DegenerateMaturity",
    "GameGreeks",
    "GameHedgeError",
    "GameSolution",
    "HedgeError",
    "HedgeReport",
    "HedgeScenario",
    "MarketParams",
    "Method",
    "NoConvergence",
    "QuadratureConfig",
    "QuadratureError",
    "Rounding",
    "SingularJacobian",
    "SolverConfig",
    "SolverError",
    "TrivialOption",
    "bs_price",
    "compare_methods",
    "game_delta",
    "game_gamma",
    "game_greeks",
    "integrate_against_density",
    "normal_cdf",
    "run_ledger",
    "solve_price",
]
