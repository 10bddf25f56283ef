"""Weekly delta-hedging cost simulation.

Bookkeeping is in thousands of dollars.  Each week the delta is rounded to three
decimals, the traded share value is rounded to $100, and interest for the coming
week (also rounded to $100) is charged on the cumulative cost.  At expiry the
strike proceeds are credited when the option finishes in the money.

The ledger runs in exact decimal arithmetic, so ties such as 4,600 shares at
$49.75 are real ties and are settled by the configured rounding rule rather than
by binary representation noise.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, ROUND_HALF_UP, Decimal
from typing import Callable, Optional, Sequence

from .black_scholes import bs_price
from .errors import HedgeError, SolverError, TrivialOption
from .game_pricing import DEFAULT_SOLVER, SolverConfig, game_delta, solve_price
from .model import WEEKS_PER_YEAR, MarketParams
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig


class Method(str, enum.Enum):
    GAME = "game"
    BS = "bs"


class Rounding(str, enum.Enum):
    HALF_EVEN = "half_even"
    HALF_AWAY = "half_away"


def round_to_int(x, mode: Rounding = Rounding.HALF_EVEN) -> Decimal:
    """Round to the nearest integer, resolving exact ties per ``mode``.

    Floats are taken at their exact binary value.
    """
    rule = ROUND_HALF_EVEN if mode == Rounding.HALF_EVEN else ROUND_HALF_UP
    if not isinstance(x, Decimal):
        x = Decimal(x)
    return x.to_integral_value(rounding=rule)


def _dec(x: float) -> Decimal:
    # shortest repr, so 48.12 becomes Decimal("48.12") rather than its binary expansion
    return Decimal(repr(float(x)))


@dataclass(frozen=True)
class HedgeScenario:
    prices: tuple[float, ...]
    strike: float
    sigma: float
    rate: float
    shares: float = 100_000
    method: Method = Method.GAME
    rounding: Rounding = Rounding.HALF_EVEN

    def __post_init__(self) -> None:
        object.__setattr__(self, "prices", tuple(float(p) for p in self.prices))
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "rounding", Rounding(self.rounding))
        if len(self.prices) < 2:
            raise ValueError("a price path needs at least two observations")
        if any(not (p > 0 and math.isfinite(p)) for p in self.prices):
            raise ValueError("prices must be positive and finite")
        if not self.shares > 0:
            raise ValueError("shares must be positive")
        # validate the remaining fields through MarketParams
        MarketParams(self.prices[0], self.strike, self.sigma, self.rate, 0.0)

    @property
    def weeks(self) -> int:
        return len(self.prices) - 1

    def params_at(self, week: int) -> MarketParams:
        return MarketParams.from_weeks(self.prices[week], self.strike, self.sigma, self.rate, self.weeks - week)

    def with_method(self, method: Method) -> HedgeScenario:
        return HedgeScenario(self.prices, self.strike, self.sigma, self.rate, self.shares, method, self.rounding)

    def with_strike(self, strike: float) -> HedgeScenario:
        return HedgeScenario(self.prices, strike, self.sigma, self.rate, self.shares, self.method, self.rounding)


@dataclass(frozen=True)
class LedgerRow:
    week: int
    price: float
    option_value: float
    delta_rounded: float
    shares_held: float
    shares_traded: float
    trade_cost: float
    cumulative_cost: float
    interest_accrued: float


@dataclass
class HedgeReport:
    rows: list[LedgerRow]
    final_cost: int
    method: Method
    settlement: float = 0.0
    scenario: Optional[HedgeScenario] = field(default=None, repr=False)


Quote = tuple[float, float]


def weekly_delta(
    scenario: HedgeScenario,
    week: int,
    solver: SolverConfig = DEFAULT_SOLVER,
    quad: QuadratureConfig = DEFAULT_QUADRATURE,
) -> Quote:
    """Option value and unrounded delta at ``week`` for the scenario's method."""
    if not 0 <= week <= scenario.weeks:
        raise IndexError(f"week {week} outside 0..{scenario.weeks}")
    S, K = scenario.prices[week], scenario.strike
    if week == scenario.weeks:
        return (S - K, 1.0) if S > K else (0.0, 0.0)
    params = scenario.params_at(week)
    if scenario.method == Method.BS:
        res = bs_price(params)
        return res.price_bar, res.delta_bar
    try:
        sol = solve_price(params, solver, quad)
    except TrivialOption:
        return 0.0, 0.0
    return sol.u, game_delta(params, sol, quad)


def quote_path(
    scenario: HedgeScenario,
    solver: SolverConfig = DEFAULT_SOLVER,
    quad: QuadratureConfig = DEFAULT_QUADRATURE,
) -> list[Quote]:
    quotes = []
    for week in range(scenario.weeks + 1):
        try:
            quotes.append(weekly_delta(scenario, week, solver, quad))
        except SolverError as exc:
            raise HedgeError(week, exc) from exc
    return quotes


def ledger_from_quotes(scenario: HedgeScenario, quotes: Sequence[Quote]) -> HedgeReport:
    """Run the bookkeeping for a precomputed list of (option value, delta) per week."""
    if len(quotes) != scenario.weeks + 1:
        raise ValueError(f"expected {scenario.weeks + 1} quotes, got {len(quotes)}")
    rnd = scenario.rounding
    shares, r = _dec(scenario.shares), _dec(scenario.rate)
    weeks_per_year = Decimal(WEEKS_PER_YEAR)
    held = cost = interest = delta = Decimal(0)
    rows = []
    for week, (price, (u, raw_delta)) in enumerate(zip(scenario.prices, quotes)):
        S = _dec(price)
        delta = round_to_int(Decimal(raw_delta) * 1000, rnd) / 1000
        traded = shares * delta - held
        held = shares * delta
        trade_cost = round_to_int(traded * S / 100, rnd) / 10
        cost = cost + trade_cost + interest
        interest = round_to_int(cost * r / weeks_per_year * 10, rnd) / 10
        rows.append(
            LedgerRow(
                week=week,
                price=price,
                option_value=u,
                delta_rounded=float(delta),
                shares_held=float(held),
                shares_traded=float(traded),
                trade_cost=float(trade_cost),
                cumulative_cost=float(cost),
                interest_accrued=float(interest),
            )
        )
    S_final = _dec(scenario.prices[-1])
    K = _dec(scenario.strike)
    settlement = delta * shares * min(K, S_final) / 1000 - (1 - delta) * shares * max(S_final - K, Decimal(0)) / 1000
    cost = cost - settlement
    return HedgeReport(rows, int(round_to_int(cost * 1000, rnd)), scenario.method, float(settlement), scenario)


def run_ledger(
    scenario: HedgeScenario,
    solver: SolverConfig = DEFAULT_SOLVER,
    quad: QuadratureConfig = DEFAULT_QUADRATURE,
    pricer: Optional[Callable[[HedgeScenario, int], Quote]] = None,
) -> HedgeReport:
    """Simulate weekly delta hedging and return the ledger with the final cost in dollars.

    ``pricer`` replaces :func:`weekly_delta` as the source of (value, delta) quotes.
    """
    if pricer is None:
        quotes = quote_path(scenario, solver, quad)
    else:
        quotes = [pricer(scenario, week) for week in range(scenario.weeks + 1)]
    return ledger_from_quotes(scenario, quotes)


@dataclass(frozen=True)
class Comparison:
    strike: float
    game_cost: int
    bs_cost: int
    relative_difference: float


def compare_reports(
    scenario: HedgeScenario,
    solver: SolverConfig = DEFAULT_SOLVER,
    quad: QuadratureConfig = DEFAULT_QUADRATURE,
) -> tuple[Comparison, HedgeReport, HedgeReport]:
    game = run_ledger(scenario.with_method(Method.GAME), solver, quad)
    bs = run_ledger(scenario.with_method(Method.BS), solver, quad)
    rel = (game.final_cost - bs.final_cost) / bs.final_cost if bs.final_cost != 0 else math.nan
    return Comparison(scenario.strike, game.final_cost, bs.final_cost, rel), game, bs


def compare_methods(
    scenario: HedgeScenario,
    solver: SolverConfig = DEFAULT_SOLVER,
    quad: QuadratureConfig = DEFAULT_QUADRATURE,
) -> Comparison:
    """Hedging cost under both methods and (game - bs) / bs."""
    return compare_reports(scenario, solver, quad)[0]
