from decimal import Decimal

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gamehedge.hedge_sim as hs
from gamehedge.errors import HedgeError, NoConvergence
from gamehedge.fixtures import FIXTURES, get_fixture
from gamehedge.hedge_sim import (
    HedgeScenario,
    Method,
    Rounding,
    compare_methods,
    ledger_from_quotes,
    round_to_int,
    run_ledger,
    weekly_delta,
)

S1 = get_fixture("S1")


def scenario(fx=S1, strike=50.0, **kw):
    return HedgeScenario(fx.prices, strike, fx.sigma, fx.rate, **kw)


def constant_pricer(delta):
    return lambda sc, week: (0.0, delta)


@pytest.mark.parametrize(
    "x,even,away",
    [(2288.5, 2288, 2289), (2289.5, 2290, 2290), (-2288.5, -2288, -2289), (0.49999, 0, 0), (27.313, 27, 27)],
)
def test_round_to_int_modes(x, even, away):
    assert round_to_int(Decimal(str(x)), Rounding.HALF_EVEN) == even
    assert round_to_int(Decimal(str(x)), Rounding.HALF_AWAY) == away


def _toy_quotes():
    return [(0.0, 0.5), (0.0, 0.546), (0.0, 1.0)]


def test_hand_computed_ledger_half_even():
    sc = HedgeScenario((50.0, 49.75, 52.0), 50.0, 0.2, 0.052)
    report = ledger_from_quotes(sc, _toy_quotes())
    r0, r1, r2 = report.rows
    assert (r0.trade_cost, r0.cumulative_cost, r0.interest_accrued) == (2500.0, 2500.0, 2.5)
    # 4,600 shares at 49.75 is an exact tie at the $100 grain
    assert (r1.shares_traded, r1.trade_cost, r1.cumulative_cost, r1.interest_accrued) == (4600, 228.8, 2731.3, 2.7)
    assert (r2.trade_cost, r2.cumulative_cost, r2.interest_accrued) == (2360.8, 5094.8, 5.1)
    assert report.settlement == 5000.0
    assert report.final_cost == 94_800


def test_hand_computed_ledger_half_away():
    sc = HedgeScenario((50.0, 49.75, 52.0), 50.0, 0.2, 0.052, rounding=Rounding.HALF_AWAY)
    report = ledger_from_quotes(sc, _toy_quotes())
    assert report.rows[1].trade_cost == 228.9
    assert report.final_cost == 94_900


def test_week_zero_deltas():
    game = weekly_delta(scenario(), 0)
    bs = weekly_delta(scenario(method=Method.BS), 0)
    assert game[1] == pytest.approx(0.448, abs=5e-4)
    assert bs[1] == pytest.approx(0.522, abs=5e-4)


def test_maturity_branch():
    sc = scenario()
    assert weekly_delta(sc, sc.weeks) == (pytest.approx(7.25), 1.0)
    assert weekly_delta(scenario(strike=60.0), sc.weeks) == (0.0, 0.0)
    with pytest.raises(IndexError):
        weekly_delta(sc, sc.weeks + 1)


@pytest.mark.parametrize("method", list(Method))
def test_ledger_is_deterministic(method):
    sc = scenario(method=method)
    assert run_ledger(sc) == run_ledger(sc)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_rounding_containment(name):
    fx = FIXTURES[name]
    for method in Method:
        report = run_ledger(HedgeScenario(fx.prices, fx.strikes[1], fx.sigma, fx.rate, method=method))
        assert len(report.rows) == len(fx.prices)
        for row in report.rows:
            assert Decimal(repr(row.trade_cost)) % Decimal("0.1") == 0
            assert Decimal(repr(row.interest_accrued)) % Decimal("0.1") == 0
            assert Decimal(repr(row.delta_rounded)) % Decimal("0.001") == 0
            assert row.shares_held == pytest.approx(row.delta_rounded * 100_000, abs=1e-6)
        assert report.final_cost % 100 == 0


@settings(max_examples=60, deadline=None)
@given(
    deltas=st.lists(st.floats(0, 1), min_size=3, max_size=12),
    price=st.floats(20, 80),
    rate=st.floats(0, 0.15),
)
def test_rounding_containment_property(deltas, price, rate):
    prices = [price * (1 + 0.01 * ((-1) ** i)) for i in range(len(deltas))]
    sc = HedgeScenario(prices, 50.0, 0.2, rate)
    report = ledger_from_quotes(sc, [(0.0, d) for d in deltas])
    for row in report.rows:
        assert Decimal(repr(row.trade_cost)) % Decimal("0.1") == 0
        assert Decimal(repr(row.interest_accrued)) % Decimal("0.1") == 0
        assert Decimal(repr(row.delta_rounded)) % Decimal("0.001") == 0


def test_settlement_identity_in_the_money():
    report = run_ledger(scenario(strike=50.0))
    assert report.rows[-1].delta_rounded == 1.0
    assert report.settlement == 100_000 * 50.0 / 1000


def test_settlement_identity_out_of_the_money():
    fx = get_fixture("S2")
    report = run_ledger(HedgeScenario(fx.prices, 65.0, fx.sigma, fx.rate))
    assert report.rows[-1].delta_rounded == 0.0
    assert report.settlement == 0.0


def test_method_only_changes_the_quote_source():
    stub = constant_pricer(0.4)
    game = run_ledger(scenario(method=Method.GAME), pricer=stub)
    bs = run_ledger(scenario(method=Method.BS), pricer=stub)
    assert game.rows == bs.rows
    assert game.final_cost == bs.final_cost
    assert (game.method, bs.method) == (Method.GAME, Method.BS)


def test_all_prices_below_strike():
    sc = HedgeScenario([30.0] * 21, 50.0, 0.2, 0.05)
    report = run_ledger(sc)
    assert all(row.delta_rounded == 0.0 for row in report.rows)
    assert report.final_cost == 0


def test_failed_solve_is_week_stamped(monkeypatch):
    real = hs.solve_price

    def flaky(params, *a, **kw):
        if params.S == S1.prices[3]:
            raise NoConvergence("stalled")
        return real(params, *a, **kw)

    monkeypatch.setattr(hs, "solve_price", flaky)
    with pytest.raises(HedgeError) as info:
        run_ledger(scenario())
    assert info.value.week == 3
    assert isinstance(info.value.cause, NoConvergence)
    assert "week 3" in str(info.value)


def test_compare_methods_relative_difference():
    cmp = compare_methods(scenario())
    assert cmp.relative_difference == pytest.approx((cmp.game_cost - cmp.bs_cost) / cmp.bs_cost)


def test_quote_count_checked():
    with pytest.raises(ValueError):
        ledger_from_quotes(scenario(), [(0.0, 0.5)])


@pytest.mark.parametrize(
    "kwargs",
    [dict(prices=(49.0,)), dict(prices=(49.0, -1.0)), dict(shares=0), dict(strike=0.0), dict(sigma=-0.2)],
)
def test_scenario_validation(kwargs):
    base = dict(prices=(49.0, 50.0), strike=50.0, sigma=0.2, rate=0.05)
    with pytest.raises(ValueError):
        HedgeScenario(**{**base, **kwargs})


def test_scenario_accepts_string_enums():
    sc = HedgeScenario((49.0, 50.0), 50.0, 0.2, 0.05, method="bs", rounding="half_away")
    assert sc.method is Method.BS and sc.rounding is Rounding.HALF_AWAY
    assert sc.weeks == 1
    assert sc.params_at(0).T == pytest.approx(1 / 52)
