import itertools
import math

import pytest

from gamehedge.black_scholes import bs_price, d1_d2
from gamehedge.errors import DegenerateMaturity
from gamehedge.game_pricing import expected_payoff
from gamehedge.model import MarketParams


def test_anchor_values(anchor):
    res = bs_price(anchor)
    assert res.price_bar == pytest.approx(2.401, abs=5e-4)
    assert res.delta_bar == pytest.approx(0.522, abs=5e-4)
    assert res.gamma_bar == pytest.approx(0.0655, abs=5e-5)


def test_anchor_matches_discounted_expectation(anchor):
    E = expected_payoff(anchor)
    assert bs_price(anchor).price_bar == pytest.approx(math.exp(-anchor.r * anchor.T) * E, abs=1e-9)


GRID = [
    MarketParams(50 * m, 50.0, s, 0.05, T)
    for m, s, T in itertools.product((0.7, 1.0, 1.4), (0.1, 0.2, 0.4), (5 / 52, 20 / 52, 1.0))
]


@pytest.mark.parametrize("p", GRID, ids=lambda p: f"S{p.S:g}-sig{p.sigma:g}-T{p.T:.3g}")
def test_quadrature_consistency(p):
    E = expected_payoff(p)
    assert bs_price(p).price_bar == pytest.approx(math.exp(-p.r * p.T) * E, rel=1e-9)


@pytest.mark.parametrize("p", GRID, ids=lambda p: f"S{p.S:g}-sig{p.sigma:g}-T{p.T:.3g}")
def test_finite_difference_greeks(p):
    res = bs_price(p)
    h = 1e-4 * p.S
    fd_delta = (bs_price(p.with_spot(p.S + h)).price_bar - bs_price(p.with_spot(p.S - h)).price_bar) / (2 * h)
    assert abs(res.delta_bar - fd_delta) <= 1e-6
    # the O(h^2) truncation term exceeds 1e-5 at the money once sigma*sqrt(T) is this small
    h = (1e-4 if p.sigma * math.sqrt(p.T) < 0.05 else 1e-3) * p.S
    fd_gamma = (bs_price(p.with_spot(p.S + h)).delta_bar - bs_price(p.with_spot(p.S - h)).delta_bar) / (2 * h)
    assert abs(res.gamma_bar - fd_gamma) <= 1e-5


def test_monotonicity():
    spots = [30 + 2 * i for i in range(20)]
    prices = [bs_price(MarketParams(S, 50, 0.2, 0.05, 0.5)) for S in spots]
    assert all(a.price_bar < b.price_bar for a, b in zip(prices, prices[1:]))
    assert all(a.delta_bar < b.delta_bar for a, b in zip(prices, prices[1:]))
    vols = [bs_price(MarketParams(49, 50, s, 0.05, 0.5)).price_bar for s in (0.1, 0.2, 0.3, 0.5)]
    assert vols == sorted(vols)


def test_tiny_strike_limit():
    p = MarketParams(49.0, 49e-9, 0.2, 0.05, 20 / 52)
    res = bs_price(p)
    assert res.price_bar == pytest.approx(p.S - p.K * math.exp(-p.r * p.T), rel=1e-12)
    assert res.delta_bar == 1.0


def test_d2_is_d1_minus_vol(anchor):
    d1, d2 = d1_d2(anchor)
    assert d1 - d2 == pytest.approx(anchor.sigma * math.sqrt(anchor.T))


def test_zero_maturity_rejected():
    with pytest.raises(DegenerateMaturity):
        bs_price(MarketParams(49, 50, 0.2, 0.05, 0.0))
