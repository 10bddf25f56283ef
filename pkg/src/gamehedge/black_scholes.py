"""Closed-form Black-Scholes call price, delta and gamma (the baseline method)."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateMaturity
from .model import MarketParams
from .quadrature import normal_cdf


@dataclass(frozen=True)
class BsResult:
    price_bar: float
    delta_bar: float
    gamma_bar: float
    d1: float
    d2: float


def d1_d2(params: MarketParams) -> tuple[float, float]:
    S, K, sigma, r, T = params.S, params.K, params.sigma, params.r, params.T
    vol = sigma * math.sqrt(T)
    d1 = (math.log(S / K) + (r + 0.5 * sigma**2) * T) / vol
    return d1, d1 - vol


def bs_price(params: MarketParams) -> BsResult:
    """Price a European call and fill in N(d1) as delta and the standard gamma.

    Raises DegenerateMaturity when T == 0; use the payoff there instead.
    """
    if params.T <= 0:
        raise DegenerateMaturity("Black-Scholes formula needs T > 0")
    S, K, sigma, r, T = params.S, params.K, params.sigma, params.r, params.T
    d1, d2 = d1_d2(params)
    price = S * normal_cdf(d1) - K * math.exp(-r * T) * normal_cdf(d2)
    gamma = math.exp(-0.5 * d1 * d1) / (S * sigma * math.sqrt(2.0 * math.pi * T))
    return BsResult(price_bar=price, delta_bar=normal_cdf(d1), gamma_bar=gamma, d1=d1, d2=d2)
