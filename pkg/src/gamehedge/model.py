"""Market parameters, the call payoff in log-return space and the wealth factor beta.

The underlying at expiry is modelled as ``Y = S * exp(x + r*T)`` with ``x`` normal,
mean ``-sigma**2 * T / 2`` and standard deviation ``sigma * sqrt(T)``.  All times are
in years; only the hedging simulator works in weeks.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

WEEKS_PER_YEAR = 52
SMALL_STRIKE_RATIO = 0.1


@dataclass(frozen=True)
class MarketParams:
    """One pricing problem: stock price S, strike K, volatility, rate and expiry in years."""

    S: float
    K: float
    sigma: float
    r: float
    T: float

    def __post_init__(self) -> None:
        for name in ("S", "K", "sigma", "r", "T"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.S <= 0:
            raise ValueError("S must be positive")
        if self.K <= 0:
            raise ValueError("K must be positive")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.T < 0:
            raise ValueError("T must be non-negative")

    @classmethod
    def from_weeks(cls, S: float, K: float, sigma: float, r: float, weeks: float) -> MarketParams:
        return cls(S, K, sigma, r, weeks / WEEKS_PER_YEAR)

    @property
    def growth(self) -> float:
        """Risk-free growth factor e^{rT}."""
        return math.exp(self.r * self.T)

    @property
    def log_mean(self) -> float:
        return -0.5 * self.sigma**2 * self.T

    @property
    def log_std(self) -> float:
        return self.sigma * math.sqrt(self.T)

    def scaled(self, lam: float) -> MarketParams:
        return MarketParams(lam * self.S, lam * self.K, self.sigma, self.r, self.T)

    def with_spot(self, S: float) -> MarketParams:
        return MarketParams(S, self.K, self.sigma, self.r, self.T)

    def check_strike_ratio(self) -> None:
        if self.K / self.S < SMALL_STRIKE_RATIO:
            warnings.warn(
                f"K/S = {self.K / self.S:.3g} < {SMALL_STRIKE_RATIO}: "
                "solver behaviour is untested this deep in the money",
                RuntimeWarning,
                stacklevel=3,
            )


@dataclass(frozen=True)
class BetaContext:
    """Solver state: candidate price ``u`` and proportion of capital ``t`` in [0, 1)."""

    u: float
    t: float

    def __post_init__(self) -> None:
        if not self.u > 0:
            raise ValueError(f"u must be positive, got {self.u}")
        if not 0 <= self.t < 1:
            raise ValueError(f"t must lie in [0, 1), got {self.t}")


def kink_abscissa(params: MarketParams) -> float:
    """Log-return at which the call payoff starts to be positive: log(K/S) - rT."""
    return math.log(params.K / params.S) - params.r * params.T


def payoff(x, params: MarketParams):
    """Call payoff max(S e^{x+rT} - K, 0); accepts scalars or arrays."""
    value = np.maximum(params.S * np.exp(x + params.r * params.T) - params.K, 0.0)
    return float(value) if np.ndim(value) == 0 else value


def payoff_from_kink(z, params: MarketParams):
    """Call payoff as a function of the offset z = x - kink_abscissa: K (e^z - 1) for z > 0.

    Same values as :func:`payoff` but without cancellation just above the kink.
    """
    value = params.K * np.expm1(np.maximum(z, 0.0))
    return float(value) if np.ndim(value) == 0 else value


def density(x, params: MarketParams):
    """Normal density of the log-return with mean -sigma^2 T/2 and variance sigma^2 T."""
    s = params.log_std
    z = (np.asarray(x, dtype=float) - params.log_mean) / s
    value = np.exp(-0.5 * z * z) / (s * math.sqrt(2.0 * math.pi))
    return float(value) if np.ndim(value) == 0 else value


def beta(x, params: MarketParams, ctx: BetaContext):
    """Wealth factor a(x) t - u t + u, i.e. t*a(x) + (1 - t)*u."""
    return ctx.t * payoff(x, params) + (1.0 - ctx.t) * ctx.u
