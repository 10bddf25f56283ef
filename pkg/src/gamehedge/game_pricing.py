"""Game pricing of a European call: the price ``u`` and proportion ``t_u`` solving

    exp(E[log(a t/u - t + 1)]) = e^{rT}
    E[(a - u) / (a t - u t + u)] = 0

where expectations are against the log-return density.  Delta and gamma follow by
implicit differentiation of that system with respect to the stock price.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateDenominator, DegenerateMaturity, NoConvergence, SingularJacobian, TrivialOption
from .model import BetaContext, MarketParams, density, kink_abscissa, payoff_from_kink
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, integrate_against_density

# Shortest expiry the solver accepts (a tenth of a week).
MIN_SOLVER_T = 1.0 / 520.0


@dataclass(frozen=True)
class SolverConfig:
    max_iterations: int = 100
    step_tolerance: float = 1e-12
    tiny_price_floor: float = 1e-12
    initial_t: float = 0.5
    residual_tolerance: float = 1e-9

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not self.step_tolerance > 0:
            raise ValueError("step_tolerance must be positive")
        if not 0 < self.initial_t < 1:
            raise ValueError("initial_t must lie in (0, 1)")


DEFAULT_SOLVER = SolverConfig()


@dataclass(frozen=True)
class GameSolution:
    u: float
    t_u: float
    iterations: int
    residual_f: float
    residual_g: float

    @property
    def context(self) -> BetaContext:
        return BetaContext(self.u, self.t_u)


@dataclass(frozen=True)
class GameGreeks:
    delta: float
    gamma: float
    w: float
    dw_ds: float
    dtu_ds: float


def _require_solver_maturity(params: MarketParams) -> None:
    if params.T < MIN_SOLVER_T:
        raise DegenerateMaturity(f"T = {params.T:.6g} years is below the solver minimum {MIN_SOLVER_T:.6g}")


def expected_payoff(params: MarketParams, quad: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Expected call payoff E = integral of a(x) dF(x) (undiscounted)."""
    return _integrate(lambda z: payoff_from_kink(z, params), params, quad)


def _integrate(f, params: MarketParams, quad: QuadratureConfig):
    # every pricing integrand is written in the kink offset z = x - kink_abscissa
    return integrate_against_density(f, params, kink_abscissa(params), quad, offset=True)


def _system_integrals(params: MarketParams, ctx: BetaContext, quad: QuadratureConfig) -> np.ndarray:
    """[E log(beta/u), E (a-u)/beta, E a/beta, E a/beta^2, E (a-u)^2/beta^2] on one mesh."""
    u, t = ctx.u, ctx.t

    def integrand(z):
        a = payoff_from_kink(z, params)
        b = t * a + (1.0 - t) * u
        d = a - u
        return np.stack([np.log1p(t * d / u), d / b, a / b, a / b**2, d * d / b**2])

    return _integrate(integrand, params, quad)


def residuals(
    params: MarketParams, ctx: BetaContext, quad: QuadratureConfig = DEFAULT_QUADRATURE
) -> tuple[float, float]:
    """Residuals (f, g) of the pricing system; both vanish at the game price."""
    I = _system_integrals(params, ctx, quad)
    return math.exp(I[0]) - params.growth, float(I[1])


def jacobian(
    params: MarketParams, ctx: BetaContext, f: float, quad: QuadratureConfig = DEFAULT_QUADRATURE
) -> tuple[float, float, float, float]:
    """Newton matrix (fu, ft, gu, gt) at ``ctx`` given the residual ``f`` there.

    ``ft`` is set to zero: the exact value (f + e^{rT}) g vanishes at the root and
    the iteration is kept lower-triangular.
    """
    I = _system_integrals(params, ctx, quad)
    return _jacobian_from(params, ctx, f, I)


def _jacobian_from(params, ctx, f, I):
    fu = (f + params.growth) * (-ctx.t / ctx.u) * I[2]
    return float(fu), 0.0, float(-I[3]), float(-I[4])


def _best_proportion(params: MarketParams, u: float, quad: QuadratureConfig) -> float:
    """The t maximizing E[log(beta/u)] at price ``u``: the root of g, which is strictly decreasing in t."""
    g = lambda t: float(_system_integrals(params, BetaContext(u, t), quad)[1])
    if g(0.0) <= 0:
        return 0.0
    hi = 0.5
    while g(hi) > 0:
        if hi > 1 - 1e-15:
            raise NoConvergence(f"log-growth at u={u:.3g} keeps rising as t approaches 1")
        hi = 1 - (1 - hi) / 16
    return brentq(g, 0.0, hi, xtol=1e-300, rtol=1e-15)


def max_log_growth(params: MarketParams, u: float, quad: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Best expected log-growth E[log(beta/u)] over t in [0, 1) when the option costs ``u``.

    It decreases in ``u``; the game price is where it equals rT.
    """
    t = _best_proportion(params, u, quad)
    return float(_system_integrals(params, BetaContext(u, t), quad)[0])


def _bracketed_root(params: MarketParams, E: float, cfg: SolverConfig, quad: QuadratureConfig) -> tuple[float, float]:
    """Fallback for a collapsed Newton iterate: bracket the price in log u between the floor and E.

    Raises TrivialOption when even the floor price cannot reach growth rT.
    """
    rT = params.r * params.T
    excess = lambda log_u: max_log_growth(params, math.exp(log_u), quad) - rT
    lo = math.log(cfg.tiny_price_floor)
    if excess(lo) < 0:
        raise TrivialOption(
            f"game price is below {cfg.tiny_price_floor:.3g}: best log-growth at that price is under rT = {rT:.3g}"
        )
    log_u = brentq(excess, lo, math.log(E), xtol=1e-15, rtol=1e-15)
    u = math.exp(log_u)
    return u, _best_proportion(params, u, quad)


def solve_price(
    params: MarketParams,
    cfg: SolverConfig = DEFAULT_SOLVER,
    quad: QuadratureConfig = DEFAULT_QUADRATURE,
) -> GameSolution:
    """Solve the pricing system by damped Newton-Raphson from u = E/2, t = initial_t.

    Damping: a step that makes u negative falls back to half the previous u, a
    negative t likewise halves, and t >= 1 moves half way from the previous t to 1.
    If the iterate falls below ``cfg.tiny_price_floor`` the price is bracketed
    instead (:func:`max_log_growth` is monotone in u); a root below the floor is
    reported as TrivialOption.
    Iteration stops on a small step or the iteration cap; the result is accepted
    only if both residuals re-evaluated at tighter quadrature are within
    ``cfg.residual_tolerance``.  At r = 0 the root is u = E, t_u = 0 exactly and is
    returned without iterating; its gamma is undefined (DegenerateDenominator).
    """
    _require_solver_maturity(params)
    params.check_strike_ratio()
    E = expected_payoff(params, quad)
    if E < cfg.tiny_price_floor:
        raise TrivialOption(f"expected payoff {E:.3g} is below the price floor {cfg.tiny_price_floor:.3g}")
    if params.r == 0.0:
        # t = 0 zeroes f for every u, and g = (E - u)/u there, so the root sits on the boundary
        f, g = residuals(params, BetaContext(E, 0.0), quad.tightened())
        return GameSolution(u=E, t_u=0.0, iterations=0, residual_f=f, residual_g=g)

    u, t = 0.5 * E, cfg.initial_t
    iterations = 0
    for iterations in range(1, cfg.max_iterations + 1):
        if u < cfg.tiny_price_floor:
            u, t = _bracketed_root(params, E, cfg, quad)
            break
        ctx = BetaContext(u, t)
        I = _system_integrals(params, ctx, quad)
        f = math.exp(I[0]) - params.growth
        g = float(I[1])
        fu, ft, gu, gt = _jacobian_from(params, ctx, f, I)
        det = fu * gt - ft * gu
        if det == 0.0 or not math.isfinite(det):
            raise SingularJacobian(f"Newton matrix is singular at u={u:.6g}, t={t:.6g}")
        du = (-f * gt + ft * g) / det
        dt = (-g * fu + gu * f) / det
        # below u = 1 the u-step is measured relative to u, so tiny prices cannot stall
        if abs(du) / min(u, 1.0) + abs(dt) < cfg.step_tolerance:
            break
        u += du
        t += dt
        if u <= 0.0:
            u = (u - du) / 2
        if t < 0.0:
            t = (t - dt) / 2
        if t >= 1.0:
            t = ((t - dt) + 1.0) / 2
            if t >= 1.0:
                raise NoConvergence(f"proportion pinned at 1 after {iterations} iterations (u={u:.6g})")

    if not (u > 0.0 and 0.0 < t < 1.0):
        raise NoConvergence(f"iterate left the domain: u={u:.6g}, t={t:.6g}")
    f, g = residuals(params, BetaContext(u, t), quad.tightened())
    tol = cfg.residual_tolerance
    if not (abs(f) <= tol and abs(g) <= tol):
        raise NoConvergence(
            f"after {iterations} iterations residuals are f={f:.3g}, g={g:.3g} (tolerance {tol:.1g})"
        )
    return GameSolution(u=u, t_u=t, iterations=iterations, residual_f=f, residual_g=g)


def compute_w(params: MarketParams, sol: GameSolution, quad: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """W: integral of e^x / beta(x) dF over the region above the payoff kink."""
    u, t = sol.u, sol.t_u
    ek = math.exp(kink_abscissa(params))

    def integrand(z):
        a = payoff_from_kink(z, params)
        return np.where(z >= 0, ek * np.exp(z) / (t * a + (1.0 - t) * u), 0.0)

    return _integrate(integrand, params, quad)


def game_delta(params: MarketParams, sol: GameSolution, quad: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Delta = u W e^{rT}."""
    return sol.u * compute_w(params, sol, quad) * params.growth


def dtu_ds(
    params: MarketParams,
    sol: GameSolution,
    delta: float,
    quad: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """Sensitivity of the optimal proportion t_u to the stock price."""
    u, t = sol.u, sol.t_u
    growth = params.growth
    w = delta / (u * growth)
    ek = math.exp(kink_abscissa(params))

    def integrand(z):
        a = payoff_from_kink(z, params)
        b2 = (t * a + (1.0 - t) * u) ** 2
        return np.stack([1.0 / b2, np.where(z >= 0, ek * np.exp(z) / b2, 0.0), (a - u) / b2])

    inv_b2, ex_b2, amu_b2 = _integrate(integrand, params, quad)
    numerator = (1.0 - t) * u * w * growth * inv_b2 + t * growth * ex_b2 - w * growth / u
    denominator = -amu_b2
    if abs(denominator) < 1e-14:
        raise DegenerateDenominator(f"denominator {denominator:.3g} too small")
    return float(numerator / denominator)


def dw_ds(
    params: MarketParams,
    sol: GameSolution,
    delta: float,
    dtu: float,
    quad: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """Derivative of W in S: Leibniz boundary term at the kink minus the interior integral."""
    S, K = params.S, params.K
    k = kink_abscissa(params)
    u, t = sol.u, sol.t_u
    growth = params.growth
    w = delta / (u * growth)

    boundary = K / (u * (1.0 - t) * S**2 * growth) * density(k, params)
    ek = math.exp(k)

    def integrand(z):
        e = ek * np.exp(z)
        a = payoff_from_kink(z, params)  # equals S e^{x+rT} - K above the kink
        b = t * a + (1.0 - t) * u
        top = t * e * growth + (a - u) * dtu + (1.0 - t) * u * w * growth
        return np.where(z >= 0, top / b**2 * e, 0.0)

    return float(boundary - _integrate(integrand, params, quad))


def game_gamma(params: MarketParams, sol: GameSolution, quad: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Gamma = u W^2 e^{2rT} + u e^{rT} dW/dS."""
    return game_greeks(params, sol, quad).gamma


def game_greeks(params: MarketParams, sol: GameSolution, quad: QuadratureConfig = DEFAULT_QUADRATURE) -> GameGreeks:
    growth = params.growth
    w = compute_w(params, sol, quad)
    delta = sol.u * w * growth
    dtu = dtu_ds(params, sol, delta, quad)
    dw = dw_ds(params, sol, delta, dtu, quad)
    gamma = sol.u * w**2 * growth**2 + sol.u * growth * dw
    return GameGreeks(delta=delta, gamma=gamma, w=w, dw_ds=dw, dtu_ds=dtu)
