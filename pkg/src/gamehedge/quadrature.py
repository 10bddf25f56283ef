"""Adaptive Gauss-Kronrod integration against the log-return density, and N(x).

Integrands are evaluated on whole batches of nodes at once, so they must accept a
1-d numpy array.  An integrand may also return an array of shape ``(k, n)`` for
``n`` nodes; the ``k`` integrals then share one adaptive mesh and each component
is held to the tolerance separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import NonFinite, SubdivisionLimit
from .model import MarketParams, density

# 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21 constants).
_XK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
])
_WK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525452766,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG_HALF = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

# Full symmetric rule: nodes ordered -x0..-x9, 0, x9..x0.
NODES = np.concatenate([-_XK[:-1], [0.0], _XK[-2::-1]])
KRONROD_WEIGHTS = np.concatenate([_WK[:-1], [_WK[-1]], _WK[-2::-1]])
_wg = np.zeros(11)
_wg[1::2] = _WG_HALF
GAUSS_WEIGHTS = np.concatenate([_wg[:-1], [0.0], _wg[-2::-1]])

_INITIAL_PANELS = 4
_REFINE_FRACTION = 0.25


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-12
    abs_tol: float = 1e-15
    truncation_width: float = 12.0
    max_subdivisions: int = 200

    def __post_init__(self) -> None:
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if not self.truncation_width >= 8:
            raise ValueError("truncation_width must be at least 8")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")

    def tightened(self, factor: float = 2.0) -> QuadratureConfig:
        return QuadratureConfig(
            self.rel_tol / factor, self.abs_tol / factor, self.truncation_width, self.max_subdivisions
        )


DEFAULT_QUADRATURE = QuadratureConfig()


def normal_cdf(x: float) -> float:
    """Standard normal CDF, accurate to a few ulps over the whole real line."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def normal_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def _gk21(fn: Callable, lo: np.ndarray, hi: np.ndarray):
    """Kronrod estimate, |K - G| error estimate and Kronrod estimate of |f| per panel."""
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = center[:, None] + half[:, None] * NODES[None, :]
    y = np.asarray(fn(x.ravel()), dtype=float)
    if not np.all(np.isfinite(y)):
        bad = x.ravel()[~np.isfinite(np.atleast_2d(y)).all(axis=0)]
        raise NonFinite(f"integrand is not finite at x = {bad[0]!r}")
    y = y.reshape(y.shape[:-1] + x.shape)
    kronrod = (y @ KRONROD_WEIGHTS) * half
    gauss = (y @ GAUSS_WEIGHTS) * half
    return kronrod, np.abs(kronrod - gauss), (np.abs(y) @ KRONROD_WEIGHTS) * half


def adaptive_gauss_kronrod(fn: Callable, lo: float, hi: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    """Integrate ``fn`` over [lo, hi] by globally adaptive bisection.

    Returns ``(value, error_estimate)``; both are floats for scalar integrands and
    arrays of shape ``(k,)`` for integrands returning ``(k, n)``.

    The relative tolerance applies to the integral of ``|fn|``, which equals the
    plain value for one-signed integrands and stays meaningful under cancellation.
    """
    if hi <= lo:
        return 0.0, 0.0
    edges = np.linspace(lo, hi, _INITIAL_PANELS + 1)
    a, b = edges[:-1], edges[1:]
    vals, errs, mags = _gk21(fn, a, b)
    while True:
        total = vals.sum(axis=-1)
        err = errs.sum(axis=-1)
        tol = np.maximum(cfg.abs_tol, cfg.rel_tol * mags.sum(axis=-1))
        if np.all(err <= tol):
            return _unwrap(total), _unwrap(err)
        n = a.size
        if n >= cfg.max_subdivisions:
            raise SubdivisionLimit(
                f"{n} panels on [{lo:.6g}, {hi:.6g}]: error {np.max(err):.3g} above tolerance {np.min(tol):.3g}"
            )
        score = np.atleast_2d(errs / np.asarray(tol)[..., None]).max(axis=0)
        order = np.argsort(score)[::-1]
        # worst panel plus any within a factor of it; smooth regions stay coarse
        pick = order[score[order] >= _REFINE_FRACTION * score[order[0]]][: cfg.max_subdivisions - n]
        keep = np.ones(n, dtype=bool)
        keep[pick] = False
        mid = 0.5 * (a[pick] + b[pick])
        new_a = np.concatenate([a[pick], mid])
        new_b = np.concatenate([mid, b[pick]])
        new_vals, new_errs, new_mags = _gk21(fn, new_a, new_b)
        a = np.concatenate([a[keep], new_a])
        b = np.concatenate([b[keep], new_b])
        vals = np.concatenate([vals[..., keep], new_vals], axis=-1)
        errs = np.concatenate([errs[..., keep], new_errs], axis=-1)
        mags = np.concatenate([mags[..., keep], new_mags], axis=-1)


def _unwrap(v):
    v = np.asarray(v)
    return float(v) if v.ndim == 0 else v


def integration_domain(params: MarketParams, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> tuple[float, float]:
    mu, s = params.log_mean, params.log_std
    w = cfg.truncation_width
    return mu - w * s, mu + w * s


def integrate_against_density_with_error(
    f: Callable,
    params: MarketParams,
    kink: Optional[float] = None,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    offset: bool = False,
):
    """Like :func:`integrate_against_density` but also returns the summed error estimate."""
    if not params.T > 0:
        raise ValueError("the log-return density needs T > 0")
    lo, hi = integration_domain(params, cfg)
    if offset and kink is None:
        raise ValueError("offset coordinates need a kink")
    origin = kink if offset else 0.0

    def integrand(z):
        return np.asarray(f(z), dtype=float) * density(origin + z, params)

    cuts = [lo - origin, hi - origin]
    if kink is not None and lo < kink < hi:
        cuts.insert(1, kink - origin)
    value, error = 0.0, 0.0
    for left, right in zip(cuts[:-1], cuts[1:]):
        v, e = adaptive_gauss_kronrod(integrand, left, right, cfg)
        value = value + v
        error = error + e
    return value, error


def integrate_against_density(
    f: Callable,
    params: MarketParams,
    kink: Optional[float] = None,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    offset: bool = False,
):
    """Compute the integral of f(x) p(x) dx over the truncated real line.

    ``p`` is the log-return density of ``params``; the domain is the mean plus or
    minus ``truncation_width`` standard deviations.  When ``kink`` lies inside the
    domain the two sides are integrated separately, each to the tolerance.

    With ``offset=True`` the integrand is called with ``z = x - kink`` instead of
    ``x``.  Nodes next to the kink then carry full relative precision, which
    matters for integrands that are sharply peaked just beyond it.
    """
    return integrate_against_density_with_error(f, params, kink, cfg, offset)[0]
