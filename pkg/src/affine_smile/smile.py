"""Asymptotic implied-variance smile and fixed-maturity wing slopes.

The large-maturity smile is an algebraic function of the rate function with a
branch switch at the regime boundaries.  Fixed-maturity wings come from the
moment formula: the critical moment order at maturity ``T`` is the tilt at
which the forward ODE state blows up exactly at ``T``, found by inverting the
blow-up-time integral.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

from scipy.integrate import IntegrationWarning, quad
from scipy.optimize import brentq

from .cumulant import CgfDomain, _kernel, critical_domain, gamma_smaller_root
from .errors import NumericalError
from .ldp import rate_I, x_boundaries
from .model import ModelParams, require_valid

__all__ = [
    "WingResult",
    "sigma_inf_sq",
    "blowup_time",
    "critical_moment",
    "wing_slope",
    "slope_from_moment_count",
]

MOMENT_XTOL = 1e-12     # theta tolerance of the critical-moment search; tighter
                        # than the blow-up integral needs because the integral
                        # diverges steeply at the domain edge
_RADICAND_CLAMP = -1e-12
_TAIL_CUTOFF = 1e14     # truncate the blow-up integral where the exponential
                        # term reaches this multiple of the rate loading
_GUARD_POINTS = 32
_MAX_EXPAND = 200
_RTOL = 8.9e-16


@dataclass(frozen=True)
class WingResult:
    """Wing slope of the implied-variance-to-moneyness ratio at one maturity.

    ``critical_moment`` is the extreme tilt with a finite MGF at ``maturity``;
    ``lee_exponent`` is the corresponding moment count of the stock price
    (``critical_moment - 1`` on the right, its negation on the left) and
    ``slope`` the resulting bound in [0, 2].
    """

    maturity: float
    side: str
    critical_moment: float
    lee_exponent: float
    slope: float


def sigma_inf_sq(
    p: ModelParams,
    x: float,
    domain: Optional[CgfDomain] = None,
    boundaries: Optional[tuple[float, float]] = None,
) -> float:
    """Large-maturity implied variance at log-moneyness-per-time ``x``.

    Piecewise in the rate function: the square-root correction is subtracted
    outside the boundary interval and added inside, giving a continuous,
    nonnegative curve.
    """
    require_valid(p)
    if boundaries is None:
        boundaries = x_boundaries(p)
    x_l, x_r = boundaries
    value = rate_I(p, x, domain=domain).value
    radicand = value * (value - x)
    if radicand < 0.0:
        if radicand < _RADICAND_CLAMP:
            raise NumericalError(
                f"rate function inconsistency at x={x}: I*(I-x) = {radicand}"
            )
        radicand = 0.0
    root = math.sqrt(radicand)
    if x_l <= x <= x_r:
        return 2.0 * (2.0 * value - x + 2.0 * root)
    return 2.0 * (2.0 * value - x - 2.0 * root)


def blowup_time(p: ModelParams, theta: float) -> float:
    """Time at which the forward ODE state diverges for tilt ``theta``.

    +inf whenever the root equation has a solution (the state converges to it
    instead).  Otherwise the time is the integral of the reciprocal root
    function from 0 to infinity: adaptive quadrature up to a cutoff where the
    exponential term dominates, plus the closed-form exponential tail.
    """
    require_valid(p)
    if math.isfinite(gamma_smaller_root(p, theta)):
        return math.inf
    k = _kernel(p)
    lm0 = p.jump.log_m0(theta)

    # cutoff where rate_load * e^{a D + lm0} reaches _TAIL_CUTOFF * rate_load
    upper = (math.log(_TAIL_CUTOFF) - lm0) / p.a
    if upper <= 0.0:
        # exponential term already dominates at D = 0; integrate the tail only
        return math.exp(-lm0) / (p.a * p.beta)

    def integrand(d: float) -> float:
        return 1.0 / k.gamma(d, theta)

    # the integrand peaks where gamma is smallest; pass the interior minimum
    y_c = k.y_crit(theta)
    interior = [y_c] if 0.0 < y_c < upper else None
    with warnings.catch_warnings():
        # roundoff chatter at the requested tolerances; the explicit error
        # estimate below is what we act on
        warnings.simplefilter("ignore", IntegrationWarning)
        value, err = quad(
            integrand, 0.0, upper, points=interior, limit=300, epsabs=1e-13, epsrel=1e-11
        )
    if not math.isfinite(value) or err > max(1e-9, 2e-7 * abs(value)):
        raise NumericalError(
            f"blow-up quadrature did not converge at theta={theta} "
            f"(value={value}, err={err})"
        )
    # exact tail of 1/(beta e^{aD + lm0}); lower-order terms are negligible here
    tail = math.exp(-(p.a * upper + lm0)) / (p.a * p.beta)
    return value + tail


def _expand_past(
    p: ModelParams, edge: float, horizon: float, direction: float
) -> float:
    """Find a tilt beyond ``edge`` whose blow-up time falls below ``horizon``."""
    step = 0.5
    for _ in range(_MAX_EXPAND):
        candidate = edge + direction * step
        if blowup_time(p, candidate) < horizon:
            return candidate
        step *= 2.0
    raise NumericalError("could not bracket the critical moment")


def _check_monotone(p: ModelParams, edge: float, far: float) -> None:
    """Guard: blow-up time must not increase moving away from the domain."""
    step = (far - edge) / (_GUARD_POINTS - 1)
    previous = math.inf
    for i in range(_GUARD_POINTS):
        current = blowup_time(p, edge + i * step)
        if current > previous * (1.0 + 1e-9):
            raise NumericalError(
                "blow-up time is not monotone beyond the domain edge; "
                "critical-moment bisection would be unreliable"
            )
        previous = current


def critical_moment(p: ModelParams, maturity: float, side: str) -> float:
    """Extreme tilt whose MGF first becomes infinite at ``maturity``.

    ``side`` is ``"right"`` (positive tilts, above the domain) or ``"left"``.
    Returns a signed infinity when the domain is open on the requested side
    (all moments finite).
    """
    require_valid(p)
    if maturity <= 0.0:
        raise ValueError(f"maturity must be positive, got {maturity}")
    if side not in ("right", "left"):
        raise ValueError(f"side must be 'right' or 'left', got {side!r}")
    domain = critical_domain(p)
    edge = domain.theta_max if side == "right" else domain.theta_min
    if not math.isfinite(edge):
        return math.inf if side == "right" else -math.inf

    direction = 1.0 if side == "right" else -1.0
    far = _expand_past(p, edge, maturity, direction)
    _check_monotone(p, edge, far)

    def excess(theta: float) -> float:
        t = blowup_time(p, theta)
        return (t - maturity) if math.isfinite(t) else math.inf

    # start the bracket strictly outside the domain where the time is finite
    inner = edge + direction * max(MOMENT_XTOL, abs(edge) * 1e-13)
    if not math.isfinite(blowup_time(p, inner)) or excess(inner) < 0.0:
        # blow-up already faster than maturity arbitrarily close to the edge
        # cannot happen for positive maturities; report rather than guess
        if excess(inner) < 0.0:
            raise NumericalError(
                f"blow-up time near the domain edge is below T={maturity}"
            )
        inner = edge + direction * 1e-9
    lo, hi = (inner, far) if side == "right" else (far, inner)
    return brentq(excess, lo, hi, xtol=MOMENT_XTOL, rtol=_RTOL)


def slope_from_moment_count(exponent: float) -> float:
    """Wing slope in [0, 2] implied by the number of finite stock moments.

    Infinite moment counts give a flat wing (slope 0); zero gives the
    model-free ceiling 2.
    """
    if math.isinf(exponent):
        return 0.0
    return 2.0 - 4.0 * (math.sqrt(exponent * exponent + exponent) - exponent)


def wing_slope(p: ModelParams, maturity: float, side: str) -> WingResult:
    """Implied-variance wing slope at fixed maturity via the moment formula."""
    crit = critical_moment(p, maturity, side)
    if side == "right":
        exponent = crit - 1.0
    else:
        exponent = -crit
    if math.isfinite(exponent) and exponent < 0.0:
        warnings.warn(
            f"critical moment on the {side} side gives a negative Lee "
            f"exponent ({exponent}); slope formula applied outside its regime",
            RuntimeWarning,
            stacklevel=2,
        )
    slope = slope_from_moment_count(exponent)
    return WingResult(
        maturity=maturity,
        side=side,
        critical_moment=crit,
        lee_exponent=exponent,
        slope=slope,
    )
