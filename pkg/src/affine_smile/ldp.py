"""Rate functions of the log price via Legendre transform of the limiting CGF."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from scipy.optimize import brentq

from .cumulant import CgfDomain, _kernel, _share_kernel, critical_domain
from .errors import NumericalError
from .model import ModelParams, mu_y, require_valid

__all__ = [
    "RatePoint",
    "RateCurve",
    "rate_I",
    "rate_I_bar",
    "x_boundaries",
    "make_rate_curve",
]

THETA_XTOL = 1e-10      # tolerance of the maximizing-theta search
_EDGE_OFFSET = 1e-9     # distance inside a finite endpoint used for slope probes
_MAX_EXPAND = 200
_RTOL = 8.9e-16


@dataclass(frozen=True)
class RatePoint:
    """One sampled value of a rate function.

    ``theta_star`` is the maximizer of ``theta*x - cgf(theta)``; when the
    supremum is only approached at a finite domain endpoint the point is
    evaluated there and ``boundary`` is set.
    """

    x: float
    value: float
    theta_star: float
    boundary: bool = False


@dataclass(frozen=True)
class RateCurve:
    """Rate-function samples on a strictly increasing grid."""

    points: tuple[RatePoint, ...]
    params_digest: str

    def xs(self) -> list[float]:
        return [pt.x for pt in self.points]

    def values(self) -> list[float]:
        return [pt.value for pt in self.points]


def params_digest(p: ModelParams) -> str:
    """Short stable identifier of a parameter set."""
    return hashlib.sha256(repr(p).encode()).hexdigest()[:12]


def _legendre_point(kernel, domain: CgfDomain, x: float) -> RatePoint:
    """Maximize theta*x - cgf(theta) for a convex cgf on its domain.

    Solves cgf'(theta) = x by bracketed root finding; when x exceeds the slope
    reachable at ``_EDGE_OFFSET`` inside a finite endpoint, the endpoint value
    is returned (the CGF is finite there by tangency of the root equation).
    """
    if math.isfinite(domain.theta_max):
        hi = domain.theta_max - _EDGE_OFFSET
        if kernel.cgf_deriv(hi) <= x:
            theta = domain.theta_max
            return RatePoint(x, theta * x - kernel.cgf(theta), theta, boundary=True)
    else:
        hi = 1.0
        for _ in range(_MAX_EXPAND):
            if kernel.cgf_deriv(hi) > x:
                break
            hi = 2.0 * hi + 1.0
        else:
            raise NumericalError(f"could not bracket the maximizer for x={x}")

    if math.isfinite(domain.theta_min):
        lo = domain.theta_min + _EDGE_OFFSET
        if kernel.cgf_deriv(lo) >= x:
            theta = domain.theta_min
            return RatePoint(x, theta * x - kernel.cgf(theta), theta, boundary=True)
    else:
        lo = -1.0
        for _ in range(_MAX_EXPAND):
            if kernel.cgf_deriv(lo) < x:
                break
            lo = 2.0 * lo - 1.0
        else:
            raise NumericalError(f"could not bracket the maximizer for x={x}")

    theta = brentq(lambda t: kernel.cgf_deriv(t) - x, lo, hi, xtol=THETA_XTOL, rtol=_RTOL)
    return RatePoint(x, theta * x - kernel.cgf(theta), theta)


def rate_I(p: ModelParams, x: float, domain: Optional[CgfDomain] = None) -> RatePoint:
    """Large-deviations rate of the log price per unit time at slope ``x``.

    Nonnegative, convex, zero exactly at the lower smile boundary; satisfies
    ``value >= x`` with equality at the upper one.
    """
    require_valid(p)
    if domain is None:
        domain = critical_domain(p)
    return _legendre_point(_kernel(p), domain, x)


def rate_I_bar(p: ModelParams, x: float, domain: Optional[CgfDomain] = None) -> RatePoint:
    """Share-measure rate function: ``rate_I`` minus ``x``.

    ``theta_star`` is reported in share-measure coordinates (shifted down by
    one), matching the maximizer of the tilted Legendre problem.
    """
    point = rate_I(p, x, domain=domain)
    return RatePoint(x, point.value - x, point.theta_star - 1.0, point.boundary)


def rate_I_bar_direct(p: ModelParams, x: float) -> RatePoint:
    """Legendre transform of the share-measure CGF, computed from the tilted
    parameters without the ``I(x) - x`` shortcut.  Cross-check route."""
    require_valid(p)
    kernel = _share_kernel(p)
    base = critical_domain(p)
    domain = CgfDomain(base.theta_min - 1.0, base.theta_max - 1.0, base.case_tag)
    return _legendre_point(kernel, domain, x)


def x_boundaries(p: ModelParams) -> tuple[float, float]:
    """Closed-form smile-regime boundaries (slopes of the CGF at 0 and 1).

    The lower boundary is the long-run drift of X_t/t; the upper one is the
    drift under the share measure, built from the tilted jump moments.
    """
    require_valid(p)
    mu = mu_y(p.jump)
    mean_y = p.jump.mean_ratio(0.0)
    half_var = 0.5 * p.sigma_s**2

    d0 = p.beta * (mu - mean_y) / (p.a * p.beta - p.b)
    x_l = -(half_var + mu * p.alpha) + (p.b * p.c + p.a * p.alpha) * d0 + p.alpha * mean_y

    m0_1 = 1.0 + mu                       # E[e^Y]
    m1_1 = p.jump.mean_ratio(1.0) * m0_1  # E[Y e^Y]
    denom = p.a * p.beta * m0_1 - p.b
    if abs(denom) < 1e-14:
        raise NumericalError(
            "tilted stationarity denominator a*beta*E[e^Y] - b vanishes; "
            "the upper boundary is not defined in this regime"
        )
    d0_bar = p.beta * (mu - m1_1) / denom
    x_r = (
        half_var
        - mu * p.alpha
        + (p.b * p.c + p.a * p.alpha * m0_1) * d0_bar
        + p.alpha * m1_1
    )
    return x_l, x_r


def default_x_grid(p: ModelParams, n: int = 201) -> list[float]:
    """Uniform grid spanning the boundaries with a proportional margin."""
    x_l, x_r = x_boundaries(p)
    margin = max(0.5, 3.0 * (x_r - x_l))
    lo, hi = x_l - margin, x_r + margin
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def make_rate_curve(
    p: ModelParams, xs: Optional[Sequence[float]] = None, n: int = 201
) -> RateCurve:
    """Sample :func:`rate_I` on a grid (default :func:`default_x_grid`)."""
    require_valid(p)
    if xs is None:
        xs = default_x_grid(p, n)
    xs = [float(x) for x in xs]
    if any(nxt <= cur for cur, nxt in zip(xs, xs[1:])):
        raise ValueError("x grid must be strictly increasing")
    domain = critical_domain(p)
    points = tuple(rate_I(p, x, domain=domain) for x in xs)
    return RateCurve(points=points, params_digest=params_digest(p))
