"""Limiting cumulant generating function of the log price and its ingredients.

The long-run CGF ``limiting_cgf`` is finite exactly where a quadratic-plus-
exponential auxiliary function ``gamma_fn`` has a real root in its first
argument; the effective domain ``[theta_min, theta_max]`` is computed from the
minimum of that function over the root variable.  The finite-time moment
generating function integrates the associated forward ODE system.

The share-measure variants (``share_measure_cgf`` and its derivative) evaluate
the same structures with the exponentially tilted jump law and scaled event
rate.  They satisfy ``share_measure_cgf(p, t) == limiting_cgf(p, t + 1)``
identically, which the test-suite uses as a consistency check on the tilt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import NumericalError
from .model import JumpLaw, ModelParams, mu_y, require_valid, tilt_share_measure

__all__ = [
    "CgfDomain",
    "OdeState",
    "gamma_fn",
    "gamma_smaller_root",
    "critical_domain",
    "limiting_cgf",
    "limiting_cgf_deriv",
    "finite_time_mgf",
    "share_measure_cgf",
    "share_measure_cgf_deriv",
]

ROOT_XTOL = 1e-12        # absolute tolerance for the smaller root
DOMAIN_XTOL = 1e-10      # tolerance for the domain endpoints in theta
TANGENCY_TOL = 1e-11     # |Gamma(y_c)| below this counts as a tangent (double) root
BLOWUP_GUARD = 1e8       # ODE state beyond this is treated as blown up
_CASE_PROBE = 50.0       # finite probe standing in for the theta -> +inf limit
_MAX_EXPAND = 200

_RTOL = 8.9e-16          # brentq minimum relative tolerance


@dataclass(frozen=True)
class CgfDomain:
    """Effective domain of the limiting CGF.

    ``case_tag`` is ``"case_two"`` when both endpoints are finite,
    ``"case_one"`` when only the lower endpoint is, and ``"unbounded"`` for
    degenerate (zero) jump laws where the CGF is finite everywhere.
    ``theta_c`` is the minimizer of the domain criterion when it exists.
    """

    theta_min: float
    theta_max: float
    case_tag: str
    theta_c: Optional[float] = None

    def contains(self, theta: float) -> bool:
        return self.theta_min <= theta <= self.theta_max


@dataclass(frozen=True)
class OdeState:
    """State of the forward MGF system at time ``t`` (both start at zero)."""

    t: float
    d: float
    f: float


@dataclass(frozen=True)
class _Kernel:
    """Shared evaluation core for the original- and share-measure CGFs.

    The CGF has the form
        0.5*sigma_s^2*theta^2 + drift*theta + b*c*y(theta)
            + rate_base*(e^{a*y(theta)} m0(theta) - 1)
    where y(theta) is the smaller root of
        -b*y + 0.5*sigma_lam^2*y^2 + rate_load*(e^{a*y} m0(theta) - 1)
            - comp*theta = 0
    and m0 is the MGF of ``law``.  Under the share measure only ``law``,
    ``rate_base``, ``rate_load`` and ``drift`` change; ``comp`` keeps the
    original-measure compensator coefficient.
    """

    a: float
    b: float
    c: float
    sigma_s: float
    sigma_lam: float
    rate_base: float
    rate_load: float
    comp: float
    drift: float
    law: JumpLaw

    # -- pointwise evaluations -------------------------------------------

    def gamma(self, y: float, theta: float) -> float:
        lm0 = self.law.log_m0(theta)
        jump_term = self.rate_load * math.expm1(self.a * y + lm0)
        return (
            -self.b * y
            + 0.5 * self.sigma_lam**2 * y * y
            + jump_term
            - self.comp * theta
        )

    def gamma_dy(self, y: float, theta: float) -> float:
        lm0 = self.law.log_m0(theta)
        return -self.b + self.sigma_lam**2 * y + self.a * self.rate_load * math.exp(
            self.a * y + lm0
        )

    def y_crit(self, theta: float) -> float:
        """Unique minimizer of gamma(., theta); always left of b/sigma_lam^2."""
        hi = self.b / self.sigma_lam**2
        lo = min(0.0, hi) - 1.0
        for _ in range(_MAX_EXPAND):
            if self.gamma_dy(lo, theta) < 0.0:
                break
            lo = hi - 2.0 * (hi - lo)
        else:
            raise NumericalError("could not bracket the critical point of gamma")
        return brentq(lambda y: self.gamma_dy(y, theta), lo, hi, xtol=1e-13, rtol=_RTOL)

    def big_g(self, theta: float) -> float:
        """Minimum of gamma(., theta); negative inside the domain."""
        yc = self.y_crit(theta)
        # substitute a*rate_load*e^{a yc} m0 = b - sigma_lam^2 yc for stability
        jump_term = (self.b - self.sigma_lam**2 * yc) / self.a
        return (
            -self.b * yc
            + 0.5 * self.sigma_lam**2 * yc * yc
            + jump_term
            - self.rate_load
            - self.comp * theta
        )

    def big_g_prime(self, theta: float) -> float:
        yc = self.y_crit(theta)
        scaled_m0 = (self.b - self.sigma_lam**2 * yc) / self.a  # rate_load*e^{a yc} m0
        return scaled_m0 * self.law.mean_ratio(theta) - self.comp

    # -- roots and CGF ----------------------------------------------------

    def smaller_root(self, theta: float) -> float:
        yc = self.y_crit(theta)
        g_min = self.gamma(yc, theta)
        if g_min > TANGENCY_TOL:
            return math.inf
        if g_min >= -TANGENCY_TOL:
            return yc
        lo = min(0.0, yc) - 1.0
        for _ in range(_MAX_EXPAND):
            if self.gamma(lo, theta) > 0.0:
                break
            lo = yc - 2.0 * (yc - lo)
        else:
            raise NumericalError("could not bracket the smaller root of gamma")
        return brentq(
            lambda y: self.gamma(y, theta), lo, yc, xtol=ROOT_XTOL, rtol=_RTOL
        )

    def cgf(self, theta: float) -> float:
        y = self.smaller_root(theta)
        if math.isinf(y):
            return math.inf
        lm0 = self.law.log_m0(theta)
        return (
            0.5 * self.sigma_s**2 * theta * theta
            + self.drift * theta
            + self.b * self.c * y
            + self.rate_base * math.expm1(self.a * y + lm0)
        )

    def cgf_deriv(self, theta: float) -> float:
        y = self.smaller_root(theta)
        if math.isinf(y):
            raise NumericalError(f"theta={theta} is outside the CGF domain")
        lm0 = self.law.log_m0(theta)
        scaled_m0 = math.exp(self.a * y + lm0)
        denom = self.sigma_lam**2 * y - self.b + self.a * self.rate_load * scaled_m0
        if denom >= -1e-12:
            raise NumericalError(
                f"CGF derivative is unbounded at theta={theta} (domain endpoint)"
            )
        ratio1 = self.law.mean_ratio(theta)
        d_prime = (self.comp - self.rate_load * scaled_m0 * ratio1) / denom
        return (
            self.sigma_s**2 * theta
            + self.drift
            + self.b * self.c * d_prime
            + self.rate_base * scaled_m0 * (self.a * d_prime + ratio1)
        )


def _kernel(p: ModelParams) -> _Kernel:
    mu = mu_y(p.jump)
    return _Kernel(
        a=p.a,
        b=p.b,
        c=p.c,
        sigma_s=p.sigma_s,
        sigma_lam=p.sigma_lam,
        rate_base=p.alpha,
        rate_load=p.beta,
        comp=mu * p.beta,
        drift=-(0.5 * p.sigma_s**2 + mu * p.alpha),
        law=p.jump,
    )


def _share_kernel(p: ModelParams) -> _Kernel:
    # Jump terms come from the tilted law and scaled rates; the Brownian drift
    # flips sign under the measure change and the compensator coefficient
    # keeps the original mu_Y * beta load.
    mu = mu_y(p.jump)
    tilted = tilt_share_measure(p)
    return _Kernel(
        a=p.a,
        b=p.b,
        c=p.c,
        sigma_s=p.sigma_s,
        sigma_lam=p.sigma_lam,
        rate_base=tilted.alpha,
        rate_load=tilted.beta,
        comp=mu * p.beta,
        drift=0.5 * p.sigma_s**2 - mu * p.alpha,
        law=tilted.jump,
    )


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def gamma_fn(p: ModelParams, y: float, theta: float) -> float:
    """Auxiliary root function; the CGF is finite where it has a real root in y.

    Convex in ``y`` for fixed ``theta``; vanishes at (0, 0) and (0, 1).
    Raises OverflowError when the exponential term leaves the float range.
    """
    require_valid(p)
    return _kernel(p).gamma(y, theta)


def gamma_smaller_root(p: ModelParams, theta: float) -> float:
    """Smaller real root of ``gamma_fn(p, ., theta)``, or +inf when none exists.

    The root is bracketed between a geometrically expanded left endpoint and
    the unique critical point, then located to ``ROOT_XTOL``.  A tangent
    (double) root at the domain boundary is returned as the critical point.
    """
    require_valid(p)
    return _kernel(p).smaller_root(theta)


@lru_cache(maxsize=64)
def _critical_domain_cached(p: ModelParams) -> CgfDomain:
    k = _kernel(p)
    if p.jump.is_zero:
        # theta drops out of gamma entirely; the root y = 0 persists for all theta
        return CgfDomain(-math.inf, math.inf, "unbounded", None)

    g0 = k.big_g(0.0)
    if g0 > 1e-9:
        raise NumericalError(
            f"domain criterion positive at theta=0 (G(0)={g0}); "
            "inconsistent parameters or evaluation bug"
        )

    # the criterion's derivative must be increasing; sample before trusting the probe
    probe_grid = [-40.0, -10.0, -2.0, 0.0, 2.0, 10.0, 25.0, _CASE_PROBE]
    gps = [k.big_g_prime(t) for t in probe_grid]
    for left, right in zip(gps, gps[1:]):
        if left > right + 1e-9 * max(1.0, abs(left)):
            raise NumericalError("domain criterion derivative is not increasing")

    def expand_left(f: Callable[[float], float], start: float) -> float:
        lo, width = start, 1.0
        for _ in range(_MAX_EXPAND):
            if f(lo) > 0.0:
                return lo
            lo -= width
            width *= 2.0
        raise NumericalError("could not bracket a negative-side domain root")

    if gps[-1] > 0.0:
        # both endpoints finite: locate the minimizer, then the two sign changes
        lo_c = expand_left(lambda t: -k.big_g_prime(t), 0.0)
        theta_c = brentq(k.big_g_prime, lo_c, _CASE_PROBE, xtol=DOMAIN_XTOL, rtol=_RTOL)

        hi = theta_c + 1.0
        for _ in range(_MAX_EXPAND):
            if k.big_g(hi) > 0.0:
                break
            hi = theta_c + 2.0 * (hi - theta_c)
        else:
            raise NumericalError("could not bracket the upper domain endpoint")
        theta_max = brentq(k.big_g, theta_c, hi, xtol=DOMAIN_XTOL, rtol=_RTOL)

        lo = expand_left(k.big_g, theta_c - 1.0)
        theta_min = brentq(k.big_g, lo, theta_c, xtol=DOMAIN_XTOL, rtol=_RTOL)
        return CgfDomain(theta_min, theta_max, "case_two", theta_c)

    # criterion decreasing through the probe: open on the right
    lo = expand_left(k.big_g, -1.0)
    theta_min = brentq(k.big_g, lo, 0.0, xtol=DOMAIN_XTOL, rtol=_RTOL)
    return CgfDomain(theta_min, math.inf, "case_one", None)


def critical_domain(p: ModelParams) -> CgfDomain:
    """Effective domain of :func:`limiting_cgf` with case classification.

    Endpoints are the sign changes of the minimum of ``gamma_fn`` over its
    root variable, located to ``DOMAIN_XTOL``.  The open-right case is decided
    by probing the criterion's slope at a large theta, so a slope that only
    turns positive beyond the probe would be misclassified as open.
    """
    require_valid(p)
    return _critical_domain_cached(p)


def limiting_cgf(p: ModelParams, theta: float) -> float:
    """Long-run cumulant generating function of the log price per unit time.

    Finite on the critical domain (zero at theta = 0 and 1 by the martingale
    normalization), +inf outside it.
    """
    require_valid(p)
    return _kernel(p).cgf(theta)


def limiting_cgf_deriv(p: ModelParams, theta: float) -> float:
    """Analytic derivative of :func:`limiting_cgf`.

    Only defined strictly inside the domain; at the endpoints the implicit
    root's sensitivity diverges and a :class:`NumericalError` is raised.
    """
    require_valid(p)
    return _kernel(p).cgf_deriv(theta)


def share_measure_cgf(p: ModelParams, theta: float) -> float:
    """Long-run CGF of the log price under the stock-weighted (share) measure.

    Evaluated from the tilted jump law and scaled event rates; equals
    ``limiting_cgf(p, theta + 1)``.
    """
    require_valid(p)
    return _share_kernel(p).cgf(theta)


def share_measure_cgf_deriv(p: ModelParams, theta: float) -> float:
    """Analytic derivative of :func:`share_measure_cgf`."""
    require_valid(p)
    return _share_kernel(p).cgf_deriv(theta)


# ---------------------------------------------------------------------------
# finite-time MGF
# ---------------------------------------------------------------------------


def _integrate_forward(p: ModelParams, t: float, theta: float) -> OdeState:
    """Advance the forward system (d, f) from (0, 0) to time ``t``.

    d' is ``gamma_fn`` evaluated at d; f' collects the baseline-rate and
    mean-reversion contributions.  Blow-up is reported as ``d = +inf``.
    """
    k = _kernel(p)
    lm0 = p.jump.log_m0(theta)
    no_root_bound = p.b / p.sigma_lam**2 + 1.0  # every root of gamma lies below this

    def rhs(_t, state):
        d = state[0]
        jump_term = math.expm1(k.a * d + lm0)
        d_dot = (
            -k.b * d + 0.5 * k.sigma_lam**2 * d * d + k.rate_load * jump_term
            - k.comp * theta
        )
        f_dot = k.b * k.c * d + k.rate_base * jump_term
        return (d_dot, f_dot)

    def guard(_t, state):
        return state[0] - BLOWUP_GUARD

    guard.terminal = True
    guard.direction = 1.0

    sol = solve_ivp(
        rhs, (0.0, t), (0.0, 0.0), method="RK45", rtol=1e-10, atol=1e-12, events=guard
    )
    if sol.status == 1:  # guard event fired
        return OdeState(float(sol.t[-1]), math.inf, math.inf)
    if sol.status == 0:
        return OdeState(t, float(sol.y[0, -1]), float(sol.y[1, -1]))
    # step-size underflow: certify blow-up only when d has left the region
    # where a root could still stop it
    d_last = float(sol.y[0, -1])
    if d_last > no_root_bound:
        return OdeState(float(sol.t[-1]), math.inf, math.inf)
    raise NumericalError(
        f"ODE step size underflow at t={sol.t[-1]} with d={d_last}: {sol.message}"
    )


def finite_time_mgf(
    p: ModelParams, t: float, theta: float, lambda0: Optional[float] = None
) -> float:
    """E[e^{theta X_t}] via the forward ODE system, or +inf past blow-up.

    ``lambda0`` defaults to the value stored on ``p``.  Exact 1.0 is returned
    for ``t == 0`` or ``theta == 0`` (the zero solution solves the system).
    """
    require_valid(p)
    if t < 0.0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if lambda0 is None:
        lambda0 = p.lambda0
    if lambda0 < 0.0:
        raise ValueError(f"lambda0 must be nonnegative, got {lambda0}")
    if t == 0.0 or theta == 0.0:
        return 1.0
    state = _integrate_forward(p, t, theta)
    if math.isinf(state.d):
        return math.inf
    mu = mu_y(p.jump)
    exponent = (
        (-0.5 * theta + 0.5 * theta * theta) * p.sigma_s**2 - theta * mu * p.alpha
    ) * t + state.d * lambda0 + state.f
    try:
        return math.exp(exponent)
    except OverflowError:
        return math.inf
