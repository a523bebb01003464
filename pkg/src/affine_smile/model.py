"""Model parameters, jump-size laws and the share-measure tilt.

The stock follows a jump-diffusion whose event intensity ``alpha + beta*lambda_t``
is driven by a self-exciting square-root process ``lambda_t`` (mean reversion
``b`` towards ``c``, diffusion ``sigma_lam``, upward kick ``a`` at each event).
Jump sizes on the log price are i.i.d. with law ``jump``; every formula in the
package needs their exponentially tilted moments in closed form, which is why
only variants with exact tilts are supported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np

from .errors import InvalidModelError

__all__ = [
    "GaussianJumps",
    "ConstantJumps",
    "MixtureJumps",
    "JumpLaw",
    "ModelParams",
    "ValidationReport",
    "validate_params",
    "require_valid",
    "jump_exp_moments",
    "mu_y",
    "tilt_share_measure",
]

_LOG_FLOAT_MAX = math.log(np.finfo(float).max)


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class GaussianJumps:
    """Normally distributed log-price jumps."""

    mean: float
    variance: float

    def __post_init__(self):
        _require_finite("mean", self.mean)
        v = _require_finite("variance", self.variance)
        if v <= 0.0:
            raise ValueError(f"variance must be positive, got {v}")

    def log_m0(self, theta: float) -> float:
        return theta * self.mean + 0.5 * theta * theta * self.variance

    def mean_ratio(self, theta: float) -> float:
        # E[Y e^{tY}] / E[e^{tY}] is the mean of the tilted normal
        return self.mean + theta * self.variance

    def second_ratio(self, theta: float) -> float:
        m = self.mean + theta * self.variance
        return m * m + self.variance

    def tilted(self) -> "GaussianJumps":
        return GaussianJumps(self.mean + self.variance, self.variance)

    @property
    def is_zero(self) -> bool:
        return False

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.mean + math.sqrt(self.variance) * rng.standard_normal(n)


@dataclass(frozen=True)
class ConstantJumps:
    """Degenerate law: every jump moves the log price by ``value``."""

    value: float

    def __post_init__(self):
        _require_finite("value", self.value)

    def log_m0(self, theta: float) -> float:
        return theta * self.value

    def mean_ratio(self, theta: float) -> float:
        return self.value

    def second_ratio(self, theta: float) -> float:
        return self.value * self.value

    def tilted(self) -> "ConstantJumps":
        return self

    @property
    def is_zero(self) -> bool:
        return self.value == 0.0

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return np.full(n, self.value)


@dataclass(frozen=True)
class MixtureJumps:
    """Finite mixture of point masses, given as (weight, value) pairs."""

    components: tuple[tuple[float, float], ...]

    def __post_init__(self):
        comps = tuple((float(w), float(y)) for w, y in self.components)
        if not comps:
            raise ValueError("mixture needs at least one component")
        for w, y in comps:
            if not (math.isfinite(w) and math.isfinite(y)):
                raise ValueError("mixture weights and values must be finite")
            if w < 0.0:
                raise ValueError(f"mixture weight must be nonnegative, got {w}")
        total = math.fsum(w for w, _ in comps)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"mixture weights must sum to 1 (got {total!r})")
        object.__setattr__(self, "components", comps)

    def _shifted_terms(self, theta: float) -> tuple[float, list[tuple[float, float]]]:
        # log-sum-exp guard: exponents theta*y can dwarf float range individually
        exps = [theta * y for _, y in self.components]
        shift = max(exps)
        terms = [(w * math.exp(e - shift), y) for (w, y), e in zip(self.components, exps)]
        return shift, terms

    def log_m0(self, theta: float) -> float:
        shift, terms = self._shifted_terms(theta)
        return shift + math.log(math.fsum(t for t, _ in terms))

    def mean_ratio(self, theta: float) -> float:
        _, terms = self._shifted_terms(theta)
        denom = math.fsum(t for t, _ in terms)
        return math.fsum(t * y for t, y in terms) / denom

    def second_ratio(self, theta: float) -> float:
        _, terms = self._shifted_terms(theta)
        denom = math.fsum(t for t, _ in terms)
        return math.fsum(t * y * y for t, y in terms) / denom

    def tilted(self) -> "MixtureJumps":
        refs = [w * math.exp(y) for w, y in self.components]
        total = math.fsum(refs)
        return MixtureJumps(tuple((r / total, y) for r, (_, y) in zip(refs, self.components)))

    @property
    def is_zero(self) -> bool:
        return all(y == 0.0 for w, y in self.components if w > 0.0)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        weights = np.array([w for w, _ in self.components])
        values = np.array([y for _, y in self.components])
        idx = rng.choice(len(values), size=n, p=weights / weights.sum())
        return values[idx]


JumpLaw = Union[GaussianJumps, ConstantJumps, MixtureJumps]


def jump_exp_moments(law: JumpLaw, theta: float) -> tuple[float, float, float]:
    """Exponentially tilted moments (E[e^{tY}], E[Y e^{tY}], E[Y^2 e^{tY}]).

    Closed form per law variant.  Raises OverflowError when E[e^{tY}] exceeds
    the float range instead of silently returning infinity.
    """
    theta = _require_finite("theta", theta)
    lm0 = law.log_m0(theta)
    if lm0 > _LOG_FLOAT_MAX:
        raise OverflowError(f"E[exp({theta}*Y)] overflows the float range")
    m0 = math.exp(lm0)
    return m0, law.mean_ratio(theta) * m0, law.second_ratio(theta) * m0


def mu_y(law: JumpLaw) -> float:
    """Compensator coefficient E[e^Y] - 1 of the jump law.

    Computed through :func:`jump_exp_moments` so the two routes agree exactly.
    """
    return jump_exp_moments(law, 1.0)[0] - 1.0


@dataclass(frozen=True)
class ModelParams:
    """All model coefficients plus the jump-size law.

    Construction performs no admissibility checks so that
    :func:`validate_params` can report on arbitrary numeric input; call
    :func:`require_valid` (or check the report) before handing parameters to
    the numerical routines.
    """

    a: float            # intensity kick per event
    b: float            # intensity mean-reversion speed
    c: float            # intensity mean-reversion level
    alpha: float        # baseline event intensity
    beta: float         # intensity loading of the event rate
    sigma_s: float      # stock diffusion volatility
    sigma_lam: float    # intensity diffusion volatility
    jump: JumpLaw
    lambda0: float = None  # type: ignore[assignment]  # defaults to c below

    def __post_init__(self):
        if self.lambda0 is None:
            # the long-run CGF never reads lambda0; c is a neutral finite-time default
            object.__setattr__(self, "lambda0", float(self.c))

    def with_jump(self, jump: JumpLaw) -> "ModelParams":
        return replace(self, jump=jump)


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple[tuple[str, str], ...] = field(default_factory=tuple)


_POSITIVE_FIELDS = ("a", "b", "c", "alpha", "beta", "sigma_s", "sigma_lam")


def validate_params(p: ModelParams) -> ValidationReport:
    """Check the admissibility conditions; total over any numeric input.

    Rules reported by identifier:
      ``finite``        every scalar field is a finite number
      ``positivity``    a, b, c, alpha, beta, sigma_s, sigma_lam > 0
      ``stationarity``  b > a*beta (unique stationary intensity exists)
      ``intensity-nonneg``  2*b*c >= sigma_lam**2 (intensity stays nonnegative)
      ``lambda0``       lambda0 >= 0
    """
    violations: list[tuple[str, str]] = []
    finite = True
    for name in _POSITIVE_FIELDS + ("lambda0",):
        value = getattr(p, name)
        if not (isinstance(value, (int, float)) and math.isfinite(value)):
            violations.append(("finite", f"{name} is not a finite number: {value!r}"))
            finite = False
    if finite:
        for name in _POSITIVE_FIELDS:
            if getattr(p, name) <= 0.0:
                violations.append(("positivity", f"{name} must be strictly positive"))
        if not p.b > p.a * p.beta:
            violations.append(
                ("stationarity", f"b > a*beta required, got b={p.b}, a*beta={p.a * p.beta}")
            )
        # products instead of ** so near-max floats overflow to inf, not raise
        sig_sq = p.sigma_lam * p.sigma_lam
        if not 2.0 * p.b * p.c >= sig_sq:
            violations.append(
                (
                    "intensity-nonneg",
                    f"2*b*c >= sigma_lam^2 required, got 2bc={2.0 * p.b * p.c}, "
                    f"sigma_lam^2={sig_sq}",
                )
            )
        if p.lambda0 < 0.0:
            violations.append(("lambda0", "initial intensity must be nonnegative"))
    return ValidationReport(valid=not violations, violations=tuple(violations))


def require_valid(p: ModelParams) -> ModelParams:
    """Raise :class:`InvalidModelError` unless ``p`` passes validation."""
    report = validate_params(p)
    if not report.valid:
        raise InvalidModelError(report)
    return p


def tilt_share_measure(p: ModelParams) -> ModelParams:
    """Parameters seen under the measure weighted by the stock itself.

    The jump law is reweighted by e^y / E[e^Y] (a Gaussian's mean shifts by its
    variance, a constant is unchanged, mixture weights pick up e^{y_i}) and the
    event-rate pair (alpha, beta) scales by E[e^Y].  All diffusion and
    mean-reversion coefficients are untouched.  The result may violate the
    stationarity condition b > a*beta even when the input satisfies it;
    validate the output where that matters.
    """
    require_valid(p)
    scale = 1.0 + mu_y(p.jump)
    return replace(
        p,
        alpha=p.alpha * scale,
        beta=p.beta * scale,
        jump=p.jump.tilted(),
    )
