"""Implied-volatility asymptotics for a self-exciting affine jump-diffusion model."""

from .cumulant import (
    CgfDomain,
    OdeState,
    critical_domain,
    finite_time_mgf,
    gamma_fn,
    gamma_smaller_root,
    limiting_cgf,
    limiting_cgf_deriv,
    share_measure_cgf,
    share_measure_cgf_deriv,
)
from .errors import AffineSmileError, ConfigError, InvalidModelError, NumericalError
from .ldp import (
    RateCurve,
    RatePoint,
    make_rate_curve,
    rate_I,
    rate_I_bar,
    x_boundaries,
)
from .model import (
    ConstantJumps,
    GaussianJumps,
    MixtureJumps,
    ModelParams,
    ValidationReport,
    jump_exp_moments,
    mu_y,
    require_valid,
    tilt_share_measure,
    validate_params,
)
from .pricing import (
    BsQuote,
    McConfig,
    McEstimate,
    TerminalSample,
    bs_call,
    bs_put,
    implied_vol,
    mc_mgf,
    mc_option_price,
    simulate_paths,
)
from .smile import WingResult, blowup_time, critical_moment, sigma_inf_sq, wing_slope

__version__ = "0.1.0"
