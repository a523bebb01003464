import math

import pytest

from affine_smile.model import ConstantJumps, GaussianJumps, ModelParams

# parameter set used throughout: the self-excitation pair (a, beta) at its
# middle setting, everything else at the study defaults
BASELINE = dict(
    a=0.5,
    b=1.0,
    c=0.05,
    alpha=1.0,
    beta=0.25,
    sigma_s=math.sqrt(0.1),
    sigma_lam=math.sqrt(0.1),
)


@pytest.fixture(scope="session")
def baseline() -> ModelParams:
    return ModelParams(jump=GaussianJumps(0.0, 0.1), **BASELINE)


@pytest.fixture(scope="session")
def no_jumps() -> ModelParams:
    """Same coefficients but zero jump sizes: the pure Black-Scholes limit."""
    return ModelParams(jump=ConstantJumps(0.0), **BASELINE)


def make_params(**overrides) -> ModelParams:
    kwargs = dict(BASELINE, jump=GaussianJumps(0.0, 0.1))
    kwargs.update(overrides)
    return ModelParams(**kwargs)
