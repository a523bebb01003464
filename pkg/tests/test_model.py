import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from affine_smile.model import (
    ConstantJumps,
    GaussianJumps,
    MixtureJumps,
    ModelParams,
    jump_exp_moments,
    mu_y,
    tilt_share_measure,
    validate_params,
)
from conftest import make_params


def gaussian_moment_quadrature(mean, var, theta, power):
    """Independent oracle: integrate y^power * e^{theta y} against the density."""
    sd = math.sqrt(var)

    def integrand(y):
        return y**power * math.exp(theta * y) * math.exp(-0.5 * ((y - mean) / sd) ** 2)

    value, _ = quad(integrand, mean - 12 * sd, mean + 12 * sd, limit=200)
    return value / (sd * math.sqrt(2 * math.pi))


class TestJumpMoments:
    def test_constant_zero(self):
        assert jump_exp_moments(ConstantJumps(0.0), 3.7) == (1.0, 0.0, 0.0)

    def test_centered_gaussian_at_zero(self):
        m0, m1, m2 = jump_exp_moments(GaussianJumps(0.0, 0.3), 0.0)
        assert m0 == 1.0
        assert m1 == 0.0
        assert m2 == pytest.approx(0.3, abs=0.0)

    def test_gaussian_closed_form_vs_quadrature(self):
        law = GaussianJumps(0.0, 0.1)
        m0, m1, m2 = jump_exp_moments(law, 1.0)
        assert m0 == pytest.approx(math.exp(0.05), rel=1e-15)
        assert m1 == pytest.approx(0.1 * math.exp(0.05), rel=1e-15)
        for power, value in enumerate((m0, m1, m2)):
            oracle = gaussian_moment_quadrature(0.0, 0.1, 1.0, power)
            assert value == pytest.approx(oracle, rel=1e-10)

    def test_gaussian_offset_vs_quadrature(self):
        law = GaussianJumps(-0.2, 0.5)
        for theta in (-1.5, 0.3, 2.0):
            m0, m1, m2 = jump_exp_moments(law, theta)
            for power, value in enumerate((m0, m1, m2)):
                oracle = gaussian_moment_quadrature(-0.2, 0.5, theta, power)
                assert value == pytest.approx(oracle, rel=1e-9)

    def test_mixture_sums(self):
        law = MixtureJumps(((0.25, -0.3), (0.75, 0.1)))
        theta = 0.8
        m0 = 0.25 * math.exp(-0.24) + 0.75 * math.exp(0.08)
        m1 = 0.25 * -0.3 * math.exp(-0.24) + 0.75 * 0.1 * math.exp(0.08)
        got = jump_exp_moments(law, theta)
        assert got[0] == pytest.approx(m0, rel=1e-14)
        assert got[1] == pytest.approx(m1, rel=1e-14)

    def test_overflow_reported(self):
        with pytest.raises(OverflowError):
            jump_exp_moments(GaussianJumps(0.0, 1.0), 1e6)

    def test_non_finite_theta_rejected(self):
        with pytest.raises(ValueError):
            jump_exp_moments(GaussianJumps(0.0, 1.0), math.nan)


class TestMuY:
    def test_constant_zero(self):
        assert mu_y(ConstantJumps(0.0)) == 0.0

    def test_gaussian_value(self):
        assert mu_y(GaussianJumps(0.0, 0.1)) == pytest.approx(
            math.exp(0.05) - 1.0, abs=1e-15
        )
        assert mu_y(GaussianJumps(0.0, 0.1)) == pytest.approx(0.051271, abs=1e-6)

    def test_log_two_point_mass(self):
        assert mu_y(MixtureJumps(((1.0, math.log(2.0)),))) == pytest.approx(1.0, rel=1e-15)


class TestTilt:
    def test_constant_zero_is_identity(self, no_jumps):
        assert tilt_share_measure(no_jumps) == no_jumps

    def test_gaussian_tilt_shifts_mean(self, baseline):
        tilted = tilt_share_measure(baseline)
        assert tilted.jump == GaussianJumps(0.1, 0.1)
        scale = math.exp(0.05)
        assert tilted.alpha == pytest.approx(baseline.alpha * scale, rel=1e-15)
        assert tilted.beta == pytest.approx(baseline.beta * scale, rel=1e-15)
        for name in ("a", "b", "c", "sigma_s", "sigma_lam", "lambda0"):
            assert getattr(tilted, name) == getattr(baseline, name)

    def test_tilted_expectation_identity(self):
        # E[f(Y_tilted)] == E[f(Y) e^Y] / E[e^Y] checked by quadrature
        law = GaussianJumps(0.3, 0.2)
        tilted = law.tilted()
        for theta in (0.5, -1.0):
            lhs = jump_exp_moments(tilted, theta)[0]
            rhs = gaussian_moment_quadrature(0.3, 0.2, theta + 1.0, 0) / math.exp(
                law.log_m0(1.0)
            )
            assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_mixture_reweighting(self):
        law = MixtureJumps(((0.5, 0.0), (0.5, math.log(3.0))))
        tilted = law.tilted()
        # weights become proportional to w_i e^{y_i} = (0.5, 1.5)
        assert tilted.components[0][0] == pytest.approx(0.25, rel=1e-14)
        assert tilted.components[1][0] == pytest.approx(0.75, rel=1e-14)

    def test_tilt_can_break_stationarity(self):
        # scaling beta by E[e^Y] can push a*beta past b; the report says so
        p = make_params(beta=0.9, jump=GaussianJumps(0.0, 2.0))
        assert validate_params(p).valid
        tilted = tilt_share_measure(p)
        report = validate_params(tilted)
        assert not report.valid
        assert any(code == "stationarity" for code, _ in report.violations)


class TestValidation:
    def test_baseline_valid(self, baseline):
        report = validate_params(baseline)
        assert report.valid and not report.violations

    def test_stationarity_violation(self):
        p = make_params(a=3.0, beta=0.5)
        report = validate_params(p)
        assert not report.valid
        assert [c for c, _ in report.violations] == ["stationarity"]

    def test_boundary_intensity_condition_accepted(self):
        # 2bc == sigma_lam^2 exactly
        p = make_params(b=1.0, c=0.05, sigma_lam=math.sqrt(0.1))
        assert validate_params(p).valid

    def test_nan_reported_not_raised(self):
        p = make_params(b=math.nan)
        report = validate_params(p)
        assert not report.valid
        assert any(code == "finite" for code, _ in report.violations)

    def test_negative_lambda0(self):
        report = validate_params(make_params(lambda0=-1.0))
        assert any(code == "lambda0" for code, _ in report.violations)

    def test_lambda0_defaults_to_c(self):
        p = make_params()
        assert p.lambda0 == p.c


# -- property tests ---------------------------------------------------------

gaussians = st.builds(
    GaussianJumps,
    mean=st.floats(-2.0, 2.0),
    variance=st.floats(0.01, 4.0),
)
constants = st.builds(ConstantJumps, value=st.floats(-2.0, 2.0))


@st.composite
def mixtures(draw):
    n = draw(st.integers(1, 4))
    raw = [draw(st.floats(0.05, 1.0)) for _ in range(n)]
    total = sum(raw)
    values = [draw(st.floats(-2.0, 2.0)) for _ in range(n)]
    return MixtureJumps(tuple((w / total, y) for w, y in zip(raw, values)))


laws = st.one_of(gaussians, constants, mixtures())


@given(law=laws, theta=st.floats(-5.0, 5.0))
def test_cauchy_schwarz_between_tilted_moments(law, theta):
    m0, m1, m2 = jump_exp_moments(law, theta)
    assert m0 > 0.0
    assert m2 >= 0.0
    assert m2 * m0 >= m1 * m1 * (1.0 - 1e-12) - 1e-300


@given(law=laws)
def test_mu_y_matches_moments_exactly(law):
    assert mu_y(law) == jump_exp_moments(law, 1.0)[0] - 1.0


@given(law=laws)
def test_tilt_preserves_normalization(law):
    tilted = law.tilted()
    assert jump_exp_moments(tilted, 0.0)[0] == pytest.approx(1.0, rel=1e-12)


anything = st.floats(allow_nan=True, allow_infinity=True)


@settings(max_examples=200)
@given(
    a=anything, b=anything, c=anything, alpha=anything, beta=anything,
    sigma_s=anything, sigma_lam=anything, lambda0=anything,
)
def test_validate_is_total(a, b, c, alpha, beta, sigma_s, sigma_lam, lambda0):
    p = ModelParams(
        a=a, b=b, c=c, alpha=alpha, beta=beta,
        sigma_s=sigma_s, sigma_lam=sigma_lam,
        jump=GaussianJumps(0.0, 0.1), lambda0=lambda0,
    )
    report = validate_params(p)
    assert report.valid == (len(report.violations) == 0)


def test_jump_law_constructors_reject_bad_input():
    with pytest.raises(ValueError):
        GaussianJumps(0.0, -1.0)
    with pytest.raises(ValueError):
        GaussianJumps(math.inf, 1.0)
    with pytest.raises(ValueError):
        MixtureJumps(((0.5, 0.0), (0.6, 1.0)))  # weights sum to 1.1
    with pytest.raises(ValueError):
        MixtureJumps(((-0.1, 0.0), (1.1, 1.0)))


def test_sampling_matches_law_mean():
    rng = np.random.Generator(np.random.Philox(5))
    law = MixtureJumps(((0.3, -1.0), (0.7, 2.0)))
    draws = law.sample(rng, 200_000)
    assert draws.mean() == pytest.approx(0.3 * -1.0 + 0.7 * 2.0, abs=0.02)
