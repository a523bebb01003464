import math

import numpy as np
import pytest

from affine_smile.cumulant import (
    critical_domain,
    finite_time_mgf,
    gamma_fn,
    gamma_smaller_root,
    limiting_cgf,
    limiting_cgf_deriv,
    share_measure_cgf,
)
from affine_smile.errors import InvalidModelError, NumericalError
from affine_smile.model import ConstantJumps, GaussianJumps, mu_y
from affine_smile.pricing import McConfig, mc_mgf
from conftest import make_params


class TestGammaFn:
    def test_zero_at_origin(self, baseline):
        assert gamma_fn(baseline, 0.0, 0.0) == 0.0

    def test_zero_at_unit_tilt(self, baseline):
        assert gamma_fn(baseline, 0.0, 1.0) == pytest.approx(0.0, abs=1e-16)

    def test_constant_zero_jumps_theta_independent(self, no_jumps):
        for y in (-1.0, 0.3, 2.0):
            values = {gamma_fn(no_jumps, y, th) for th in (-3.0, 0.0, 5.0)}
            assert len(values) == 1

    def test_matches_direct_formula(self, baseline):
        p = baseline
        mu = mu_y(p.jump)
        for y, th in ((-0.5, 0.7), (0.2, -1.3), (1.0, 2.0)):
            m0 = math.exp(th * th * 0.05)  # E[e^{th Y}], Y ~ N(0, 0.1)
            expected = (
                -p.b * y
                + 0.5 * p.sigma_lam**2 * y * y
                + p.beta * (math.exp(p.a * y) * m0 - 1.0)
                - th * mu * p.beta
            )
            assert gamma_fn(p, y, th) == pytest.approx(expected, rel=1e-12, abs=1e-14)

    def test_convex_in_y(self, baseline):
        ys = np.linspace(-3.0, 3.0, 41)
        vals = [gamma_fn(baseline, y, 0.8) for y in ys]
        second = np.diff(vals, 2)
        assert (second >= -1e-10).all()

    def test_invalid_params_rejected(self):
        with pytest.raises(InvalidModelError):
            gamma_fn(make_params(a=3.0, beta=0.5), 0.0, 0.0)


class TestSmallerRoot:
    def test_root_at_zero_tilt(self, baseline):
        assert gamma_smaller_root(baseline, 0.0) == pytest.approx(0.0, abs=1e-12)

    def test_root_at_unit_tilt(self, baseline):
        # b > a*beta*E[e^Y] makes 0 the smaller root; confirm with a scan
        p = baseline
        assert p.b > p.a * p.beta * (1.0 + mu_y(p.jump))
        root = gamma_smaller_root(p, 1.0)
        assert root == pytest.approx(0.0, abs=1e-12)
        ys = np.linspace(-5.0, -1e-3, 500)
        assert all(gamma_fn(p, y, 1.0) > 0.0 for y in ys)

    def test_outside_domain_is_inf(self, baseline):
        dom = critical_domain(baseline)
        assert math.isinf(gamma_smaller_root(baseline, dom.theta_max + 0.1))
        assert math.isinf(gamma_smaller_root(baseline, dom.theta_min - 0.1))

    def test_root_certificate(self, baseline):
        for th in (-2.0, -0.5, 0.5, 2.0, 4.0):
            root = gamma_smaller_root(baseline, th)
            assert math.isfinite(root)
            assert abs(gamma_fn(baseline, root, th)) <= 1e-10
            # derivative nonpositive at the smaller root
            h = 1e-7
            slope = (gamma_fn(baseline, root + h, th) - gamma_fn(baseline, root - h, th)) / (2 * h)
            assert slope <= 1e-6


class TestDomain:
    def test_contains_unit_interval(self, baseline):
        dom = critical_domain(baseline)
        assert dom.theta_min <= 0.0 <= dom.theta_max
        assert dom.theta_min <= 1.0 <= dom.theta_max
        assert dom.case_tag == "case_two"
        assert dom.theta_min < dom.theta_c < dom.theta_max

    def test_finite_theta_max_above_one(self, baseline):
        dom = critical_domain(baseline)
        assert math.isfinite(dom.theta_max)
        assert dom.theta_max > 1.0

    def test_constant_zero_unbounded(self, no_jumps):
        dom = critical_domain(no_jumps)
        assert dom.case_tag == "unbounded"
        assert math.isinf(dom.theta_min) and math.isinf(dom.theta_max)

    def test_domain_matches_brute_force_scan(self, baseline):
        """Oracle: dense scan of the minimum of gamma over y."""
        dom = critical_domain(baseline)
        ys = np.linspace(-40.0, 5.0, 4000)
        for th, inside in [
            (dom.theta_min - 0.05, False),
            (dom.theta_min + 0.05, True),
            (dom.theta_max - 0.05, True),
            (dom.theta_max + 0.05, False),
        ]:
            brute_min = min(gamma_fn(baseline, y, th) for y in ys)
            assert (brute_min <= 0.0) == inside

    def test_endpoints_are_sign_changes(self, baseline):
        dom = critical_domain(baseline)
        eps = 1e-6
        assert math.isfinite(gamma_smaller_root(baseline, dom.theta_max - eps))
        assert math.isinf(gamma_smaller_root(baseline, dom.theta_max + eps))
        assert math.isfinite(gamma_smaller_root(baseline, dom.theta_min + eps))
        assert math.isinf(gamma_smaller_root(baseline, dom.theta_min - eps))


class TestLimitingCgf:
    def test_normalization(self, baseline):
        assert abs(limiting_cgf(baseline, 0.0)) < 1e-10
        assert abs(limiting_cgf(baseline, 1.0)) < 1e-10

    def test_outside_domain_inf(self, baseline):
        dom = critical_domain(baseline)
        assert math.isinf(limiting_cgf(baseline, dom.theta_max + 0.01))

    def test_finite_at_endpoints(self, baseline):
        dom = critical_domain(baseline)
        assert math.isfinite(limiting_cgf(baseline, dom.theta_max))
        assert math.isfinite(limiting_cgf(baseline, dom.theta_min))

    def test_black_scholes_reduction(self, no_jumps):
        s = no_jumps.sigma_s**2
        for th in (-2.0, 0.3, 1.7):
            assert limiting_cgf(no_jumps, th) == pytest.approx(
                0.5 * s * (th * th - th), abs=1e-12
            )

    def test_convex_on_grid(self, baseline):
        dom = critical_domain(baseline)
        grid = np.linspace(dom.theta_min + 1e-6, dom.theta_max - 1e-6, 201)
        vals = np.array([limiting_cgf(baseline, t) for t in grid])
        assert (np.diff(vals, 2) >= -1e-8).all()

    def test_independent_of_lambda0(self, baseline):
        other = make_params(lambda0=5.0)
        for th in (-1.0, 0.5, 2.0):
            assert limiting_cgf(baseline, th) == limiting_cgf(other, th)


class TestCgfDerivative:
    def test_matches_central_differences(self, baseline):
        h = 1e-5
        for th in (-1.0, 0.0, 0.5, 1.0, 2.5):
            fd = (limiting_cgf(baseline, th + h) - limiting_cgf(baseline, th - h)) / (2 * h)
            assert limiting_cgf_deriv(baseline, th) == pytest.approx(fd, rel=1e-6)

    def test_black_scholes_reduction(self, no_jumps):
        s = no_jumps.sigma_s**2
        for th in (-1.0, 0.25, 2.0):
            assert limiting_cgf_deriv(no_jumps, th) == pytest.approx(
                s * th - 0.5 * s, abs=1e-10
            )

    def test_rejected_at_endpoint(self, baseline):
        dom = critical_domain(baseline)
        with pytest.raises(NumericalError):
            limiting_cgf_deriv(baseline, dom.theta_max + 0.01)


class TestShareMeasure:
    def test_duality_identity(self, baseline):
        for th in (-0.5, 0.0, 0.5):
            lhs = share_measure_cgf(baseline, th)
            rhs = limiting_cgf(baseline, th + 1.0)
            assert lhs == pytest.approx(rhs, abs=1e-8)

    def test_duality_for_mixture_law(self):
        from affine_smile.model import MixtureJumps

        p = make_params(jump=MixtureJumps(((0.4, -0.2), (0.6, 0.15))))
        for th in (-0.5, 0.25):
            assert share_measure_cgf(p, th) == pytest.approx(
                limiting_cgf(p, th + 1.0), abs=1e-9
            )


class TestFiniteTimeMgf:
    def test_exact_one_at_zero_tilt(self, baseline):
        for t in (0.1, 1.0, 7.3):
            assert finite_time_mgf(baseline, t, 0.0) == 1.0

    def test_exact_one_at_time_zero(self, baseline):
        for th in (-2.0, 0.5, 3.0):
            assert finite_time_mgf(baseline, 0.0, th) == 1.0

    def test_converges_to_limiting_cgf(self, baseline):
        # gap decays like 1/t: the t=200 gap must be within 10x of half the t=100 gap
        for th in (-0.5, 0.5, 1.5):
            lam = limiting_cgf(baseline, th)
            gap100 = abs(math.log(finite_time_mgf(baseline, 100.0, th)) / 100.0 - lam)
            gap200 = abs(math.log(finite_time_mgf(baseline, 200.0, th)) / 200.0 - lam)
            assert gap200 <= 10.0 * 0.5 * gap100 + 1e-14

    def test_blowup_sentinel(self, baseline):
        dom = critical_domain(baseline)
        assert math.isinf(finite_time_mgf(baseline, 10.0, dom.theta_max + 0.5))

    def test_monotone_in_lambda0(self, baseline):
        # at tilts above 1 the ODE state is positive, so the MGF grows with lambda0
        lo = finite_time_mgf(baseline, 1.0, 1.5, lambda0=0.01)
        hi = finite_time_mgf(baseline, 1.0, 1.5, lambda0=1.0)
        assert lo < hi

    def test_against_monte_carlo(self, baseline):
        cfg = McConfig(n_paths=100_000, dt=1e-3, horizon=1.0, seed=914)
        est = mc_mgf(baseline, cfg, 0.5)
        ode = finite_time_mgf(baseline, 1.0, 0.5)
        assert abs(est.mean - ode) < 3.0 * est.std_error

    def test_negative_time_rejected(self, baseline):
        with pytest.raises(ValueError):
            finite_time_mgf(baseline, -1.0, 0.5)
