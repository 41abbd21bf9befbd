import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grwsim import constitutive as cn

SCENARIO1 = cn.ExpModelParams(theta_res=0.06, theta_sat=0.36, k_sat=2.77e-6, alpha=10.0)
# hypothetical loam, meter units: Ksat = 6e-4 cm/s, alpha = 0.01 1/cm
WARRICK = cn.VgmParams(theta_res=0.1, theta_sat=0.45, k_sat=6.0e-6, alpha=1.0, n=1.5)


class TestExpModel:
    def test_saturated_branch(self):
        assert cn.theta_exp(0.0, SCENARIO1) == SCENARIO1.theta_sat
        assert cn.theta_exp(0.5, SCENARIO1) == SCENARIO1.theta_sat

    def test_direct_evaluation(self):
        # 0.06 + 0.3*exp(-1)
        assert cn.theta_exp(-0.1, SCENARIO1) == pytest.approx(0.17036383235143271, rel=1e-12)

    def test_dry_limit(self):
        assert cn.theta_exp(-1e3, SCENARIO1) == pytest.approx(SCENARIO1.theta_res, abs=1e-15)

    def test_conductivity_endpoints(self):
        assert cn.k_exp(SCENARIO1.theta_sat, SCENARIO1) == SCENARIO1.k_sat
        assert cn.k_exp(SCENARIO1.theta_res, SCENARIO1) == 0.0

    def test_conductivity_midpoint(self):
        assert cn.k_exp(0.21, SCENARIO1) == pytest.approx(1.385e-6, rel=1e-12)

    def test_conductivity_domain_error(self):
        with pytest.raises(ValueError):
            cn.k_exp(0.05, SCENARIO1)
        with pytest.raises(ValueError):
            cn.k_exp(0.4, SCENARIO1)

    def test_continuity_at_saturation(self):
        eps = 1e-12
        assert abs(cn.theta_exp(-eps, SCENARIO1) - SCENARIO1.theta_sat) <= 1e-10 * SCENARIO1.theta_sat
        k_left = cn.k_exp(cn.theta_exp(-eps, SCENARIO1), SCENARIO1)
        assert abs(k_left - SCENARIO1.k_sat) <= 1e-10 * SCENARIO1.k_sat

    def test_monotone(self):
        psi = np.linspace(-50.0, 1.0, 1000)
        th = cn.theta_exp(psi, SCENARIO1)
        assert np.all(np.diff(th) >= 0.0)


class TestVgmModel:
    def test_m_derived(self):
        assert WARRICK.m == pytest.approx(1.0 - 1.0 / 1.5, rel=1e-15)
        with pytest.raises(ValueError):
            cn.VgmParams(0.1, 0.45, 6e-6, 1.0, n=1.0)

    def test_saturated_branch(self):
        assert cn.theta_vgm(0.5, WARRICK) == WARRICK.theta_sat
        assert cn.k_vgm(0.5, WARRICK) == WARRICK.k_sat
        assert cn.k_vgm(0.0, WARRICK) == WARRICK.k_sat

    def test_initial_pressure_loam(self):
        # paper-quoted inversion at the Warrick initial water content
        psi_i = cn.psi_vgm(0.17, WARRICK)
        assert psi_i == pytest.approx(-24.87, abs=0.005)
        assert cn.theta_vgm(psi_i, WARRICK) == pytest.approx(0.17, abs=1e-3)

    def test_dry_limit(self):
        # retention tail decays like (-alpha*psi)^(-n*m), i.e. psi^(-1/2) here
        assert cn.theta_vgm(-1e9, WARRICK) == pytest.approx(WARRICK.theta_res, abs=2e-5)
        assert cn.k_vgm(-1e9, WARRICK) <= 1e-12 * WARRICK.k_sat

    def test_k_at_initial_pressure(self):
        # frozen from an mpmath 50-digit evaluation of the closed form
        assert cn.k_vgm(-24.86648825382451, WARRICK) == pytest.approx(
            1.9183470968914846e-11, rel=1e-10
        )

    def test_inverse_round_trip(self):
        psi = -np.logspace(-3, 3, 200)
        theta = cn.theta_vgm(psi, WARRICK)
        back = cn.psi_vgm(theta, WARRICK)
        assert np.allclose(back, psi, rtol=1e-10)

    def test_inverse_unbounded(self):
        with pytest.raises(ValueError):
            cn.psi_vgm(WARRICK.theta_sat, WARRICK)
        with pytest.raises(ValueError):
            cn.psi_vgm(WARRICK.theta_res, WARRICK)

    def test_continuity_at_saturation(self):
        eps = 1e-12
        assert abs(cn.theta_vgm(-eps, WARRICK) - WARRICK.theta_sat) <= 1e-10
        assert abs(cn.k_vgm(-eps, WARRICK) - WARRICK.k_sat) <= 1e-10 * WARRICK.k_sat

    def test_monotone(self):
        psi = np.linspace(-100.0, 1.0, 1000)
        assert np.all(np.diff(cn.theta_vgm(psi, WARRICK)) >= 0.0)
        assert np.all(np.diff(cn.k_vgm(psi, WARRICK)) >= 0.0)

    @given(st.floats(min_value=-500.0, max_value=-1e-2))
    @settings(max_examples=100, deadline=None)
    def test_dtheta_matches_finite_differences(self, psi):
        h = max(1e-7, abs(psi) * 1e-7)
        fd = (cn.theta_vgm(psi + h, WARRICK) - cn.theta_vgm(psi - h, WARRICK)) / (2 * h)
        an = cn.dtheta_dpsi_vgm(psi, WARRICK)
        assert an == pytest.approx(fd, rel=1e-6, abs=1e-14)

    @given(st.floats(min_value=0.05, max_value=0.95))
    @settings(max_examples=100, deadline=None)
    def test_dk_dsaturation_matches_finite_differences(self, s):
        h = 1e-7
        fd = (
            cn.k_vgm_of_saturation(s + h, WARRICK) - cn.k_vgm_of_saturation(s - h, WARRICK)
        ) / (2 * h)
        assert cn.dk_dsaturation_vgm(s, WARRICK) == pytest.approx(fd, rel=1e-6)

    def test_diffusivity_positive_and_increasing_near_saturation(self):
        s = np.linspace(0.3, 0.98, 50)
        d = cn.diffusivity_vgm(s, WARRICK)
        assert np.all(d > 0.0)
        assert d[-1] > d[0]


class TestExpDerivative:
    def test_matches_finite_differences(self):
        psi = np.linspace(-2.0, -0.01, 57)
        h = 1e-8
        fd = (cn.theta_exp(psi + h, SCENARIO1) - cn.theta_exp(psi - h, SCENARIO1)) / (2 * h)
        assert np.allclose(cn.dtheta_dpsi_exp(psi, SCENARIO1), fd, rtol=1e-6)

    def test_l_theta_bound(self):
        # sup |theta'| = alpha*(theta_sat-theta_res) at psi -> 0-
        bound = cn.l_theta_bound(lambda p: cn.dtheta_dpsi_exp(p, SCENARIO1))
        assert bound == pytest.approx(10.0 * 0.30, rel=1e-4)


class TestFujita:
    PARAMS = cn.FujitaParams(d0=2.75862, v=0.85)

    def test_at_zero(self):
        assert cn.fujita_diffusivity(0.0, self.PARAMS) == self.PARAMS.d0

    def test_direct_evaluation(self):
        assert cn.fujita_diffusivity(0.5, self.PARAMS) == pytest.approx(8.343652173913044, rel=1e-12)

    def test_v_zero_is_constant(self):
        p = cn.FujitaParams(d0=2.0, v=0.0)
        s = np.linspace(0.0, 0.99, 10)
        assert np.allclose(cn.fujita_diffusivity(s, p), 2.0)

    def test_singularity(self):
        p = cn.FujitaParams(d0=1.0, v=0.999)
        with pytest.raises(ValueError):
            cn.fujita_diffusivity(1.0011, p)

    def test_increasing(self):
        s = np.linspace(0.0, 0.9, 100)
        assert np.all(np.diff(cn.fujita_diffusivity(s, self.PARAMS)) > 0.0)


class TestSurfactant:
    PARAMS = cn.SurfactantParams(a_gamma=0.44, b_gamma=0.0046)

    def test_at_zero(self):
        assert cn.gamma_surfactant(0.0, self.PARAMS) == 1.0

    def test_direct_evaluation(self):
        expected = 1.0 / (1.0 - 0.0046 * np.log(1.0 / 0.44 + 1.0))
        assert cn.gamma_surfactant(1.0, self.PARAMS) == pytest.approx(expected, rel=1e-14)
        assert cn.gamma_surfactant(1.0, self.PARAMS) == pytest.approx(1.0054837766608022, rel=1e-12)

    def test_decoupling_limit(self):
        p = cn.SurfactantParams(a_gamma=0.44, b_gamma=0.0)
        c = np.linspace(0.0, 40.0, 17)
        assert np.allclose(cn.gamma_surfactant(c, p), 1.0)

    def test_domain_error(self):
        p = cn.SurfactantParams(a_gamma=1e-6, b_gamma=5.0)
        with pytest.raises(ValueError):
            cn.gamma_surfactant(10.0, p)

    def test_coupled_theta(self):
        th = cn.theta_coupled(-0.1, 0.0, lambda p: cn.theta_exp(p, SCENARIO1), self.PARAMS)
        assert th == pytest.approx(cn.theta_exp(-0.1, SCENARIO1), rel=1e-14)


class TestReaction:
    def test_values(self):
        assert cn.reaction_rate(0.0) == 0.0
        assert cn.reaction_rate(1.0) == pytest.approx(5e-4, rel=1e-14)

    def test_bounded_monotone(self):
        c = np.linspace(0.0, 1e6, 1000)
        r = cn.reaction_rate(c)
        assert np.all(np.diff(r) >= 0.0)
        assert np.all(r <= 1e-3)
