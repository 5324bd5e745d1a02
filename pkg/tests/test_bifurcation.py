import math

import numpy as np
import pytest

from kuramoto_spectral import (
    AmplitudeModel,
    BifurcationCurve,
    amplitude_model,
    amplitude_rhs,
    bifurcation_diagram,
    predicted_rc,
    prediction_band,
)
from kuramoto_spectral.errors import NotEvenUnimodal, SubcriticalWarning, ZeroCurvature
from tests.conftest import K_C_GAUSS


class TestAmplitudeModel:
    def test_lorentzian_closed_form(self, lorentz):
        # oracle: G(lam) = lam/(lam+1) at K_c = 2, so G'(0) = 1; g''(0) = -2/pi
        m = amplitude_model(lorentz)
        assert m.K_c == pytest.approx(2.0, abs=1e-9)
        assert m.D0 == pytest.approx(1.0, abs=1e-10)
        assert m.gpp0 == pytest.approx(-2 / math.pi, abs=1e-12)
        assert m.cubic_coeff == pytest.approx(-2.0, abs=1e-10)

    def test_gaussian_d0_sign_and_value(self, gauss):
        # complex-step/central-difference oracle of G at 0 resolved the sign:
        # D0 = K_c/2 > 0 for the standard normal
        m = amplitude_model(gauss)
        assert m.D0.real > 0
        assert m.D0 == pytest.approx(K_C_GAUSS / 2, abs=1e-10)
        assert m.gpp0 == pytest.approx(-1 / math.sqrt(2 * math.pi), abs=1e-12)

    def test_non_unimodal_guard(self, bimodal, two_step):
        for g in (bimodal, two_step):
            with pytest.raises(NotEvenUnimodal):
                amplitude_model(g)


class TestAmplitudeRhs:
    def test_zero_fixed_point(self, lorentz):
        m = amplitude_model(lorentz)
        assert amplitude_rhs(m, 0.0, 0.3) == 0.0

    def test_lorentzian_nontrivial_fixed_point(self, lorentz):
        # dalpha/dt = alpha (eps - 2 |alpha|^2)/2 vanishes at |alpha|^2 = eps/2
        m = amplitude_model(lorentz)
        eps = 0.3
        alpha = math.sqrt(eps / 2)
        assert abs(amplitude_rhs(m, alpha, eps)) <= 1e-14

    def test_decay_below_transition(self, gauss):
        m = amplitude_model(gauss)
        rng = np.random.default_rng(2)
        for _ in range(10):
            alpha = rng.uniform(0.01, 0.2) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            rhs = amplitude_rhs(m, alpha, -0.1)
            assert (np.conj(alpha) * rhs).real < 0

    def test_pitchfork_stability(self, gauss):
        # integrating the reduced flow from any 0 < |alpha(0)| < 2 r_c reaches r_c
        m = amplitude_model(gauss)
        eps = 0.08
        r_c = predicted_rc(m, m.K_c + eps)
        for a0 in (0.1 * r_c, 0.5 * r_c, 1.9 * r_c):
            alpha = complex(a0)
            dt = 0.05
            for _ in range(40000):
                alpha = alpha + dt * amplitude_rhs(m, alpha, eps)
            assert abs(abs(alpha) - r_c) <= 1e-6


class TestPredictedRc:
    def test_zero_at_transition(self, gauss):
        m = amplitude_model(gauss)
        assert predicted_rc(m, m.K_c) == 0.0
        assert predicted_rc(m, m.K_c - 0.5) == 0.0

    def test_gaussian_value(self, gauss):
        # oracle: sqrt(-16/(pi K_c^4 g''(0))) with g''(0) = -1/sqrt(2 pi), K_c^4 = 64/pi^2
        m = amplitude_model(gauss)
        want = math.sqrt(math.pi * math.sqrt(2 * math.pi) / 4)
        assert predicted_rc(m, m.K_c + 1.0) == pytest.approx(want, abs=1e-12)
        assert predicted_rc(m, m.K_c + 0.04) == pytest.approx(want * 0.2, abs=1e-12)
        assert want == pytest.approx(1.4031, abs=1e-4)

    def test_lorentzian_value(self, lorentz):
        m = amplitude_model(lorentz)
        assert predicted_rc(m, 2.2) == pytest.approx(math.sqrt(0.1), abs=1e-12)

    def test_band(self, gauss):
        m = amplitude_model(gauss)
        r, half = prediction_band(m, m.K_c + 0.04)
        assert half == pytest.approx(0.04)
        assert r > 0

    def test_subcritical_backward_branch(self):
        # flipping the curvature sign flips the branch direction
        m = AmplitudeModel(K_c=2.0, D0=1.0 + 0j, gpp0=2 / math.pi, cubic_coeff=2.0)
        with pytest.warns(SubcriticalWarning):
            r = predicted_rc(m, 1.9)
        assert r == pytest.approx(math.sqrt(0.1 / 2), abs=1e-12)
        with pytest.warns(SubcriticalWarning):
            assert predicted_rc(m, 2.1) == 0.0


class TestDiagram:
    def test_grid_below_transition(self, gauss):
        grid = [K_C_GAUSS - 0.4, K_C_GAUSS - 0.2]
        curve = bifurcation_diagram(gauss, grid, {"backend": "galerkin", "T": 60.0, "nodes": 361, "eps_h": 1e-3})
        for K, r_th, r_sim, stderr, converged in curve.rows:
            assert r_th == 0.0
            assert r_sim <= 0.02

    def test_lorentzian_exact_anchor(self, lorentz):
        curve = bifurcation_diagram(lorentz, [2.5], {"backend": "galerkin", "T": 120.0, "eps_h": 1e-2})
        K, r_th, r_sim, stderr, converged = curve.rows[0]
        assert r_sim == pytest.approx(math.sqrt(1 - 2 / 2.5), rel=0.05)
        assert converged

    def test_rows_sorted_validation(self):
        with pytest.raises(ValueError):
            BifurcationCurve(rows=((1.0, 0, 0, 0, True), (1.0, 0, 0, 0, True)))

    def test_zero_curvature_guard(self, gauss):
        flat = AmplitudeModel(K_c=1.0, D0=1.0, gpp0=0.0, cubic_coeff=0.0)
        # guard lives in amplitude_model; direct construction bypasses it, so
        # check the detection branch through a synthetic flat-top density
        from kuramoto_spectral import piecewise_linear
        from kuramoto_spectral.bifurcation import amplitude_model as am

        g = piecewise_linear([(-1.0, -0.5, 0.0, 1.0), (-0.5, 0.5, 1.0, 1.0), (0.5, 1.0, 1.0, 0.0)])
        with pytest.raises(ZeroCurvature):
            am(g)
