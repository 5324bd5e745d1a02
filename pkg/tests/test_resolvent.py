import math

import numpy as np
import pytest
from scipy.integrate import quad

from kuramoto_spectral import (
    boundary_value,
    characteristic_G,
    characteristic_G_derivative,
    closed_form_D,
    continued_resolvent_F,
    hilbert_transform,
    hilbert_transform_quadrature,
    make_quadrature,
    resolvent_D,
)
from kuramoto_spectral.errors import BreakpointHit, QuadratureDivergence, UnsupportedContinuation


def gaussian_F_oracle(lam: complex) -> complex:
    """Continued Gaussian resolvent by quadrature of its closed form.

    e^{lam^2/2} (sqrt(pi/2) - int_0^lam e^{-x^2/2} dx), the segment integral
    evaluated by real quadrature along the straight path.
    """
    def seg(f):
        return quad(f, 0.0, 1.0, limit=200)[0]

    integ = complex(
        seg(lambda s: np.real(np.exp(-((s * lam) ** 2) / 2) * lam)),
        seg(lambda s: np.imag(np.exp(-((s * lam) ** 2) / 2) * lam)),
    )
    return np.exp(lam**2 / 2) * (math.sqrt(math.pi / 2) - integ)


class TestResolventD:
    def test_lorentzian_quadrature(self, lorentz):
        rule = make_quadrature(lorentz, 400)
        assert resolvent_D(lorentz, 1.0, rule) == pytest.approx(0.5, abs=1e-6)

    def test_large_lambda_decay(self, gauss, lorentz, two_step):
        for g in (gauss, lorentz, two_step):
            val = closed_form_D(g, 100.0)
            assert val == pytest.approx(g.mass / 100.0, abs=2e-4)

    def test_gaussian_matches_closed_form_oracle(self, gauss):
        want = gaussian_F_oracle(1.0)
        rule = make_quadrature(gauss, 128)
        assert resolvent_D(gauss, 1.0, rule) == pytest.approx(want, abs=1e-8)

    def test_divergence_reported_near_axis(self, gauss):
        rule = make_quadrature(gauss, 64)
        with pytest.raises(QuadratureDivergence):
            resolvent_D(gauss, 1e-5 + 0.9j, rule)

    def test_axis_rejected(self, gauss):
        with pytest.raises(ValueError):
            resolvent_D(gauss, 1j)


class TestHilbert:
    def test_even_density_at_zero(self, gauss, lorentz):
        assert hilbert_transform(gauss, 0.0) == pytest.approx(0.0, abs=1e-14)
        assert hilbert_transform(lorentz, 0.0) == pytest.approx(0.0, abs=1e-14)

    def test_two_step_near_reference_root(self, two_step):
        assert abs(hilbert_transform(two_step, 0.567)) <= 1e-3

    def test_gaussian_vs_brute_force(self, gauss):
        want = hilbert_transform_quadrature(gauss, 1.0, resolution=100_000)
        assert hilbert_transform(gauss, 1.0) == pytest.approx(want, abs=1e-6)

    def test_two_step_vs_brute_force(self, two_step):
        for y in (0.1, -0.3, 0.9):
            want = hilbert_transform_quadrature(two_step, y, resolution=100_000)
            assert hilbert_transform(two_step, y) == pytest.approx(want, abs=1e-4)

    def test_lorentzian_closed_form(self, lorentz):
        # conjugate Poisson kernel: V(y) = y / (pi (1 + y^2))
        for y in (0.5, 2.0, -1.3):
            assert hilbert_transform(lorentz, y) == pytest.approx(y / (math.pi * (1 + y**2)), abs=1e-12)

    def test_discontinuity_rejected(self, two_step):
        with pytest.raises(BreakpointHit):
            hilbert_transform(two_step, -1.0)


class TestBoundaryValue:
    def test_even_at_zero_real(self, two_step, bimodal):
        for g in (bimodal,):
            bv = boundary_value(g, 0.0)
            assert bv.imag == pytest.approx(0.0, abs=1e-12)
            assert bv.real == pytest.approx(math.pi * g(0.0), abs=1e-12)

    def test_gaussian_value(self, gauss):
        assert boundary_value(gauss, 0.0) == pytest.approx(math.sqrt(math.pi / 2), abs=1e-12)

    def test_lorentzian_limit_of_closed_form(self, lorentz):
        # oracle: limit of 1/(lam+1) along the real axis
        assert boundary_value(lorentz, 0.0) == pytest.approx(1.0, abs=1e-12)


class TestContinuedF:
    def test_lorentzian_second_sheet(self, lorentz):
        v = continued_resolvent_F(lorentz, -0.5)
        assert v.value == pytest.approx(2.0, abs=1e-12)
        assert v.sheet == "second"
        # cross-check the jump decomposition
        first = closed_form_D(lorentz, -0.5)
        assert first + 2 * math.pi * lorentz.continuation(0.5j) == pytest.approx(2.0, abs=1e-12)

    def test_gaussian_second_sheet_value(self, gauss):
        want = gaussian_F_oracle(-1.0)
        assert continued_resolvent_F(gauss, -1.0).value == pytest.approx(want, abs=1e-8)
        assert abs(want - 3.477) < 1e-3

    def test_three_branches_glue(self, gauss, lorentz):
        for g in (gauss, lorentz):
            for y in (0.3, -0.7):
                bv = boundary_value(g, y)
                right = continued_resolvent_F(g, +1e-6 + 1j * y).value
                left = continued_resolvent_F(g, -1e-6 + 1j * y).value
                assert abs(right - bv) <= 1e-4
                assert abs(left - bv) <= 1e-4

    def test_piecewise_second_sheet_refused(self, two_step):
        with pytest.raises(UnsupportedContinuation):
            continued_resolvent_F(two_step, -0.5)

    def test_sheet_and_method_tags(self, gauss, two_step):
        assert continued_resolvent_F(gauss, 1.0).sheet == "first"
        assert continued_resolvent_F(gauss, 1j).sheet == "boundary"
        assert continued_resolvent_F(gauss, -1.0).sheet == "second"
        assert continued_resolvent_F(gauss, 1.0).method == "closed_form"
        assert continued_resolvent_F(two_step, 1j * 0.5).method == "plemelj"
        rule = make_quadrature(gauss, 128)
        assert continued_resolvent_F(gauss, 1.0, rule).method == "quadrature"

    def test_even_density_real_on_positive_axis(self, gauss, lorentz):
        for g in (gauss, lorentz):
            for x in (0.3, 1.0, 2.5):
                assert abs(continued_resolvent_F(g, x).value.imag) <= 1e-10


class TestCharacteristicG:
    def test_lorentzian_zero_at_transition(self, lorentz):
        assert abs(characteristic_G(lorentz, 2.0, 1e-12)) <= 1e-10

    def test_lorentzian_zero_at_pole(self, lorentz):
        assert abs(characteristic_G(lorentz, 1.0, -0.5)) <= 1e-14

    def test_limit_one_at_infinity(self, gauss, lorentz, two_step):
        for g in (gauss, lorentz, two_step):
            for K in (0.5, 2.0):
                assert characteristic_G(g, K, 200.0) == pytest.approx(1.0, abs=g.mass * K / 100)

    def test_derivative_vs_central_difference(self, gauss, lorentz):
        h = 1e-6
        for g in (gauss, lorentz):
            for lam in (0.7, -0.4 + 0.6j, 1.2 - 0.8j):
                num = (characteristic_G(g, 1.3, lam + h) - characteristic_G(g, 1.3, lam - h)) / (2 * h)
                ana = characteristic_G_derivative(g, 1.3, lam)
                assert ana == pytest.approx(num, rel=1e-6)

    def test_piecewise_derivative_vs_central_difference(self, two_step):
        h = 1e-6
        for lam in (0.5, 0.8 + 0.4j):
            num = (characteristic_G(two_step, 0.7, lam + h) - characteristic_G(two_step, 0.7, lam - h)) / (2 * h)
            ana = characteristic_G_derivative(two_step, 0.7, lam)
            assert ana == pytest.approx(num, rel=1e-6)


class TestInvariants:
    def test_plemelj_jump(self, gauss, lorentz, two_step):
        rng = np.random.default_rng(5)
        for g in (gauss, lorentz, two_step):
            ys = rng.uniform(-0.9, -0.55, 20) if g.segments else rng.uniform(-2, 2, 20)
            for y in ys:
                if g(y) <= 0:
                    continue
                jump = closed_form_D(g, 1e-6 + 1j * y) - closed_form_D(g, -1e-6 + 1j * y)
                assert jump == pytest.approx(2 * math.pi * g(y), rel=1e-3)

    def test_decay_bound(self, gauss, lorentz):
        rng = np.random.default_rng(6)
        for g in (gauss, lorentz):
            R = 10 * (1 + 1.0)
            for _ in range(20):
                lam = rng.uniform(R, 3 * R) * np.exp(1j * rng.uniform(-1.2, 1.2))
                assert abs(closed_form_D(g, lam)) <= 2 / abs(lam)

    def test_reflection(self, gauss, lorentz):
        rng = np.random.default_rng(8)
        lams = rng.uniform(-2, 2, 50) + 1j * rng.uniform(-2, 2, 50)
        lams = lams[np.abs(lams.real) > 1e-3]
        for g in (gauss, lorentz):
            ok = lams
            if g.continuation_poles:
                ok = lams[np.min(np.abs(lams[:, None] + 1.0), axis=1) > 1e-2]
            for lam in ok:
                a = continued_resolvent_F(g, np.conj(lam)).value
                b = np.conj(continued_resolvent_F(g, lam).value)
                assert a == pytest.approx(b, abs=1e-12)

    def test_gaussian_closed_form_on_grid(self, gauss):
        # 10 x 10 grid on [-2,2]^2 away from the axis, against the quadrature oracle
        for re in np.linspace(-2, 2, 10):
            if abs(re) < 0.25:
                continue
            for im in np.linspace(-2, 2, 10):
                lam = complex(re, im)
                assert continued_resolvent_F(gauss, lam).value == pytest.approx(
                    gaussian_F_oracle(lam), abs=1e-8
                )
