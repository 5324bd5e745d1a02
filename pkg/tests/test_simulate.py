import math

import numpy as np
import pytest

from kuramoto_spectral import (
    OscillatorEnsemble,
    make_ensemble,
    order_parameter,
    predicted_rc,
    simulate_finite_N,
    simulate_galerkin,
    uniform_quadrature,
)
from kuramoto_spectral.errors import ModeBoundViolation, StepTooLarge
from tests.conftest import K_C_GAUSS, LAM0_GAUSS_K1


class TestOrderParameter:
    def test_synchronized(self):
        assert order_parameter(np.full(10, 1.3)) == pytest.approx(np.exp(1.3j), abs=1e-14)

    def test_roots_of_unity(self):
        ph = 2 * np.pi * np.arange(12) / 12
        assert abs(order_parameter(ph)) <= 1e-12

    def test_two_oscillators(self):
        z = order_parameter(np.array([0.0, np.pi / 2]))
        assert z == pytest.approx((1 + 1j) / 2, abs=1e-15)
        assert abs(z) == pytest.approx(math.sqrt(2) / 2, abs=1e-15)


class TestFiniteN:
    def test_free_rotation_exact(self, gauss):
        ens = make_ensemble(gauss, 400, 0.0, eps_h=0.3)
        traj = simulate_finite_N(ens, 5.0, dt_out=0.5)
        for t, v in zip(traj.times, traj.values):
            want = np.mean(np.exp(1j * (ens.phases + ens.frequencies * t)))
            assert abs(v - want) <= 1e-8 * max(1.0, t)

    def test_lorentzian_supercritical_iid(self, lorentz):
        # classical self-consistency amplitude sqrt(1 - K_c/K) at K = 2.2
        ens = make_ensemble(lorentz, 10_000, 2.2, seed=42, frequency_sampling="iid")
        traj = simulate_finite_N(ens, 120.0, dt_out=1.0)
        tail = np.abs(traj.values[traj.times >= 80.0])
        want = math.sqrt(1 - 2 / 2.2)
        assert tail.mean() == pytest.approx(want, rel=0.05)

    def test_subcritical_fluctuation_scale(self, gauss):
        # oracle: quadrupling N halves the floor
        means = {}
        for N in (2500, 10_000):
            ens = make_ensemble(gauss, N, 1.0, seed=9, frequency_sampling="iid")
            traj = simulate_finite_N(ens, 100.0, dt_out=1.0)
            tail = np.abs(traj.values[(traj.times >= 50.0)])
            means[N] = tail.mean()
            assert means[N] <= 2 / math.sqrt(N) + 0.02
        assert means[10_000] <= 0.75 * means[2500]

    def test_step_bound(self, gauss):
        ens = make_ensemble(gauss, 100, 1.0)
        with pytest.raises(StepTooLarge):
            simulate_finite_N(ens, 1.0, dt=1.0)

    def test_ensemble_validation(self):
        with pytest.raises(ValueError):
            OscillatorEnsemble(5, np.zeros(4), np.zeros(5), 1.0)


class TestGalerkin:
    def test_free_evolution(self, gauss):
        # K = 0: eta(t) = h_1 * characteristic function of g
        rule = uniform_quadrature(gauss, 721)
        traj = simulate_galerkin(gauss, 0.0, J=8, rule=rule, phi_init=(0.5,), T=6.0, dt_out=0.5)
        want = 0.5 * np.exp(-traj.times**2 / 2)
        assert np.max(np.abs(traj.values - want)) <= 1e-8

    def test_small_data_decay_rate(self, gauss):
        traj = simulate_galerkin(gauss, 1.0, J=16, phi_init=(1e-3,), T=40.0)
        mask = (traj.times >= 2) & (traj.times <= 20)
        slope = np.polyfit(traj.times[mask], np.log(np.abs(traj.values[mask])), 1)[0]
        assert slope == pytest.approx(LAM0_GAUSS_K1, rel=0.05)

    def test_supercritical_amplitude_matches_prediction(self, gauss):
        from kuramoto_spectral import amplitude_model

        model = amplitude_model(gauss)
        K = K_C_GAUSS + 0.05
        rule = uniform_quadrature(gauss, 721)
        traj = simulate_galerkin(gauss, K, J=16, rule=rule, phi_init=(1e-2,), T=250.0, closure="geometric")
        tail = np.abs(traj.values[traj.times >= 170.0])
        assert tail.mean() == pytest.approx(predicted_rc(model, K), rel=0.10)

    def test_mode_bound_guard_trips_on_truncation(self, gauss):
        # hard truncation cannot hold a strongly locked state
        with pytest.raises(ModeBoundViolation):
            simulate_galerkin(gauss, 3.0, J=8, phi_init=(0.3,), T=60.0, closure="truncate")

    def test_mode_bound_holds_small_data(self, gauss):
        rule = uniform_quadrature(gauss, 361)
        traj = simulate_galerkin(gauss, 1.0, J=12, rule=rule, phi_init=(1e-2,), T=30.0)
        assert np.max(np.abs(traj.values)) <= 1.0 + 1e-3  # never raised -> bound held

    def test_mode_cutoff_floor(self, gauss):
        with pytest.raises(ValueError):
            simulate_galerkin(gauss, 1.0, J=4)


class TestSymmetryInvariants:
    def test_rotational_equivariance(self, gauss):
        ens1 = make_ensemble(gauss, 300, 1.2, eps_h=0.2)
        ens2 = OscillatorEnsemble(300, ens1.phases + 0.9, ens1.frequencies, 1.2)
        t1 = simulate_finite_N(ens1, 8.0, dt_out=1.0)
        t2 = simulate_finite_N(ens2, 8.0, dt_out=1.0)
        assert np.max(np.abs(t2.values - np.exp(0.9j) * t1.values)) <= 1e-10

    def test_reflection_symmetry(self, gauss):
        ens1 = make_ensemble(gauss, 300, 1.2, eps_h=0.2)
        ens2 = OscillatorEnsemble(300, -ens1.phases, -ens1.frequencies, 1.2)
        t1 = simulate_finite_N(ens1, 8.0, dt_out=1.0)
        t2 = simulate_finite_N(ens2, 8.0, dt_out=1.0)
        assert np.max(np.abs(t2.values - np.conj(t1.values))) <= 1e-10

    def test_galerkin_rotational_equivariance(self, gauss):
        rule = uniform_quadrature(gauss, 361)
        c = 0.6
        t1 = simulate_galerkin(gauss, 1.0, J=8, rule=rule, phi_init=(1e-2,), T=5.0)
        t2 = simulate_galerkin(gauss, 1.0, J=8, rule=rule, phi_init=(1e-2 * np.exp(1j * c),), T=5.0)
        assert np.max(np.abs(t2.values - np.exp(1j * c) * t1.values)) <= 1e-10


class TestCrossOracle:
    def test_finite_N_matches_galerkin(self, gauss):
        # blocked phases make the sampled initial data smooth in frequency
        rule = uniform_quadrature(gauss, 4001)
        trg = simulate_galerkin(gauss, 1.0, J=16, rule=rule, phi_init=(1e-2,), T=20.0, dt_out=0.5)
        ens = make_ensemble(gauss, 16008, 1.0, eps_h=1e-2, phase_blocks=8)
        trn = simulate_finite_N(ens, 20.0, dt_out=0.5)
        diff = np.max(np.abs(np.abs(trg.values) - np.abs(trn.values)))
        assert diff <= 0.02 * np.max(np.abs(trg.values))

    def test_galerkin_mode_doubling_stable(self, gauss):
        rule = uniform_quadrature(gauss, 361)
        t1 = simulate_galerkin(gauss, 1.0, J=12, rule=rule, phi_init=(1e-2,), T=20.0, dt_out=1.0)
        t2 = simulate_galerkin(gauss, 1.0, J=24, rule=rule, phi_init=(1e-2,), T=20.0, dt_out=1.0)
        assert np.max(np.abs(t1.values - t2.values)) <= 1e-3
