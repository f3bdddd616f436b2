"""Tests for amplitude dynamics: closed forms, BiC plateau, ODE oracle."""

import numpy as np
import pytest

from ioxsim import SystemParams
from ioxsim.dynamics import (
    AmplitudeState,
    analytic_trajectory,
    bic_amplitudes,
    evolve_analytic,
    evolve_ode,
)
from ioxsim.errors import DegenerateModesError

SQRT2 = np.sqrt(2.0)
BIC = SystemParams(delta=2.1 / np.sqrt(0.3), g_rabi=3.0, gamma_c=1.0, gamma_x=0.3)
EP = SystemParams(delta=2.0 * SQRT2, g_rabi=0.5, gamma_c=1.0, gamma_x=2.0)
X_START = AmplitudeState(c=0.0, x=1.0)


def random_passive(rng):
    return SystemParams(
        delta=rng.uniform(-4, 4),
        g_rabi=rng.uniform(0, 3),
        mass_ratio=rng.uniform(0, 1),
        gamma_c=rng.uniform(0, 2),
        gamma_x=rng.uniform(0, 2),
        gamma_nr_c=rng.uniform(0, 0.3),
        gamma_nr_x=rng.uniform(0, 0.3),
    )


def random_state(rng):
    amp = rng.normal(size=4)
    amp /= np.linalg.norm(amp)
    return AmplitudeState(c=amp[0] + 1j * amp[1], x=amp[2] + 1j * amp[3])


class TestAnalytic:
    def test_initial_condition(self):
        rng = np.random.default_rng(41)
        for _ in range(50):
            p = random_passive(rng)
            state = random_state(rng)
            out = evolve_analytic(p, rng.uniform(-2, 2), state, 0.0)
            assert out.c == pytest.approx(state.c, abs=1e-12)
            assert out.x == pytest.approx(state.x, abs=1e-12)

    def test_undamped_rabi_oscillations(self):
        p = SystemParams(delta=0.0, g_rabi=1.3, gamma_c=0.0, gamma_x=0.0)
        t = np.linspace(0, 10, 201)
        c, x = analytic_trajectory(p, 0.0, X_START, t)
        assert np.allclose(np.abs(x) ** 2, np.cos(1.3 * t) ** 2, atol=1e-12)
        assert np.allclose(np.abs(c) ** 2, np.sin(1.3 * t) ** 2, atol=1e-12)

    def test_decoupled_decay(self):
        # g~ = 0: each amplitude decays on its own pole
        p = SystemParams(delta=1.0, g_rabi=0.0, gamma_c=0.8, gamma_x=0.0)
        t = np.linspace(0, 5, 26)
        c, x = analytic_trajectory(p, 0.0, AmplitudeState(c=1.0, x=1.0), t)
        assert np.allclose(np.abs(c), np.exp(-0.8 * t), atol=1e-12)
        assert np.allclose(np.abs(x), 1.0, atol=1e-12)

    def test_rejects_exceptional_point(self):
        with pytest.raises(DegenerateModesError):
            evolve_analytic(EP, 0.0, X_START, 1.0)

    def test_passivity_along_trajectories(self):
        rng = np.random.default_rng(43)
        for _ in range(50):
            p = random_passive(rng)
            t = np.linspace(0, 20, 401)
            c, x = analytic_trajectory(p, rng.uniform(-2, 2),
                                       random_state(rng), t)
            norms = np.abs(c) ** 2 + np.abs(x) ** 2
            assert np.all(np.diff(norms) <= 1e-10)
            assert norms[0] <= 1.0 + 1e-12

    def test_time_offset_initial_state(self):
        p = SystemParams(delta=1.0, g_rabi=0.5, gamma_c=0.3, gamma_x=0.2)
        mid = evolve_analytic(p, 0.0, X_START, 2.0)
        end_direct = evolve_analytic(p, 0.0, X_START, 5.0)
        end_relayed = evolve_analytic(p, 0.0, mid, 5.0)
        assert end_relayed.c == pytest.approx(end_direct.c, abs=1e-12)
        assert end_relayed.x == pytest.approx(end_direct.x, abs=1e-12)

    def test_rejects_past_times(self):
        with pytest.raises(ValueError):
            evolve_analytic(BIC, 0.0, AmplitudeState(0.0, 1.0, t=1.0), 0.5)


class TestBicAmplitudes:
    def test_initial_values(self):
        c2, x2 = bic_amplitudes(BIC, 0.0)
        assert c2 == pytest.approx(0.0, abs=1e-14)
        assert x2 == pytest.approx(1.0, abs=1e-14)

    def test_trapped_fractions(self):
        c2, x2 = bic_amplitudes(BIC, 60.0)
        assert x2 == pytest.approx(0.5917159763313609, abs=1e-10)
        assert c2 == pytest.approx(0.17751479289940827, abs=1e-10)

    def test_matches_analytic_solution(self):
        t = np.linspace(0.0, 12.0, 481)
        c2, x2 = bic_amplitudes(BIC, t)
        c, x = analytic_trajectory(BIC, 0.0, X_START, t)
        assert np.max(np.abs(np.abs(c) ** 2 - c2)) < 1e-10
        assert np.max(np.abs(np.abs(x) ** 2 - x2)) < 1e-10

    def test_plateau_constant(self):
        # transients decay like e^{-(gamma_c+gamma_x) t}; by t = 20 they sit
        # below the 1e-10 plateau tolerance
        t = np.linspace(20.0, 25.0, 101)
        _, x2 = bic_amplitudes(BIC, t)
        assert np.max(np.abs(x2 - 0.5917159763313609)) < 1e-10

    def test_rejects_off_condition(self):
        p = SystemParams(delta=1.0, g_rabi=3.0, gamma_c=1.0, gamma_x=0.3)
        with pytest.raises(ValueError):
            bic_amplitudes(p, 1.0)

    def test_rejects_nonradiative(self):
        p = SystemParams(delta=2.1 / np.sqrt(0.3), g_rabi=3.0, gamma_c=1.0,
                         gamma_x=0.3, gamma_nr_x=0.05)
        with pytest.raises(ValueError):
            bic_amplitudes(p, 1.0)

    def test_no_rabi_special_case(self):
        # formula remains valid at g_rabi = 0 (condition at zero detuning)
        p = SystemParams(delta=0.0, g_rabi=0.0, gamma_c=1.0, gamma_x=0.5)
        t = np.linspace(0, 10, 101)
        c2, x2 = bic_amplitudes(p, t)
        c, x = analytic_trajectory(p, 0.0, X_START, t)
        assert np.max(np.abs(np.abs(c) ** 2 - c2)) < 1e-12
        assert np.max(np.abs(np.abs(x) ** 2 - x2)) < 1e-12


class TestEvolveOde:
    def test_matches_analytic(self):
        t = np.linspace(0, 10, 201)
        c_ode, x_ode = evolve_ode(BIC, 0.0, X_START, t)
        c_an, x_an = analytic_trajectory(BIC, 0.0, X_START, t)
        assert np.max(np.abs(c_ode - c_an)) < 1e-8
        assert np.max(np.abs(x_ode - x_an)) < 1e-8

    def test_zero_state_stays_zero(self):
        t = np.linspace(0, 5, 11)
        c, x = evolve_ode(BIC, 0.0, AmplitudeState(0.0, 0.0), t)
        assert np.all(c == 0) and np.all(x == 0)

    def test_secular_growth_at_exceptional_point(self):
        # coalesced modes: |c(t)| = |g~| t exp(-Gamma t) exactly, with
        # Gamma = (gamma_c + gamma_x) / 2
        t = np.linspace(0.5, 8.0, 151)
        c, _ = evolve_ode(EP, 0.0, X_START, t)
        g_tilde = abs(EP.g_rabi - 1j * np.sqrt(EP.gamma_c * EP.gamma_x))
        envelope = g_tilde * t * np.exp(-1.5 * t)
        assert np.max(np.abs(np.abs(c) / envelope - 1.0)) < 1e-4

    def test_validates_grid(self):
        with pytest.raises(ValueError):
            evolve_ode(BIC, 0.0, X_START, [0.0, 0.0, 1.0])
        with pytest.raises(ValueError):
            evolve_ode(BIC, 0.0, X_START, [])
        with pytest.raises(ValueError):
            evolve_ode(BIC, 0.0, AmplitudeState(0.0, 1.0, t=2.0), [0.0, 1.0])

    def test_agreement_random_draws(self):
        rng = np.random.default_rng(47)
        t = np.linspace(0, 20, 101)
        for _ in range(10):
            p = random_passive(rng)
            k = rng.uniform(-2, 2)
            state = random_state(rng)
            c_ode, x_ode = evolve_ode(p, k, state, t)
            c_an, x_an = analytic_trajectory(p, k, state, t)
            assert np.max(np.abs(c_ode - c_an)) < 1e-8
            assert np.max(np.abs(x_ode - x_an)) < 1e-8
