import math

import numpy as np
import pytest
import scipy.linalg

from conftest import random_density
from gedyn.channels import apply_uniform_channel, kraus_for, lindblad_generator, noisy_generator_literal
from gedyn.integrator import IntegrationConfig, _finish, evolve, evolve_along, lindbladian_apply, rk4
from gedyn.qmatrix import InvalidStateError, embed_operator
from gedyn.states import density_from_pure, ghz_state, w_state

KINDS = ["dissipative", "dephasing", "noisy"]


def explicit_lindbladian(rho, spec, n):
    out = np.zeros_like(rho)
    for q in range(n):
        for j, rate in spec.jumps:
            big = embed_operator(j, q, n)
            g = big.conj().T @ big
            out += rate * (big @ rho @ big.conj().T - 0.5 * (g @ rho + rho @ g))
    return out


def exact_flow(rho, spec, t):
    """Single-qubit oracle: expm of the row-major vectorized generator."""
    eye = np.eye(2)
    lv = sum(
        rate * (np.kron(j, j.conj()) - 0.5 * np.kron(j.conj().T @ j, eye) - 0.5 * np.kron(eye, (j.conj().T @ j).T))
        for j, rate in spec.jumps
    )
    return (scipy.linalg.expm(t * lv) @ rho.ravel()).reshape(2, 2)


@pytest.mark.parametrize("kind", KINDS)
def test_generator_matches_explicit(kind, rng):
    rho = random_density(rng, 3)
    spec = lindblad_generator(kind, 0.7)
    assert np.allclose(lindbladian_apply(rho, spec), explicit_lindbladian(rho, spec, 3), atol=1e-14)


def test_literal_generator_matches_explicit(rng):
    rho = random_density(rng, 2)
    spec = noisy_generator_literal(1.3)
    assert np.allclose(lindbladian_apply(rho, spec), explicit_lindbladian(rho, spec, 2), atol=1e-14)


@pytest.mark.parametrize("kind", KINDS)
def test_generator_is_traceless(kind, rng):
    rho = random_density(rng, 4)
    assert abs(np.trace(lindbladian_apply(rho, lindblad_generator(kind, 2.0)))) < 1e-13


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("n", [2, 3])
def test_evolve_matches_kraus(kind, n, rng):
    rho0 = random_density(rng, n)
    gamma, t = 0.8, 1.25
    spec = lindblad_generator(kind, gamma)
    out = evolve(rho0, spec, IntegrationConfig.for_spec(spec, n, t, gamma))
    expected = apply_uniform_channel(rho0, kraus_for(kind, math.exp(-gamma * t)))
    assert np.max(np.abs(out - expected)) < 1e-10


def test_fourth_order_convergence():
    spec = lindblad_generator("dissipative", 1.0)
    rho0 = np.array([[0.2, 0.3 - 0.1j], [0.3 + 0.1j, 0.8]])
    exact = exact_flow(rho0, spec, 2.0)
    coarse = np.max(np.abs(rk4(rho0, spec, 2.0, 40) - exact))
    fine = np.max(np.abs(rk4(rho0, spec, 2.0, 80) - exact))
    assert 14 < coarse / fine < 18


def test_evolve_along_matches_evolve():
    n = 4
    spec = lindblad_generator("noisy", 1.0)
    rho0 = density_from_pure(ghz_state(n))
    times = [0.0, 0.35, 1.0]
    states = evolve_along(rho0, spec, times, 1e-3)
    assert np.allclose(states[0], rho0)
    for t, rho in zip(times[1:], states[1:]):
        expected = apply_uniform_channel(rho0, kraus_for("noisy", math.exp(-t)))
        assert np.max(np.abs(rho - expected)) < 1e-11


def test_evolve_along_rejects_descending():
    spec = lindblad_generator("dephasing", 1.0)
    with pytest.raises(ValueError):
        evolve_along(density_from_pure(w_state(2)), spec, [0.5, 0.2], 1e-3)


def test_evolve_along_stability_guard():
    spec = lindblad_generator("dissipative", 1.0)
    with pytest.raises(ValueError):
        evolve_along(density_from_pure(w_state(4)), spec, [1.0], 0.01)


class TestConfig:
    def test_default_steps(self):
        spec = lindblad_generator("dissipative", 2.0)
        cfg = IntegrationConfig.for_spec(spec, 3, 1.5, 2.0)
        assert cfg.steps == 3000
        assert cfg.h * cfg.rate_bound <= 0.01

    def test_steps_raised_for_large_registers(self):
        spec = lindblad_generator("dissipative", 1.0)
        cfg = IntegrationConfig.for_spec(spec, 12, 1.0, 1.0)
        assert cfg.steps == 1200
        assert cfg.h * cfg.rate_bound == pytest.approx(0.01)

    def test_stability_violation(self):
        with pytest.raises(ValueError, match="too large"):
            IntegrationConfig(1.0, 10, rate_bound=1.0)

    def test_bad_values(self):
        with pytest.raises(ValueError):
            IntegrationConfig(-1.0, 10)
        with pytest.raises(ValueError):
            IntegrationConfig(1.0, 0)

    def test_config_built_for_smaller_register(self):
        spec = lindblad_generator("dephasing", 1.0)
        cfg = IntegrationConfig.for_spec(spec, 2, 0.5, 1.0)
        with pytest.raises(ValueError, match="total rate"):
            evolve(density_from_pure(w_state(4)), spec, cfg)


def test_unguarded_large_step_is_caught_by_validation():
    # Far outside the stability region RK4 blows up; evolve's final check
    # must refuse the result rather than return garbage.
    spec = lindblad_generator("dissipative", 1.0)
    rho = rk4(density_from_pure(w_state(2)), spec, 30.0, 3)
    assert np.max(np.abs(rho)) > 10
    with pytest.raises(InvalidStateError):
        _finish(rho)
