import numpy as np
import pytest

from legwheel.config_tree import ConfigurationError
from legwheel.oscillators.integrator import (
    DivergenceError,
    advance,
    integrate,
    limit_cycle_period,
    rk4_step,
    unwrap_phase,
)


def decay(state, rate):
    return -rate * state


def blow_up(state, _):
    return state ** 2


def test_rk4_step_is_fourth_order():
    state = np.array([[1.0]])
    errors = []
    for dt in [0.1, 0.05]:
        errors.append(abs(rk4_step(decay, state, 1.0, dt)[0, 0] - np.exp(-dt)))
    assert errors[0] / errors[1] == pytest.approx(32, rel=0.05)


def test_integrate_matches_exponential():
    trajectory = integrate(decay, np.array([[1.0, 2.0]]), 0.5, 4.0, 0.01)
    assert trajectory.times.shape == (401,)
    assert trajectory.states.shape == (401, 1, 2)
    assert trajectory.times[-1] == pytest.approx(4.0)
    expected = np.exp(-0.5 * trajectory.times)[:, None] * np.array([1.0, 2.0])
    assert np.allclose(trajectory.states[:, 0], expected, rtol=1e-9, atol=0)


def test_advance_agrees_with_integrate():
    state = np.array([[1.0]])
    final = advance(decay, state, 2.0, 0.01, 100)
    assert np.allclose(final, integrate(decay, state, 2.0, 1.0, 0.01).states[-1])


@pytest.mark.parametrize("duration, dt", [(1.0, 0.0), (1.0, -0.1), (0.001, 0.01)])
def test_integrate_rejects_bad_steps(duration, dt):
    with pytest.raises(ConfigurationError):
        integrate(decay, np.array([[1.0]]), 1.0, duration, dt)


def test_divergence_is_reported():
    with pytest.raises(DivergenceError) as error:
        integrate(blow_up, np.array([[1.0]]), None, 5.0, 0.01)
    assert 90 <= error.value.step < 500


def test_advance_reports_absolute_step():
    with pytest.raises(DivergenceError) as error:
        advance(blow_up, np.array([[1.0]]), None, 0.01, 500, first_step=1000)
    assert error.value.step >= 1000


@pytest.mark.parametrize(
    "previous, wrapped, expected",
    [
        (0.0, 0.1, 0.1),
        (2 * np.pi - 0.05, 0.05, 2 * np.pi + 0.05),
        (-3.1, 3.1, -np.pi - (np.pi - 3.1)),
        (10 * np.pi, -0.2, 10 * np.pi - 0.2),
    ],
)
def test_unwrap_phase(previous, wrapped, expected):
    assert unwrap_phase(previous, wrapped) == pytest.approx(expected)


def test_unwrap_phase_is_vectorised():
    previous = np.array([0.0, 4 * np.pi])
    result = unwrap_phase(previous, np.array([-0.1, 0.1]))
    assert np.allclose(result, [-0.1, 4 * np.pi + 0.1])


def test_limit_cycle_period():
    times = np.linspace(0, 10, 10001)
    periods = limit_cycle_period(times, np.sin(2 * np.pi * times / 1.5 + 0.3))
    assert len(periods) == 5
    assert np.allclose(periods, 1.5, atol=1e-5)
