import numpy as np
import pytest

from legwheel.control.steering import QUARTER_CYCLE_BIAS
from legwheel.oscillators import kuramoto
from legwheel.oscillators.integrator import integrate
from legwheel.oscillators.network import all_to_all


def _wrapped(angle):
    return (angle + np.pi) % (2 * np.pi) - np.pi


def test_two_oscillators_lock_to_bias():
    bias = np.array([[0.0, np.pi / 2], [-np.pi / 2, 0.0]])
    params = kuramoto.KuramotoParams(
        omega=[2.0, 2.0],
        coupling=all_to_all(1.0, 2),
        phase_bias=bias,
        amplitude_target=1.0,
        offset_target=0.0,
    )
    state = kuramoto.initial_state([0.0, 0.2], 1.0, 0.0)
    final = integrate(kuramoto.kuramoto_derivative, state, params, 10.0, 0.002).states[-1]
    difference = final[1, kuramoto.PHASE] - final[0, kuramoto.PHASE]
    assert abs(_wrapped(difference - np.pi / 2)) < 1e-3


def test_quarter_cycle_network_locks():
    params = kuramoto.KuramotoParams(
        omega=np.full(4, 3.0),
        coupling=all_to_all(1.0),
        phase_bias=QUARTER_CYCLE_BIAS,
        amplitude_target=1.0,
        offset_target=-0.5,
    )
    phases = QUARTER_CYCLE_BIAS[0] + np.array([0.0, 0.5, -0.7, 1.0])
    state = kuramoto.initial_state(phases, 1.0, -0.5)
    final = integrate(kuramoto.kuramoto_derivative, state, params, 10.0, 0.002).states[-1]
    phi = final[:, kuramoto.PHASE]
    lag = phi[None, :] - phi[:, None] - QUARTER_CYCLE_BIAS
    assert np.max(np.abs(_wrapped(lag))) < 1e-3


def test_uncoupled_phases_advance_at_omega():
    params = kuramoto.KuramotoParams(
        omega=[1.0, 2.0], coupling=np.zeros((2, 2)), phase_bias=np.zeros((2, 2))
    )
    state = kuramoto.initial_state([0.0, 1.0], 0.0, 0.0)
    final = integrate(kuramoto.kuramoto_derivative, state, params, 2.0, 0.01).states[-1]
    assert np.allclose(final[:, kuramoto.PHASE], [2.0, 5.0])


@pytest.mark.parametrize("gain", [5.0, 20.0])
def test_trackers_are_critically_damped(gain):
    params = kuramoto.KuramotoParams(
        omega=[1.0],
        coupling=np.zeros((1, 1)),
        phase_bias=np.zeros((1, 1)),
        amplitude_target=0.3,
        offset_target=-0.8,
        a_r=gain,
        a_x=gain,
    )
    state = kuramoto.initial_state([0.0], 0.0, 0.0)
    states = integrate(kuramoto.kuramoto_derivative, state, params, 5.0, 0.001).states[:, 0]

    amplitude = states[:, kuramoto.AMPLITUDE]
    offset = states[:, kuramoto.OFFSET]
    assert np.all(np.diff(amplitude) >= -1e-12)
    assert np.all(amplitude <= 0.3 + 1e-9)
    assert np.all(offset >= -0.8 - 1e-9)
    assert amplitude[-1] == pytest.approx(0.3, abs=1e-4)
    assert offset[-1] == pytest.approx(-0.8, abs=1e-4)


def test_faster_gain_converges_sooner():
    def amplitude_at_half_second(gain):
        params = kuramoto.KuramotoParams(
            omega=[1.0],
            coupling=np.zeros((1, 1)),
            phase_bias=np.zeros((1, 1)),
            amplitude_target=1.0,
            a_r=gain,
        )
        state = kuramoto.initial_state([0.0], 0.0, 0.0)
        trajectory = integrate(kuramoto.kuramoto_derivative, state, params, 0.5, 0.001)
        return trajectory.states[-1, 0, kuramoto.AMPLITUDE]

    assert amplitude_at_half_second(20.0) > amplitude_at_half_second(5.0)


def test_output_is_rectified_sine():
    state = kuramoto.initial_state([0.0, np.pi / 2, np.pi, -np.pi / 2], 0.4, -1.0)
    theta, e = kuramoto.kuramoto_output(state, 0.5, 5)
    assert np.allclose(theta, [0.0, np.pi / 5, 2 * np.pi / 5, -np.pi / 5])
    assert np.allclose(e, [-1.0, -0.8, -1.0, -0.8])


def test_output_accepts_single_state():
    state = kuramoto.initial_state([np.pi / 2], 1.0, 0.0)[0]
    theta, e = kuramoto.kuramoto_output(state, 1.0, 4)
    assert theta.shape == (1,)
    assert e[0] == pytest.approx(1.0)
