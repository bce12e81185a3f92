"""
====================
Kuramoto Oscillators
====================

Phase oscillators with amplitude and offset states that track their targets
through critically damped second order dynamics. The state of each
oscillator is the row ``[phi, r, r_dot, x, x_dot]``. The offset ``x`` is
sometimes called ``d``.

"""
from dataclasses import dataclass

import numpy as np

from legwheel.oscillators.network import NetworkParams, WheelCommand

PHASE, AMPLITUDE, AMPLITUDE_RATE, OFFSET, OFFSET_RATE = range(5)


@dataclass(eq=False)
class KuramotoParams(NetworkParams):
    """Kuramoto network parameters.

    Attributes
    ----------
    amplitude_target
        Amplitude ``R`` tracked by ``r``.
    offset_target
        Offset ``X`` tracked by ``x``.
    a_r
        Convergence gain of the amplitude tracker, 1/s.
    a_x
        Convergence gain of the offset tracker, 1/s.

    """

    amplitude_target: np.ndarray = None
    offset_target: np.ndarray = None
    a_r: float = 20.0
    a_x: float = 20.0

    def __post_init__(self):
        n = len(np.atleast_1d(self.omega))
        self.amplitude_target = _per_oscillator(self.amplitude_target, n)
        self.offset_target = _per_oscillator(self.offset_target, n)
        super().__post_init__()


def _per_oscillator(value, n):
    if value is None:
        return np.zeros(n)
    return np.broadcast_to(np.asarray(value, dtype=float), (n,)).copy()


def kuramoto_derivative(state: np.ndarray, params: KuramotoParams) -> np.ndarray:
    phi = state[:, PHASE]
    r = state[:, AMPLITUDE]
    r_dot = state[:, AMPLITUDE_RATE]
    x = state[:, OFFSET]
    x_dot = state[:, OFFSET_RATE]

    # [i, j] holds phi_j - phi_i - psi_ij
    lag = phi[None, :] - phi[:, None] - params.phase_bias
    phi_dot = params.omega + np.sum(params.coupling * r[None, :] * np.sin(lag), axis=1)

    a_r, a_x = params.a_r, params.a_x
    r_ddot = a_r * (a_r / 4 * (params.amplitude_target - r) - r_dot)
    x_ddot = a_x * (a_x / 4 * (params.offset_target - x) - x_dot)
    return np.stack([phi_dot, r_dot, r_ddot, x_dot, x_ddot], axis=1)


def kuramoto_output(state: np.ndarray, a_e, n_arcs: int) -> WheelCommand:
    """Wheel rotation and rectified-sine hub offset from Kuramoto states."""
    state = np.atleast_2d(state)
    phi = state[:, PHASE]
    theta = 2.0 / n_arcs * phi
    e = state[:, AMPLITUDE] * a_e * np.abs(np.sin(phi)) + state[:, OFFSET]
    return WheelCommand(theta, e)


def initial_state(phases, amplitude, offset) -> np.ndarray:
    """Network state with trackers already at their targets."""
    phases = np.asarray(phases, dtype=float)
    state = np.zeros((len(phases), 5))
    state[:, PHASE] = phases
    state[:, AMPLITUDE] = amplitude
    state[:, OFFSET] = offset
    return state
