"""
================
Hopf Oscillators
================

Hopf oscillators with a rotation-based coupling term. Each oscillator state
is the row ``[x, y]``. An uncoupled oscillator settles on a circle of radius
``mu`` and turns at ``omega`` rad/s. The coupling pulls oscillator ``i``
towards the state of oscillator ``j`` rotated by ``psi_ij``, so a locked
network holds ``phi_i - phi_j = psi_ij``.

"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from legwheel.oscillators.integrator import unwrap_phase
from legwheel.oscillators.network import NetworkParams, UndefinedPhaseError, WheelCommand


@dataclass(eq=False)
class HopfParams(NetworkParams):
    """Hopf network parameters.

    Attributes
    ----------
    mu
        Limit cycle radius of each oscillator.
    a
        Convergence gain onto the limit cycle.

    """

    mu: np.ndarray = None
    a: float = 50.0

    def __post_init__(self):
        n = len(np.atleast_1d(self.omega))
        self.mu = np.ones(n) if self.mu is None else np.broadcast_to(
            np.asarray(self.mu, dtype=float), (n,)
        ).copy()
        super().__post_init__()


def hopf_derivative(state: np.ndarray, params: HopfParams) -> np.ndarray:
    x = state[:, 0]
    y = state[:, 1]
    growth = params.a * (params.mu ** 2 - (x ** 2 + y ** 2))
    omega = params.omega

    cos_bias = params.coupling * np.cos(params.phase_bias)
    sin_bias = params.coupling * np.sin(params.phase_bias)
    pull_x = cos_bias @ x - sin_bias @ y
    pull_y = sin_bias @ x + cos_bias @ y

    x_dot = growth * x - omega * y + pull_x
    y_dot = omega * x + growth * y + pull_y
    return np.stack([x_dot, y_dot], axis=1)


def hopf_output(
    state: np.ndarray, a_e, n_arcs: int, previous_theta: Optional[np.ndarray] = None
) -> WheelCommand:
    """Wheel rotation and hub offset from Hopf states.

    The offset is the live radius less the rectified ``x`` coordinate. With
    ``previous_theta`` the rotation continues across revolutions instead of
    wrapping.

    Raises
    ------
    UndefinedPhaseError
        If any oscillator sits exactly at the origin.

    """
    state = np.atleast_2d(state)
    x, y = state[:, 0], state[:, 1]
    if np.any((x == 0) & (y == 0)):
        raise UndefinedPhaseError("A Hopf oscillator at the origin has no phase.")
    phi = np.arctan2(y, x)
    if previous_theta is not None:
        phi = unwrap_phase(np.asarray(previous_theta) * n_arcs / 2.0, phi)
    e = np.hypot(x, y) - 0.5 * a_e * np.abs(x)
    return WheelCommand(2.0 / n_arcs * phi, e)


def initial_state(phases, mu) -> np.ndarray:
    phases = np.asarray(phases, dtype=float)
    return np.stack([mu * np.cos(phases), mu * np.sin(phases)], axis=1)
