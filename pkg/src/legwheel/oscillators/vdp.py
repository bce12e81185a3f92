"""
=======================
Van der Pol Oscillators
=======================

Relaxation oscillators coupled through their positions. Each oscillator
state is the row ``[x, y]`` with ``y = dx/dt``. The constant coupling matrix
``K_WALK`` inhibits every oscillator equally, which keeps the network on a
common period without fixing precise phase offsets. The phase therefore turns
clockwise in the ``(x, y)`` plane.

"""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from legwheel.oscillators.integrator import unwrap_phase
from legwheel.oscillators.network import NetworkParams, UndefinedPhaseError, WheelCommand

K_WALK = -0.2 * (np.ones((4, 4)) - np.eye(4))


@dataclass(eq=False)
class VdpParams(NetworkParams):
    """Van der Pol network parameters.

    ``omega`` enters the dynamics squared. The phase bias is carried for a
    uniform interface but has no effect on this model.

    Attributes
    ----------
    p_sq
        Square of the amplitude parameter ``p``; the limit cycle peaks near
        ``2p``.
    a
        Damping gain.

    """

    p_sq: float = 2.0
    a: float = 1.5

    @property
    def p(self) -> float:
        return float(np.sqrt(self.p_sq))


def vdp_derivative(state: np.ndarray, params: VdpParams) -> np.ndarray:
    x = state[:, 0]
    y = state[:, 1]
    coupled = x + params.coupling @ x
    y_dot = params.a * (params.p_sq - x ** 2) * y - params.omega ** 2 * coupled
    return np.stack([y, y_dot], axis=1)


def vdp_output(
    state: np.ndarray,
    e_max,
    a_e,
    p_sq: float,
    n_arcs: int,
    previous_theta: Optional[np.ndarray] = None,
) -> WheelCommand:
    """Wheel rotation and hub offset from Van der Pol states.

    The offset is largest, ``e_max``, when ``x`` crosses zero.

    Raises
    ------
    UndefinedPhaseError
        If any oscillator sits exactly at the origin.

    """
    state = np.atleast_2d(state)
    x, y = state[:, 0], state[:, 1]
    if np.any((x == 0) & (y == 0)):
        raise UndefinedPhaseError("A Van der Pol oscillator at the origin has no phase.")
    phi = np.arctan2(y, x)
    if previous_theta is not None:
        phi = unwrap_phase(np.asarray(previous_theta) * n_arcs / 2.0, phi)
    e = e_max - a_e * np.abs(x) / (2.0 * p_sq)
    return WheelCommand(2.0 / n_arcs * phi, e)


def fit_vdp_output(x: np.ndarray, target: np.ndarray, p_sq: float) -> Tuple[float, float]:
    """Least-squares ``(e_max, a_e)`` matching the output map to a target offset.

    Parameters
    ----------
    x
        Oscillator positions sampled uniformly in time over whole cycles.
    target
        Desired hub offset at each sample.
    p_sq
        Square of the amplitude parameter used by the output map.

    Returns
    -------
        ``e_max`` and a non-negative ``a_e``.

    """
    magnitude = np.abs(np.asarray(x, dtype=float))
    target = np.asarray(target, dtype=float)
    design = np.stack([np.ones_like(magnitude), -magnitude / (2.0 * p_sq)], axis=1)
    (e_max, a_e), *_ = np.linalg.lstsq(design, target, rcond=None)
    if a_e < 0:
        return float(np.mean(target)), 0.0
    return float(e_max), float(a_e)


def initial_state(phases, amplitude: float, omega: float) -> np.ndarray:
    """States on the harmonic approximation of the limit cycle."""
    phases = np.asarray(phases, dtype=float)
    return np.stack(
        [amplitude * np.cos(phases), -amplitude * omega * np.sin(phases)], axis=1
    )
