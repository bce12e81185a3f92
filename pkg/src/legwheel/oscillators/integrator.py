"""
==========
Integrator
==========

Fixed-step fourth order Runge-Kutta integration of oscillator networks and a
few helpers for reading phases and periods off the resulting trajectories.

"""
from typing import Callable, NamedTuple

import numpy as np

from legwheel.config_tree import ConfigurationError
from legwheel.exceptions import LegWheelError

Derivative = Callable[[np.ndarray, object], np.ndarray]


class DivergenceError(LegWheelError):
    """Raised when a network state stops being finite.

    Attributes
    ----------
    step
        Index of the integration step that produced the bad state.

    """

    def __init__(self, message: str, step: int):
        self.step = step
        super().__init__(message)


class Trajectory(NamedTuple):
    times: np.ndarray
    states: np.ndarray


def rk4_step(derivative: Derivative, state: np.ndarray, params, dt: float) -> np.ndarray:
    k1 = derivative(state, params)
    k2 = derivative(state + 0.5 * dt * k1, params)
    k3 = derivative(state + 0.5 * dt * k2, params)
    k4 = derivative(state + dt * k3, params)
    return state + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def advance(
    derivative: Derivative,
    state: np.ndarray,
    params,
    dt: float,
    steps: int,
    first_step: int = 0,
) -> np.ndarray:
    """Takes ``steps`` RK4 steps and returns the final state.

    Raises
    ------
    DivergenceError
        If any intermediate state overflows or becomes non-finite.

    """
    for i in range(steps):
        state = _checked_step(derivative, state, params, dt, first_step + i)
    return state


def integrate(
    derivative: Derivative, state: np.ndarray, params, duration: float, dt: float
) -> Trajectory:
    """Integrates a network for ``duration`` seconds with step ``dt``.

    Parameters
    ----------
    derivative
        Function of ``(state, params)`` returning the state derivative.
    state
        Initial state, one row per oscillator.
    params
        Network parameters passed through to ``derivative``.
    duration
        Length of the integration in seconds.
    dt
        Step size in seconds.

    Returns
    -------
        Sample times and states, including the initial state.

    Raises
    ------
    ConfigurationError
        If ``dt`` is not positive or ``duration`` is shorter than one step.
    DivergenceError
        If the state stops being finite.

    """
    if not dt > 0:
        raise ConfigurationError(f"Integration step must be positive, got {dt}.", "dt")
    if duration < dt:
        raise ConfigurationError(
            f"Integration duration {duration} s is shorter than one step.", "duration"
        )
    steps = int(round(duration / dt))
    states = np.empty((steps + 1,) + np.shape(state))
    states[0] = state
    for i in range(steps):
        states[i + 1] = _checked_step(derivative, states[i], params, dt, i)
    return Trajectory(dt * np.arange(steps + 1), states)


def _checked_step(derivative, state, params, dt, index):
    try:
        new_state = rk4_step(derivative, state, params, dt)
    except FloatingPointError as e:
        raise DivergenceError(f"Oscillator state overflowed at step {index}: {e}", index)
    if not np.all(np.isfinite(new_state)):
        raise DivergenceError(f"Oscillator state became non-finite at step {index}.", index)
    return new_state


def unwrap_phase(previous, wrapped):
    """Continues ``previous`` to the revolution of ``wrapped`` nearest to it."""
    step = np.asarray(wrapped) - np.asarray(previous)
    return previous + (step + np.pi) % (2 * np.pi) - np.pi


def limit_cycle_period(times: np.ndarray, signal: np.ndarray) -> np.ndarray:
    """Periods between consecutive upward zero crossings of ``signal``."""
    signal = np.asarray(signal)
    rising = np.flatnonzero((signal[:-1] < 0) & (signal[1:] >= 0))
    fraction = -signal[rising] / (signal[rising + 1] - signal[rising])
    crossings = times[rising] + fraction * (times[rising + 1] - times[rising])
    return np.diff(crossings)
