"""
==================
Network Parameters
==================

Parameters shared by every oscillator network and the wheel command produced
from a network state.

"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from legwheel.config_tree import ConfigurationError
from legwheel.exceptions import LegWheelError

N_OSCILLATORS = 4


class UndefinedPhaseError(LegWheelError):
    """Raised when an oscillator sits at the origin and has no phase."""

    pass


class WheelCommand(NamedTuple):
    """Per-wheel rotation and hub offset, in radians."""

    theta: np.ndarray
    e: np.ndarray


@dataclass(eq=False)
class NetworkParams:
    """Frequencies, coupling weights and phase biases of a network.

    Attributes
    ----------
    omega
        Oscillator frequencies in rad/s, one per oscillator.
    coupling
        Coupling weights ``k_ij``; the diagonal must be zero.
    phase_bias
        Desired phase offsets ``psi_ij``; must be antisymmetric.

    """

    omega: np.ndarray
    coupling: np.ndarray
    phase_bias: np.ndarray

    def __post_init__(self):
        self.omega = np.asarray(self.omega, dtype=float)
        self.coupling = np.asarray(self.coupling, dtype=float)
        self.phase_bias = np.asarray(self.phase_bias, dtype=float)
        self.validate()

    @property
    def size(self) -> int:
        return len(self.omega)

    def validate(self):
        n = self.size
        if self.coupling.shape != (n, n) or self.phase_bias.shape != (n, n):
            raise ConfigurationError(
                f"Coupling and phase bias must be {n}x{n} matrices.", "coupling"
            )
        if not (
            np.all(np.isfinite(self.omega))
            and np.all(np.isfinite(self.coupling))
            and np.all(np.isfinite(self.phase_bias))
        ):
            raise ConfigurationError("Network parameters must be finite.", "omega")
        if np.any(np.diag(self.coupling) != 0):
            raise ConfigurationError("Oscillators cannot couple to themselves.", "coupling")
        if not np.allclose(self.phase_bias, -self.phase_bias.T, rtol=0, atol=1e-12):
            raise ConfigurationError("Phase bias matrix must be antisymmetric.", "phase_bias")


def all_to_all(weight: float, n: int = N_OSCILLATORS) -> np.ndarray:
    """Uniform coupling with an empty diagonal."""
    return weight * (np.ones((n, n)) - np.eye(n))
