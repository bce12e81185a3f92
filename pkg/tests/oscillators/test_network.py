import numpy as np
import pytest

from legwheel.config_tree import ConfigurationError
from legwheel.oscillators.network import N_OSCILLATORS, NetworkParams, all_to_all


def test_all_to_all():
    coupling = all_to_all(0.5)
    assert coupling.shape == (N_OSCILLATORS, N_OSCILLATORS)
    assert np.all(np.diag(coupling) == 0)
    assert np.all(coupling[~np.eye(N_OSCILLATORS, dtype=bool)] == 0.5)


def test_params_are_arrays():
    params = NetworkParams([1, 2], [[0, 1], [1, 0]], [[0, 0.5], [-0.5, 0]])
    assert params.size == 2
    assert params.omega.dtype == float
    assert params.coupling.dtype == float


@pytest.mark.parametrize(
    "omega, coupling, phase_bias",
    [
        ([1.0, 1.0], np.zeros((3, 3)), np.zeros((2, 2))),
        ([1.0, 1.0], np.zeros((2, 2)), np.zeros((2, 3))),
        ([1.0, np.nan], np.zeros((2, 2)), np.zeros((2, 2))),
        ([1.0, 1.0], np.eye(2), np.zeros((2, 2))),
        ([1.0, 1.0], np.zeros((2, 2)), [[0.0, 0.5], [0.5, 0.0]]),
    ],
)
def test_bad_params(omega, coupling, phase_bias):
    with pytest.raises(ConfigurationError):
        NetworkParams(omega, coupling, phase_bias)
