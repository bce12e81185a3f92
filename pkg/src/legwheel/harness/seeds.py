"""
=============
Trial Seeding
=============

Every trial of a suite draws its randomness from its own seed. Trial seeds
are mixed from the suite's master seed and the trial index, so the seed of
trial ``k`` does not depend on how many trials run or in which order.

The mixing function is splitmix64:

.. code-block:: python

    >>> hex(splitmix64(0))
    '0xe220a8397b1dcdaf'
    >>> trial_seed(master=0, index=3) == splitmix64(splitmix64(0) ^ 3)
    True

"""
import numpy as np

from legwheel.config_tree import ConfigurationError

MASK_64 = (1 << 64) - 1


def splitmix64(value: int) -> int:
    """One round of the splitmix64 generator seeded with ``value``."""
    z = (int(value) + 0x9E3779B97F4A7C15) & MASK_64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK_64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK_64
    return z ^ (z >> 31)


def trial_seed(master: int, index: int) -> int:
    """The 64-bit seed of trial ``index`` in a suite seeded with ``master``."""
    if master < 0 or index < 0:
        raise ConfigurationError(
            f"Seeds and trial indices must not be negative: {master}, {index}.", "seed"
        )
    return splitmix64(splitmix64(master) ^ int(index))


def initial_phases(seed: int, n: int = 4) -> np.ndarray:
    """Uniform oscillator phases in ``[0, 2 pi)`` for one trial."""
    return np.random.default_rng(seed).uniform(0.0, 2 * np.pi, n)
