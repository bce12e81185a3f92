"""
=====================
Differential Steering
=====================

Turns a drive command ``(v, w, h)`` into per-wheel oscillator frequency
targets and the rate of change of the phase bias matrix.

Wheels are indexed front-left, front-right, rear-left, rear-right. Wheels on
opposite sides are mirror images, so the same forward travel needs opposite
motor rotations; ``side_signs`` records which way each motor turns.

"""
import functools
from dataclasses import dataclass
from typing import ClassVar, Dict, List, Sequence, Tuple

import numpy as np

from legwheel.config_tree import ConfigurationError
from legwheel.kinematics import FourBarConfig, extension_bounds

SIDE_SIGNS = (-1, 1, -1, 1)

# phase lead of oscillator j over oscillator i while turning counter-clockwise
PSI_CCW = (np.array(SIDE_SIGNS)[None, :] - np.array(SIDE_SIGNS)[:, None]) / 2.0
QUARTER_CYCLE_BIAS = np.pi / 2 * (np.arange(4)[None, :] - np.arange(4)[:, None])


@dataclass(frozen=True)
class DriveCommand:
    """Forward speed ``v`` (m/s), yaw rate ``w`` (rad/s) and axle height ``h`` (m)."""

    v: float = 0.0
    w: float = 0.0
    h: float = 0.1

    def __post_init__(self):
        if not np.all(np.isfinite([self.v, self.w, self.h])):
            raise ConfigurationError(f"Drive command must be finite: {self}.", "command")


@dataclass(frozen=True)
class RobotLayout:
    """Placement of the four wheels on the body.

    Attributes
    ----------
    track_width
        Lateral distance from the body centreline to each wheel plane.
    wheelbase
        Distance between the front and rear axles.
    side_signs
        Motor rotation sign of each wheel, negative on the left.
    n_arcs
        Arcs per wheel.

    """

    track_width: float = 0.2
    wheelbase: float = 0.35
    side_signs: Tuple[int, int, int, int] = SIDE_SIGNS
    n_arcs: int = 5

    configuration_defaults: ClassVar[Dict] = {
        "layout": {"track_width": 0.2, "wheelbase": 0.35, "side_signs": list(SIDE_SIGNS)}
    }

    def __post_init__(self):
        if not self.track_width > 0 or not self.wheelbase > 0:
            raise ConfigurationError("Track width and wheelbase must be positive.", "layout")
        signs = list(self.side_signs)
        if len(signs) != 4 or sorted(signs) != [-1, -1, 1, 1]:
            raise ConfigurationError(
                f"Side signs must put two wheels on each side, got {signs}.", "side_signs"
            )

    @property
    def signs(self) -> np.ndarray:
        return np.asarray(self.side_signs, dtype=float)

    @property
    def wheel_positions(self) -> np.ndarray:
        """Body-frame ``(x, y)`` of each axle, x forward and y to the left."""
        longitudinal = np.array([1.0, 1.0, -1.0, -1.0]) * self.wheelbase / 2
        lateral = -self.signs * self.track_width
        return np.stack([longitudinal, lateral], axis=1)

    @classmethod
    def from_config(cls, layout_config, n_arcs: int) -> "RobotLayout":
        return cls(
            track_width=float(layout_config.track_width),
            wheelbase=float(layout_config.wheelbase),
            side_signs=tuple(int(s) for s in layout_config.side_signs),
            n_arcs=n_arcs,
        )


def steering_targets(cmd: DriveCommand, layout: RobotLayout) -> Tuple[np.ndarray, np.ndarray]:
    """Motor-frame frequency targets and the phase bias rate for a command.

    Returns
    -------
        ``omega_star`` with one entry per wheel in rad/s and the rate of the
        phase bias matrix in rad/s.

    Raises
    ------
    ConfigurationError
        If the commanded height is not positive.

    """
    if not cmd.h > 0:
        raise ConfigurationError(f"Commanded height must be positive, got {cmd.h}.", "h")
    turn = cmd.w * layout.track_width / cmd.h
    omega_star = layout.n_arcs / 2 * (turn + layout.signs * cmd.v / cmd.h)
    psi_rate = layout.n_arcs * turn * PSI_CCW
    return omega_star, psi_rate


def filter_frequency(omega, omega_star, k_omega: float, dt: float):
    """Advances ``d(omega)/dt = k_omega * (omega_star - omega)`` by ``dt`` exactly."""
    if not k_omega > 0:
        raise ConfigurationError(f"k_omega must be positive, got {k_omega}.", "k_omega")
    return omega + (np.asarray(omega_star) - omega) * (1.0 - np.exp(-k_omega * dt))


@functools.lru_cache(maxsize=256)
def height_to_extension(h: float, cfg: FourBarConfig) -> Tuple[float, float]:
    """Extension bounds ``(X, R)`` for an axle height ``h``."""
    return extension_bounds(h - cfg.tip_radius, cfg)


class CommandSchedule:
    """Time-ordered drive commands; each holds until the next one starts."""

    def __init__(self, entries: Sequence[Tuple[float, float, float, float]]):
        entries = sorted((float(t), float(v), float(w), float(h)) for t, v, w, h in entries)
        if not entries:
            raise ConfigurationError(
                "A command schedule needs at least one entry.", "schedule"
            )
        if entries[0][0] != 0.0:
            raise ConfigurationError(
                "The first schedule entry must start at t=0.", "schedule"
            )
        self._starts = np.array([entry[0] for entry in entries])
        self._commands = [DriveCommand(v, w, h) for _, v, w, h in entries]

    @property
    def commands(self) -> List[DriveCommand]:
        return list(self._commands)

    @property
    def entries(self) -> List[Tuple[float, float, float, float]]:
        return [(float(t), c.v, c.w, c.h) for t, c in zip(self._starts, self._commands)]

    def command_at(self, t: float) -> DriveCommand:
        index = int(np.searchsorted(self._starts, t, side="right")) - 1
        return self._commands[max(index, 0)]

    @classmethod
    def from_config(cls, schedule) -> "CommandSchedule":
        """Reads entries given as mappings with keys ``t, v, w, h`` or as 4-lists."""
        entries = []
        for entry in schedule:
            if isinstance(entry, dict):
                entries.append((entry.get("t", 0.0), entry["v"], entry["w"], entry["h"]))
            else:
                entries.append(tuple(entry))
        return cls(entries)

    def __len__(self):
        return len(self._commands)
