"""
=========
Simulator
=========

A quasi-static simulator of the four-wheeled robot. There is no inertia:
each step rolls every wheel without slip through the rotation its hub targets
ask for, moves the body as a differential drive and lets the axles settle on
the terrain.

The body cannot climb faster than its wheels allow. If moving the body would
lift any axle more steeply than ``climb_slope`` over the distance that wheel
rolls, plus ``climb_tolerance``, the translation is dropped for that step and
the wheels turn in place. Climbing therefore succeeds when the wheel shape
offers a contact on top of the obstacle.

"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import ClassVar, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from loguru import logger

from legwheel.config_tree import ConfigurationError
from legwheel.control.steering import CommandSchedule, DriveCommand, RobotLayout
from legwheel.exceptions import LegWheelError
from legwheel.kinematics import FourBarConfig, HubState, arc_boundary, tip_angle_offset
from legwheel.oscillators.integrator import DivergenceError
from legwheel.simulation.contact import Contact, boundary_contacts
from legwheel.simulation.terrain import Terrain

LOG_COLUMNS = (
    ["t", "x", "y", "yaw", "z", "pitch", "roll"]
    + [f"w{i}_{name}" for i in range(4) for name in ("theta", "e")]
    + ["cmd_v", "cmd_w", "cmd_h"]
)


@dataclass
class SimState:
    """Pose of the robot and of its wheels.

    Attributes
    ----------
    z
        Body height at the centre of the axle plane.
    pitch
        Nose-up rotation of the axle plane.
    roll
        Rotation of the axle plane raising the left side.
    hubs
        Hub phases of each wheel.
    rotation
        Accumulated tip angle of each wheel, the angle that rolls on the ground.
    axle_heights
        Height of each axle.
    effective_radius
        Vertical distance from each axle to its contact.

    """

    t: float
    x: float
    y: float
    yaw: float
    z: float
    pitch: float
    roll: float
    hubs: List[HubState]
    rotation: np.ndarray
    axle_heights: np.ndarray
    effective_radius: np.ndarray
    blocked: bool = field(default=False)


class Simulator:
    """Steps the robot pose for a wheel mechanism and layout."""

    configuration_defaults: ClassVar[Dict] = {
        "simulation": {
            "contact_samples": 64,
            "climb_slope": 1.0,
            "climb_tolerance": 0.01,
        }
    }

    def __init__(
        self,
        cfg: FourBarConfig,
        layout: RobotLayout,
        contact_samples: int = 64,
        climb_slope: float = 1.0,
        climb_tolerance: float = 0.01,
    ):
        if contact_samples < 2:
            raise ConfigurationError(
                f"Need at least two contact samples per arc, got {contact_samples}.",
                "contact_samples",
            )
        if climb_slope < 0 or climb_tolerance < 0:
            raise ConfigurationError(
                "Climb slope and tolerance must not be negative.", "climb_slope"
            )
        self.cfg = cfg
        self.layout = layout
        self.contact_samples = int(contact_samples)
        self.climb_slope = float(climb_slope)
        self.climb_tolerance = float(climb_tolerance)
        self._signs = layout.signs
        self._offsets = layout.wheel_positions
        self._plane = np.column_stack([np.ones(4), self._offsets])

    @classmethod
    def from_config(
        cls, cfg: FourBarConfig, layout: RobotLayout, simulation_config
    ) -> "Simulator":
        return cls(
            cfg,
            layout,
            contact_samples=int(simulation_config.contact_samples),
            climb_slope=float(simulation_config.climb_slope),
            climb_tolerance=float(simulation_config.climb_tolerance),
        )

    def tip_angles(self, hubs: Sequence[HubState]) -> np.ndarray:
        """Angle of each arc tip in its wheel frame."""
        phi_outer = np.array([hub.phi_outer for hub in hubs])
        offset = np.array([hub.offset for hub in hubs])
        return phi_outer + tip_angle_offset(offset, self.cfg)

    def _boundary(self, hubs: Sequence[HubState]) -> np.ndarray:
        return arc_boundary(
            np.array([hub.phi_outer for hub in hubs]),
            np.array([hub.phi_inner for hub in hubs]),
            self.cfg,
            self.contact_samples,
        )

    def _contacts(
        self, boundary: np.ndarray, x: float, y: float, yaw: float, terrain
    ) -> Contact:
        cos, sin = np.cos(yaw), np.sin(yaw)
        axle_x = x + cos * self._offsets[:, 0] - sin * self._offsets[:, 1]
        axle_y = y + sin * self._offsets[:, 0] + cos * self._offsets[:, 1]
        return boundary_contacts(
            boundary,
            axle_x,
            axle_y,
            np.full(4, yaw),
            self._signs,
            terrain,
            self.cfg.tip_radius,
        )

    def _attitude(self, axle_heights: np.ndarray):
        (z, slope_x, slope_y), *_ = np.linalg.lstsq(self._plane, axle_heights, rcond=None)
        return float(z), float(np.arctan(slope_x)), float(np.arctan(slope_y))

    def initial_state(
        self,
        hubs: Sequence[HubState],
        terrain: Terrain,
        x: float = 0.0,
        y: float = 0.0,
        yaw: float = 0.0,
    ) -> SimState:
        """Places the robot at ``(x, y, yaw)`` resting on the terrain."""
        contact = self._contacts(self._boundary(hubs), x, y, yaw, terrain)
        z, pitch, roll = self._attitude(contact.axle_height)
        return SimState(
            t=0.0,
            x=float(x),
            y=float(y),
            yaw=float(yaw),
            z=z,
            pitch=pitch,
            roll=roll,
            hubs=list(hubs),
            rotation=self.tip_angles(hubs),
            axle_heights=contact.axle_height,
            effective_radius=contact.effective_radius,
        )

    def step(
        self, state: SimState, targets: Sequence[HubState], terrain: Terrain, dt: float
    ) -> SimState:
        """Moves the wheels to ``targets`` and the body by the distance they roll.

        Raises
        ------
        ConfigurationError
            If ``dt`` is not positive.
        DivergenceError
            If the new pose is not finite.

        """
        if not dt > 0:
            raise ConfigurationError(f"Simulation step must be positive, got {dt}.", "dt")
        rotation = self.tip_angles(targets)
        boundary = self._boundary(targets)
        turned = self._contacts(boundary, state.x, state.y, state.yaw, terrain)

        radius = 0.5 * (state.effective_radius + turned.effective_radius)
        rolled = self._signs * (rotation - state.rotation) * radius
        left = rolled[self._signs < 0].mean()
        right = rolled[self._signs > 0].mean()
        forward = 0.5 * (left + right)
        d_yaw = (right - left) / (2 * self.layout.track_width)
        heading = state.yaw + 0.5 * d_yaw
        x = state.x + forward * np.cos(heading)
        y = state.y + forward * np.sin(heading)
        yaw = state.yaw + d_yaw

        moved = self._contacts(boundary, x, y, yaw, terrain)
        rise = moved.axle_height - turned.axle_height
        blocked = bool(
            np.any(rise > self.climb_slope * np.abs(rolled) + self.climb_tolerance)
        )
        if blocked:
            x, y, yaw, contact = state.x, state.y, state.yaw, turned
        else:
            contact = moved

        z, pitch, roll = self._attitude(contact.axle_height)
        t = state.t + dt
        if not np.all(np.isfinite([x, y, yaw, z, pitch, roll])):
            raise DivergenceError(
                f"Robot pose became non-finite at t={t:.3f} s.", int(round(t / dt))
            )
        return SimState(
            t=t,
            x=float(x),
            y=float(y),
            yaw=float(yaw),
            z=z,
            pitch=pitch,
            roll=roll,
            hubs=list(targets),
            rotation=rotation,
            axle_heights=contact.axle_height,
            effective_radius=contact.effective_radius,
            blocked=blocked,
        )


class TrialLog:
    """Fixed-rate samples of a trial.

    Wheel columns hold the commanded outer hub phase (``theta``) and hub
    offset (``e``) of each wheel.

    """

    COLUMNS = LOG_COLUMNS

    def __init__(self, frame: pd.DataFrame):
        missing = [c for c in self.COLUMNS if c not in frame.columns]
        if missing:
            raise LegWheelError(f"Trial log is missing columns {missing}.")
        self.frame = frame[list(self.COLUMNS)].reset_index(drop=True)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "TrialLog":
        return cls(pd.DataFrame(list(rows), columns=list(cls.COLUMNS), dtype=float))

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "TrialLog":
        return cls(pd.read_csv(path))

    @staticmethod
    def row(state: SimState, cmd: DriveCommand) -> List[float]:
        wheels = []
        for hub in state.hubs:
            wheels.extend([hub.phi_outer, hub.offset])
        return [
            state.t,
            state.x,
            state.y,
            state.yaw,
            state.z,
            state.pitch,
            state.roll,
            *wheels,
            cmd.v,
            cmd.w,
            cmd.h,
        ]

    def to_csv(self, path: Optional[Union[str, Path]] = None) -> Optional[str]:
        """Writes the log with 9 significant digits; returns the text if no path is given."""
        return self.frame.to_csv(path, index=False, float_format="%.9g")

    def __len__(self):
        return len(self.frame)

    def __getitem__(self, column):
        return self.frame[column]


def run_trial(
    schedule: CommandSchedule,
    controller,
    simulator: Simulator,
    terrain: Terrain,
    duration: float,
) -> TrialLog:
    """Runs the closed chain of schedule, controller and simulator for ``duration``.

    The log holds the initial sample and one sample per controller tick.

    Raises
    ------
    LegWheelError
        Any error raised by the controller or simulator, with the simulated
        time appended to its message.

    """
    dt = controller.dt
    if duration < 0:
        raise ConfigurationError(
            f"Trial duration must not be negative, got {duration}.", "duration"
        )
    ticks = int(round(duration / dt))
    t = 0.0
    try:
        cmd = schedule.command_at(0.0)
        state = simulator.initial_state(controller.targets, terrain)
        rows = [TrialLog.row(state, cmd)]
        for tick in range(ticks):
            cmd = schedule.command_at(t)
            targets = controller.tick(cmd)
            state = simulator.step(state, targets, terrain, dt)
            t = (tick + 1) * dt
            state.t = t
            rows.append(TrialLog.row(state, cmd))
    except LegWheelError as e:
        e.args = (f"{e.args[0] if e.args else e} at t={t:.3f} s",) + e.args[1:]
        raise
    logger.debug(
        f"Trial finished at t={t:.3f} s: "
        f"x={state.x:.4f} m, y={state.y:.4f} m, z={state.z:.4f} m."
    )
    return TrialLog.from_rows(rows)
