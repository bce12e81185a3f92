"""
===========
Controllers
===========

Controllers turn a stream of drive commands into hub phase targets, one
:class:`~legwheel.kinematics.HubState` per wheel, at a fixed rate.

:class:`CpgController` runs one of the oscillator networks in the gait frame,
where every oscillator turns forwards for forward travel. Motor angles follow
from the side sign of each wheel. :class:`DirectDriveController` is the
baseline without oscillators: wheels turn at the commanded rate with the legs
held at full extension.

"""
import functools
from dataclasses import dataclass, field
from typing import ClassVar, Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from legwheel.config_tree import ConfigTree, ConfigurationError
from legwheel.control.steering import (
    QUARTER_CYCLE_BIAS,
    DriveCommand,
    RobotLayout,
    filter_frequency,
    height_to_extension,
    steering_targets,
)
from legwheel.exceptions import LegWheelError
from legwheel.kinematics import (
    FourBarConfig,
    HubState,
    WorkspaceError,
    offset_at_extension,
    offset_for_extension,
    offset_range,
    tip_angle_offset,
)
from legwheel.oscillators import hopf, kuramoto, vdp
from legwheel.oscillators.integrator import advance, integrate
from legwheel.oscillators.network import all_to_all

NETWORK_MODELS = ("kuramoto", "hopf", "vdp")
CONTROLLER_MODELS = ("direct",) + NETWORK_MODELS


class UnsupportedFeatureError(LegWheelError):
    """Raised for commands a network cannot follow, such as turning with Van der Pol."""

    pass


@dataclass
class ControllerState:
    """Mutable state carried between controller ticks.

    Attributes
    ----------
    omega
        Filtered gait-frame frequency of each oscillator, rad/s.
    phase_bias
        Current phase bias matrix.
    targets
        Hub targets produced by the last tick.

    """

    omega: np.ndarray
    phase_bias: np.ndarray
    targets: List[HubState] = field(default_factory=list)


def locked_phases(phase_bias: np.ndarray) -> np.ndarray:
    """Phases that already satisfy ``phi_j - phi_i = psi_ij``."""
    return np.array(phase_bias[0], dtype=float)


def check_command(
    cmd: DriveCommand,
    cfg: FourBarConfig,
    model: str,
    max_speed: float,
    max_yaw_rate: float,
):
    """Rejects commands a controller of ``model`` cannot follow.

    Raises
    ------
    ConfigurationError
        If the speed or yaw rate exceed their limits.
    WorkspaceError
        If the axle height puts the tip outside the wheel's height band.
    UnsupportedFeatureError
        If a Van der Pol network is asked to turn or reverse.

    """
    if abs(cmd.v) > max_speed or abs(cmd.w) > max_yaw_rate:
        raise ConfigurationError(
            f"Command {cmd} exceeds the limits |v| <= {max_speed} m/s, "
            f"|w| <= {max_yaw_rate} rad/s.",
            "command",
        )
    low, high = cfg.height_band
    tip_height = cmd.h - cfg.tip_radius
    if not low - 1e-12 <= tip_height <= high + 1e-12:
        raise WorkspaceError(
            f"Axle height {cmd.h} m puts the tip at {tip_height:.4g} m, outside the "
            f"height band [{low}, {high}] m.",
            deficit=max(low - tip_height, tip_height - high),
            stage="height",
        )
    if model == "vdp" and (cmd.w != 0 or cmd.v < 0):
        raise UnsupportedFeatureError(
            f"Van der Pol networks only drive straight ahead; got v={cmd.v}, w={cmd.w}."
        )


@functools.lru_cache(maxsize=128)
def vdp_output_calibration(
    omega: float, height: float, cfg: FourBarConfig, p_sq: float, a: float
) -> Tuple[float, float]:
    """Van der Pol output gains ``(e_max, a_e)`` for a gait frequency and axle height.

    A single Van der Pol oscillator is run onto its limit cycle at ``omega``.
    Over its last full cycle the hub offset that holds the contact point at
    the commanded height is fitted with the rectified output map.

    """
    offset, amplitude = height_to_extension(height, cfg)
    p = float(np.sqrt(p_sq))
    if not omega > 0:
        return offset, p * amplitude

    period = 2 * np.pi / omega
    dt = min(0.01, period / 1000)
    params = vdp.VdpParams(
        omega=[omega], coupling=np.zeros((1, 1)), phase_bias=np.zeros((1, 1)), p_sq=p_sq, a=a
    )
    state = vdp.initial_state([0.0], 2 * p, omega)
    state = advance(vdp.vdp_derivative, state, params, dt, int(round(6 * period / dt)))
    cycle = integrate(vdp.vdp_derivative, state, params, 8 * period, dt).states[:, 0]
    x, y = cycle[:, 0], cycle[:, 1]
    rising = np.flatnonzero((x[:-1] < 0) & (x[1:] >= 0))
    if len(rising) < 2:
        logger.warning(
            f"No full Van der Pol cycle at omega={omega:.4g} rad/s; "
            "using the harmonic output map."
        )
        return offset, p * amplitude

    last = slice(rising[-2] + 1, rising[-1] + 1)
    theta = -2.0 / cfg.n_arcs * np.unwrap(np.arctan2(y[last], x[last]))
    half_step = np.pi / cfg.n_arcs
    deviation = (theta + half_step) % (2 * half_step) - half_step
    tip_height = height - cfg.tip_radius
    extension = np.minimum(tip_height / np.cos(deviation), cfg.max_extension)
    target = offset_for_extension(extension, cfg)
    e_max, a_e = vdp.fit_vdp_output(x[last], target, p_sq)
    logger.debug(
        f"Van der Pol output at omega={omega:.4g} rad/s, h={height:.4g} m: "
        f"e_max={e_max:.4f}, a_e={a_e:.4f}."
    )
    return e_max, a_e


class _Controller:
    """Shared command checks and hub mapping of both controllers."""

    configuration_defaults: ClassVar[Dict] = {
        "controller": {
            "dt": 0.02,
            "integrator_dt": 0.002,
            "k_omega": 5.0,
            "tip_compensation": True,
            "max_speed": 2.0,
            "max_yaw_rate": 4.0,
            "kuramoto": {"coupling": 1.0, "a_r": 20.0, "a_x": 20.0},
            "hopf": {"coupling": 0.1, "a": 50.0},
            "vdp": {"coupling": -0.2, "p_sq": 2.0, "a": 1.5},
        }
    }

    model: str

    def __init__(
        self,
        cfg: FourBarConfig,
        layout: RobotLayout,
        config: Optional[ConfigTree],
        synchronized: bool,
    ):
        if layout.n_arcs != cfg.n_arcs:
            raise ConfigurationError(
                f"Layout expects {layout.n_arcs} arcs but the wheel has {cfg.n_arcs}.",
                "n_arcs",
            )
        if config is None:
            config = ConfigTree(self.configuration_defaults).controller
        self.cfg = cfg
        self.layout = layout
        self.synchronized = synchronized
        self.config = config
        self.dt = float(config.dt)
        self.max_speed = float(config.max_speed)
        self.max_yaw_rate = float(config.max_yaw_rate)
        if not self.dt > 0:
            raise ConfigurationError(
                f"Controller period must be positive, got {self.dt}.", "dt"
            )
        self._signs = layout.signs
        self._half_step = np.pi / cfg.n_arcs

    def check_command(self, cmd: DriveCommand):
        check_command(cmd, self.cfg, self.model, self.max_speed, self.max_yaw_rate)

    @property
    def targets(self) -> List[HubState]:
        return list(self.state.targets)

    def tick(self, cmd: DriveCommand) -> List[HubState]:
        raise NotImplementedError


class CpgController(_Controller):
    """Drives the four wheels from a network of coupled oscillators.

    Parameters
    ----------
    model
        One of ``"kuramoto"``, ``"hopf"`` or ``"vdp"``.
    cfg
        Wheel mechanism shared by all four wheels.
    layout
        Wheel placement.
    config
        The ``controller`` block of a scenario; package defaults if omitted.
    initial_command
        Command the network is initialised for; frequencies start settled on
        its targets.
    initial_phases
        Gait phase of each oscillator. Defaults to the phases already locked
        to the initial phase bias.
    synchronized
        Holds the phase bias at zero, the climbing mode.

    """

    def __init__(
        self,
        model: str,
        cfg: FourBarConfig,
        layout: RobotLayout,
        config: Optional[ConfigTree] = None,
        initial_command: Optional[DriveCommand] = None,
        initial_phases=None,
        synchronized: bool = False,
    ):
        if model not in NETWORK_MODELS:
            raise ConfigurationError(
                f"Unknown oscillator model {model}; expected one of {NETWORK_MODELS}.",
                "oscillator",
            )
        super().__init__(cfg, layout, config, synchronized)
        self.model = model
        self.integrator_dt = float(self.config.integrator_dt)
        self._substeps = int(round(self.dt / self.integrator_dt))
        if self._substeps < 1 or not np.isclose(self._substeps * self.integrator_dt, self.dt):
            raise ConfigurationError(
                f"Controller period {self.dt} s must be a whole number of integrator "
                f"steps of {self.integrator_dt} s.",
                "integrator_dt",
            )
        self.k_omega = float(self.config.k_omega)
        self.tip_compensation = bool(self.config.tip_compensation)
        self.gains = self.config[model].to_dict()
        self._omega_scale = 1.0
        if model == "vdp" and synchronized:
            # locked in phase, the coupling scales the restoring term of every oscillator
            stiffness = 1.0 + (len(self._signs) - 1) * float(self.gains["coupling"])
            if not stiffness > 0:
                raise ConfigurationError(
                    f"Van der Pol coupling {self.gains['coupling']} leaves no restoring "
                    "force when the network runs in phase.",
                    "coupling",
                )
            self._omega_scale = 1.0 / np.sqrt(stiffness)
        # gait angle at which the output map extends the legs furthest
        extension_angle = 0.0 if model == "kuramoto" else self._half_step
        self.alignment = -np.pi / 2 - self._half_step - extension_angle

        cmd = initial_command if initial_command is not None else DriveCommand()
        self.check_command(cmd)
        omega_star, _ = steering_targets(cmd, layout)
        bias = np.zeros((4, 4)) if synchronized else QUARTER_CYCLE_BIAS.copy()
        phases = (
            locked_phases(bias)
            if initial_phases is None
            else np.asarray(initial_phases, dtype=float)
        )
        self.state = ControllerState(omega=self._signs * omega_star, phase_bias=bias)
        self._step = 0
        self._theta = 2.0 / cfg.n_arcs * phases

        offset, amplitude = height_to_extension(cmd.h, cfg)
        if model == "kuramoto":
            self._network = kuramoto.initial_state(phases, amplitude, offset)
        elif model == "hopf":
            self._network = hopf.initial_state(phases, abs(offset))
        else:
            self._network = vdp.initial_state(
                phases, 2 * np.sqrt(self.gains["p_sq"]), self.state.omega
            )
        self.state.targets = self._hub_targets(cmd, offset, amplitude)
        logger.debug(
            f"{model} controller ready: X={offset:.4f}, R={amplitude:.4f}, "
            f"synchronized={synchronized}."
        )

    @property
    def network_state(self) -> np.ndarray:
        """A copy of the oscillator states, one row per wheel."""
        return np.array(self._network, dtype=float)

    @property
    def gait_angles(self) -> np.ndarray:
        """Unwrapped gait-frame wheel rotation of each oscillator."""
        return np.array(self._theta, dtype=float)

    def tick(self, cmd: DriveCommand) -> List[HubState]:
        """Advances the network by one controller period and returns hub targets.

        Raises
        ------
        DivergenceError
            If the network state blows up.
        WorkspaceError
            If the commanded height is unreachable.

        """
        self.check_command(cmd)
        omega_star, psi_rate = steering_targets(cmd, self.layout)
        state = self.state
        state.omega = filter_frequency(
            state.omega, self._signs * omega_star, self.k_omega, self.dt
        )
        if not self.synchronized:
            state.phase_bias = state.phase_bias + psi_rate * self.dt

        offset, amplitude = height_to_extension(cmd.h, self.cfg)
        derivative, params = self._network_params(offset, amplitude)
        self._network = advance(
            derivative, self._network, params, self.integrator_dt, self._substeps, self._step
        )
        self._step += self._substeps
        state.targets = self._hub_targets(cmd, offset, amplitude)
        return list(state.targets)

    def _network_params(self, offset: float, amplitude: float):
        gains = self.gains
        omega = self.state.omega
        if self.model == "kuramoto":
            params = kuramoto.KuramotoParams(
                omega=omega,
                coupling=all_to_all(gains["coupling"]),
                phase_bias=self.state.phase_bias,
                amplitude_target=amplitude,
                offset_target=offset,
                a_r=gains["a_r"],
                a_x=gains["a_x"],
            )
            return kuramoto.kuramoto_derivative, params
        if self.model == "hopf":
            # the Hopf coupling locks phi_i - phi_j to its bias
            params = hopf.HopfParams(
                omega=omega,
                coupling=all_to_all(gains["coupling"]),
                phase_bias=self.state.phase_bias.T,
                mu=offset,
                a=gains["a"],
            )
            return hopf.hopf_derivative, params
        params = vdp.VdpParams(
            omega=omega * self._omega_scale,
            coupling=all_to_all(gains["coupling"]),
            phase_bias=np.zeros((4, 4)),
            p_sq=gains["p_sq"],
            a=gains["a"],
        )
        return vdp.vdp_derivative, params

    def _read_output(self, cmd: DriveCommand, offset: float, amplitude: float):
        n_arcs = self.cfg.n_arcs
        if self.model == "kuramoto":
            return kuramoto.kuramoto_output(self._network, -1.0, n_arcs)
        if self.model == "hopf":
            theta, e = hopf.hopf_output(
                self._network, 2 * amplitude / offset, n_arcs, previous_theta=self._theta
            )
            return theta, np.sign(offset) * e
        # calibrated for the commanded gait frequency, not the filtered one
        e_max, a_e = vdp_output_calibration(
            round(n_arcs / 2 * cmd.v / cmd.h, 9),
            round(cmd.h, 9),
            self.cfg,
            float(self.gains["p_sq"]),
            float(self.gains["a"]),
        )
        theta, e = vdp.vdp_output(
            self._network, e_max, a_e, self.gains["p_sq"], n_arcs, previous_theta=-self._theta
        )
        # Van der Pol phases turn clockwise
        return -theta, e

    def _hub_targets(
        self, cmd: DriveCommand, offset: float, amplitude: float
    ) -> List[HubState]:
        theta, e = self._read_output(cmd, offset, amplitude)
        self._theta = np.asarray(theta, dtype=float)
        low, high = offset_range(self.cfg)
        e = np.clip(e, low, high)
        tip_angle = self._signs * self._theta + self.alignment
        gamma = tip_angle_offset(e if self.tip_compensation else offset, self.cfg)
        phi_outer = tip_angle - gamma
        return [HubState(float(o), float(o + d)) for o, d in zip(phi_outer, e)]


class DirectDriveController(_Controller):
    """The baseline: wheels turn at the commanded rate with the legs fully extended.

    The wheel speed assumes the axle stands at full extension, whatever
    height the command asks for.

    """

    def __init__(
        self,
        cfg: FourBarConfig,
        layout: RobotLayout,
        config: Optional[ConfigTree] = None,
        initial_command: Optional[DriveCommand] = None,
        initial_phases=None,
        synchronized: bool = False,
    ):
        super().__init__(cfg, layout, config, synchronized)
        self.model = "direct"
        extension = cfg.height_band[1]
        self.offset = offset_at_extension(extension, cfg)
        self.height = extension + cfg.tip_radius
        cmd = initial_command if initial_command is not None else DriveCommand()
        self.check_command(cmd)
        bias = np.zeros((4, 4)) if synchronized else QUARTER_CYCLE_BIAS.copy()
        phases = (
            locked_phases(bias)
            if initial_phases is None
            else np.asarray(initial_phases, dtype=float)
        )
        self._theta = 2.0 / cfg.n_arcs * phases
        self.state = ControllerState(
            omega=self._signs * self._wheel_rates(cmd), phase_bias=bias
        )
        self.state.targets = self._hub_targets()

    def _wheel_rates(self, cmd: DriveCommand) -> np.ndarray:
        omega_star, _ = steering_targets(DriveCommand(cmd.v, cmd.w, self.height), self.layout)
        return omega_star

    def tick(self, cmd: DriveCommand) -> List[HubState]:
        self.check_command(cmd)
        self.state.omega = self._signs * self._wheel_rates(cmd)
        self._theta = self._theta + 2.0 / self.cfg.n_arcs * self.state.omega * self.dt
        self.state.targets = self._hub_targets()
        return list(self.state.targets)

    def _hub_targets(self) -> List[HubState]:
        motor = self._signs * self._theta
        return [HubState(float(m), float(m + self.offset)) for m in motor]


def build_controller(
    model: str,
    cfg: FourBarConfig,
    layout: RobotLayout,
    config: Optional[ConfigTree] = None,
    initial_command: Optional[DriveCommand] = None,
    initial_phases=None,
    synchronized: bool = False,
):
    """Creates the controller for ``model``, which may also be ``"direct"``."""
    if model == "direct":
        return DirectDriveController(
            cfg, layout, config, initial_command, initial_phases, synchronized
        )
    return CpgController(
        model, cfg, layout, config, initial_command, initial_phases, synchronized
    )
