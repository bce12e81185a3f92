"""
==============
Network Traces
==============

Time series of an oscillator network driving the wheels, one row per
oscillator and sample, for plotting outside the package.

"""
import math
from typing import Optional

import numpy as np
import pandas as pd

from legwheel.config_tree import ConfigTree, ConfigurationError
from legwheel.control.controller import CpgController
from legwheel.control.steering import DriveCommand, RobotLayout
from legwheel.kinematics import FourBarConfig

TRACE_COLUMNS = ["t", "i", "phase", "theta", "e", "state0", "state1"]
MAX_INTEGRATOR_DT = 0.002


def _phase(model: str, state: np.ndarray) -> np.ndarray:
    if model == "kuramoto":
        return state[:, 0]
    return np.arctan2(state[:, 1], state[:, 0])


def network_trace(
    model: str,
    duration: float,
    dt: float,
    command: Optional[DriveCommand] = None,
    cfg: Optional[FourBarConfig] = None,
    layout: Optional[RobotLayout] = None,
    initial_phases=None,
) -> pd.DataFrame:
    """Runs a network under a constant command and samples it every ``dt``.

    ``theta`` is the gait-frame wheel rotation and ``e`` the hub offset sent
    to each wheel. ``state0`` and ``state1`` are the first two state
    variables of each oscillator.

    Raises
    ------
    ConfigurationError
        For an unknown model or a non-positive period.
    DivergenceError
        If the network blows up.

    """
    if not dt > 0:
        raise ConfigurationError(f"Trace period must be positive, got {dt}.", "dt")
    cfg = cfg if cfg is not None else FourBarConfig()
    layout = layout if layout is not None else RobotLayout(n_arcs=cfg.n_arcs)
    command = command if command is not None else DriveCommand(0.1, 0.0, 0.1)

    config = ConfigTree(CpgController.configuration_defaults, layers=["base", "override"])
    substeps = max(1, math.ceil(dt / MAX_INTEGRATOR_DT - 1e-9))
    config.update(
        {"controller": {"dt": dt, "integrator_dt": dt / substeps}}, layer="override"
    )
    controller = CpgController(
        model,
        cfg,
        layout,
        config.controller,
        initial_command=command,
        initial_phases=initial_phases,
    )

    frames = []
    ticks = int(round(duration / dt))
    for tick in range(ticks + 1):
        if tick:
            controller.tick(command)
        state = controller.network_state
        frames.append(
            pd.DataFrame(
                {
                    "t": tick * dt,
                    "i": np.arange(len(state)),
                    "phase": _phase(model, state),
                    "theta": controller.gait_angles,
                    "e": [hub.offset for hub in controller.targets],
                    "state0": state[:, 0],
                    "state1": state[:, 1],
                }
            )
        )
    return pd.concat(frames, ignore_index=True)[TRACE_COLUMNS]
