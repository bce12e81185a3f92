import numpy

numpy.seterr(all="raise", under="ignore")

from legwheel.__about__ import (
    __author__,
    __copyright__,
    __email__,
    __license__,
    __summary__,
    __title__,
    __uri__,
    __version__,
)
from legwheel.config_tree import ConfigTree, ConfigurationError
from legwheel.control import CpgController, DirectDriveController, DriveCommand, RobotLayout
from legwheel.exceptions import LegWheelError
from legwheel.geometry import ArcWheelSpec, design_table, wheel_geometry
from legwheel.harness import compare_oscillators, load_scenario, run_suite
from legwheel.kinematics import FourBarConfig, HubState, wheel_fk, wheel_ik
from legwheel.simulation import Simulator, Terrain, metrics, run_trial
