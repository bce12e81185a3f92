"""
==============
CPG Controller
==============

Differential-steering control of a four wheeled leg-wheel robot through a
network of oscillators, plus the direct-drive baseline.

"""
from legwheel.control.controller import (
    CONTROLLER_MODELS,
    NETWORK_MODELS,
    ControllerState,
    CpgController,
    DirectDriveController,
    UnsupportedFeatureError,
    build_controller,
    check_command,
    locked_phases,
)
from legwheel.control.steering import (
    PSI_CCW,
    QUARTER_CYCLE_BIAS,
    CommandSchedule,
    DriveCommand,
    RobotLayout,
    filter_frequency,
    height_to_extension,
    steering_targets,
)
