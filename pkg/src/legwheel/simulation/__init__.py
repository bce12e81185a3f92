"""
==========
Simulation
==========

Heightfield terrain, the wheel contact model, the quasi-static robot
simulator and the metrics computed from its logs.

"""
from legwheel.simulation.contact import Contact, WheelPose, effective_contact
from legwheel.simulation.metrics import (
    MetricsError,
    TrialMetrics,
    fit_circle,
    metrics,
    position_variance,
    step_gain,
)
from legwheel.simulation.simulator import SimState, Simulator, TrialLog, run_trial
from legwheel.simulation.terrain import Terrain, terrain_height
