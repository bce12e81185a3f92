"""
===================
Oscillator Networks
===================

Four-oscillator networks used as central pattern generators, one per wheel,
together with the output maps that turn an oscillator state into a wheel
rotation and a hub offset command.

"""
from legwheel.oscillators.hopf import HopfParams, hopf_derivative, hopf_output
from legwheel.oscillators.integrator import (
    DivergenceError,
    Trajectory,
    integrate,
    limit_cycle_period,
    rk4_step,
    unwrap_phase,
)
from legwheel.oscillators.kuramoto import KuramotoParams, kuramoto_derivative, kuramoto_output
from legwheel.oscillators.network import (
    NetworkParams,
    UndefinedPhaseError,
    WheelCommand,
)
from legwheel.oscillators.vdp import (
    K_WALK,
    VdpParams,
    fit_vdp_output,
    vdp_derivative,
    vdp_output,
)
