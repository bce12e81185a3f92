"""
===========================
Legwheel Command Line Tools
===========================

``legwheel`` provides the tool :command:`legwheel` for working with leg-wheel
designs and running simulated experiments from the command line. It has
these subcommands:

.. list-table:: ``legwheel`` sub-commands
    :header-rows: 1
    :widths: 30, 40

    *   - Name
        - Description
    *   - | **geometry**
        - | Prints the wheel design table for a range of arc counts.
    *   - | **ik-profile**
        - | Prints the hub phases that hold the arc tip at a fixed height.
    *   - | **torque**
        - | Prints the hub torques produced by a tip load.
    *   - | **trace**
        - | Prints the time series of an oscillator network.
    *   - | **simulate**
        - | Runs a single trial of a scenario.
    *   - | **suite**
        - | Runs every seeded trial of a scenario and aggregates them.
    *   - | **compare**
        - | Runs a scenario template once per controller.
    *   - | **variance**
        - | Tabulates the final-position spread over the noise scenarios.

All tables are CSV with a header row. Exit codes are 0 on success, 1 for an
unexpected error, 2 for an invalid scenario or input and 3 when a simulation
diverges.

.. click:: legwheel.interface.cli:legwheel
   :prog: legwheel
   :show-nested:

"""
import sys
from pathlib import Path
from typing import List, Optional

import click
import pandas as pd
from loguru import logger

from legwheel.config_tree import ConfigurationError
from legwheel.control.controller import NETWORK_MODELS, UnsupportedFeatureError
from legwheel.control.steering import DriveCommand
from legwheel.geometry import GeometryError, design_table_frame
from legwheel.harness.scenario import (
    NOISE_SCENARIOS,
    ScenarioSpec,
    list_scenarios,
    load_scenario,
    packaged_scenario,
)
from legwheel.harness.seeds import trial_seed
from legwheel.harness.suite import (
    compare_oscillators,
    run_suite,
    run_trial_for,
    variance_table,
    write_results,
)
from legwheel.harness.trace import network_trace
from legwheel.kinematics import (
    FourBarConfig,
    HubState,
    SingularConfigurationError,
    TipLoad,
    WorkspaceError,
    phase_offset_profile,
    planetary_torques,
    quasi_static_torques,
    wheel_ik,
)
from legwheel.oscillators.integrator import DivergenceError
from legwheel.simulation.metrics import MetricsError, metrics

from .utilities import (
    configure_logging_to_file,
    configure_logging_to_terminal,
    handle_exceptions,
)

EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_DIVERGED = 3
INVALID_INPUT_ERRORS = (
    ConfigurationError,
    GeometryError,
    WorkspaceError,
    SingularConfigurationError,
    UnsupportedFeatureError,
    MetricsError,
)

verbose_option = click.option(
    "--verbose", "-v", is_flag=True, help="Log every trial and calibration step."
)
debugger_option = click.option(
    "--pdb",
    "with_debugger",
    is_flag=True,
    help="Drop into python debugger if an error occurs.",
)
out_option = click.option(
    "--out",
    "-o",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Directory to write results to instead of standard output.",
)


def _run(func, with_debugger: bool, *args, **kwargs):
    errors: List[Exception] = []

    def body():
        try:
            return func(*args, **kwargs)
        except Exception as e:
            errors.append(e)
            raise

    main = handle_exceptions(body, logger, with_debugger)
    try:
        result = main()
        if errors:
            # handle_exceptions returns None once the debugger exits.
            raise errors[0]
        return result
    except DivergenceError as e:
        click.echo(f"Simulation diverged: {e}", err=True)
        sys.exit(EXIT_DIVERGED)
    except INVALID_INPUT_ERRORS as e:
        click.echo(f"Invalid input: {e}", err=True)
        sys.exit(EXIT_INVALID)
    except Exception:
        if not with_debugger:
            raise
        sys.exit(EXIT_FAILED)


def _emit(frame: pd.DataFrame, out: Optional[Path], file_name: str):
    if out is None:
        click.echo(frame.to_csv(index=False, float_format="%.9g"), nl=False)
    else:
        out.mkdir(parents=True, exist_ok=True)
        frame.to_csv(out / file_name, index=False, float_format="%.9g")


def _scenario_path(scenario: str) -> Path:
    path = Path(scenario)
    return path if path.exists() else packaged_scenario(scenario)


def _load(scenario: Optional[str], **overrides) -> ScenarioSpec:
    if scenario is None:
        scenario = "flat_straight"
    settings = {key: value for key, value in overrides.items() if value is not None}
    return load_scenario(
        _scenario_path(scenario), {"scenario": settings} if settings else None
    )


def _wheel(scenario: Optional[str]) -> FourBarConfig:
    return _load(scenario).wheel if scenario else FourBarConfig()


scenario_help = (
    "A scenario yaml file or the name of a packaged scenario "
    f"({', '.join(list_scenarios())})."
)


@click.group()
def legwheel():
    """Design tools and simulated experiments for four-wheeled leg-wheel robots.

    Use ``geometry``, ``ik-profile`` and ``torque`` to inspect a wheel design,
    ``trace`` to look at an oscillator network, and ``simulate``, ``suite``,
    ``compare`` and ``variance`` to run scenarios.
    """
    pass


@legwheel.command()
@click.option("--n-min", default=3, show_default=True, help="Fewest arcs per wheel.")
@click.option("--n-max", default=8, show_default=True, help="Most arcs per wheel.")
@click.option("--radius", default=1.0, show_default=True, help="Wheel radius in meters.")
@out_option
@verbose_option
@debugger_option
def geometry(n_min, n_max, radius, out, verbose, with_debugger):
    """Print the design table ``n, L_step, h_min, h_span`` to two decimals."""
    configure_logging_to_terminal(verbose)
    frame = _run(design_table_frame, with_debugger, n_min, n_max, radius)
    _emit(frame, out, "geometry.csv")


def _ik_profile(height, x_min, x_max, samples, cfg) -> pd.DataFrame:
    rows = []
    for x, e in phase_offset_profile(height, (x_min, x_max), samples, cfg):
        hub = wheel_ik((x, -height), cfg)
        rows.append({"x": x, "e": e, "phi_O": hub.phi_outer, "phi_I": hub.phi_inner})
    return pd.DataFrame(rows, columns=["x", "e", "phi_O", "phi_I"])


@legwheel.command("ik-profile")
@click.option("--height", default=0.1, show_default=True, help="Tip centre height in meters.")
@click.option("--x-min", default=-0.03, show_default=True, help="First tip x in meters.")
@click.option("--x-max", default=0.03, show_default=True, help="Last tip x in meters.")
@click.option("--samples", default=61, show_default=True, help="Number of tip positions.")
@click.option("--scenario", default=None, help="Take the wheel from this scenario.")
@out_option
@verbose_option
@debugger_option
def ik_profile(height, x_min, x_max, samples, scenario, out, verbose, with_debugger):
    """Print the hub offset and hub phases ``x, e, phi_O, phi_I`` that hold the
    tip at ``(x, -height)``."""
    configure_logging_to_terminal(verbose)
    frame = _run(
        lambda: _ik_profile(height, x_min, x_max, samples, _wheel(scenario)), with_debugger
    )
    _emit(frame, out, "ik_profile.csv")


def _torque(fx, fy, phi_o, phi_i, planetary, cfg) -> pd.DataFrame:
    tau_inner, tau_outer, link_force = quasi_static_torques(
        HubState(phi_o, phi_i), TipLoad((fx, fy)), cfg
    )
    if planetary:
        if cfg.gear is None:
            raise ConfigurationError("The wheel has no planetary gear.", "wheel.gear")
        motor_inner, motor_outer = planetary_torques(tau_inner, tau_outer, cfg.gear)
    else:
        motor_inner, motor_outer = tau_inner, tau_outer
    return pd.DataFrame(
        [[tau_inner, tau_outer, motor_inner, motor_outer, link_force]],
        columns=["tau_I", "tau_O", "tau_Ip", "tau_Op", "F_L"],
    )


@legwheel.command()
@click.option("--fx", default=0.0, show_default=True, help="Tip load along x in newtons.")
@click.option("--fy", default=-10.0, show_default=True, help="Tip load along y in newtons.")
@click.option("--phi-o", required=True, type=float, help="Outer hub phase in radians.")
@click.option("--phi-i", required=True, type=float, help="Inner hub phase in radians.")
@click.option(
    "--planetary/--direct",
    default=False,
    help="Drive the inner hub through the wheel's planetary gear.",
)
@click.option("--scenario", default=None, help="Take the wheel from this scenario.")
@out_option
@verbose_option
@debugger_option
def torque(fx, fy, phi_o, phi_i, planetary, scenario, out, verbose, with_debugger):
    """Print the hub torques ``tau_I, tau_O``, the motor torques ``tau_Ip,
    tau_Op`` and the link force ``F_L`` for a tip load.

    Without ``--planetary`` each motor drives its hub directly and the motor
    torques equal the hub torques.
    """
    configure_logging_to_terminal(verbose)
    frame = _run(
        lambda: _torque(fx, fy, phi_o, phi_i, planetary, _wheel(scenario)), with_debugger
    )
    _emit(frame, out, "torque.csv")


@legwheel.command()
@click.option(
    "--model", type=click.Choice(NETWORK_MODELS), default="kuramoto", show_default=True
)
@click.option("--duration", default=10.0, show_default=True, help="Seconds to run.")
@click.option("--dt", default=0.02, show_default=True, help="Sample period in seconds.")
@click.option("--speed", default=0.1, show_default=True, help="Forward speed in m/s.")
@click.option("--height", default=0.1, show_default=True, help="Axle height in meters.")
@click.option("--scenario", default=None, help="Take the wheel from this scenario.")
@out_option
@verbose_option
@debugger_option
def trace(model, duration, dt, speed, height, scenario, out, verbose, with_debugger):
    """Print ``t, i, phase, theta, e, state0, state1`` for each oscillator of
    a network driving straight ahead."""
    configure_logging_to_terminal(verbose)
    frame = _run(
        lambda: network_trace(
            model, duration, dt, DriveCommand(speed, 0.0, height), cfg=_wheel(scenario)
        ),
        with_debugger,
    )
    _emit(frame, out, f"trace_{model}.csv")


def _simulate(scenario, seed, trial, out):
    spec = _load(scenario, seed=seed)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        configure_logging_to_file(out)
    log = run_trial_for(spec, trial)
    summary = metrics(log, spec.settle_time)
    logger.debug(
        f"Trial {trial} of {spec.name} (seed {trial_seed(spec.seed, trial)}): {summary}."
    )
    if out is None:
        click.echo(log.to_csv(), nl=False)
    else:
        log.to_csv(out / f"trial_{trial:03d}.csv")
        spec.to_yaml(out / "scenario.yaml")
        pd.DataFrame([summary.to_dict()]).to_csv(
            out / "metrics.csv", index=False, float_format="%.9g"
        )


@legwheel.command()
@click.option("--scenario", "-s", required=True, help=scenario_help)
@click.option("--seed", type=int, default=None, help="Override the master seed.")
@click.option("--trial", default=0, show_default=True, help="Index of the trial to run.")
@out_option
@verbose_option
@debugger_option
def simulate(scenario, seed, trial, out, verbose, with_debugger):
    """Run one trial of SCENARIO and print its log.

    The trial is seeded from the master seed and the trial index, so trial
    ``k`` here matches trial ``k`` of a ``suite`` run.
    """
    configure_logging_to_terminal(verbose)
    _run(_simulate, with_debugger, scenario, seed, trial, out)


def _suite(scenario, seed, trials, out):
    spec = _load(scenario, seed=seed, trials=trials)
    directory = out if out is not None else Path(spec.output) / spec.name
    directory.mkdir(parents=True, exist_ok=True)
    configure_logging_to_file(directory)
    result = run_suite(spec)
    write_results(result, directory)
    click.echo(result.aggregate.to_csv(index=False, float_format="%.9g"), nl=False)


@legwheel.command()
@click.option("--scenario", "-s", required=True, help=scenario_help)
@click.option("--seed", type=int, default=None, help="Override the master seed.")
@click.option("--trials", type=int, default=None, help="Override the trial count.")
@out_option
@verbose_option
@debugger_option
def suite(scenario, seed, trials, out, verbose, with_debugger):
    """Run every trial of SCENARIO.

    Per-trial metrics, the aggregate and the resolved scenario are written to
    ``--out``, or to the scenario's output directory. The aggregate is also
    printed.
    """
    configure_logging_to_terminal(verbose)
    _run(_suite, with_debugger, scenario, seed, trials, out)


@legwheel.command()
@click.option("--template", "-t", required=True, help=scenario_help)
@click.option("--seed", type=int, default=None, help="Override the master seed.")
@click.option("--trials", type=int, default=None, help="Override the trial count.")
@out_option
@verbose_option
@debugger_option
def compare(template, seed, trials, out, verbose, with_debugger):
    """Run TEMPLATE with each controller and print ``oscillator, h_mean, h_sd,
    v_mean, y_norm, diverged``."""
    configure_logging_to_terminal(verbose)
    frame = _run(
        lambda: compare_oscillators(_load(template, seed=seed, trials=trials)),
        with_debugger,
    )
    _emit(frame, out, "comparison.csv")


def _variance(scenarios, seed, trials, duration, turn_rate):
    templates = [
        _load(scenario, seed=seed, trials=trials, duration=duration)
        for scenario in scenarios or NOISE_SCENARIOS
    ]
    return variance_table(templates, turn_rate)


@legwheel.command()
@click.option(
    "--scenario",
    "-s",
    "scenarios",
    multiple=True,
    help="A terrain scenario; repeat for several. Defaults to the six noise scenarios.",
)
@click.option("--seed", type=int, default=None, help="Override the master seed.")
@click.option("--trials", type=int, default=None, help="Override the trial count.")
@click.option("--duration", type=float, default=None, help="Override the trial length.")
@click.option(
    "--turn-rate", default=0.1, show_default=True, help="Yaw rate of the turning runs."
)
@out_option
@verbose_option
@debugger_option
def variance(scenarios, seed, trials, duration, turn_rate, out, verbose, with_debugger):
    """Print the final-position spread of straight and turning runs on each
    terrain, one row per scenario.

    Straight runs use kuramoto, hopf and vdp; turning runs use kuramoto and
    hopf. The same seed always gives the same table.
    """
    configure_logging_to_terminal(verbose)
    frame = _run(_variance, with_debugger, scenarios, seed, trials, duration, turn_rate)
    _emit(frame, out, "variance.csv")
