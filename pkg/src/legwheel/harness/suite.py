"""
======
Suites
======

Runs the seeded trials of a scenario and summarises them.

A suite runs ``trials`` trials of one scenario in index order. Trial ``k``
is seeded with :func:`~legwheel.harness.seeds.trial_seed` of the master seed
and ``k``; with ``randomize_phases`` the seed sets the starting phase of each
oscillator. A trial whose network diverges is kept in the table, flagged and
left without metrics.

"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Sequence, Union

import numpy as np
import pandas as pd
from loguru import logger

from legwheel.control.controller import CONTROLLER_MODELS, build_controller
from legwheel.harness.scenario import ScenarioSpec
from legwheel.harness.seeds import initial_phases, trial_seed
from legwheel.oscillators.integrator import DivergenceError
from legwheel.simulation.metrics import metrics, position_variance
from legwheel.simulation.simulator import Simulator, TrialLog, run_trial

METRIC_COLUMNS = ["h_mean", "h_sd", "v_mean", "y_norm"]
TRIAL_COLUMNS = (
    ["trial", "seed", "diverged"] + METRIC_COLUMNS + ["final_x", "final_y", "turn_radius"]
)
SUMMARY_COLUMNS = (
    ["scenario", "oscillator", "trials", "successes", "var_x", "var_y"] + METRIC_COLUMNS
)
COMPARISON_COLUMNS = ["oscillator"] + METRIC_COLUMNS + ["diverged"]
VARIANCE_RUNS = [
    ("kuramoto", False),
    ("hopf", False),
    ("vdp", False),
    ("kuramoto", True),
    ("hopf", True),
]
VARIANCE_COLUMNS = ["terrain"] + [
    f"{'turn' if turning else 'straight'}_{model}" for model, turning in VARIANCE_RUNS
]


@dataclass
class SuiteResult:
    """Per-trial metrics, the one-row aggregate and any kept trial logs."""

    scenario: ScenarioSpec
    trials: pd.DataFrame
    aggregate: pd.DataFrame
    logs: Dict[int, TrialLog] = field(default_factory=dict)


def run_trial_for(spec: ScenarioSpec, index: int) -> TrialLog:
    """Runs trial ``index`` of a scenario.

    Raises
    ------
    DivergenceError
        If the oscillator network or the robot pose blows up.

    """
    seed = trial_seed(spec.seed, index)
    phases = initial_phases(seed) if spec.randomize_phases else None
    controller = build_controller(
        spec.oscillator,
        spec.wheel,
        spec.layout,
        spec.controller_config,
        initial_command=spec.schedule.command_at(0.0),
        initial_phases=phases,
        synchronized=spec.synchronized,
    )
    simulator = Simulator.from_config(spec.wheel, spec.layout, spec.simulation_config)
    logger.debug(f"Trial {index} of {spec.name} with seed {seed}.")
    return run_trial(spec.schedule, controller, simulator, spec.terrain, spec.duration)


def _aggregate(spec: ScenarioSpec, trials: pd.DataFrame) -> pd.DataFrame:
    finished = trials[~trials["diverged"]]
    row = {
        "scenario": spec.name,
        "oscillator": spec.oscillator,
        "trials": len(trials),
        "successes": len(finished),
    }
    if len(finished):
        row["var_x"], row["var_y"] = position_variance(finished)
        row.update(finished[METRIC_COLUMNS].mean().to_dict())
    else:
        row.update({name: np.nan for name in ["var_x", "var_y"] + METRIC_COLUMNS})
    return pd.DataFrame([row], columns=SUMMARY_COLUMNS)


def run_suite(spec: ScenarioSpec) -> SuiteResult:
    """Runs every trial of ``spec`` and aggregates their metrics."""
    rows: List[Dict] = []
    logs: Dict[int, TrialLog] = {}
    for index in range(spec.trials):
        row = {"trial": index, "seed": trial_seed(spec.seed, index), "diverged": False}
        try:
            log = run_trial_for(spec, index)
        except DivergenceError as e:
            logger.warning(f"Trial {index} of {spec.name} diverged: {e}")
            row["diverged"] = True
            row.update({name: np.nan for name in TRIAL_COLUMNS[3:]})
        else:
            row.update(metrics(log, spec.settle_time).to_dict())
            if spec.write_logs:
                logs[index] = log
        rows.append(row)

    trials = pd.DataFrame(rows, columns=TRIAL_COLUMNS)
    aggregate = _aggregate(spec, trials)
    logger.debug(
        f"Suite {spec.name} finished: {aggregate['successes'].iloc[0]} of "
        f"{spec.trials} trials succeeded."
    )
    return SuiteResult(scenario=spec, trials=trials, aggregate=aggregate, logs=logs)


def write_results(result: SuiteResult, directory: Union[str, Path]) -> Path:
    """Writes ``trials.csv``, ``summary.csv``, the resolved scenario and kept logs.

    Returns
    -------
        The output directory.

    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    result.trials.to_csv(directory / "trials.csv", index=False, float_format="%.9g")
    result.aggregate.to_csv(directory / "summary.csv", index=False, float_format="%.9g")
    result.scenario.to_yaml(directory / "scenario.yaml")
    for index, log in result.logs.items():
        log.to_csv(directory / f"trial_{index:03d}.csv")
    logger.debug(f"Results of {result.scenario.name} written to {directory}.")
    return directory


def compare_oscillators(template: ScenarioSpec) -> pd.DataFrame:
    """Runs ``template`` once for each controller and tabulates the flat-ground metrics.

    A controller whose trials all diverge gets a row flagged ``diverged``
    with missing metrics.

    Raises
    ------
    ScenarioValidationError
        If the template is invalid for one of the controllers.

    """
    rows = []
    for model in CONTROLLER_MODELS:
        spec = template.with_overrides({"scenario": {"oscillator": model}})
        aggregate = run_suite(spec).aggregate.iloc[0]
        diverged = bool(aggregate["successes"] < aggregate["trials"])
        if diverged:
            logger.warning(f"The {model} controller diverged on {template.name}.")
        row = {"oscillator": model, "diverged": diverged}
        row.update({name: aggregate[name] for name in METRIC_COLUMNS})
        rows.append(row)
    return pd.DataFrame(rows, columns=COMPARISON_COLUMNS)


def _turning(spec: ScenarioSpec, turn_rate: float) -> ScenarioSpec:
    schedule = [
        {"t": t, "v": v, "w": turn_rate, "h": h} for t, v, _, h in spec.schedule.entries
    ]
    return spec.with_overrides({"schedule": schedule})


def variance_table(templates: Sequence[ScenarioSpec], turn_rate: float = 0.1) -> pd.DataFrame:
    """Final-position spread of every straight and turning run on each terrain.

    Each template is run as a full suite once per entry of
    :data:`VARIANCE_RUNS`, with the template's schedule for straight runs and
    the same schedule turning at ``turn_rate`` for turning runs. A straight
    run's spread is ``var_x`` plus the mean squared distance from ``y = 0``;
    a turning run's is ``var_x + var_y`` about the mean final position.
    Diverged trials are left out and a run with none left is missing.

    """
    rows = []
    for template in templates:
        row: Dict = {"terrain": template.name}
        for model, turning in VARIANCE_RUNS:
            spec = template.with_overrides({"scenario": {"oscillator": model}})
            if turning:
                spec = _turning(spec, turn_rate)
            trials = run_suite(spec).trials
            finished = trials[~trials["diverged"]]
            column = f"{'turn' if turning else 'straight'}_{model}"
            if len(finished):
                var_x, var_y = position_variance(finished, None if turning else 0.0)
                row[column] = var_x + var_y
            else:
                logger.warning(f"Every {column} trial on {template.name} diverged.")
                row[column] = np.nan
        rows.append(row)
    return pd.DataFrame(rows, columns=VARIANCE_COLUMNS)
