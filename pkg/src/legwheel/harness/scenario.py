"""
=========
Scenarios
=========

A scenario describes one experiment: the wheel, the body layout, the
controller, the terrain, the command schedule and how many seeded trials to
run. Scenario files are yaml documents with these top level keys:

.. list-table::
   :header-rows: 1

   * - Key
     - Contents
   * - ``scenario``
     - name, oscillator, duration, trial count, master seed, output path and
       run options
   * - ``wheel``
     - the four-bar wheel mechanism
   * - ``layout``
     - wheel placement on the body
   * - ``controller``
     - controller period, filter gain and oscillator gains
   * - ``simulation``
     - contact sampling and the climbing rule
   * - ``terrain``
     - a list of terrain features
   * - ``schedule``
     - drive commands ``{t, v, w, h}``, each holding until the next

Anything a file leaves out comes from the package defaults, which may be
overridden for every scenario in ``~/legwheel.yaml``.

"""
import copy
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml
from loguru import logger

from legwheel.config_tree import ConfigNode, ConfigTree, ConfigurationError
from legwheel.control.controller import CONTROLLER_MODELS, CpgController, check_command
from legwheel.control.steering import CommandSchedule, RobotLayout
from legwheel.exceptions import LegWheelError
from legwheel.kinematics import FourBarConfig
from legwheel.simulation.simulator import Simulator
from legwheel.simulation.terrain import Terrain

SCENARIO_LAYERS = ["base", "user_configs", "scenario", "override"]
VALID_KEYS = {
    "scenario",
    "wheel",
    "layout",
    "controller",
    "simulation",
    "terrain",
    "schedule",
}
SCENARIO_DIRECTORY = Path(__file__).resolve().parent.parent / "scenarios"
# The three uniform and three furrowed fields of the final-position variance runs.
NOISE_SCENARIOS = (
    "noise_uniform",
    "noise_uniform_2",
    "noise_uniform_3",
    "noise_furrow",
    "noise_furrow_2",
    "noise_furrow_3",
)

DEFAULT_SCENARIO = {
    "scenario": {
        "name": "scenario",
        "oscillator": "kuramoto",
        "duration": 10.0,
        "trials": 12,
        "seed": 0,
        "output": "results",
        "randomize_phases": True,
        "synchronized": False,
        "settle_time": 0.0,
        "write_logs": False,
    },
    "schedule": [{"t": 0.0, "v": 0.0, "w": 0.0, "h": 0.1}],
}

_COMPONENT_DEFAULTS = [
    FourBarConfig.configuration_defaults,
    RobotLayout.configuration_defaults,
    CpgController.configuration_defaults,
    Simulator.configuration_defaults,
    Terrain.configuration_defaults,
    DEFAULT_SCENARIO,
]


class ScenarioValidationError(ConfigurationError):
    """Raised when a scenario has invalid fields.

    Attributes
    ----------
    violations
        ``(field, message)`` pairs, one for every problem found.

    """

    def __init__(self, violations: List[Tuple[str, str]]):
        self.violations = list(violations)
        details = "\n".join(f"    {name}: {message}" for name, message in self.violations)
        super().__init__(
            f"Scenario has {len(self.violations)} invalid field(s):\n{details}",
            self.violations[0][0] if self.violations else None,
        )

    @property
    def fields(self) -> List[str]:
        return [name for name, _ in self.violations]


@dataclass(frozen=True)
class ScenarioSpec:
    """A validated scenario with every component built.

    Attributes
    ----------
    config
        The layered configuration the scenario was built from.

    """

    name: str
    oscillator: str
    wheel: FourBarConfig
    layout: RobotLayout
    terrain: Terrain
    schedule: CommandSchedule
    duration: float
    trials: int
    seed: int
    output: str
    randomize_phases: bool
    synchronized: bool
    settle_time: float
    write_logs: bool
    config: ConfigTree = field(repr=False, compare=False)

    @property
    def controller_config(self) -> ConfigTree:
        return self.config.controller

    @property
    def simulation_config(self) -> ConfigTree:
        return self.config.simulation

    def to_dict(self) -> Dict[str, Any]:
        """The full scenario as plain data, defaults included."""
        return copy.deepcopy(self.config.to_dict())

    def to_yaml(self, path: Union[str, Path, None] = None) -> str:
        """Serializes the scenario; the text is also written to ``path`` if given."""
        text = yaml.safe_dump(self.to_dict(), sort_keys=False)
        if path is not None:
            Path(path).write_text(text)
        return text

    def with_overrides(self, overrides: Dict[str, Any]) -> "ScenarioSpec":
        """A new scenario with ``overrides`` applied on top of this one.

        Raises
        ------
        ScenarioValidationError
            If the result is not a valid scenario.

        """
        return validate_scenario(build_scenario_tree(self.to_dict(), overrides))


def validate_scenario_file(file_path: Union[str, Path]) -> None:
    """Ensures the provided file is a yaml scenario with known top level keys."""
    file_path = Path(file_path)
    if not file_path.is_file():
        raise ConfigurationError(
            f"Scenario files must exist and be files. You provided {str(file_path)}",
            value_name=None,
        )
    if file_path.suffix not in [".yaml", ".yml"]:
        raise ConfigurationError(
            f"Scenario files must be in a yaml format. You provided {file_path.suffix}",
            value_name=None,
        )
    with file_path.open() as f:
        raw_spec = yaml.safe_load(f)
    if not isinstance(raw_spec, dict):
        raise ConfigurationError(
            f"Scenario file {file_path} must hold a mapping of sections.", value_name=None
        )
    extra_keys = set(raw_spec) - VALID_KEYS
    if extra_keys:
        raise ConfigurationError(
            f"Scenario contains additional top level keys {sorted(extra_keys)}. "
            f"Valid keys are {sorted(VALID_KEYS)}.",
            value_name=None,
        )


def build_scenario_tree(
    scenario: Union[str, Path, Dict, ConfigTree, None] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> ConfigTree:
    """Layers package defaults, user defaults, a scenario and overrides."""
    if isinstance(scenario, (str, Path)):
        validate_scenario_file(scenario)
        scenario, source = Path(scenario), str(scenario)
    else:
        source = "user_supplied_args"

    tree = _get_default_specification()
    tree.update(scenario, layer="scenario", source=source)
    tree.update(overrides, layer="override", source="user_supplied_args")
    return tree


def user_config_file() -> Path:
    """Location of the user defaults applied to every scenario."""
    return Path("~/legwheel.yaml").expanduser()


def _get_default_specification() -> ConfigTree:
    tree = ConfigTree(layers=SCENARIO_LAYERS)
    for defaults in _COMPONENT_DEFAULTS:
        tree.update(copy.deepcopy(defaults), layer="base", source="legwheel_defaults")

    user_config_path = user_config_file()
    if user_config_path.exists():
        tree.update(user_config_path, layer="user_configs")
    return tree


def _unknown_keys(tree: ConfigTree, prefix: str = "") -> List[str]:
    unknown = []
    for name, child in tree.items():
        dotted = f"{prefix}{name}"
        if isinstance(child, ConfigNode):
            if not any(m["layer"] == "base" for m in child.metadata):
                unknown.append(dotted)
        else:
            unknown.extend(_unknown_keys(child, f"{dotted}."))
    return unknown


def _integer(value: Any, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(f"Expected an integer, got {value!r}.", None)
    if value < minimum:
        raise ConfigurationError(f"Expected at least {minimum}, got {value}.", None)
    return value


def _real(value: Any, minimum: float) -> float:
    if isinstance(value, bool):
        raise ConfigurationError(f"Expected a number, got {value!r}.", None)
    value = float(value)
    if not value >= minimum:
        raise ConfigurationError(f"Expected at least {minimum}, got {value}.", None)
    return value


def validate_scenario(tree: ConfigTree) -> ScenarioSpec:
    """Builds every component of a scenario, collecting all problems first.

    Raises
    ------
    ScenarioValidationError
        Listing each invalid field with its message.

    """
    violations: List[Tuple[str, str]] = []

    def check(name: str, build):
        try:
            return build()
        except (LegWheelError, KeyError, TypeError, ValueError) as e:
            violations.append((name, str(e.args[0]) if e.args else repr(e)))
            return None

    settings = tree.scenario
    name = check("scenario.name", lambda: str(settings.name))
    oscillator = check("scenario.oscillator", lambda: str(settings.oscillator))
    if oscillator is not None and oscillator not in CONTROLLER_MODELS:
        violations.append(
            (
                "scenario.oscillator",
                f"Unknown oscillator {oscillator!r}; expected one of {CONTROLLER_MODELS}.",
            )
        )
        oscillator = None
    trials = check("scenario.trials", lambda: _integer(settings.trials, 1))
    seed = check("scenario.seed", lambda: _integer(settings.seed, 0))
    duration = check("scenario.duration", lambda: _real(settings.duration, 0.0))
    settle_time = check("scenario.settle_time", lambda: _real(settings.settle_time, 0.0))
    output = check("scenario.output", lambda: str(settings.output))
    flags = {
        flag: check(f"scenario.{flag}", lambda flag=flag: bool(settings[flag]))
        for flag in ("randomize_phases", "synchronized", "write_logs")
    }

    wheel = check("wheel", lambda: FourBarConfig.from_config(tree.wheel))
    n_arcs = wheel.n_arcs if wheel else check("wheel.n_arcs", lambda: int(tree.wheel.n_arcs))
    layout = check("layout", lambda: RobotLayout.from_config(tree.layout, n_arcs))
    terrain = check("terrain", lambda: Terrain.from_config(tree.terrain))
    schedule = check("schedule", lambda: CommandSchedule.from_config(tree.schedule))
    controller_config = tree.controller

    if schedule is not None and wheel is not None and oscillator is not None:
        limits = check(
            "controller",
            lambda: (
                float(controller_config.max_speed),
                float(controller_config.max_yaw_rate),
            ),
        )
        if limits is not None:
            for index, cmd in enumerate(schedule.commands):
                check(
                    f"schedule[{index}]",
                    lambda cmd=cmd: check_command(cmd, wheel, oscillator, *limits),
                )

    controller_dt = check("controller.dt", lambda: _real(controller_config.dt, 0.0))
    if duration is not None and controller_dt:
        if duration < controller_dt:
            violations.append(
                (
                    "scenario.duration",
                    f"Duration {duration} s is shorter than one controller period.",
                )
            )
        elif settle_time is not None and settle_time > duration - controller_dt:
            violations.append(
                (
                    "scenario.settle_time",
                    f"Settle time {settle_time} s leaves no samples of a {duration} s trial.",
                )
            )

    if wheel is not None and layout is not None:
        check("simulation", lambda: Simulator.from_config(wheel, layout, tree.simulation))

    if violations:
        raise ScenarioValidationError(violations)

    unknown = _unknown_keys(tree)
    if unknown:
        logger.warning(f"Scenario {name} sets unknown keys that will be ignored: {unknown}.")

    spec = ScenarioSpec(
        name=name,
        oscillator=oscillator,
        wheel=wheel,
        layout=layout,
        terrain=terrain,
        schedule=schedule,
        duration=duration,
        trials=trials,
        seed=seed,
        output=output,
        randomize_phases=flags["randomize_phases"],
        synchronized=flags["synchronized"],
        settle_time=settle_time,
        write_logs=flags["write_logs"],
        config=tree,
    )
    logger.debug(
        f"Scenario {name}: {oscillator} on {terrain}, {trials} trial(s) of {duration} s."
    )
    return spec


def load_scenario(
    path: Union[str, Path], overrides: Optional[Dict[str, Any]] = None
) -> ScenarioSpec:
    """Reads, layers and validates the scenario file at ``path``.

    Raises
    ------
    ConfigurationError
        If the file is missing, is not yaml or has unknown top level keys.
    ScenarioValidationError
        If any field is invalid.

    """
    return validate_scenario(build_scenario_tree(path, overrides))


def list_scenarios() -> List[str]:
    """Names of the scenarios shipped with the package."""
    return sorted(path.stem for path in SCENARIO_DIRECTORY.glob("*.yaml"))


def packaged_scenario(name: str) -> Path:
    """Path to the packaged scenario ``name``.

    Raises
    ------
    ConfigurationError
        If no such scenario is packaged.

    """
    path = SCENARIO_DIRECTORY / f"{name}.yaml"
    if not path.is_file():
        raise ConfigurationError(
            f"No packaged scenario {name!r}; available are {list_scenarios()}.", "scenario"
        )
    return path
