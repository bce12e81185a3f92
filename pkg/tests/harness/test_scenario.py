import pytest
import yaml

from legwheel.config_tree import ConfigurationError
from legwheel.harness.scenario import (
    NOISE_SCENARIOS,
    ScenarioValidationError,
    build_scenario_tree,
    list_scenarios,
    load_scenario,
    packaged_scenario,
    validate_scenario,
    validate_scenario_file,
)


def test_build_scenario_tree(test_scenario):
    tree = build_scenario_tree(test_scenario)
    assert tree.scenario.name == "mock"
    assert tree.controller.k_omega == 8.0
    assert tree.controller.dt == 0.02
    assert tree.wheel.n_arcs == 5
    assert tree.layout.track_width == 0.2


def test_user_config_sits_below_scenario(no_user_config, test_scenario, test_user_config):
    no_user_config.return_value = test_user_config
    tree = build_scenario_tree(test_scenario, {"controller": {"max_speed": 1.0}})
    assert tree.controller.dt == 0.01
    assert tree.layout.track_width == 0.25
    assert tree.controller.k_omega == 8.0
    assert tree.controller.max_speed == 1.0
    assert [m["layer"] for m in tree.controller.metadata("max_speed")] == [
        "base",
        "user_configs",
        "override",
    ]


def test_overrides_win(test_scenario):
    tree = build_scenario_tree(test_scenario, {"scenario": {"trials": 5}})
    assert tree.scenario.trials == 5
    assert tree.scenario.seed == 42


def test_load_scenario(test_scenario):
    spec = load_scenario(test_scenario)
    assert spec.name == "mock"
    assert spec.oscillator == "hopf"
    assert spec.trials == 3
    assert spec.seed == 42
    assert spec.duration == 1.0
    assert spec.randomize_phases
    assert not spec.synchronized
    assert spec.terrain.kinds == ["step"]
    assert len(spec.schedule.commands) == 2
    assert spec.controller_config.k_omega == 8.0
    assert spec.simulation_config.contact_samples == 64


def test_scenario_yaml_round_trip(tmp_path, test_scenario):
    spec = load_scenario(test_scenario)
    path = tmp_path / "resolved.yaml"
    text = spec.to_yaml(path)
    assert yaml.safe_load(text)["scenario"]["name"] == "mock"
    reloaded = load_scenario(path)
    assert reloaded.to_dict() == spec.to_dict()
    assert reloaded.terrain.to_list() == spec.terrain.to_list()


def test_with_overrides(test_scenario):
    spec = load_scenario(test_scenario)
    vdp = spec.with_overrides({"scenario": {"oscillator": "vdp"}})
    assert vdp.oscillator == "vdp"
    assert spec.oscillator == "hopf"
    assert vdp.seed == spec.seed


def test_invalid_scenario_lists_every_field(test_data_dir):
    with pytest.raises(ScenarioValidationError) as excinfo:
        load_scenario(test_data_dir / "invalid_scenario.yaml")
    fields = excinfo.value.fields
    for name in [
        "scenario.oscillator",
        "scenario.trials",
        "scenario.seed",
        "wheel",
        "terrain",
    ]:
        assert name in fields
        assert name in str(excinfo.value)
    assert isinstance(excinfo.value, ConfigurationError)


def test_bad_schedule_command():
    tree = build_scenario_tree(
        {"schedule": [{"t": 0.0, "v": 0.1, "w": 0.0, "h": 0.5}]}
    )
    with pytest.raises(ScenarioValidationError) as excinfo:
        validate_scenario(tree)
    assert excinfo.value.fields == ["schedule[0]"]


@pytest.mark.parametrize(
    "settings, field",
    [
        ({"duration": 0.01}, "scenario.duration"),
        ({"duration": 2.0, "settle_time": 2.0}, "scenario.settle_time"),
        ({"trials": 1.5}, "scenario.trials"),
        ({"duration": -1.0}, "scenario.duration"),
    ],
)
def test_bad_timing(settings, field):
    with pytest.raises(ScenarioValidationError) as excinfo:
        validate_scenario(build_scenario_tree({"scenario": settings}))
    assert field in excinfo.value.fields


def test_unknown_keys_warn(mocker):
    logger = mocker.patch("legwheel.harness.scenario.logger")
    validate_scenario(build_scenario_tree({"controller": {"k_omgea": 2.0}}))
    logger.warning.assert_called_once()
    assert "controller.k_omgea" in logger.warning.call_args[0][0]


def test_validate_scenario_file(tmp_path, test_data_dir):
    with pytest.raises(ConfigurationError, match="yaml"):
        validate_scenario_file(test_data_dir / "bad_scenario.txt")
    with pytest.raises(ConfigurationError, match="exist"):
        validate_scenario_file(test_data_dir / "oh_no_nothing_here.yaml")

    extra = tmp_path / "extra.yaml"
    extra.write_text("scenario:\n  name: extra\nplugins:\n  - foo\n")
    with pytest.raises(ConfigurationError, match="plugins"):
        validate_scenario_file(extra)

    listed = tmp_path / "listed.yaml"
    listed.write_text("- scenario\n")
    with pytest.raises(ConfigurationError, match="mapping"):
        validate_scenario_file(listed)


@pytest.mark.parametrize("name", list_scenarios())
def test_packaged_scenarios_are_valid(name):
    spec = load_scenario(packaged_scenario(name))
    assert spec.name == name


def test_packaged_scenario_names():
    assert {"flat_straight", "flat_turn", "step_climb", "noise_uniform"} <= set(
        list_scenarios()
    )
    assert set(NOISE_SCENARIOS) <= set(list_scenarios())
    with pytest.raises(ConfigurationError, match="flat_straight"):
        packaged_scenario("lava_lake")
