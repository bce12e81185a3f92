from pathlib import Path

import pytest

from legwheel.control.steering import RobotLayout
from legwheel.harness.scenario import build_scenario_tree, validate_scenario
from legwheel.kinematics import FourBarConfig


@pytest.fixture(autouse=True)
def no_user_config(mocker, test_data_dir):
    user_config_mock = mocker.patch("legwheel.harness.scenario.user_config_file")
    user_config_mock.return_value = test_data_dir / "oh_no_nothing_here.yaml"
    return user_config_mock


@pytest.fixture
def test_data_dir():
    data_dir = Path(__file__).resolve().parent / "test_data"
    assert data_dir.exists(), "Test directory structure is broken"
    return data_dir


@pytest.fixture(params=[".yaml", ".yml"])
def test_scenario(request, test_data_dir):
    return test_data_dir / f"mock_scenario{request.param}"


@pytest.fixture(params=[".yaml", ".yml"])
def test_user_config(request, test_data_dir):
    return test_data_dir / f"mock_user_config{request.param}"


@pytest.fixture(scope="session")
def wheel_config():
    return FourBarConfig()


@pytest.fixture(scope="session")
def layout(wheel_config):
    return RobotLayout(n_arcs=wheel_config.n_arcs)


@pytest.fixture
def base_scenario():
    """A short, single trial Kuramoto run on flat ground."""
    return validate_scenario(
        build_scenario_tree(
            {
                "scenario": {
                    "name": "base",
                    "oscillator": "kuramoto",
                    "duration": 2.0,
                    "trials": 1,
                    "randomize_phases": False,
                },
                "schedule": [{"t": 0.0, "v": 0.1, "w": 0.0, "h": 0.1}],
            }
        )
    )
