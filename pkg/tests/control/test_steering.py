import numpy as np
import pytest

from legwheel.config_tree import ConfigTree, ConfigurationError
from legwheel.control.steering import (
    PSI_CCW,
    QUARTER_CYCLE_BIAS,
    SIDE_SIGNS,
    CommandSchedule,
    DriveCommand,
    RobotLayout,
    filter_frequency,
    height_to_extension,
    steering_targets,
)
from legwheel.kinematics import extension_bounds


def test_straight_line_frequencies(layout):
    omega_star, psi_rate = steering_targets(DriveCommand(0.1, 0.0, 0.16), layout)
    assert np.allclose(np.abs(omega_star), 1.5625)
    assert np.array_equal(np.sign(omega_star), SIDE_SIGNS)
    assert np.all(psi_rate == 0)


def test_spin_in_place_frequencies():
    layout = RobotLayout(track_width=0.4)
    omega_star, psi_rate = steering_targets(DriveCommand(0.0, 0.5, 0.16), layout)
    assert np.allclose(omega_star, 3.125)
    assert np.allclose(psi_rate, 5 * 1.25 * PSI_CCW)


def test_turning_splits_the_sides(layout):
    omega_star, _ = steering_targets(DriveCommand(0.2, 0.2, 0.1), layout)
    gait = layout.signs * omega_star
    left, right = gait[[0, 2]], gait[[1, 3]]
    assert np.allclose(left, left[0]) and np.allclose(right, right[0])
    # turning counter-clockwise, the right side runs faster
    assert right[0] > left[0] > 0
    assert (right[0] + left[0]) / 2 == pytest.approx(2.5 * 0.2 / 0.1)


@pytest.mark.parametrize("v", [-0.2, 0.0, 0.1, 0.3])
@pytest.mark.parametrize("w", [-0.5, 0.0, 0.4])
@pytest.mark.parametrize("h", [0.06, 0.1, 0.13])
def test_rim_speeds_follow_the_differential_drive(layout, v, w, h):
    omega_star, _ = steering_targets(DriveCommand(v, w, h), layout)
    rim = layout.signs * omega_star * 2 / layout.n_arcs * h
    assert np.allclose(rim, v + layout.signs * w * layout.track_width, rtol=0, atol=1e-12)
    left, right = rim[0], rim[1]
    assert (right - left) / (2 * layout.track_width) == pytest.approx(w, abs=1e-12)


@pytest.mark.parametrize("h", [0.0, -0.1])
def test_height_must_be_positive(layout, h):
    with pytest.raises(ConfigurationError):
        steering_targets(DriveCommand(0.1, 0.0, h), layout)


def test_bias_matrices():
    for matrix in [PSI_CCW, QUARTER_CYCLE_BIAS]:
        assert np.allclose(matrix, -matrix.T)
    assert PSI_CCW[0, 1] == 1.0
    assert PSI_CCW[0, 2] == 0.0
    assert QUARTER_CYCLE_BIAS[0, 3] == pytest.approx(3 * np.pi / 2)


def test_filter_frequency_is_exact():
    omega = np.array([0.0, 2.0])
    target = np.array([1.0, 1.0])
    result = filter_frequency(omega, target, 5.0, 0.1)
    assert np.allclose(result, target + (omega - target) * np.exp(-0.5))


def test_filter_frequency_converges():
    omega = np.zeros(4)
    for _ in range(200):
        omega = filter_frequency(omega, np.full(4, 3.0), 5.0, 0.02)
    assert np.allclose(omega, 3.0, atol=1e-6)


@pytest.mark.parametrize("k_omega", [0.0, -1.0])
def test_filter_gain_must_be_positive(k_omega):
    with pytest.raises(ConfigurationError):
        filter_frequency(np.zeros(4), np.ones(4), k_omega, 0.02)


def test_height_to_extension(wheel_config):
    assert height_to_extension(0.1, wheel_config) == extension_bounds(
        0.1 - wheel_config.tip_radius, wheel_config
    )


def test_drive_command_must_be_finite():
    with pytest.raises(ConfigurationError):
        DriveCommand(np.nan, 0.0, 0.1)


def test_layout_wheel_positions():
    layout = RobotLayout(track_width=0.2, wheelbase=0.4)
    expected = [[0.2, 0.2], [0.2, -0.2], [-0.2, 0.2], [-0.2, -0.2]]
    assert np.allclose(layout.wheel_positions, expected)


@pytest.mark.parametrize(
    "overrides",
    [{"track_width": 0.0}, {"wheelbase": -1.0}, {"side_signs": (1, 1, 1, -1)}],
)
def test_bad_layouts(overrides):
    with pytest.raises(ConfigurationError):
        RobotLayout(**overrides)


def test_layout_from_config():
    tree = ConfigTree(RobotLayout.configuration_defaults)
    assert RobotLayout.from_config(tree.layout, 5) == RobotLayout()


def test_schedule_holds_commands():
    schedule = CommandSchedule([(2.0, 0.2, 0.0, 0.1), (0.0, 0.1, 0.0, 0.1)])
    assert len(schedule) == 2
    assert schedule.command_at(0.0) == DriveCommand(0.1, 0.0, 0.1)
    assert schedule.command_at(1.999) == DriveCommand(0.1, 0.0, 0.1)
    assert schedule.command_at(2.0) == DriveCommand(0.2, 0.0, 0.1)
    assert schedule.command_at(50.0) == DriveCommand(0.2, 0.0, 0.1)
    assert schedule.entries == [(0.0, 0.1, 0.0, 0.1), (2.0, 0.2, 0.0, 0.1)]


def test_schedule_from_config():
    schedule = CommandSchedule.from_config(
        [{"t": 0.0, "v": 0.1, "w": 0.0, "h": 0.1}, [1.0, 0.0, 0.2, 0.09]]
    )
    assert schedule.commands == [DriveCommand(0.1, 0.0, 0.1), DriveCommand(0.0, 0.2, 0.09)]


@pytest.mark.parametrize("entries", [[], [(0.5, 0.1, 0.0, 0.1)]])
def test_bad_schedules(entries):
    with pytest.raises(ConfigurationError):
        CommandSchedule(entries)
