import numpy as np
import pytest

from legwheel.kinematics import arc_boundary, wheel_ik
from legwheel.simulation.contact import WheelPose, boundary_contacts, effective_contact
from legwheel.simulation.terrain import Step, Terrain

LEFT = WheelPose(0.0, 0.0, 0.0, -1.0)


def test_round_wheel_rests_on_its_rim(wheel_config):
    hub = wheel_ik((0.0, -wheel_config.outer_hub_da), wheel_config)
    boundary = arc_boundary(hub.phi_outer, hub.phi_inner, wheel_config, samples=32)
    assert np.allclose(np.linalg.norm(boundary, axis=-1), wheel_config.outer_hub_da)

    contact = effective_contact(hub, wheel_config, LEFT, Terrain())
    expected = wheel_config.outer_hub_da + wheel_config.tip_radius
    assert contact.axle_height == pytest.approx(expected, abs=1e-9)
    assert contact.effective_radius == pytest.approx(expected, abs=1e-9)
    assert contact.point[2] == 0.0


def test_extended_wheel_stands_on_a_tip(wheel_config):
    hub = wheel_ik((0.0, -0.1), wheel_config)
    contact = effective_contact(hub, wheel_config, LEFT, Terrain())
    assert contact.axle_height >= 0.1 + wheel_config.tip_radius - 1e-9
    assert contact.axle_height < wheel_config.max_reach + wheel_config.tip_radius


def test_contact_follows_the_terrain(wheel_config):
    hub = wheel_ik((0.0, -0.1), wheel_config)
    flat = effective_contact(hub, wheel_config, LEFT, Terrain())
    raised = effective_contact(hub, wheel_config, LEFT, Terrain([Step(0.05, -10.0)]))
    assert raised.axle_height == pytest.approx(flat.axle_height + 0.05)
    assert raised.effective_radius == pytest.approx(flat.effective_radius)


def test_step_ahead_lifts_the_axle(wheel_config):
    hub = wheel_ik((0.0, -0.1), wheel_config)
    flat = effective_contact(hub, wheel_config, LEFT, Terrain())
    step = Terrain([Step(0.05, 0.02)])
    behind = effective_contact(hub, wheel_config, WheelPose(-1.0, 0.0, 0.0, -1.0), step)
    at_edge = effective_contact(hub, wheel_config, LEFT, step)
    assert behind.axle_height == pytest.approx(flat.axle_height)
    assert at_edge.axle_height > flat.axle_height
    assert at_edge.point[0] >= 0.02


def test_side_sign_mirrors_the_wheel(wheel_config):
    hub = wheel_ik((0.05, -0.08), wheel_config)
    left = effective_contact(hub, wheel_config, LEFT, Terrain())
    right = effective_contact(hub, wheel_config, WheelPose(0.0, 0.0, 0.0, 1.0), Terrain())
    assert left.axle_height == pytest.approx(right.axle_height)
    assert left.point[0] == pytest.approx(-right.point[0])


def test_heading_turns_the_wheel_plane(wheel_config):
    hub = wheel_ik((0.05, -0.1), wheel_config)
    pose = WheelPose(1.0, 2.0, np.pi / 2, -1.0)
    contact = effective_contact(hub, wheel_config, pose, Terrain())
    assert contact.point[0] == pytest.approx(1.0)
    assert contact.point[1] != pytest.approx(2.0)


def test_boundary_contacts_are_per_wheel(wheel_config):
    hubs = [wheel_ik((0.0, -rho), wheel_config) for rho in (0.07, 0.1)]
    boundary = arc_boundary(
        np.array([hub.phi_outer for hub in hubs]),
        np.array([hub.phi_inner for hub in hubs]),
        wheel_config,
    )
    contact = boundary_contacts(
        boundary, [0.0, 0.0], [0.0, 0.5], [0.0, 0.0], [-1.0, 1.0], Terrain(), 0.008
    )
    assert contact.point.shape == (2, 3)
    assert contact.axle_height[1] > contact.axle_height[0]
