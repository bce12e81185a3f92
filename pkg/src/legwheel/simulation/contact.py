"""
=======
Contact
=======

Where a leg-wheel touches the terrain. The wheel boundary is sampled along
every arc and each sample is inflated by the tip radius. The axle settles at
the lowest height where no sample dips into the ground, so the axle height is
the largest of ``g(sample) + depth`` over the samples and the contact is the
sample that sets it.

Wheel planes are vertical. A sample at wheel-frame ``(u, v)`` lies ``-s * u``
ahead of the axle along the wheel heading, where ``s`` is the side sign of
the wheel, and ``v`` below or above it.

"""
from typing import NamedTuple

import numpy as np

from legwheel.kinematics import FourBarConfig, HubState, arc_boundary
from legwheel.simulation.terrain import Terrain


class WheelPose(NamedTuple):
    """World position of an axle in the ground plane and the heading of its wheel."""

    x: float
    y: float
    yaw: float
    side_sign: float


class Contact(NamedTuple):
    """Contact of one or more wheels.

    Attributes
    ----------
    point
        World ``(x, y, z)`` of the contact on the terrain.
    axle_height
        Height of the axle above the world origin.
    effective_radius
        Vertical distance from the axle down to the contact.

    """

    point: np.ndarray
    axle_height: np.ndarray
    effective_radius: np.ndarray


def boundary_contacts(
    boundary: np.ndarray,
    x,
    y,
    yaw,
    side_sign,
    terrain: Terrain,
    tip_radius: float,
) -> Contact:
    """Contacts of wheels whose sampled boundaries are already known.

    Parameters
    ----------
    boundary
        Wheel-frame boundary samples of shape ``(wheels, n_arcs, samples, 2)``.
    x, y, yaw, side_sign
        Per-wheel axle pose, each of shape ``(wheels,)``.

    """
    x, y, yaw, side_sign = (
        np.atleast_1d(np.asarray(v, dtype=float)) for v in (x, y, yaw, side_sign)
    )
    n_wheels = boundary.shape[0]
    samples = boundary.reshape(n_wheels, -1, 2)
    ahead = -side_sign[:, None] * samples[..., 0]
    world_x = x[:, None] + ahead * np.cos(yaw)[:, None]
    world_y = y[:, None] + ahead * np.sin(yaw)[:, None]
    ground = terrain.height(world_x, world_y)
    candidates = ground - samples[..., 1] + tip_radius

    index = np.argmax(candidates, axis=1)
    rows = np.arange(n_wheels)
    axle_height = candidates[rows, index]
    contact_ground = ground[rows, index]
    point = np.stack([world_x[rows, index], world_y[rows, index], contact_ground], axis=1)
    return Contact(point, axle_height, axle_height - contact_ground)


def effective_contact(
    hub: HubState,
    cfg: FourBarConfig,
    wheel_pose: WheelPose,
    terrain: Terrain,
    samples: int = 64,
) -> Contact:
    """Contact point, axle height and effective radius of a single wheel."""
    boundary = arc_boundary(
        np.array([hub.phi_outer]), np.array([hub.phi_inner]), cfg, samples
    )
    contact = boundary_contacts(
        boundary,
        wheel_pose.x,
        wheel_pose.y,
        wheel_pose.yaw,
        wheel_pose.side_sign,
        terrain,
        cfg.tip_radius,
    )
    return Contact(
        contact.point[0], float(contact.axle_height[0]), float(contact.effective_radius[0])
    )
