"""
===================
Four-Bar Kinematics
===================

Kinematics and quasi-statics of the leg-wheel mechanism.

Each arc of the wheel is pinned at joint ``A`` to the outer hub (radius
``DA``) and driven through link ``CB`` by the inner hub (radius ``DC``).
Rotating the two coaxial hubs together turns the wheel. Changing the phase
offset ``e = phi_inner - phi_outer`` swings the arcs out into legs, moving the
arc tip ``P`` away from the wheel centre ``D``.

Angles are measured counter-clockwise in the wheel frame with the wheel centre
at the origin and y up. The linkage equations are solved in the drawing
frame of the mechanism, which is the wheel frame reflected through its x
axis. In the wheel frame the offset grows as the leg extends.

"""
import functools
import math
from dataclasses import dataclass, field
from typing import ClassVar, Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from legwheel.exceptions import LegWheelError

_DRAWING = np.array([1.0, -1.0])
_TABLE_SIZE = 513


class WorkspaceError(LegWheelError):
    """Raised when a target lies outside the reach of the mechanism.

    Attributes
    ----------
    deficit
        Distance in meters by which the target misses the workspace.
    stage
        Which part of the solution failed: ``"outer"`` or ``"inner"`` for the
        two linkage passes, ``"profile"`` or ``"height"`` for sweeps.

    """

    def __init__(self, message: str, deficit: float = 0.0, stage: Optional[str] = None):
        self.deficit = deficit
        self.stage = stage
        super().__init__(message)


class SingularConfigurationError(LegWheelError):
    """Raised when the linkage is locked or a moment arm vanishes."""

    pass


@dataclass(frozen=True)
class PlanetaryGear:
    """Tooth counts of the planetary set coupling the two hub motors.

    ``ratio_teeth`` names the tooth count that sets the share of the inner
    hub torque carried by the outer motor: ``"planet"`` or ``"ring"``.

    """

    sun_teeth: int
    planet_teeth: int
    ring_teeth: int
    ratio_teeth: str = "planet"

    RATIO_CHOICES: ClassVar[Tuple[str, ...]] = ("planet", "ring")

    def __post_init__(self):
        if min(self.sun_teeth, self.planet_teeth, self.ring_teeth) <= 0:
            raise LegWheelError("Planetary gear tooth counts must be positive.")
        if self.ratio_teeth not in self.RATIO_CHOICES:
            raise LegWheelError(
                f"Gear ratio teeth must be one of {self.RATIO_CHOICES}, "
                f"not {self.ratio_teeth!r}."
            )

    @property
    def is_physical(self) -> bool:
        return self.ring_teeth == self.sun_teeth + 2 * self.planet_teeth

    @property
    def ratio_tooth_count(self) -> int:
        return self.planet_teeth if self.ratio_teeth == "planet" else self.ring_teeth


@dataclass(frozen=True)
class FourBarConfig:
    """Link lengths of the leg-wheel mechanism.

    Lengths are in meters and the arc mount angle in radians. The
    ``height_band`` lists the tip-centre heights the wheel is expected to
    stand at; the mechanism is checked for reach across it on construction.

    Raises
    ------
    WorkspaceError
        If the inverse kinematics fails anywhere in the height band.

    """

    pivot_ab: float = 0.015
    outer_hub_da: float = 0.065
    link_cb: float = 0.0453
    inner_hub_dc: float = 0.028
    arc_ap: float = 0.0623
    tip_radius: float = 0.008
    arc_mount_angle: float = math.radians(59.4)
    n_arcs: int = 5
    gear: Optional[PlanetaryGear] = PlanetaryGear(24, 29, 82)
    height_band: Tuple[float, float] = (0.045, 0.125)

    VALIDATION_HEIGHTS: ClassVar[int] = 64

    configuration_defaults: ClassVar[Dict] = {
        "wheel": {
            "pivot_ab": 0.015,
            "outer_hub_da": 0.065,
            "link_cb": 0.0453,
            "inner_hub_dc": 0.028,
            "arc_ap": 0.0623,
            "tip_radius": 0.008,
            "arc_mount_angle_degrees": 59.4,
            "n_arcs": 5,
            "gear": {
                "sun_teeth": 24,
                "planet_teeth": 29,
                "ring_teeth": 82,
                "ratio_teeth": "planet",
            },
            "height_band": [0.045, 0.125],
        }
    }

    def __post_init__(self):
        lengths = {
            "pivot_ab": self.pivot_ab,
            "outer_hub_da": self.outer_hub_da,
            "link_cb": self.link_cb,
            "inner_hub_dc": self.inner_hub_dc,
            "arc_ap": self.arc_ap,
            "tip_radius": self.tip_radius,
        }
        bad = [name for name, value in lengths.items() if not value > 0]
        if bad:
            raise WorkspaceError(f"Link lengths must be positive: {', '.join(bad)}.")
        if self.n_arcs < 3:
            raise WorkspaceError(f"A leg-wheel needs at least 3 arcs, not {self.n_arcs}.")
        if self.arc_ap >= 2 * self.outer_hub_da:
            raise WorkspaceError("The arc chord AP must be shorter than the arc diameter.")
        low, high = self.height_band
        if not 0 < low < high <= self.max_reach:
            raise WorkspaceError(
                f"Height band {self.height_band} must lie inside (0, {self.max_reach}].",
                stage="height",
            )
        for height in np.linspace(low, high, self.VALIDATION_HEIGHTS):
            wheel_ik((0.0, -height), self)

    @property
    def max_reach(self) -> float:
        """Distance from the wheel centre to a fully extended tip."""
        return self.outer_hub_da + self.arc_ap

    @property
    def max_extension(self) -> float:
        """Largest tip distance the hubs are driven to, the top of the height band.

        Link ``CB`` runs out of length a little short of :attr:`max_reach`.
        """
        return self.height_band[1]

    @classmethod
    def from_config(cls, wheel_config) -> "FourBarConfig":
        """Builds a configuration from the ``wheel`` block of a scenario."""
        gear_config = wheel_config.get("gear")
        gear = (
            PlanetaryGear(
                int(gear_config.sun_teeth),
                int(gear_config.planet_teeth),
                int(gear_config.ring_teeth),
                str(gear_config.ratio_teeth),
            )
            if gear_config
            else None
        )
        return cls(
            pivot_ab=float(wheel_config.pivot_ab),
            outer_hub_da=float(wheel_config.outer_hub_da),
            link_cb=float(wheel_config.link_cb),
            inner_hub_dc=float(wheel_config.inner_hub_dc),
            arc_ap=float(wheel_config.arc_ap),
            tip_radius=float(wheel_config.tip_radius),
            arc_mount_angle=math.radians(float(wheel_config.arc_mount_angle_degrees)),
            n_arcs=int(wheel_config.n_arcs),
            gear=gear,
            height_band=tuple(float(h) for h in wheel_config.height_band),
        )


@dataclass(frozen=True)
class HubState:
    """Phases of the outer and inner hub of one wheel."""

    phi_outer: float
    phi_inner: float

    @property
    def offset(self) -> float:
        return self.phi_inner - self.phi_outer


@dataclass(frozen=True)
class TipLoad:
    """A force in newtons applied at the arc tip."""

    force: Tuple[float, float] = field(default=(0.0, 0.0))

    def __post_init__(self):
        if not np.all(np.isfinite(self.force)):
            raise LegWheelError(f"Tip load must be finite, got {self.force}.")


class Linkage(NamedTuple):
    """Joint positions of the mechanism in the wheel frame."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    p: np.ndarray


class TorqueSolution(NamedTuple):
    tau_inner: float
    tau_outer: float
    link_force: float


def two_link_ik(target, l1: float, l2: float) -> Tuple[float, float]:
    """Joint angles of a planar two-link arm reaching ``target``.

    The elbow uses the negative branch, ``theta2 <= 0``.

    Parameters
    ----------
    target
        The (x, y) point to reach.
    l1
        Length of the link attached at the origin.
    l2
        Length of the distal link.

    Returns
    -------
        ``(theta1, theta2)`` in radians.

    Raises
    ------
    WorkspaceError
        If the target is out of reach. The deficit is the distance to the
        nearest reachable point.

    """
    x, y = float(target[0]), float(target[1])
    distance = math.hypot(x, y)
    tolerance = 1e-12 * (l1 + l2)
    if distance > l1 + l2 + tolerance:
        deficit = distance - (l1 + l2)
        raise WorkspaceError(f"Target is {deficit:.3g} m beyond reach.", deficit=deficit)
    if distance < abs(l1 - l2) - tolerance:
        deficit = abs(l1 - l2) - distance
        raise WorkspaceError(
            f"Target is {deficit:.3g} m inside the dead zone.", deficit=deficit
        )

    cos_elbow = (x * x + y * y - l1 * l1 - l2 * l2) / (2 * l1 * l2)
    theta2 = -math.acos(min(1.0, max(-1.0, cos_elbow)))
    theta1 = math.atan2(y, x) - math.atan2(l2 * math.sin(theta2), l1 + l2 * math.cos(theta2))
    return theta1, theta2


def _wrap(angle):
    return (angle + np.pi) % (2 * np.pi) - np.pi


def wheel_ik(tip, cfg: FourBarConfig) -> HubState:
    """Hub phases that place the arc tip at ``tip``.

    The first pass solves the outer hub and arc as a two-link arm. Joint
    ``B`` follows from the arc mount angle and the second pass solves the
    inner hub and link ``CB``.

    Raises
    ------
    WorkspaceError
        With ``stage`` set to the pass that failed.

    """
    x, y = np.asarray(tip, dtype=float) * _DRAWING
    try:
        outer, elbow = two_link_ik((x, y), cfg.outer_hub_da, cfg.arc_ap)
    except WorkspaceError as e:
        raise WorkspaceError(f"Outer pass failed: {e}", e.deficit, stage="outer") from e

    arc_direction = outer + elbow - cfg.arc_mount_angle
    b = (
        cfg.outer_hub_da * math.cos(outer) + cfg.pivot_ab * math.cos(arc_direction),
        cfg.outer_hub_da * math.sin(outer) + cfg.pivot_ab * math.sin(arc_direction),
    )
    try:
        inner, _ = two_link_ik(b, cfg.inner_hub_dc, cfg.link_cb)
    except WorkspaceError as e:
        raise WorkspaceError(f"Inner pass failed: {e}", e.deficit, stage="inner") from e

    phi_outer = -outer
    return HubState(phi_outer, phi_outer + float(_wrap(outer - inner)))


def linkage_points(phi_outer, phi_inner, cfg: FourBarConfig) -> Linkage:
    """Vectorised forward kinematics.

    ``phi_outer`` and ``phi_inner`` may be arrays of any matching shape. Each
    returned point array has that shape plus a trailing axis of length 2.

    Raises
    ------
    SingularConfigurationError
        If the circles about ``A`` and ``C`` do not intersect anywhere.

    """
    outer = -np.asarray(phi_outer, dtype=float)
    inner = -np.asarray(phi_inner, dtype=float)
    a = cfg.outer_hub_da * np.stack([np.cos(outer), np.sin(outer)], axis=-1)
    c = cfg.inner_hub_dc * np.stack([np.cos(inner), np.sin(inner)], axis=-1)

    chord = a - c
    d = np.linalg.norm(chord, axis=-1)
    ab, cb = cfg.pivot_ab, cfg.link_cb
    locked = (d > ab + cb) | (d < abs(cb - ab))
    if np.any(locked):
        raise SingularConfigurationError(
            "Hub phases lock the mechanism: link CB cannot reach joint B."
        )
    along = (cb ** 2 - ab ** 2 + d ** 2) / (2 * d)
    across = np.sqrt(np.maximum(cb ** 2 - along ** 2, 0.0))
    unit = chord / d[..., None]
    normal = np.stack([-unit[..., 1], unit[..., 0]], axis=-1)
    # the assembly branch keeps B to the left of A -> C
    b = c + along[..., None] * unit - across[..., None] * normal

    arc = np.arctan2(b[..., 1] - a[..., 1], b[..., 0] - a[..., 0]) + cfg.arc_mount_angle
    p = a + cfg.arc_ap * np.stack([np.cos(arc), np.sin(arc)], axis=-1)
    return Linkage(a * _DRAWING, b * _DRAWING, c * _DRAWING, p * _DRAWING)


def wheel_fk(hub: HubState, cfg: FourBarConfig) -> Linkage:
    """Joint positions ``A, B, C, P`` for a pair of hub phases."""
    return linkage_points(hub.phi_outer, hub.phi_inner, cfg)


def offset_at_extension(rho: float, cfg: FourBarConfig) -> float:
    """Hub offset holding the tip at distance ``rho`` from the wheel centre."""
    return wheel_ik((0.0, -rho), cfg).offset


def phase_offset_profile(
    height: float, x_range: Tuple[float, float], samples: int, cfg: FourBarConfig
) -> List[Tuple[float, float]]:
    """Hub offset needed to hold the tip at ``(x, -height)`` across ``x_range``.

    The profile is U-shaped: the offset is smallest with the tip straight
    below the centre and grows towards either end of the step.

    Raises
    ------
    WorkspaceError
        If the height leaves no workspace or any sample is out of reach.

    """
    if height >= cfg.max_reach:
        raise WorkspaceError(
            f"Height {height} m leaves no room to sweep the tip; maximum reach is "
            f"{cfg.max_reach} m.",
            deficit=height - cfg.max_reach,
            stage="profile",
        )
    profile = []
    for x in np.linspace(x_range[0], x_range[1], samples):
        try:
            profile.append((float(x), wheel_ik((x, -height), cfg).offset))
        except WorkspaceError as e:
            raise WorkspaceError(
                f"Offset profile unreachable at x={x:.6g} m: {e}", e.deficit, stage="profile"
            ) from e
    return profile


def extension_bounds(height: float, cfg: FourBarConfig) -> Tuple[float, float]:
    """Oscillator offset and amplitude for a wheel standing at ``height``.

    ``X`` is the hub offset when the contact point is furthest from the
    wheel centre, at the end of a step. ``R`` is the drop from ``X`` to the
    offset with the contact point straight below the centre.

    Parameters
    ----------
    height
        Height of the tip centre above the ground.

    Raises
    ------
    WorkspaceError
        If the height is outside the reach of the mechanism.

    """
    if not 0 < height <= cfg.max_extension:
        raise WorkspaceError(
            f"Height {height} m is outside (0, {cfg.max_extension}] m.",
            deficit=max(height - cfg.max_extension, -height),
            stage="height",
        )
    furthest = min(height / math.cos(math.pi / cfg.n_arcs), cfg.max_extension)
    try:
        offset_max = offset_at_extension(furthest, cfg)
        offset_min = offset_at_extension(height, cfg)
    except WorkspaceError as e:
        raise WorkspaceError(str(e), e.deficit, stage="height") from e
    return offset_max, offset_max - offset_min


def rectified_sine_deviation(height: float, cfg: FourBarConfig, samples: int = 201) -> float:
    """Largest gap between the rectified-sine offset and the exact profile over a step."""
    offset_max, span = extension_bounds(height, cfg)
    half_step = math.pi / cfg.n_arcs
    deviation = 0.0
    for angle in np.linspace(-half_step, half_step, samples):
        rho = min(height / math.cos(angle), cfg.max_extension)
        exact = offset_at_extension(rho, cfg)
        approximate = offset_max - span * math.cos(angle * cfg.n_arcs / 2)
        deviation = max(deviation, abs(exact - approximate))
    return deviation


@functools.lru_cache(maxsize=None)
def _tip_table(cfg: FourBarConfig) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    rho = np.linspace(cfg.height_band[0], cfg.max_extension, _TABLE_SIZE)
    offsets = np.empty_like(rho)
    tip_angle = np.empty_like(rho)
    for i, r in enumerate(rho):
        hub = wheel_ik((0.0, -r), cfg)
        offsets[i] = hub.offset
        tip_angle[i] = _wrap(-np.pi / 2 - hub.phi_outer)
    return offsets, np.unwrap(tip_angle), rho


def offset_range(cfg: FourBarConfig) -> Tuple[float, float]:
    """Smallest and largest hub offset over the tabulated extensions."""
    offsets = _tip_table(cfg)[0]
    return float(offsets[0]), float(offsets[-1])


def tip_angle_offset(offset, cfg: FourBarConfig):
    """Polar angle of the tip relative to the outer hub phase, as a function of offset."""
    offsets, tip_angle, _ = _tip_table(cfg)
    return np.interp(offset, offsets, tip_angle)


def extension_for_offset(offset, cfg: FourBarConfig):
    """Tip distance from the wheel centre produced by a hub offset."""
    offsets, _, rho = _tip_table(cfg)
    return np.interp(offset, offsets, rho)


def arc_boundary(phi_outer, phi_inner, cfg: FourBarConfig, samples: int = 64) -> np.ndarray:
    """Points along every arc body of the wheel.

    Each arc is a circular segment of radius ``DA`` from joint ``A`` to tip
    ``P``. With ``|P| = DA`` the arcs close into a round wheel.

    Returns
    -------
        Array of shape ``phi_outer.shape + (n_arcs, samples, 2)``.

    """
    spacing = 2 * np.pi * np.arange(cfg.n_arcs) / cfg.n_arcs
    linkage = linkage_points(
        np.asarray(phi_outer, dtype=float)[..., None] + spacing,
        np.asarray(phi_inner, dtype=float)[..., None] + spacing,
        cfg,
    )
    a = linkage.a * _DRAWING
    chord = linkage.p * _DRAWING - a
    unit = chord / cfg.arc_ap
    half = cfg.arc_ap / 2
    depth = math.sqrt(cfg.outer_hub_da ** 2 - half ** 2)
    centre = a + half * unit + depth * np.stack([unit[..., 1], -unit[..., 0]], axis=-1)
    start = np.arctan2(a[..., 1] - centre[..., 1], a[..., 0] - centre[..., 0])
    sweep = 2 * math.atan2(half, depth)
    angles = start[..., None] - sweep * np.linspace(0.0, 1.0, samples)
    points = centre[..., None, :] + cfg.outer_hub_da * np.stack(
        [np.cos(angles), np.sin(angles)], axis=-1
    )
    return points * _DRAWING


def _cross(u, v) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


def quasi_static_torques(hub: HubState, load: TipLoad, cfg: FourBarConfig) -> TorqueSolution:
    """Hub torques produced by a load at the arc tip.

    The arc balances the tip load against the force of link ``CB`` about
    joint ``A``. The link carries that force to the inner hub; the outer hub
    takes the rest through ``A``. Torques are counter-clockwise positive and
    satisfy ``tau_inner * d(phi_inner) + tau_outer * d(phi_outer) = F . dP``.

    Returns
    -------
        The inner and outer hub torques and the compressive force in ``CB``.

    Raises
    ------
    SingularConfigurationError
        If link ``CB`` has no moment arm about ``A``.

    """
    a, b, c, p = wheel_fk(hub, cfg)
    force = np.asarray(load.force, dtype=float)
    link = (c - b) / np.linalg.norm(c - b)
    arm = _cross(b - a, link)
    if abs(arm) < 1e-9:
        raise SingularConfigurationError("Link CB has no moment arm about joint A.")
    link_force = _cross(p - a, force) / arm
    tau_inner = _cross(c, link_force * link)
    tau_outer = _cross(a, force - link_force * link)
    return TorqueSolution(tau_inner, tau_outer, link_force)


def planetary_torques(
    tau_inner: float, tau_outer: float, gear: PlanetaryGear
) -> Tuple[float, float]:
    """Motor torques when the inner hub is driven through the planetary set.

    The outer motor takes the share ``N / (N + sun)`` of the inner hub torque,
    where ``N`` is the tooth count named by ``gear.ratio_teeth``.

    """
    ratio = gear.ratio_tooth_count
    total = ratio + gear.sun_teeth
    tau_inner_planetary = tau_inner * gear.sun_teeth / total
    tau_outer_planetary = tau_outer + tau_inner * ratio / total
    return tau_inner_planetary, tau_outer_planetary


def virtual_work_residual(
    hub: HubState,
    load: TipLoad,
    cfg: FourBarConfig,
    displacement: Tuple[float, float],
    step: float = 1e-6,
) -> Tuple[float, float]:
    """Power of the hub torques and of the tip load for a small hub displacement.

    Returns
    -------
        ``(torque_power, load_power)``; the two agree for a correct torque
        solution up to finite-difference error.

    """
    d_outer, d_inner = displacement
    tau_inner, tau_outer, _ = quasi_static_torques(hub, load, cfg)
    forward = linkage_points(
        hub.phi_outer + step * d_outer, hub.phi_inner + step * d_inner, cfg
    ).p
    backward = linkage_points(
        hub.phi_outer - step * d_outer, hub.phi_inner - step * d_inner, cfg
    ).p
    tip_velocity = (forward - backward) / (2 * step)
    load_power = float(np.dot(load.force, tip_velocity))
    return tau_inner * d_inner + tau_outer * d_outer, load_power


def offset_for_extension(rho, cfg: FourBarConfig):
    """Vectorised inverse of :func:`extension_for_offset` over the tabulated band."""
    offsets, _, table_rho = _tip_table(cfg)
    return np.interp(rho, table_rho, offsets)
