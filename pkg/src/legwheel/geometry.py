"""
==============
Wheel Geometry
==============

Design-level geometry of an n-arc transformable wheel.

The rim of the wheel is split into ``n`` equal arcs. When the arcs swing out
they become legs of length :math:`L_{arc}` and the wheel rolls like a spoked
wheel with ``n`` spokes of length :math:`r + L_{arc}`. The quantities here
characterise that rolling motion and are used to choose ``n``.

"""
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import List, Tuple

import pandas as pd

from legwheel.exceptions import LegWheelError

MIN_ARCS = 3
MAX_TABLE_ARCS = 12

# Obstacles surveyed in drip-irrigated fields, (min, max) in meters.
OBSTACLE_SURVEY = {
    "irrigation_pipe_diameter": (0.050, 0.110),
    "ditch_berm_width": (0.150, 0.300),
    "ditch_berm_height": (0.050, 0.170),
    "low_branch_height": (0.450, None),
}


class GeometryError(LegWheelError):
    """Raised for wheel designs outside the geometric domain."""

    pass


@dataclass(frozen=True)
class ArcWheelSpec:
    """An n-arc wheel of a given radius."""

    n_arcs: int
    radius: float

    def __post_init__(self):
        if int(self.n_arcs) != self.n_arcs or self.n_arcs < MIN_ARCS:
            raise GeometryError(
                f"A leg-wheel needs at least {MIN_ARCS} arcs. You provided {self.n_arcs}."
            )
        if not self.radius > 0:
            raise GeometryError(f"Wheel radius must be positive. You provided {self.radius}.")

    @property
    def arc_angle(self) -> float:
        return 2 * math.pi / self.n_arcs


@dataclass(frozen=True)
class GeometryMetrics:
    """Locomotion lengths of an n-arc wheel, in the units of its radius."""

    arc_length: float
    step_length: float
    h_min: float
    h_max: float

    @property
    def h_span(self) -> float:
        """Peak-to-peak centre height of the legged wheel."""
        return self.h_max - self.h_min

    def scaled(self, factor: float) -> "GeometryMetrics":
        return GeometryMetrics(
            self.arc_length * factor,
            self.step_length * factor,
            self.h_min * factor,
            self.h_max * factor,
        )


def wheel_geometry(spec: ArcWheelSpec) -> GeometryMetrics:
    """Computes leg length, step length and the centre height band.

    Parameters
    ----------
    spec
        The wheel to characterise.

    Returns
    -------
        The arc (leg) length, the distance covered per step and the minimum
        and maximum height of the wheel centre while walking on its legs.

    """
    alpha = spec.arc_angle
    r = spec.radius
    arc_length = math.sqrt(2 * r ** 2 * (1 - math.cos(alpha)))
    reach = r + arc_length
    return GeometryMetrics(
        arc_length=arc_length,
        step_length=2 * reach * math.sin(alpha / 2),
        h_min=reach * math.cos(alpha / 2),
        h_max=reach,
    )


def design_table(n_min: int, n_max: int, radius: float) -> List[Tuple[int, GeometryMetrics]]:
    """Geometry of every wheel with ``n_min`` to ``n_max`` arcs, inclusive.

    An empty range (``n_min > n_max``) gives an empty table.

    Raises
    ------
    GeometryError
        If the range reaches outside the tabulated interval or the radius is
        not positive.

    """
    if n_min > n_max:
        return []
    if n_min < MIN_ARCS or n_max > MAX_TABLE_ARCS:
        raise GeometryError(
            f"Design tables cover {MIN_ARCS} to {MAX_TABLE_ARCS} arcs. "
            f"You requested {n_min} to {n_max}."
        )
    return [(n, wheel_geometry(ArcWheelSpec(n, radius))) for n in range(n_min, n_max + 1)]


def round_half_up(value: float, places: int = 2) -> float:
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def design_table_frame(
    n_min: int, n_max: int, radius: float, places: int = 2
) -> pd.DataFrame:
    """The design table as a display frame with columns ``n, L_step, h_min, h_span``."""
    rows = [
        {
            "n": n,
            "L_step": round_half_up(m.step_length, places),
            "h_min": round_half_up(m.h_min, places),
            "h_span": round_half_up(m.h_span, places),
        }
        for n, m in design_table(n_min, n_max, radius)
    ]
    return pd.DataFrame(rows, columns=["n", "L_step", "h_min", "h_span"])


def clearance_radius(n_arcs: int, obstacle_height: float) -> float:
    """Smallest wheel radius whose minimum centre height clears an obstacle."""
    if not obstacle_height > 0:
        raise GeometryError("Obstacle height must be positive.")
    unit = wheel_geometry(ArcWheelSpec(n_arcs, 1.0))
    return obstacle_height / unit.h_min
