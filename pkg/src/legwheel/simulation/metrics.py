"""
=============
Trial Metrics
=============

Summaries of trial logs: body height statistics, forward speed, drift,
turning radius and climbing gain, plus the spread of final positions across
a batch of trials.

"""
from dataclasses import asdict, dataclass
from typing import Dict, Optional, Tuple, Union

import numpy as np
import pandas as pd
from scipy.optimize import least_squares

from legwheel.exceptions import LegWheelError
from legwheel.simulation.simulator import TrialLog

LogLike = Union[TrialLog, pd.DataFrame]


class MetricsError(LegWheelError):
    """Raised when a log is too short to summarise."""

    pass


@dataclass(frozen=True)
class TrialMetrics:
    """Summary of one trial.

    Attributes
    ----------
    h_mean, h_sd
        Mean and population standard deviation of the body height after the
        settle time.
    v_mean
        Mean forward speed after the settle time.
    y_norm
        Final lateral offset divided by the distance travelled along x.
    final_x, final_y
        Final body position.
    turn_radius
        Radius of the circle fitted to the path after the settle time.

    """

    h_mean: float
    h_sd: float
    v_mean: float
    y_norm: float
    final_x: float
    final_y: float
    turn_radius: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def _frame(log: LogLike) -> pd.DataFrame:
    frame = log.frame if isinstance(log, TrialLog) else log
    if len(frame) < 2:
        raise MetricsError(f"Metrics need at least two log samples, got {len(frame)}.")
    return frame


def fit_circle(x, y) -> Tuple[float, float, float]:
    """Centre and radius of the circle through a path.

    An algebraic fit gives the starting point for a geometric least-squares
    refinement. A straight path has an infinite radius.

    Returns
    -------
        ``(centre_x, centre_y, radius)``.

    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 3:
        return np.nan, np.nan, np.nan
    design = np.column_stack([2 * x, 2 * y, np.ones_like(x)])
    solution, _, rank, _ = np.linalg.lstsq(design, x ** 2 + y ** 2, rcond=None)
    if rank < 3:
        return np.nan, np.nan, np.inf
    cx, cy, c = solution
    radius_sq = c + cx ** 2 + cy ** 2
    if not radius_sq > 0:
        return np.nan, np.nan, np.inf
    radius = np.sqrt(radius_sq)
    extent = max(np.ptp(x), np.ptp(y))
    if radius > 1e4 * max(extent, 1e-12):
        return float(cx), float(cy), np.inf

    def residuals(params):
        return np.hypot(x - params[0], y - params[1]) - params[2]

    refined = least_squares(residuals, [cx, cy, radius], method="lm")
    cx, cy, radius = refined.x
    return float(cx), float(cy), float(abs(radius))


def metrics(log: LogLike, settle_time: float = 0.0) -> TrialMetrics:
    """Summarises a trial log, ignoring samples before ``settle_time``.

    Raises
    ------
    MetricsError
        If fewer than two samples remain.

    """
    frame = _frame(log)
    settled = _frame(frame[frame["t"] >= settle_time - 1e-12])

    z = settled["z"].to_numpy()
    dx = np.diff(settled["x"].to_numpy())
    dy = np.diff(settled["y"].to_numpy())
    heading = settled["yaw"].to_numpy()
    mid_heading = 0.5 * (heading[1:] + heading[:-1])
    elapsed = settled["t"].iloc[-1] - settled["t"].iloc[0]
    forward = np.sum(dx * np.cos(mid_heading) + dy * np.sin(mid_heading))

    travelled_x = frame["x"].iloc[-1] - frame["x"].iloc[0]
    drift_y = frame["y"].iloc[-1] - frame["y"].iloc[0]
    if travelled_x != 0:
        y_norm = drift_y / travelled_x
    else:
        y_norm = 0.0 if drift_y == 0 else np.nan

    return TrialMetrics(
        h_mean=float(np.mean(z)),
        h_sd=float(np.std(z)),
        v_mean=float(forward / elapsed) if elapsed > 0 else 0.0,
        y_norm=float(y_norm),
        final_x=float(frame["x"].iloc[-1]),
        final_y=float(frame["y"].iloc[-1]),
        turn_radius=fit_circle(settled["x"], settled["y"])[2],
    )


def step_gain(log: LogLike, window: float = 1.0) -> float:
    """Mean body height over the last ``window`` seconds less that over the first."""
    frame = _frame(log)
    t = frame["t"]
    start = frame.loc[t <= t.iloc[0] + window, "z"].mean()
    end = frame.loc[t >= t.iloc[-1] - window, "z"].mean()
    return float(end - start)


def position_variance(
    final_positions, lateral_reference: Optional[float] = None
) -> Tuple[float, float]:
    """Population variance of final ``x`` and ``y`` across a batch.

    Parameters
    ----------
    final_positions
        An ``(n, 2)`` array of positions or a frame with ``final_x`` and
        ``final_y`` columns.
    lateral_reference
        If given, the ``y`` spread is measured about this line instead of
        the batch mean. Straight runs use ``0``.

    """
    if isinstance(final_positions, pd.DataFrame):
        final_positions = final_positions[["final_x", "final_y"]].to_numpy()
    positions = np.asarray(final_positions, dtype=float).reshape(-1, 2)
    if not len(positions):
        raise MetricsError("Position variance needs at least one trial.")
    var_x = np.var(positions[:, 0])
    if lateral_reference is None:
        var_y = np.var(positions[:, 1])
    else:
        var_y = np.mean((positions[:, 1] - lateral_reference) ** 2)
    return float(var_x), float(var_y)
