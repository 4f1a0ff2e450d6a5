from __future__ import annotations

import math

import msgspec
import numpy as np
import numpy.typing as npt
from scipy import stats

from lorentzgas.errors import DegenerateFitError, FloorDominatedError

ROUNDING_FLOOR = 1e-13
MIN_FIT_POINTS = 5


class DecayFit(msgspec.Struct, kw_only=True, frozen=True):
    """Fit of distance(t) = c e^(-gamma t); ``residual`` is the RMS error in log space."""

    c_fit: float
    gamma_fit: float
    residual: float
    window: tuple[float, float]
    n_points: int


def fit_decay(
    t_points: npt.ArrayLike,
    distances: npt.ArrayLike,
    window: tuple[float, float] | None = None,
) -> DecayFit:
    times = np.asarray(t_points, dtype=np.float64)
    values = np.asarray(distances, dtype=np.float64)
    if times.shape != values.shape or times.ndim != 1:
        msg = "Times and distances must be 1-d arrays of the same length"
        raise ValueError(msg)
    lo, hi = window or (float(times.min()), float(times.max()))
    keep = (times >= lo) & (times <= hi) & (values > ROUNDING_FLOOR)
    if keep.sum() < MIN_FIT_POINTS:
        msg = (
            f"Need at least {MIN_FIT_POINTS} distances above {ROUNDING_FLOOR} "
            f"in [{lo}, {hi}], got {int(keep.sum())}"
        )
        raise FloorDominatedError(msg)
    times = times[keep]
    log_values = np.log(values[keep])
    if np.ptp(log_values) == 0:
        msg = "Distances are constant over the fit window"
        raise DegenerateFitError(msg)

    fit = stats.linregress(times, log_values)
    gamma = -float(fit.slope)
    if gamma <= 0:
        msg = f"Fitted decay rate is not positive: {gamma}"
        raise DegenerateFitError(msg)
    residual = log_values - (fit.intercept + fit.slope * times)
    return DecayFit(
        c_fit=math.exp(fit.intercept),
        gamma_fit=gamma,
        residual=float(np.sqrt(np.mean(residual**2))),
        window=(float(lo), float(hi)),
        n_points=int(times.size),
    )
