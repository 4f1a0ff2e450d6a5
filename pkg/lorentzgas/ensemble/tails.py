from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING

import msgspec
import numpy as np
from scipy import stats

from lorentzgas.errors import DegenerateFitError, EmptyWindowError, ThresholdDomainError

if TYPE_CHECKING:
    from lorentzgas._types import BoolArray
    from lorentzgas.ensemble.survival import SurvivalCurve

MIN_FIT_POINTS = 5
THRESHOLD_TOLERANCE = 1e-12

Window = tuple[float, float]


class TailBoundsEstimate(msgspec.Struct, kw_only=True, frozen=True):
    """Extremes of t * r^(D-1) * Phi(t) over a window (lo, hi].

    ``spread`` is None when the curve vanishes somewhere in the window.
    """

    window: Window
    c_low: float
    c_high: float
    spread: float | None
    n_points: int


class ModelFit(msgspec.Struct, kw_only=True, frozen=True):
    power_exponent: float
    power_prefactor: float
    power_r2: float
    exp_rate: float
    exp_prefactor: float
    exp_r2: float
    window: Window
    n_points: int


def default_window(curve: SurvivalCurve) -> Window:
    """(2, 20) times the threshold 1/r^(D-1), capped at the censoring horizon."""
    threshold = curve.bgw_threshold
    return 2.0 * threshold, min(20.0 * threshold, curve.t_max)


def _window_mask(curve: SurvivalCurve, window: Window) -> BoolArray:
    lo, hi = window
    if not lo < hi:
        msg = f"Window must satisfy lo < hi, got {window}"
        raise ValueError(msg)
    times = np.asarray(curve.times, dtype=np.float64)
    return (times > lo) & (times <= hi)


def check_bgw_bounds(
    curve: SurvivalCurve,
    window: Window | None = None,
) -> TailBoundsEstimate:
    """Empirical two-sided bound C1 <= t r^(D-1) Phi(t) <= C2 on (lo, hi]."""
    window = window or default_window(curve)
    lo, hi = window
    threshold = curve.bgw_threshold
    if lo < threshold * (1.0 - THRESHOLD_TOLERANCE):
        msg = f"Window must start at or beyond 1/r^(D-1) = {threshold}, got lo = {lo}"
        raise ThresholdDomainError(msg)
    if hi > curve.t_max:
        msg = f"Window end {hi} exceeds the censoring horizon {curve.t_max}"
        raise ValueError(msg)

    mask = _window_mask(curve, window)
    if not mask.any():
        msg = f"No grid points in the window ({lo}, {hi}]"
        raise EmptyWindowError(msg)
    times = np.asarray(curve.times)[mask]
    survival = np.asarray(curve.survival)[mask]
    scaled = times * curve.radius ** (curve.dimension - 1) * survival
    c_low = float(scaled.min())
    c_high = float(scaled.max())
    spread: float | None = c_high / c_low if c_low > 0 else None
    if spread is None:
        logging.warning("Survival curve vanishes inside the window (%s, %s]", lo, hi)
    return TailBoundsEstimate(
        window=(float(lo), float(hi)),
        c_low=c_low,
        c_high=c_high,
        spread=spread,
        n_points=int(mask.sum()),
    )


def fit_tail_models(curve: SurvivalCurve, window: Window | None = None) -> ModelFit:
    """Least squares of log Phi against log t (power law) and against t (exponential)."""
    window = window or default_window(curve)
    mask = _window_mask(curve, window)
    times = np.asarray(curve.times)[mask]
    survival = np.asarray(curve.survival)[mask]
    positive = survival > 0
    times = times[positive]
    survival = survival[positive]
    if times.size < MIN_FIT_POINTS:
        msg = (
            f"Need at least {MIN_FIT_POINTS} positive survival points in {window}, "
            f"got {times.size}"
        )
        raise EmptyWindowError(msg)

    log_survival = np.log(survival)
    if np.ptp(log_survival) == 0:
        msg = "Survival values are constant over the window"
        raise DegenerateFitError(msg)
    power = stats.linregress(np.log(times), log_survival)
    exponential = stats.linregress(times, log_survival)
    return ModelFit(
        power_exponent=float(power.slope),
        power_prefactor=math.exp(power.intercept),
        power_r2=float(power.rvalue) ** 2,
        exp_rate=-float(exponential.slope),
        exp_prefactor=math.exp(exponential.intercept),
        exp_r2=float(exponential.rvalue) ** 2,
        window=(float(window[0]), float(window[1])),
        n_points=int(times.size),
    )
