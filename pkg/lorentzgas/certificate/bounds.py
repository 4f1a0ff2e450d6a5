from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING

import numpy as np
from scipy import optimize

from lorentzgas.errors import ThresholdDomainError

if TYPE_CHECKING:
    from lorentzgas._types import FloatArray
    from lorentzgas.certificate.abc import InitialDensity

ROOT_RTOL = 1e-10


def _threshold(r_star: float, dimension: int) -> float:
    return 1.0 / r_star ** (dimension - 1)


def lower_bound_L(  # noqa: N802
    t: float,
    c1: float,
    r_star: float,
    data: InitialDensity,
    dimension: int,
) -> float:
    """C1 / (t r_*^(D-1)) * ||rho||_2, valid beyond the tail threshold."""
    threshold = _threshold(r_star, dimension)
    if t <= threshold:
        msg = f"The lower bound needs t > 1/r_*^(D-1) = {threshold}, got {t}"
        raise ThresholdDomainError(msg)
    if c1 <= 0:
        msg = f"C1 must be positive, got {c1}"
        raise ValueError(msg)
    return c1 / (t * r_star ** (dimension - 1)) * data.l2_norm


def upper_bound_U(  # noqa: N802
    t: float,
    c: float,
    gamma: float,
    data: InitialDensity,
) -> float:
    """||rho||_1 + c e^(-gamma t) ||rho||_2."""
    return data.l1_norm + c * math.exp(-gamma * t) * data.l2_norm


def ratio_inequality_slack(  # noqa: PLR0913
    t: float,
    c1: float,
    c: float,
    gamma: float,
    r_star: float,
    data: InitialDensity,
    dimension: int,
) -> float:
    """||rho||_1/||rho||_2 + c e^(-gamma t) - C1/(t r_*^(D-1)); negative means L > U."""
    return data.l1_norm / data.l2_norm + c * math.exp(-gamma * t) - c1 / (
        t * r_star ** (dimension - 1)
    )


def _excess(t: FloatArray, c1: float, c: float, gamma: float, a: float) -> FloatArray:
    return c1 / (t * a) - c * np.exp(-gamma * t)


def critical_ratio(  # noqa: PLR0913
    c1: float,
    c: float,
    gamma: float,
    r_star: float,
    dimension: int,
    horizon: float,
    *,
    scan_points: int = 4096,
) -> float:
    """max over (1/r_*^(D-1), horizon] of C1/(t r_*^(D-1)) - c e^(-gamma t).

    A bump data set admits a window L > U before the horizon iff its norm
    ratio ||rho||_1/||rho||_2 lies below this value.
    """
    threshold = _threshold(r_star, dimension)
    if horizon <= threshold:
        msg = f"Horizon {horizon} must exceed 1/r_*^(D-1) = {threshold}"
        raise ThresholdDomainError(msg)
    a = r_star ** (dimension - 1)
    grid = np.linspace(threshold, horizon, scan_points + 1)[1:]
    values = _excess(grid, c1, c, gamma, a)
    best = int(np.argmax(values))
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, grid.size - 1)]
    refined = optimize.minimize_scalar(
        lambda t: -float(_excess(np.asarray(t), c1, c, gamma, a)),
        bounds=(lo, hi),
        method="bounded",
    )
    return max(float(values[best]), -float(refined.fun))


def smallest_feasible_m(critical: float, dimension: int) -> int | None:
    """Smallest m with (3m)^(-D/2) < critical for the cos^2 bump."""
    if critical <= 0:
        return None
    bound = critical ** (-2.0 / dimension) / 3.0
    m = max(1, math.floor(bound) + 1)
    while (3 * m) ** (-dimension / 2) >= critical:
        m += 1
    return m


def contradiction_time(
    c1: float,
    c: float,
    gamma: float,
    r_star: float,
    dimension: int,
) -> float | None:
    """Largest zero of g(t) = C1 e^(gamma t) - c r_*^(D-1) t.

    g is strictly convex with g(0) = C1 > 0. None when g stays positive on
    t >= 0, that is when the scalar inequality already fails at every time.
    """
    if min(c1, c, gamma, r_star) <= 0:
        msg = "C1, c, gamma and r_star must be positive"
        raise ValueError(msg)
    a = c * r_star ** (dimension - 1)
    ratio = a / (c1 * gamma)
    if ratio <= 1:
        return None
    t_min = math.log(ratio) / gamma
    g_min = a / gamma * (1.0 - math.log(ratio))
    if g_min > 0:
        return None
    if g_min == 0:
        return t_min

    def g(t: float) -> float:
        return c1 * math.exp(min(gamma * t, 700.0)) - a * t

    hi = max(2.0 * t_min, t_min + 1.0 / gamma)
    while g(hi) <= 0:
        hi *= 2.0
    root = optimize.brentq(g, t_min, hi, rtol=ROOT_RTOL, xtol=1e-300)
    logging.debug("Contradiction time %.12g (bracket [%g, %g])", root, t_min, hi)
    return float(root)
