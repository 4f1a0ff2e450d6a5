from __future__ import annotations

import itertools
import logging
from collections.abc import Sequence
from typing import TYPE_CHECKING

import msgspec
import numpy as np

from lorentzgas.certificate.bounds import (
    contradiction_time,
    critical_ratio,
    lower_bound_L,
    smallest_feasible_m,
    upper_bound_U,
)
from lorentzgas.certificate.bump import make_bump_rho
from lorentzgas.errors import CertificateInvariantError
from lorentzgas.serialization import RunHeader

if TYPE_CHECKING:
    from lorentzgas._types import BoolArray, FloatArray
    from lorentzgas.certificate.abc import BumpProfile
    from lorentzgas.ensemble import TailBoundsEstimate
    from lorentzgas.kinetic import DecayFit

DEFAULT_SCAN_POINTS = 2048


class Provenance(msgspec.Struct, kw_only=True, frozen=True):
    seeds: list[int] = msgspec.field(default_factory=list)
    n_samples: int | None = None
    nodes: int | None = msgspec.field(default=None, name="N_nodes")
    modes: int | None = msgspec.field(default=None, name="M_modes")
    window: tuple[float, float] | None = None


class NonConvergenceReport(msgspec.Struct, kw_only=True, frozen=True):
    """Fitted constants that contradict the inequality chain on ``t_window``.

    The window is where C1 ||rho||_2 / (t r_*^(D-1)) exceeds
    ||rho||_1 + c e^(-gamma t) ||rho||_2 for the bump at scale ``m``.
    """

    c1_emp: float = msgspec.field(name="C1_emp")
    c_fit: float
    gamma_fit: float
    r_star: float
    dimension: int = msgspec.field(name="D")
    m: int | None
    t_window: tuple[float, float] | None
    t_star: float | None
    margin_mid: float | None
    provenance: Provenance
    horizon: float
    critical_ratio: float
    min_feasible_m: int | None
    schedule_exhausted: bool
    run: RunHeader | None = None


def positive_runs(mask: BoolArray) -> list[tuple[int, int]]:
    """Inclusive index ranges of the maximal runs of True in ``mask``."""
    edges = np.diff(np.concatenate(([0], mask.astype(np.int8), [0])))
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1) - 1
    return [(int(lo), int(hi)) for lo, hi in zip(starts, ends, strict=True)]


def _margins(  # noqa: PLR0913
    grid: FloatArray,
    c1: float,
    c: float,
    gamma: float,
    r_star: float,
    l1: float,
    l2: float,
    dimension: int,
) -> FloatArray:
    lower = c1 / (grid * r_star ** (dimension - 1)) * l2
    upper = l1 + c * np.exp(-gamma * grid) * l2
    return lower - upper


def default_horizon(t_star: float | None, gamma: float, r_star: float, dimension: int) -> float:
    """10 t_* when the contradiction time exists, else 10 max(1/r_*^(D-1), 1/gamma)."""
    threshold = 1.0 / r_star ** (dimension - 1)
    horizon = 10.0 * t_star if t_star is not None else 10.0 * max(threshold, 1.0 / gamma)
    return max(horizon, 2.0 * threshold)


def certify_nonconvergence(  # noqa: PLR0913
    tail: TailBoundsEstimate,
    decay: DecayFit,
    r_star: float,
    dimension: int,
    m_schedule: Sequence[int],
    *,
    horizon: float | None = None,
    profile: BumpProfile | None = None,
    scan_points: int = DEFAULT_SCAN_POINTS,
    provenance: Provenance | None = None,
) -> NonConvergenceReport:
    """Searches the m schedule for a time window where the lower bound beats the upper one.

    Every m of the schedule is scanned so that monotone feasibility in m can be
    asserted; the report carries the first feasible m.
    """
    c1 = tail.c_low
    if c1 <= 0:
        msg = f"The empirical tail constant must be positive, got {c1}"
        raise ValueError(msg)
    c, gamma = decay.c_fit, decay.gamma_fit
    t_star = contradiction_time(c1, c, gamma, r_star, dimension)
    horizon = horizon or default_horizon(t_star, gamma, r_star, dimension)
    threshold = 1.0 / r_star ** (dimension - 1)
    critical = critical_ratio(c1, c, gamma, r_star, dimension, horizon)
    grid = np.linspace(threshold, horizon, scan_points + 1)[1:]

    feasible: list[tuple[int, bool]] = []
    chosen: tuple[int, tuple[float, float], float] | None = None
    for m in m_schedule:
        data = make_bump_rho(m, profile, dimension)
        margins = _margins(grid, c1, c, gamma, r_star, data.l1_norm, data.l2_norm, dimension)
        positive = margins > 0
        feasible.append((m, bool(positive.any())))
        if chosen is not None or not positive.any():
            continue
        runs = positive_runs(positive)
        best = int(np.argmax(margins))
        lo, hi = next(run for run in runs if run[0] <= best <= run[1])
        if len(runs) > 1:
            logging.info(
                "m = %s has %s disjoint windows; keeping %s around the largest margin",
                m,
                len(runs),
                (float(grid[lo]), float(grid[hi])),
            )
        window = (float(grid[lo]), float(grid[hi]))
        middle = 0.5 * (window[0] + window[1])
        margin = lower_bound_L(middle, c1, r_star, data, dimension) - upper_bound_U(
            middle, c, gamma, data
        )
        if margin <= 0:
            msg = f"Window {window} for m = {m} has a nonpositive margin {margin} at its midpoint"
            raise CertificateInvariantError(msg)
        chosen = (m, window, margin)

    ordered = sorted(feasible)
    for (small, small_ok), (large, large_ok) in itertools.pairwise(ordered):
        if small_ok and not large_ok and large > small:
            msg = f"Window exists for m = {small} but not for m = {large}"
            raise CertificateInvariantError(msg)

    base = provenance or Provenance()
    if chosen is None:
        logging.warning("No m in the schedule produced a window before t = %s", horizon)
    else:
        logging.info("Window %s at m = %s", chosen[1], chosen[0])
    return NonConvergenceReport(
        c1_emp=c1,
        c_fit=c,
        gamma_fit=gamma,
        r_star=r_star,
        dimension=dimension,
        m=chosen[0] if chosen else None,
        t_window=chosen[1] if chosen else None,
        t_star=t_star,
        margin_mid=chosen[2] if chosen else None,
        provenance=Provenance(
            seeds=base.seeds,
            n_samples=base.n_samples,
            nodes=base.nodes,
            modes=base.modes,
            window=base.window or tail.window,
        ),
        horizon=horizon,
        critical_ratio=critical,
        min_feasible_m=smallest_feasible_m(critical, dimension) if profile is None else None,
        schedule_exhausted=chosen is None,
    )
