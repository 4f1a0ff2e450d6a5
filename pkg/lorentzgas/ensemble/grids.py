from __future__ import annotations

from typing import TYPE_CHECKING, Literal

import numpy as np

if TYPE_CHECKING:
    from lorentzgas._types import FloatArray

GridKind = Literal["geometric", "linear"]


def geometric_grid(lo: float, hi: float, count: int) -> FloatArray:
    if not 0 < lo < hi or count < 2:  # noqa: PLR2004
        msg = f"Geometric grid needs 0 < lo < hi and count >= 2, got {lo}, {hi}, {count}"
        raise ValueError(msg)
    return np.geomspace(lo, hi, count)


def linear_grid(lo: float, hi: float, count: int) -> FloatArray:
    if not 0 <= lo < hi or count < 2:  # noqa: PLR2004
        msg = f"Linear grid needs 0 <= lo < hi and count >= 2, got {lo}, {hi}, {count}"
        raise ValueError(msg)
    return np.linspace(lo, hi, count)


def parse_grid(spec: str) -> FloatArray:
    """Builds a grid from ``kind:lo:hi:count``, e.g. ``geometric:0.1:100:40``."""
    parts = spec.split(":")
    if len(parts) != 4:  # noqa: PLR2004
        msg = f"Grid spec must look like kind:lo:hi:count, got {spec!r}"
        raise ValueError(msg)
    kind, lo, hi, count = parts
    builders = {"geometric": geometric_grid, "linear": linear_grid}
    if kind not in builders:
        msg = f"Unknown grid kind {kind!r}, expected one of {sorted(builders)}"
        raise ValueError(msg)
    return builders[kind](float(lo), float(hi), int(count))


def validate_grid(t_grid: FloatArray, t_max: float) -> FloatArray:
    grid = np.asarray(t_grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        msg = "The time grid must be a nonempty 1-d sequence"
        raise ValueError(msg)
    if np.any(grid < 0) or np.any(np.diff(grid) <= 0):
        msg = "The time grid must be nonnegative and strictly ascending"
        raise ValueError(msg)
    if not np.isfinite(t_max) or t_max < grid[-1] or t_max <= 0:
        msg = f"t_max = {t_max} must be finite, positive and at least max(t_grid) = {grid[-1]}"
        raise ValueError(msg)
    return grid
