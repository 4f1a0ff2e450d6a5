from __future__ import annotations

import logging
import math
import os
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    import numpy.typing as npt

    from lorentzgas._types import FloatArray

THREADS_ENV_VAR = "LORENTZGAS_THREADS"


def reduce_to_cell(x: npt.ArrayLike) -> FloatArray:
    """Maps positions to the fundamental cell [-1/2, 1/2)^D."""
    x = np.asarray(x, dtype=np.float64)
    return x - np.floor(x + 0.5)


def lattice_shift(x: npt.ArrayLike) -> FloatArray:
    return np.floor(np.asarray(x, dtype=np.float64) + 0.5)


def unit_ball_volume(dimension: int) -> float:
    if dimension == 0:
        return 1.0
    return math.pi ** (dimension / 2) / math.gamma(dimension / 2 + 1)


def as_vectors(values: npt.ArrayLike, dimension: int | None = None) -> FloatArray:
    array = np.atleast_2d(np.asarray(values, dtype=np.float64))
    if dimension is not None and array.shape[-1] != dimension:
        msg = f"Expected vectors of dimension {dimension}, got shape {array.shape}"
        raise ValueError(msg)
    return array


def default_concurrency() -> int:
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is not None:
        try:
            value = int(raw)
        except ValueError:
            value = 0
        if value > 0:
            return value
        logging.warning("Ignoring invalid %s=%r", THREADS_ENV_VAR, raw)
    return os.cpu_count() or 1
