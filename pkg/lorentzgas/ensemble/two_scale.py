from __future__ import annotations

import logging
from collections.abc import Callable
from typing import TYPE_CHECKING

import msgspec
import numpy as np

from lorentzgas._types import FloatArray
from lorentzgas._util import reduce_to_cell
from lorentzgas.billiard import first_hit_batch
from lorentzgas.billiard.phase import SPEED_TOLERANCE
from lorentzgas.errors import AliasingError

if TYPE_CHECKING:
    import numpy.typing as npt

    from lorentzgas.billiard import LatticeConfig

FieldSampler = Callable[[FloatArray], FloatArray]


class ModeMagnitude(msgspec.Struct, frozen=True):
    k: list[int]
    magnitude: float


class ModeTable(msgspec.Struct, kw_only=True, frozen=True):
    """Fourier coefficient magnitudes split by k = 0 mod n versus the rest."""

    n: int
    grid_size: int
    dimension: int
    multiple_max: float
    multiple_l2: float
    other_max: float
    other_l2: float
    largest: list[ModeMagnitude]

    @property
    def relative_other_mass(self) -> float:
        total = np.hypot(self.multiple_l2, self.other_l2)
        return float(self.other_l2 / total) if total > 0 else 0.0


def two_scale_fourier_check(
    n: int,
    sampler: FieldSampler,
    dimension: int,
    grid_size: int,
    *,
    n_largest: int = 8,
) -> ModeTable:
    """Discrete Fourier coefficients of u(x) = U(n x) on a uniform torus grid.

    ``sampler`` maps an (m, D) array of points y to the values U(y); U must be
    1-periodic. A field oscillating exactly at scale 1/n only carries modes
    with every k_i divisible by n.
    """
    if n < 1:
        msg = f"n must be a positive integer, got {n}"
        raise ValueError(msg)
    if grid_size % n:
        msg = f"Grid size {grid_size} is not a multiple of n = {n}"
        raise AliasingError(msg)

    axis = np.arange(grid_size) / grid_size
    mesh = np.stack(np.meshgrid(*([axis] * dimension), indexing="ij"), axis=-1)
    values = np.asarray(sampler(n * mesh.reshape(-1, dimension)), dtype=np.float64)
    coefficients = np.fft.fftn(values.reshape((grid_size,) * dimension)) / grid_size**dimension
    magnitude = np.abs(coefficients)

    frequencies = np.rint(np.fft.fftfreq(grid_size, 1.0 / grid_size)).astype(np.int64)
    divisible = np.ones(magnitude.shape, dtype=bool)
    for index in range(dimension):
        shape = [1] * dimension
        shape[index] = grid_size
        divisible &= (frequencies % n == 0).reshape(shape)

    multiple = magnitude[divisible]
    other = magnitude[~divisible]
    order = np.argsort(magnitude, axis=None, kind="stable")[::-1][:n_largest]
    largest = [
        ModeMagnitude(
            k=[int(frequencies[i]) for i in np.unravel_index(flat, magnitude.shape)],
            magnitude=float(magnitude.flat[flat]),
        )
        for flat in order
    ]
    table = ModeTable(
        n=n,
        grid_size=grid_size,
        dimension=dimension,
        multiple_max=float(multiple.max()),
        multiple_l2=float(np.sqrt(np.sum(multiple**2))),
        other_max=float(other.max()) if other.size else 0.0,
        other_l2=float(np.sqrt(np.sum(other**2))),
        largest=largest,
    )
    logging.info("Two-scale check: max non-multiple mode %.3e", table.other_max)
    return table


def survival_field(t: float, v: npt.ArrayLike, cfg: LatticeConfig) -> FieldSampler:
    """U(y) = 1{tau_r(y, -v) > t / eps}, extended by zero on the obstacles.

    Evaluated at y = x / eps this is the survival indicator Phi_eps(t, x, v).
    """
    direction = -np.asarray(v, dtype=np.float64)
    if (
        direction.shape != (cfg.dimension,)
        or abs(np.linalg.norm(direction) - 1.0) > SPEED_TOLERANCE
    ):
        msg = "v must be a unit vector of the lattice dimension"
        raise ValueError(msg)
    if t < 0:
        msg = f"Time must be nonnegative, got {t}"
        raise ValueError(msg)
    horizon = t / cfg.epsilon

    def sampler(points: FloatArray) -> FloatArray:
        values = np.zeros(points.shape[0])
        free = np.linalg.norm(reduce_to_cell(points), axis=1) >= cfg.radius
        if horizon == 0:
            values[free] = 1.0
            return values
        starts = points[free]
        hits = first_hit_batch(
            starts,
            np.broadcast_to(direction, starts.shape),
            cfg.radius,
            horizon,
        )
        values[free] = hits.censored.astype(np.float64)
        return values

    return sampler

