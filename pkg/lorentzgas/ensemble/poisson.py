from __future__ import annotations

import functools
import logging
from typing import TYPE_CHECKING

import anyio
import numpy as np

from lorentzgas._util import unit_ball_volume
from lorentzgas.ensemble._rng import BLOCK_SIZE, Block, partition
from lorentzgas.ensemble._runner import BlockRunner
from lorentzgas.ensemble.grids import validate_grid
from lorentzgas.ensemble.sampling import uniform_sphere
from lorentzgas.ensemble.survival import BlockTally, SurvivalCurve, build_curve, survivor_counts

if TYPE_CHECKING:
    import numpy.typing as npt

    from lorentzgas._types import FloatArray
    from lorentzgas.billiard import LatticeConfig


def matched_poisson_intensity(cfg: LatticeConfig) -> float:
    """Intensity giving a Poisson gas the mean free path of the periodic table."""
    return 1.0 / cfg.free_volume


def poisson_decay_rate(intensity: float, radius: float, dimension: int) -> float:
    """lambda * omega_{D-1} r^(D-1), the exact exponential rate of the Poisson survival."""
    return intensity * unit_ball_volume(dimension - 1) * radius ** (dimension - 1)


def _poisson_block(  # noqa: PLR0913
    block: Block,
    *,
    intensity: float,
    radius: float,
    dimension: int,
    grid: FloatArray,
    t_max: float,
) -> BlockTally:
    rng = block.generator()
    length = t_max + 2.0 * radius
    tube = length * unit_ball_volume(dimension - 1) * radius ** (dimension - 1)
    per_sample = rng.poisson(intensity * tube, size=block.count)
    owners = np.repeat(np.arange(block.count), per_sample)
    total = int(per_sample.sum())

    # the ray runs along e1 from the origin; centres fill the r-tube around [0, t_max]
    along = rng.random(total) * length - radius
    transverse = uniform_sphere(rng, total, dimension - 1) * (
        radius * rng.random(total) ** (1.0 / (dimension - 1))
    )[:, None]
    offset_sq = np.einsum("ij,ij->i", transverse, transverse)

    covering = along * along + offset_sq < radius * radius
    entry = along - np.sqrt(np.maximum(radius * radius - offset_sq, 0.0))
    ahead = ~covering & (entry > 0) & (entry <= t_max)

    tau = np.full(block.count, np.inf)
    np.minimum.at(tau, owners[ahead], entry[ahead])
    return BlockTally(
        counts=survivor_counts(tau, grid),
        censored=int(np.sum(~np.isfinite(tau))),
    )


async def poisson_survival_async(  # noqa: PLR0913
    intensity: float,
    radius: float,
    dimension: int,
    n_samples: int,
    t_grid: npt.ArrayLike,
    seed: int,
    *,
    t_max: float | None = None,
    concurrency: int | None = None,
    block_size: int = BLOCK_SIZE,
) -> SurvivalCurve:
    """Free path survival among Poisson-distributed balls of radius r.

    Obstacles covering the start point are removed, which conditions the
    configuration on the origin being free.
    """
    if intensity <= 0:
        msg = f"Intensity must be positive, got {intensity}"
        raise ValueError(msg)
    if radius <= 0 or dimension < 2:  # noqa: PLR2004
        msg = f"Need radius > 0 and dimension >= 2, got {radius}, {dimension}"
        raise ValueError(msg)
    grid = np.asarray(t_grid, dtype=np.float64)
    horizon = float(grid.max()) if t_max is None else t_max
    grid = validate_grid(grid, horizon)
    blocks = partition(n_samples, seed, block_size)
    runner = BlockRunner(
        functools.partial(
            _poisson_block,
            intensity=intensity,
            radius=radius,
            dimension=dimension,
            grid=grid,
            t_max=horizon,
        ),
        concurrency=concurrency,
    )
    tallies = await runner.run(blocks)
    counts = np.sum([tally.counts for tally in tallies], axis=0)
    censored = sum(tally.censored for tally in tallies)
    logging.info("Poisson survival: censored fraction %.3e", censored / n_samples)
    return build_curve(
        counts,
        grid,
        n_samples=n_samples,
        t_max=horizon,
        radius=radius,
        dimension=dimension,
        seed=seed,
        censored=censored,
        kind="poisson",
        intensity=intensity,
    )


def poisson_survival(  # noqa: PLR0913
    intensity: float,
    radius: float,
    dimension: int,
    n_samples: int,
    t_grid: npt.ArrayLike,
    seed: int,
    *,
    t_max: float | None = None,
    concurrency: int | None = None,
    block_size: int = BLOCK_SIZE,
) -> SurvivalCurve:
    return anyio.run(
        functools.partial(
            poisson_survival_async,
            intensity,
            radius,
            dimension,
            n_samples,
            t_grid,
            seed,
            t_max=t_max,
            concurrency=concurrency,
            block_size=block_size,
        )
    )
