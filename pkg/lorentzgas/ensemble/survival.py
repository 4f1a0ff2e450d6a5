from __future__ import annotations

import dataclasses
import functools
import logging
from typing import TYPE_CHECKING, Literal

import anyio
import msgspec
import numpy as np

from lorentzgas.billiard import first_hit_batch
from lorentzgas.ensemble._rng import BLOCK_SIZE, Block, partition
from lorentzgas.ensemble._runner import BlockRunner
from lorentzgas.ensemble.grids import validate_grid
from lorentzgas.ensemble.sampling import sample_mu_r_batch

if TYPE_CHECKING:
    import numpy.typing as npt

    from lorentzgas._types import FloatArray, IntArray
    from lorentzgas.billiard import LatticeConfig

CurveKind = Literal["periodic", "poisson"]
BandMethod = Literal["normal", "wilson"]


class SurvivalCurve(msgspec.Struct, kw_only=True, frozen=True):
    """Empirical survival function of the free path length, Phi(t) = P(tau > t)."""

    times: list[float]
    survival: list[float]
    std_err: list[float]
    n_samples: int
    t_max: float
    radius: float
    dimension: int
    seed: int
    censored_fraction: float = 0.0
    kind: CurveKind = "periodic"
    intensity: float | None = None

    def arrays(self) -> tuple[FloatArray, FloatArray, FloatArray]:
        return (
            np.asarray(self.times, dtype=np.float64),
            np.asarray(self.survival, dtype=np.float64),
            np.asarray(self.std_err, dtype=np.float64),
        )

    @property
    def bgw_threshold(self) -> float:
        return 1.0 / self.radius ** (self.dimension - 1)


def survivor_counts(tau: FloatArray, grid: FloatArray) -> IntArray:
    """Number of exit times strictly greater than each grid point."""
    below = np.searchsorted(grid, tau, side="left")
    histogram = np.bincount(below, minlength=grid.size + 1)
    return tau.size - np.cumsum(histogram)[: grid.size]


def build_curve(  # noqa: PLR0913
    counts: npt.ArrayLike,
    grid: FloatArray,
    *,
    n_samples: int,
    t_max: float,
    radius: float,
    dimension: int,
    seed: int,
    censored: int,
    kind: CurveKind = "periodic",
    intensity: float | None = None,
) -> SurvivalCurve:
    survival = np.asarray(counts, dtype=np.float64) / n_samples
    std_err = np.sqrt(survival * (1.0 - survival) / n_samples)
    return SurvivalCurve(
        times=grid.tolist(),
        survival=survival.tolist(),
        std_err=std_err.tolist(),
        n_samples=n_samples,
        t_max=float(t_max),
        radius=float(radius),
        dimension=dimension,
        seed=seed,
        censored_fraction=censored / n_samples,
        kind=kind,
        intensity=intensity,
    )


@dataclasses.dataclass(slots=True, kw_only=True, frozen=True)
class BlockTally:
    counts: IntArray
    censored: int
    grazing: int = 0
    proposals: int = 0


def _survival_block(
    block: Block,
    *,
    cfg: LatticeConfig,
    grid: FloatArray,
    t_max: float,
) -> BlockTally:
    rng = block.generator()
    positions, velocities, proposals = sample_mu_r_batch(rng, cfg, block.count)
    hits = first_hit_batch(positions, velocities, cfg.radius, t_max)
    return BlockTally(
        counts=survivor_counts(hits.tau, grid),
        censored=int(hits.censored.sum()),
        grazing=int(hits.grazing.sum()),
        proposals=proposals,
    )


async def estimate_survival_async(  # noqa: PLR0913
    cfg: LatticeConfig,
    n_samples: int,
    t_grid: npt.ArrayLike,
    t_max: float,
    seed: int,
    *,
    concurrency: int | None = None,
    block_size: int = BLOCK_SIZE,
) -> SurvivalCurve:
    """Monte Carlo estimate of the survival function under mu_r.

    Samples are split into fixed blocks with their own Philox streams, so the
    curve is a function of (seed, n_samples, t_grid, block_size) only.
    """
    grid = validate_grid(np.asarray(t_grid, dtype=np.float64), t_max)
    blocks = partition(n_samples, seed, block_size)
    runner = BlockRunner(
        functools.partial(_survival_block, cfg=cfg, grid=grid, t_max=t_max),
        concurrency=concurrency,
    )
    tallies = await runner.run(blocks)

    counts = np.sum([tally.counts for tally in tallies], axis=0)
    censored = sum(tally.censored for tally in tallies)
    grazing = sum(tally.grazing for tally in tallies)
    proposals = sum(tally.proposals for tally in tallies)
    logging.info(
        "Survival estimate: %s samples, acceptance %.6f, censored fraction %.3e",
        n_samples,
        n_samples / proposals,
        censored / n_samples,
    )
    if grazing:
        logging.info("Rejected %s grazing hits", grazing)
    return build_curve(
        counts,
        grid,
        n_samples=n_samples,
        t_max=t_max,
        radius=cfg.radius,
        dimension=cfg.dimension,
        seed=seed,
        censored=censored,
    )


def estimate_survival(  # noqa: PLR0913
    cfg: LatticeConfig,
    n_samples: int,
    t_grid: npt.ArrayLike,
    t_max: float,
    seed: int,
    *,
    concurrency: int | None = None,
    block_size: int = BLOCK_SIZE,
) -> SurvivalCurve:
    return anyio.run(
        functools.partial(
            estimate_survival_async,
            cfg,
            n_samples,
            t_grid,
            t_max,
            seed,
            concurrency=concurrency,
            block_size=block_size,
        )
    )


def confidence_band(
    curve: SurvivalCurve,
    z: float = 1.96,
    method: BandMethod = "normal",
) -> tuple[FloatArray, FloatArray]:
    """Pointwise (lower, upper) confidence limits of the survival estimate."""
    _, p, std_err = curve.arrays()
    if method == "normal":
        return np.clip(p - z * std_err, 0.0, 1.0), np.clip(p + z * std_err, 0.0, 1.0)
    if method == "wilson":
        n = curve.n_samples
        z2 = z * z
        denominator = 1.0 + z2 / n
        center = (p + z2 / (2 * n)) / denominator
        half = z / denominator * np.sqrt(p * (1.0 - p) / n + z2 / (4 * n * n))
        return np.clip(center - half, 0.0, 1.0), np.clip(center + half, 0.0, 1.0)
    msg = f"Unknown confidence band method {method!r}"
    raise ValueError(msg)
