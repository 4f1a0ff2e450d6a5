from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING

import numpy as np

from lorentzgas.billiard import PhasePoint

if TYPE_CHECKING:
    from lorentzgas._types import FloatArray
    from lorentzgas.billiard import LatticeConfig


def uniform_sphere(rng: np.random.Generator, count: int, dimension: int) -> FloatArray:
    """Uniform directions on S^{D-1} by normalizing Gaussian vectors."""
    gaussian = rng.standard_normal((count, dimension))
    return gaussian / np.linalg.norm(gaussian, axis=1, keepdims=True)


def sample_mu_r_batch(
    rng: np.random.Generator,
    cfg: LatticeConfig,
    count: int,
) -> tuple[FloatArray, FloatArray, int]:
    """Draws from mu_r: positions uniform on the cell minus the central ball.

    Returns positions, velocities and the number of position proposals used.
    """
    dimension = cfg.dimension
    acceptance = cfg.free_volume
    accepted: list[FloatArray] = []
    n_accepted = 0
    proposals = 0
    while n_accepted < count:
        size = math.ceil((count - n_accepted) / acceptance * 1.05) + 16
        candidates = rng.random((size, dimension)) - 0.5
        proposals += size
        keep = candidates[np.linalg.norm(candidates, axis=1) >= cfg.radius]
        accepted.append(keep)
        n_accepted += keep.shape[0]
    positions = np.concatenate(accepted)[:count]
    velocities = uniform_sphere(rng, count, dimension)
    logging.debug("mu_r sampler: %s proposals for %s points", proposals, count)
    return positions, velocities, proposals


def sample_mu_r(rng: np.random.Generator, cfg: LatticeConfig) -> PhasePoint:
    positions, velocities, _ = sample_mu_r_batch(rng, cfg, 1)
    return PhasePoint(position=positions[0], velocity=velocities[0])


def acceptance_rate(rng: np.random.Generator, cfg: LatticeConfig, n_draws: int) -> float:
    """Fraction of uniform cell points outside the obstacle."""
    candidates = rng.random((n_draws, cfg.dimension)) - 0.5
    return float(np.mean(np.linalg.norm(candidates, axis=1) >= cfg.radius))
