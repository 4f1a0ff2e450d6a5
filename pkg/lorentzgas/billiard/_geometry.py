from __future__ import annotations

import dataclasses
import itertools
import logging
import math
from typing import TYPE_CHECKING

import numpy as np

from lorentzgas._util import as_vectors, lattice_shift
from lorentzgas.billiard._laws import reflect
from lorentzgas.billiard.phase import (
    CollisionEvent,
    ExitTimeResult,
    validate_phase,
)

if TYPE_CHECKING:
    import numpy.typing as npt

    from lorentzgas._types import BoolArray, FloatArray, IntArray
    from lorentzgas.billiard.config import LatticeConfig

GRAZING_TOLERANCE = 1e-9
RESTART_TOLERANCE = 1e-12


@dataclasses.dataclass(slots=True, kw_only=True, frozen=True)
class HitBatch:
    tau: FloatArray
    censored: BoolArray
    centers: IntArray
    grazing: IntArray


def _horizons(values: npt.ArrayLike, count: int, name: str) -> FloatArray:
    array = np.broadcast_to(np.asarray(values, dtype=np.float64), (count,))
    if not np.all(np.isfinite(array)) or np.any(array < 0):
        msg = f"{name} must be finite and nonnegative"
        raise ValueError(msg)
    return array


def first_hit_batch(  # noqa: PLR0913
    positions: npt.ArrayLike,
    velocities: npt.ArrayLike,
    radius: float,
    t_max: npt.ArrayLike,
    *,
    t_min: npt.ArrayLike = RESTART_TOLERANCE,
    grazing_tolerance: float = GRAZING_TOLERANCE,
) -> HitBatch:
    """First obstacle hit for every ray of a batch.

    Each ray walks the lattice cells centred on Z^D, one face crossing per step.
    A hit point lies within r < 1/2 of its obstacle centre, hence inside that
    centre's cell, so testing the single obstacle of each visited cell in crossing
    order finds the first hit. Inputs are not validated, callers do that.
    Obstacle centres are reported in the frame of the input positions.
    """
    x = as_vectors(positions)
    count, dimension = x.shape
    v = as_vectors(velocities, dimension)
    horizon = _horizons(t_max, count, "t_max")
    lower = _horizons(t_min, count, "t_min")

    shift = lattice_shift(x)
    x = x - shift
    step = np.sign(v).astype(np.int64)
    speed = np.abs(v)
    moving = speed > 0
    safe_speed = np.where(moving, speed, 1.0)
    crossing = np.where(moving, 1.0 / safe_speed, np.inf)
    t_face = np.where(moving, np.where(v > 0, 0.5 - x, 0.5 + x) / safe_speed, np.inf)

    radius_sq = radius * radius
    cell = np.zeros((count, dimension), dtype=np.int64)
    tau = np.full(count, np.inf)
    centers = np.zeros((count, dimension), dtype=np.int64)
    grazing = np.zeros(count, dtype=np.int64)

    active = np.arange(count)
    while active.size:
        va = v[active]
        ca = cell[active]
        w = x[active] - ca
        half_b = np.einsum("ij,ij->i", w, va)
        c = np.einsum("ij,ij->i", w, w) - radius_sq
        disc = half_b * half_b - np.einsum("ij,ij->i", va, va) * c
        approaching = (half_b < 0) & (disc > 0)
        # stable root: q = -(b/2) + sqrt(disc) > 0, entry time c / q
        q = np.where(approaching, -half_b + np.sqrt(np.where(approaching, disc, 0.0)), 1.0)
        t_enter = np.where(approaching, c / q, np.inf)
        hit = approaching & (t_enter > lower[active]) & (t_enter <= horizon[active])

        if hit.any():
            offset = w[hit] + t_enter[hit, None] * va[hit]
            cosine = np.abs(np.einsum("ij,ij->i", offset, va[hit])) / radius
            grazed = np.zeros_like(hit)
            grazed[hit] = cosine < grazing_tolerance
            grazing[active[grazed]] += 1
            hit &= ~grazed
            tau[active[hit]] = t_enter[hit]
            centers[active[hit]] = ca[hit]

        remaining = active[~hit]
        faces = t_face[remaining]
        axis = np.argmin(faces, axis=1)
        t_next = faces[np.arange(remaining.size), axis]
        inside = t_next <= horizon[remaining]
        remaining = remaining[inside]
        axis = axis[inside]
        cell[remaining, axis] += step[remaining, axis]
        t_face[remaining, axis] += crossing[remaining, axis]
        active = remaining

    censored = ~np.isfinite(tau)
    centers += shift.astype(np.int64)
    centers[censored] = 0
    return HitBatch(tau=tau, censored=censored, centers=centers, grazing=grazing)


def first_hit(
    x: npt.ArrayLike,
    v: npt.ArrayLike,
    cfg: LatticeConfig,
    t_max: float,
) -> ExitTimeResult:
    position = np.asarray(x, dtype=np.float64)
    velocity = np.asarray(v, dtype=np.float64)
    if position.shape != (cfg.dimension,) or velocity.shape != (cfg.dimension,):
        msg = f"Expected vectors of dimension {cfg.dimension}"
        raise ValueError(msg)
    if not (math.isfinite(t_max) and t_max > 0):
        msg = f"t_max must be positive and finite, got {t_max}"
        raise ValueError(msg)
    validate_phase(position, velocity, cfg.radius)

    batch = first_hit_batch(position, velocity, cfg.radius, t_max)
    grazing = int(batch.grazing[0])
    if grazing:
        logging.debug("Rejected %s grazing hits along the ray", grazing)
    if batch.censored[0]:
        return ExitTimeResult(tau=math.inf, censored=True, grazing_rejections=grazing)

    tau = float(batch.tau[0])
    center = batch.centers[0]
    hit_point = position + tau * velocity
    normal = (hit_point - center) / cfg.radius
    normal /= np.linalg.norm(normal)
    event = CollisionEvent(
        time=tau,
        hit_point=hit_point,
        obstacle_center=center,
        inward_normal=normal,
        velocity_in=velocity,
        velocity_out=reflect(velocity, normal),
    )
    return ExitTimeResult(
        tau=tau,
        censored=False,
        event=event,
        grazing_rejections=grazing,
    )


def brute_force_first_hit(  # noqa: PLR0913
    x: npt.ArrayLike,
    v: npt.ArrayLike,
    radius: float,
    t_max: float,
    *,
    t_min: float = RESTART_TOLERANCE,
    grazing_tolerance: float = GRAZING_TOLERANCE,
) -> float:
    """Exit time by testing every lattice point of the segment's bounding box.

    Slow; kept as the reference the cell walk is checked against.
    Returns inf when no obstacle is hit in (t_min, t_max].
    """
    position = np.asarray(x, dtype=np.float64)
    velocity = np.asarray(v, dtype=np.float64)
    end = position + t_max * velocity
    low = np.floor(np.minimum(position, end) - radius).astype(np.int64)
    high = np.ceil(np.maximum(position, end) + radius).astype(np.int64)
    lattice = np.array(
        list(itertools.product(*(range(lo, hi + 1) for lo, hi in zip(low, high, strict=True)))),
        dtype=np.float64,
    )

    w = position - lattice
    a = velocity @ velocity
    b = 2.0 * (w @ velocity)
    c = np.einsum("ij,ij->i", w, w) - radius * radius
    disc = b * b - 4.0 * a * c
    valid = disc > 0
    roots = np.full(lattice.shape[0], np.inf)
    roots[valid] = (-b[valid] - np.sqrt(disc[valid])) / (2.0 * a)
    valid &= (roots > t_min) & (roots <= t_max)
    if valid.any():
        offset = w[valid] + roots[valid, None] * velocity
        cosine = np.abs(offset @ velocity) / radius
        keep = np.flatnonzero(valid)[cosine >= grazing_tolerance]
        valid[:] = False
        valid[keep] = True
    if not valid.any():
        return math.inf
    return float(np.min(roots[valid]))
