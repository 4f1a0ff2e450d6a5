from __future__ import annotations

import dataclasses
import logging
import math
from collections.abc import Callable
from typing import TYPE_CHECKING

import numpy as np

from lorentzgas._util import as_vectors, lattice_shift, reduce_to_cell
from lorentzgas.billiard._geometry import RESTART_TOLERANCE, first_hit, first_hit_batch
from lorentzgas.billiard._laws import SPECULAR
from lorentzgas.billiard.phase import CollisionEvent, PhasePoint, validate_phase
from lorentzgas.errors import EventBudgetExceededError

if TYPE_CHECKING:
    import numpy.typing as npt

    from lorentzgas._types import FloatArray, IntArray
    from lorentzgas.billiard.abc import BoundaryLaw
    from lorentzgas.billiard.config import LatticeConfig

DEFAULT_MAX_EVENTS = 100_000


@dataclasses.dataclass(slots=True, kw_only=True, frozen=True)
class EventRecords:
    """Collisions of one integration sweep, in the unfolded frame of the start."""

    rays: IntArray
    times: FloatArray
    hit_points: FloatArray
    centers: IntArray
    normals: FloatArray
    velocity_in: FloatArray
    velocity_out: FloatArray


EventSink = Callable[[EventRecords], None]


@dataclasses.dataclass(slots=True, kw_only=True, frozen=True)
class FlowBatch:
    positions: FloatArray
    velocities: FloatArray
    offsets: IntArray
    event_counts: IntArray
    min_cosine: FloatArray
    grazing: IntArray

    def unfolded(self) -> FloatArray:
        """Final positions in the frame of the initial positions."""
        return self.offsets + self.positions


def evolve_batch(  # noqa: PLR0913
    positions: npt.ArrayLike,
    velocities: npt.ArrayLike,
    t: npt.ArrayLike,
    radius: float,
    *,
    law: BoundaryLaw = SPECULAR,
    rng: np.random.Generator | None = None,
    max_events: int = DEFAULT_MAX_EVENTS,
    on_events: EventSink | None = None,
) -> FlowBatch:
    """Event-driven billiard flow of many independent particles on the unscaled table."""
    if law.kind == "absorbing":
        msg = "Absorbing obstacles are handled by absorbing_transport"
        raise ValueError(msg)
    x = as_vectors(positions).copy()
    count, dimension = x.shape
    v = as_vectors(velocities, dimension).copy()
    horizon = np.broadcast_to(np.asarray(t, dtype=np.float64), (count,))
    if not np.all(np.isfinite(horizon)) or np.any(horizon < 0):
        msg = "Evolution times must be finite and nonnegative"
        raise ValueError(msg)

    shift = lattice_shift(x)
    x -= shift
    offsets = shift.astype(np.int64)
    elapsed = np.zeros(count)
    event_counts = np.zeros(count, dtype=np.int64)
    min_cosine = np.full(count, np.inf)
    grazing = np.zeros(count, dtype=np.int64)

    active = np.arange(count)
    while active.size:
        remaining = horizon[active] - elapsed[active]
        hits = first_hit_batch(
            x[active],
            v[active],
            radius,
            np.maximum(remaining, 0.0),
            t_min=RESTART_TOLERANCE * (1.0 + elapsed[active]),
        )
        grazing[active] += hits.grazing

        free = active[hits.censored]
        x[free] += np.maximum(remaining[hits.censored], 0.0)[:, None] * v[free]

        rays = active[~hits.censored]
        if rays.size == 0:
            break
        if np.any(event_counts[rays] >= max_events):
            msg = (
                f"{int(np.sum(event_counts[rays] >= max_events))} trajectories "
                f"exceeded the budget of {max_events} collisions"
            )
            raise EventBudgetExceededError(msg)

        tau = hits.tau[~hits.censored]
        centers = hits.centers[~hits.censored]
        hit_points = x[rays] + tau[:, None] * v[rays]
        normals = (hit_points - centers) / radius
        normals /= np.linalg.norm(normals, axis=1, keepdims=True)
        velocity_in = v[rays]
        velocity_out = law.scatter(velocity_in, normals, rng)

        elapsed[rays] += tau
        event_counts[rays] += 1
        min_cosine[rays] = np.minimum(
            min_cosine[rays],
            np.abs(np.einsum("ij,ij->i", velocity_in, normals)),
        )
        if on_events is not None:
            on_events(
                EventRecords(
                    rays=rays,
                    times=elapsed[rays].copy(),
                    hit_points=offsets[rays] + hit_points,
                    centers=offsets[rays] + centers,
                    normals=normals,
                    velocity_in=velocity_in,
                    velocity_out=velocity_out,
                )
            )

        cell = lattice_shift(hit_points)
        x[rays] = hit_points - cell
        offsets[rays] += cell.astype(np.int64)
        v[rays] = velocity_out
        active = rays

    cell = lattice_shift(x)
    x -= cell
    offsets += cell.astype(np.int64)
    if grazing.any():
        logging.debug("Rejected %s grazing hits", int(grazing.sum()))
    return FlowBatch(
        positions=x,
        velocities=v,
        offsets=offsets,
        event_counts=event_counts,
        min_cosine=min_cosine,
        grazing=grazing,
    )


def _collect_events(records: list[CollisionEvent], *, scale: float = 1.0) -> EventSink:
    def sink(batch: EventRecords) -> None:
        for i in range(batch.rays.size):
            records.append(
                CollisionEvent(
                    time=scale * float(batch.times[i]),
                    hit_point=scale * batch.hit_points[i],
                    obstacle_center=batch.centers[i],
                    inward_normal=batch.normals[i],
                    velocity_in=batch.velocity_in[i],
                    velocity_out=batch.velocity_out[i],
                )
            )

    return sink


def evolve_billiard(  # noqa: PLR0913
    p: PhasePoint,
    t: float,
    cfg: LatticeConfig,
    law: BoundaryLaw = SPECULAR,
    rng: np.random.Generator | None = None,
    max_events: int = DEFAULT_MAX_EVENTS,
) -> tuple[PhasePoint, list[CollisionEvent]]:
    """Billiard flow S_t on the unscaled table.

    Returns the final state reduced to the fundamental cell and the ordered
    collisions, whose points and centres are given in the frame of ``p``.
    """
    validate_phase(p.position, p.velocity, cfg.radius)
    events: list[CollisionEvent] = []
    flow = evolve_batch(
        p.position,
        p.velocity,
        t,
        cfg.radius,
        law=law,
        rng=rng,
        max_events=max_events,
        on_events=_collect_events(events),
    )
    return PhasePoint(position=flow.positions[0], velocity=flow.velocities[0]), events


def evolve_scaled(  # noqa: PLR0913
    p: PhasePoint,
    t: float,
    cfg: LatticeConfig,
    law: BoundaryLaw = SPECULAR,
    rng: np.random.Generator | None = None,
    max_events: int = DEFAULT_MAX_EVENTS,
    *,
    backward: bool = False,
) -> tuple[PhasePoint, list[CollisionEvent]]:
    """Billiard flow on the scaled torus, X_eps(t; x, v) = eps * X(t / eps; x / eps, v).

    ``p.position`` is a point of the unit torus. With ``backward`` the state
    S_{-t}(x, v) is returned, computed as the forward flow of (x, -v) followed by a
    velocity flip. Event times and hit points are scaled; ``obstacle_center`` is the
    lattice index k of the obstacle centred at eps * k.
    """
    eps = cfg.epsilon
    velocity = -p.velocity if backward else p.velocity
    start = np.asarray(p.position, dtype=np.float64) / eps
    validate_phase(start, velocity, cfg.radius)
    events: list[CollisionEvent] = []
    flow = evolve_batch(
        start,
        velocity,
        t / eps,
        cfg.radius,
        law=law,
        rng=rng,
        max_events=max_events,
        on_events=_collect_events(events, scale=eps),
    )
    position = reduce_to_cell(eps * flow.unfolded()[0])
    final_velocity = -flow.velocities[0] if backward else flow.velocities[0]
    return PhasePoint(position=position, velocity=final_velocity), events


def absorbing_transport(
    p: PhasePoint,
    t: float,
    cfg: LatticeConfig,
) -> tuple[bool, PhasePoint]:
    """Free transport with absorption: survived iff no obstacle is met in (0, t]."""
    if t < 0:
        msg = f"Transport time must be nonnegative, got {t}"
        raise ValueError(msg)
    transported = PhasePoint(
        position=reduce_to_cell(p.position + t * p.velocity),
        velocity=p.velocity,
    )
    if t == 0:
        validate_phase(p.position, p.velocity, cfg.radius)
        return True, transported
    return first_hit(p.position, p.velocity, cfg, t).censored, transported


def _require_coupling(cfg: LatticeConfig) -> None:
    if not cfg.coupled:
        msg = "The survival indicator needs a Boltzmann-Grad coupled LatticeConfig"
        raise ValueError(msg)


def survival_indicator_batch(
    t: float,
    positions: npt.ArrayLike,
    velocities: npt.ArrayLike,
    cfg: LatticeConfig,
) -> IntArray:
    """Phi_eps(t, x, v) = 1{eps * tau_r(x / eps, -v) > t} for scaled points x."""
    _require_coupling(cfg)
    start = as_vectors(positions, cfg.dimension) / cfg.epsilon
    direction = -as_vectors(velocities, cfg.dimension)
    validate_phase(start, direction, cfg.radius)
    if t < 0 or not math.isfinite(t):
        msg = f"Time must be finite and nonnegative, got {t}"
        raise ValueError(msg)
    if t == 0:
        return np.ones(start.shape[0], dtype=np.int64)
    hits = first_hit_batch(start, direction, cfg.radius, t / cfg.epsilon)
    return hits.censored.astype(np.int64)


def survival_indicator(
    t: float,
    x: npt.ArrayLike,
    v: npt.ArrayLike,
    cfg: LatticeConfig,
) -> int:
    return int(survival_indicator_batch(t, x, v, cfg)[0])
