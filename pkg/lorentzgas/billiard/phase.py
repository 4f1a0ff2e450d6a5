from __future__ import annotations

import dataclasses
import math
from typing import TYPE_CHECKING

import numpy as np

from lorentzgas._util import reduce_to_cell
from lorentzgas.errors import InvalidPhasePointError

if TYPE_CHECKING:
    import numpy.typing as npt

    from lorentzgas._types import FloatArray

SPEED_TOLERANCE = 1e-9
INSIDE_TOLERANCE = 1e-9


def validate_phase(position: FloatArray, velocity: FloatArray, radius: float) -> None:
    """Rejects non-unit velocities and points strictly inside an obstacle.

    Works on single vectors and on (n, D) batches.
    """
    speed = np.linalg.norm(velocity, axis=-1)
    if np.any(np.abs(speed - 1.0) > SPEED_TOLERANCE):
        msg = f"Velocity must be a unit vector, got norm {np.max(np.abs(speed - 1.0)) + 1.0}"
        raise InvalidPhasePointError(msg)
    distance = np.linalg.norm(reduce_to_cell(position), axis=-1)
    if np.any(distance < radius - INSIDE_TOLERANCE):
        msg = f"Position lies inside an obstacle (distance {np.min(distance)} < r = {radius})"
        raise InvalidPhasePointError(msg)


@dataclasses.dataclass(slots=True, kw_only=True, frozen=True, eq=False)
class PhasePoint:
    position: FloatArray
    velocity: FloatArray

    def __post_init__(self) -> None:
        object.__setattr__(self, "position", np.asarray(self.position, dtype=np.float64))
        object.__setattr__(self, "velocity", np.asarray(self.velocity, dtype=np.float64))
        if self.position.shape != self.velocity.shape or self.position.ndim != 1:
            msg = "Position and velocity must be vectors of the same dimension"
            raise ValueError(msg)

    @classmethod
    def create(cls, position: npt.ArrayLike, velocity: npt.ArrayLike) -> PhasePoint:
        return cls(
            position=np.asarray(position, dtype=np.float64),
            velocity=np.asarray(velocity, dtype=np.float64),
        )

    @property
    def dimension(self) -> int:
        return int(self.position.shape[0])

    def reversed(self) -> PhasePoint:
        return PhasePoint(position=self.position.copy(), velocity=-self.velocity)

    def reduced(self) -> PhasePoint:
        return PhasePoint(position=reduce_to_cell(self.position), velocity=self.velocity)


@dataclasses.dataclass(slots=True, kw_only=True, frozen=True, eq=False)
class CollisionEvent:
    time: float
    hit_point: FloatArray
    obstacle_center: npt.NDArray[np.int64]
    inward_normal: FloatArray
    velocity_in: FloatArray
    velocity_out: FloatArray

    @property
    def cosine(self) -> float:
        """|v_in . n|, zero for a grazing hit."""
        return abs(float(self.velocity_in @ self.inward_normal))


@dataclasses.dataclass(slots=True, kw_only=True, frozen=True)
class ExitTimeResult:
    tau: float
    censored: bool
    event: CollisionEvent | None = None
    grazing_rejections: int = 0

    def __post_init__(self) -> None:
        if self.censored and self.event is not None:
            msg = "A censored exit time carries no collision event"
            raise ValueError(msg)
        if not self.censored and not math.isfinite(self.tau):
            msg = "An uncensored exit time must be finite"
            raise ValueError(msg)
