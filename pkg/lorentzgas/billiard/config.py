from __future__ import annotations

import dataclasses
from typing import Annotated

from typing_extensions import Doc

from lorentzgas._util import unit_ball_volume

COUPLING_TOLERANCE = 1e-12


@dataclasses.dataclass(slots=True, kw_only=True, frozen=True)
class LatticeConfig:
    dimension: Annotated[int, Doc("Space dimension D >= 2")]
    radius: Annotated[
        float,
        Doc("Obstacle radius r in lattice units, 0 < r < 1/2"),
    ]
    epsilon: Annotated[
        float,
        Doc("Boltzmann-Grad scale, exactly 1/n for a positive integer n"),
    ] = 1.0
    r_star: Annotated[
        float | None,
        Doc(
            "Scaling constant of r = r_star * epsilon^(1/(D-1)). "
            "None means the coupling is not active."
        ),
    ] = None

    def __post_init__(self) -> None:
        if self.dimension < 2:  # noqa: PLR2004
            msg = f"Dimension must be at least 2, got {self.dimension}"
            raise ValueError(msg)
        if not 0 < self.radius < 0.5:  # noqa: PLR2004
            msg = f"Obstacle radius must lie in (0, 1/2), got {self.radius}"
            raise ValueError(msg)
        if not 0 < self.epsilon <= 1:
            msg = f"Epsilon must lie in (0, 1], got {self.epsilon}"
            raise ValueError(msg)
        n = round(1 / self.epsilon)
        if abs(1 / n - self.epsilon) > 1e-15 * self.epsilon:  # noqa: PLR2004
            msg = f"Epsilon must be 1/n for an integer n, got {self.epsilon}"
            raise ValueError(msg)
        if self.r_star is not None:
            if self.r_star <= 0:
                msg = f"r_star must be positive, got {self.r_star}"
                raise ValueError(msg)
            expected = self.r_star * self.epsilon ** (1 / (self.dimension - 1))
            if abs(self.radius - expected) > COUPLING_TOLERANCE * expected:
                msg = (
                    f"Radius {self.radius} does not match "
                    f"r_star * epsilon^(1/(D-1)) = {expected}"
                )
                raise ValueError(msg)

    @classmethod
    def boltzmann_grad(cls, *, dimension: int, r_star: float, n: int) -> LatticeConfig:
        if n < 1:
            msg = f"n must be a positive integer, got {n}"
            raise ValueError(msg)
        epsilon = 1 / n
        return cls(
            dimension=dimension,
            radius=r_star * epsilon ** (1 / (dimension - 1)),
            epsilon=epsilon,
            r_star=r_star,
        )

    @property
    def n(self) -> int:
        return round(1 / self.epsilon)

    @property
    def coupled(self) -> bool:
        return self.r_star is not None

    @property
    def obstacle_volume(self) -> float:
        return unit_ball_volume(self.dimension) * self.radius**self.dimension

    @property
    def free_volume(self) -> float:
        """|Y_r|, the volume of the unit cell minus one obstacle."""
        return 1.0 - self.obstacle_volume

    @property
    def cross_section(self) -> float:
        return unit_ball_volume(self.dimension - 1) * self.radius ** (self.dimension - 1)

    @property
    def mean_free_path(self) -> float:
        """Santalo's mean free path between collisions, |Y_r| / (omega_{D-1} r^{D-1})."""
        return self.free_volume / self.cross_section

    @property
    def bgw_threshold(self) -> float:
        return 1.0 / self.radius ** (self.dimension - 1)
