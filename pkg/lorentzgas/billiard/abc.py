from typing import ClassVar, Literal, Protocol

import numpy as np

from lorentzgas._types import FloatArray

BoundaryLawKind = Literal["specular", "absorbing", "diffuse"]


class BoundaryLaw(Protocol):
    kind: ClassVar[BoundaryLawKind]

    def scatter(
        self,
        velocity_in: FloatArray,
        normal: FloatArray,
        rng: np.random.Generator | None,
    ) -> FloatArray:
        """Outgoing velocities for (n, D) incoming velocities and inward normals."""
        ...
