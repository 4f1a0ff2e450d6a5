import dataclasses
from typing import ClassVar

import numpy as np

from lorentzgas._types import FloatArray
from lorentzgas.billiard.abc import BoundaryLaw, BoundaryLawKind


def reflect(xi: FloatArray, n: FloatArray) -> FloatArray:
    """Mirror image of xi across the hyperplane orthogonal to n."""
    xi = np.asarray(xi, dtype=np.float64)
    n = np.asarray(n, dtype=np.float64)
    return xi - 2.0 * np.sum(xi * n, axis=-1, keepdims=True) * n


@dataclasses.dataclass(slots=True, frozen=True)
class Specular(BoundaryLaw):
    kind: ClassVar[BoundaryLawKind] = "specular"

    def scatter(
        self,
        velocity_in: FloatArray,
        normal: FloatArray,
        rng: np.random.Generator | None,  # noqa: ARG002
    ) -> FloatArray:
        return reflect(velocity_in, normal)


@dataclasses.dataclass(slots=True, frozen=True)
class Diffuse(BoundaryLaw):
    kind: ClassVar[BoundaryLawKind] = "diffuse"
    cosine_weighted: bool = False

    def scatter(
        self,
        velocity_in: FloatArray,
        normal: FloatArray,
        rng: np.random.Generator | None,
    ) -> FloatArray:
        if rng is None:
            msg = "Diffuse reflection needs a random stream"
            raise ValueError(msg)
        normal = np.atleast_2d(normal)
        gaussian = rng.standard_normal(normal.shape)
        if not self.cosine_weighted:
            direction = gaussian / np.linalg.norm(gaussian, axis=-1, keepdims=True)
            flip = np.sum(direction * normal, axis=-1) < 0
            direction[flip] = reflect(direction[flip], normal[flip])
            return direction.reshape(np.shape(velocity_in))

        # Lambert law: uniform point in the tangent unit ball lifted onto the half-sphere
        tangent = gaussian - np.sum(gaussian * normal, axis=-1, keepdims=True) * normal
        tangent /= np.linalg.norm(tangent, axis=-1, keepdims=True)
        dimension = normal.shape[-1]
        radius = rng.random(normal.shape[0]) ** (1.0 / (dimension - 1))
        direction = radius[:, None] * tangent + np.sqrt(1.0 - radius**2)[:, None] * normal
        direction /= np.linalg.norm(direction, axis=-1, keepdims=True)
        return direction.reshape(np.shape(velocity_in))


@dataclasses.dataclass(slots=True, frozen=True)
class Absorbing(BoundaryLaw):
    kind: ClassVar[BoundaryLawKind] = "absorbing"

    def scatter(
        self,
        velocity_in: FloatArray,  # noqa: ARG002
        normal: FloatArray,  # noqa: ARG002
        rng: np.random.Generator | None,  # noqa: ARG002
    ) -> FloatArray:
        msg = "Absorbing obstacles end the trajectory, use absorbing_transport"
        raise ValueError(msg)


SPECULAR = Specular()
DIFFUSE = Diffuse()
ABSORBING = Absorbing()
