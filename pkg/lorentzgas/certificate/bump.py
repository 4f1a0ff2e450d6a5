from __future__ import annotations

import dataclasses
import math
from typing import TYPE_CHECKING

import numpy as np

from lorentzgas._util import reduce_to_cell
from lorentzgas.errors import InvalidProfileError
from lorentzgas.kinetic import KineticField

if TYPE_CHECKING:
    from lorentzgas._types import FloatArray
    from lorentzgas.certificate.abc import BumpProfile
    from lorentzgas.kinetic import VelocityQuadrature

SUPPORT = 0.25
QUADRATURE_POINTS = 64
CHECK_GRID = 64


def cosine_squared(z: FloatArray) -> FloatArray:
    """prod_i cos^2(2 pi z_i) on [-1/4, 1/4]^D, zero outside."""
    z = np.atleast_2d(z)
    inside = np.all(np.abs(z) <= SUPPORT, axis=-1)
    return np.where(inside, np.prod(np.cos(2.0 * np.pi * z) ** 2, axis=-1), 0.0)


def _profile_norms(profile: BumpProfile, dimension: int, points: int) -> tuple[float, float]:
    """Gauss-Legendre norms of b over [-1/4, 1/4]^D."""
    nodes, weights = np.polynomial.legendre.leggauss(points)
    nodes = SUPPORT * nodes
    weights = SUPPORT * weights
    mesh = np.stack(np.meshgrid(*([nodes] * dimension), indexing="ij"), axis=-1)
    product = np.ones((points,) * dimension)
    for axis in range(dimension):
        shape = [1] * dimension
        shape[axis] = points
        product = product * weights.reshape(shape)
    values = np.asarray(profile(mesh.reshape(-1, dimension))).reshape(product.shape)
    return float(np.sum(product * values)), math.sqrt(float(np.sum(product * values**2)))


def _check_profile(profile: BumpProfile, dimension: int) -> None:
    axis = (np.arange(CHECK_GRID) + 0.5) / CHECK_GRID - 0.5
    mesh = np.stack(np.meshgrid(*([axis] * dimension), indexing="ij"), axis=-1)
    points = mesh.reshape(-1, dimension)
    values = np.asarray(profile(points))
    if np.any(values < 0) or np.any(values > 1):
        msg = "Bump profile must take values in [0, 1]"
        raise InvalidProfileError(msg)
    outside = np.any(np.abs(points) > SUPPORT, axis=1)
    if np.any(values[outside] != 0):
        msg = "Bump profile must vanish outside [-1/4, 1/4]^D"
        raise InvalidProfileError(msg)


@dataclasses.dataclass(slots=True, kw_only=True, frozen=True)
class BumpInitialData:
    """rho(x) = b(m x) on the fundamental cell, extended Z^D-periodically."""

    m: int
    dimension: int
    profile: BumpProfile
    profile_l1: float
    profile_l2: float

    @property
    def l1_norm(self) -> float:
        return self.m ** (-self.dimension) * self.profile_l1

    @property
    def l2_norm(self) -> float:
        return self.m ** (-self.dimension / 2) * self.profile_l2

    @property
    def norm_ratio(self) -> float:
        return self.l1_norm / self.l2_norm

    def __call__(self, x: FloatArray) -> FloatArray:
        return np.asarray(self.profile(self.m * reduce_to_cell(np.atleast_2d(x))))

    def to_field(
        self,
        cutoff: int,
        quadrature: VelocityQuadrature,
        grid_size: int | None = None,
    ) -> KineticField:
        """Projection of rho(x), constant in v, onto the modes |xi_i| <= cutoff."""
        if grid_size is None:
            # multiples of 4m put grid points on the support edges
            step = 4 * self.m
            grid_size = step * math.ceil((4 * cutoff + 4) / step)
        return KineticField.from_function(
            lambda x, v: np.repeat(self(x)[:, None], v.shape[0], axis=1),
            cutoff,
            quadrature,
            grid_size,
        )


@dataclasses.dataclass(slots=True, frozen=True)
class UniformDensity:
    """rho = 1, with both norms equal to 1."""

    l1_norm: float = 1.0
    l2_norm: float = 1.0

    def __call__(self, x: FloatArray) -> FloatArray:
        return np.ones(np.atleast_2d(x).shape[0])


def make_bump_rho(
    m: int,
    profile: BumpProfile | None = None,
    dimension: int = 2,
    *,
    quadrature_points: int = QUADRATURE_POINTS,
) -> BumpInitialData:
    """Bump data at oscillation scale m.

    The default cos^2 profile has closed-form norms (1/4)^D and (3/16)^(D/2);
    custom profiles are checked on a sample grid and integrated by Gauss-Legendre.
    """
    if m < 1:
        msg = f"m must be a positive integer, got {m}"
        raise ValueError(msg)
    if dimension < 1:
        msg = f"Dimension must be positive, got {dimension}"
        raise ValueError(msg)
    if profile is None:
        return BumpInitialData(
            m=m,
            dimension=dimension,
            profile=cosine_squared,
            profile_l1=0.25**dimension,
            profile_l2=(3.0 / 16.0) ** (dimension / 2),
        )
    _check_profile(profile, dimension)
    l1, l2 = _profile_norms(profile, dimension, quadrature_points)
    if l2 == 0:
        msg = "Bump profile vanishes identically"
        raise InvalidProfileError(msg)
    return BumpInitialData(m=m, dimension=dimension, profile=profile, profile_l1=l1, profile_l2=l2)


def quadrature_norms(data: BumpInitialData, points: int = QUADRATURE_POINTS) -> tuple[float, float]:
    """Norms of rho recomputed from its profile by quadrature."""
    l1, l2 = _profile_norms(data.profile, data.dimension, points)
    return data.m ** (-data.dimension) * l1, data.m ** (-data.dimension / 2) * l2
