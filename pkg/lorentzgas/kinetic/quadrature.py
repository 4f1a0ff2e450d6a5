from __future__ import annotations

import dataclasses

import numpy as np

from lorentzgas._types import FloatArray, IntArray
from lorentzgas.errors import UnsupportedDimensionError

WEIGHT_TOLERANCE = 1e-14
NODE_TOLERANCE = 1e-12


@dataclasses.dataclass(slots=True, kw_only=True, frozen=True, eq=False)
class VelocityQuadrature:
    """Discrete rotation-invariant probability measure on the unit sphere."""

    nodes: FloatArray
    weights: FloatArray

    def __post_init__(self) -> None:
        if self.nodes.ndim != 2 or self.weights.shape != (self.nodes.shape[0],):  # noqa: PLR2004
            msg = "Nodes must be an (N, D) array with one weight per node"
            raise ValueError(msg)
        if np.any(self.weights <= 0) or abs(self.weights.sum() - 1.0) > WEIGHT_TOLERANCE:
            msg = "Quadrature weights must be positive and sum to 1"
            raise ValueError(msg)
        if np.any(np.abs(np.linalg.norm(self.nodes, axis=1) - 1.0) > NODE_TOLERANCE):
            msg = "Quadrature nodes must be unit vectors"
            raise ValueError(msg)

    @property
    def size(self) -> int:
        return int(self.nodes.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.nodes.shape[1])

    def integrate(self, values: FloatArray) -> FloatArray:
        """Quadrature over the last axis of ``values``."""
        return np.asarray(values) @ self.weights

    def antipodes(self) -> IntArray:
        """Index of -v for every node v."""
        distance = np.linalg.norm(self.nodes[:, None, :] + self.nodes[None, :, :], axis=-1)
        index = np.argmin(distance, axis=1)
        if np.any(distance[np.arange(self.size), index] > NODE_TOLERANCE):
            msg = "Node set is not closed under negation"
            raise ValueError(msg)
        return index


def _circle(count: int) -> VelocityQuadrature:
    angles = 2.0 * np.pi * np.arange(count) / count
    return VelocityQuadrature(
        nodes=np.column_stack((np.cos(angles), np.sin(angles))),
        weights=np.full(count, 1.0 / count),
    )


def _sphere(n_polar: int, n_azimuth: int) -> VelocityQuadrature:
    cosines, polar_weights = np.polynomial.legendre.leggauss(n_polar)
    azimuth = 2.0 * np.pi * np.arange(n_azimuth) / n_azimuth
    mu, phi = np.meshgrid(cosines, azimuth, indexing="ij")
    sine = np.sqrt(1.0 - mu**2)
    nodes = np.stack((sine * np.cos(phi), sine * np.sin(phi), mu), axis=-1).reshape(-1, 3)
    weights = np.repeat(polar_weights / 2.0, n_azimuth) / n_azimuth
    return VelocityQuadrature(nodes=nodes, weights=weights / weights.sum())


def velocity_nodes(
    dimension: int,
    n_nodes: int,
    n_azimuth: int | None = None,
) -> VelocityQuadrature:
    """Velocity quadrature closed under v -> -v.

    D = 2 uses ``n_nodes`` equally spaced angles. D = 3 uses a Gauss-Legendre
    rule with ``n_nodes`` points in cos(theta) times ``n_azimuth`` (default
    2 * n_nodes) equally spaced azimuths.
    """
    if n_nodes < 2 or n_nodes % 2:  # noqa: PLR2004
        msg = f"Node count must be even and at least 2, got {n_nodes}"
        raise ValueError(msg)
    if dimension == 2:  # noqa: PLR2004
        return _circle(n_nodes)
    if dimension == 3:  # noqa: PLR2004
        azimuths = n_azimuth or 2 * n_nodes
        if azimuths < 2 or azimuths % 2:  # noqa: PLR2004
            msg = f"Azimuth count must be even and at least 2, got {azimuths}"
            raise ValueError(msg)
        return _sphere(n_nodes, azimuths)
    msg = f"Velocity quadrature is available for D = 2 and D = 3, got D = {dimension}"
    raise UnsupportedDimensionError(msg)

