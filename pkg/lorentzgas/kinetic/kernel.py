from __future__ import annotations

import dataclasses
import logging
from collections.abc import Callable
from typing import Literal

import numpy as np
import numpy.typing as npt

from lorentzgas._types import FloatArray
from lorentzgas.errors import KernelValidationError
from lorentzgas.kinetic.quadrature import VelocityQuadrature

KernelKind = Literal["uniform", "custom"]

NORMALIZED_TOLERANCE = 1e-14
ACCEPT_TOLERANCE = 1e-8


@dataclasses.dataclass(slots=True, kw_only=True, frozen=True, eq=False)
class CollisionKernelSpec:
    """Scattering kernel k(v, w) on the velocity nodes with collision frequency sigma."""

    sigma: float
    k_matrix: FloatArray
    quadrature: VelocityQuadrature
    kind: KernelKind = "uniform"

    def __post_init__(self) -> None:
        if self.sigma < 0:
            msg = f"Collision frequency must be nonnegative, got {self.sigma}"
            raise KernelValidationError(msg)
        size = self.quadrature.size
        if self.k_matrix.shape != (size, size):
            msg = f"Kernel table must be {size}x{size}, got {self.k_matrix.shape}"
            raise KernelValidationError(msg)
        if not np.array_equal(self.k_matrix, self.k_matrix.T):
            msg = "Kernel table must be symmetric"
            raise KernelValidationError(msg)
        if np.any(self.k_matrix <= 0):
            msg = "Kernel table must be positive"
            raise KernelValidationError(msg)
        if self.normalization_residual > ACCEPT_TOLERANCE:
            msg = f"Kernel is not normalized, residual {self.normalization_residual:.3e}"
            raise KernelValidationError(msg)

    @property
    def normalization_residual(self) -> float:
        """max_j |sum_i w_i k_ij - 1|."""
        return float(np.max(np.abs(self.quadrature.weights @ self.k_matrix - 1.0)))

    @property
    def weighted(self) -> FloatArray:
        """K_w with (K_w phi)_i = sum_j w_j k_ij phi_j."""
        return self.k_matrix * self.quadrature.weights[None, :]


def _normalize(table: FloatArray, weights: FloatArray) -> FloatArray:
    column_mass = weights @ table
    if np.max(np.abs(column_mass - 1.0)) <= NORMALIZED_TOLERANCE:
        return table
    scale = np.sqrt(column_mass)
    table = table / scale[:, None] / scale[None, :]
    return 0.5 * (table + table.T)


def build_kernel(
    kind: KernelKind,
    sigma: float,
    quadrature: VelocityQuadrature,
    table: npt.ArrayLike | None = None,
) -> CollisionKernelSpec:
    """Uniform kernel k = 1, or a custom table symmetrized and normalized.

    Custom tables get one symmetric rescaling, k_ij / sqrt(s_i s_j) with s_j the
    weighted column mass. That is exact for tables depending on v . w only;
    tables still off by more than 1e-8 afterwards are rejected.
    """
    if sigma <= 0:
        msg = f"Collision frequency must be positive, got {sigma}"
        raise KernelValidationError(msg)
    size = quadrature.size
    if kind == "uniform":
        return CollisionKernelSpec(
            sigma=sigma,
            k_matrix=np.ones((size, size)),
            quadrature=quadrature,
        )
    if kind != "custom":
        msg = f"Unknown kernel kind {kind!r}"
        raise KernelValidationError(msg)
    if table is None:
        msg = "A custom kernel needs a table"
        raise KernelValidationError(msg)

    raw = np.asarray(table, dtype=np.float64)
    if raw.shape != (size, size):
        msg = f"Kernel table must be {size}x{size}, got {raw.shape}"
        raise KernelValidationError(msg)
    if not np.all(np.isfinite(raw)) or np.any(raw <= 0):
        msg = "Kernel table entries must be finite and positive"
        raise KernelValidationError(msg)
    symmetric = 0.5 * (raw + raw.T)
    normalized = _normalize(symmetric, quadrature.weights)
    residual = float(np.max(np.abs(quadrature.weights @ normalized - 1.0)))
    if residual > ACCEPT_TOLERANCE:
        msg = f"Kernel table is not normalized after one symmetric rescaling, residual {residual:.3e}"
        raise KernelValidationError(msg)
    kernel = CollisionKernelSpec(
        sigma=sigma,
        k_matrix=normalized,
        quadrature=quadrature,
        kind="custom",
    )
    logging.info("Kernel normalization residual %.3e", kernel.normalization_residual)
    return kernel


def kernel_from_function(
    func: Callable[[FloatArray], FloatArray],
    quadrature: VelocityQuadrature,
) -> FloatArray:
    """Tabulates a kernel depending on the cosine v . w between nodes."""
    cosines = np.clip(quadrature.nodes @ quadrature.nodes.T, -1.0, 1.0)
    return np.asarray(func(cosines), dtype=np.float64)
