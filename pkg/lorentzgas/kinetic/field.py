from __future__ import annotations

import dataclasses
import itertools
from collections.abc import Callable, Sequence
from typing import TYPE_CHECKING

import numpy as np

from lorentzgas._types import ComplexArray, FloatArray, IntArray
from lorentzgas.errors import AliasingError, ModeCutoffMismatchError

if TYPE_CHECKING:
    from typing_extensions import Self

    from lorentzgas.kinetic.quadrature import VelocityQuadrature

HERMITIAN_TOLERANCE = 1e-12

GridFunction = Callable[[FloatArray, FloatArray], FloatArray]


def _spatial_axes(dimension: int) -> tuple[int, ...]:
    return tuple(range(dimension))


def mode_vectors(cutoff: int, dimension: int) -> IntArray:
    """All frequency vectors with |xi_i| <= cutoff, in storage order."""
    axis = range(-cutoff, cutoff + 1)
    return np.array(list(itertools.product(axis, repeat=dimension)), dtype=np.int64)


@dataclasses.dataclass(slots=True, kw_only=True, frozen=True, eq=False)
class KineticField:
    """Truncated Fourier series in x of a real density f(x, v) on the velocity nodes.

    ``coefficients[xi + M]`` holds the mode xi as a complex vector over the nodes.
    """

    coefficients: ComplexArray
    cutoff: int
    quadrature: VelocityQuadrature

    def __post_init__(self) -> None:
        dimension = self.quadrature.dimension
        width = 2 * self.cutoff + 1
        expected = (width,) * dimension + (self.quadrature.size,)
        if self.coefficients.shape != expected:
            msg = f"Expected coefficients of shape {expected}, got {self.coefficients.shape}"
            raise ModeCutoffMismatchError(msg)
        mirror = np.conj(np.flip(self.coefficients, axis=_spatial_axes(dimension)))
        scale = max(1.0, float(np.max(np.abs(self.coefficients), initial=0.0)))
        if np.max(np.abs(self.coefficients - mirror), initial=0.0) > HERMITIAN_TOLERANCE * scale:
            msg = "Coefficients of a real field must satisfy c(-xi) = conj(c(xi))"
            raise ValueError(msg)

    @property
    def dimension(self) -> int:
        return self.quadrature.dimension

    def mode(self, xi: Sequence[int]) -> ComplexArray:
        if len(xi) != self.dimension or max(abs(k) for k in xi) > self.cutoff:
            msg = f"Mode {tuple(xi)} is outside the cutoff {self.cutoff}"
            raise ModeCutoffMismatchError(msg)
        return self.coefficients[tuple(k + self.cutoff for k in xi)]

    def with_coefficients(self, coefficients: ComplexArray) -> Self:
        return dataclasses.replace(self, coefficients=coefficients)

    @classmethod
    def hermitian(
        cls,
        coefficients: ComplexArray,
        cutoff: int,
        quadrature: VelocityQuadrature,
    ) -> Self:
        """Builds a field from the Hermitian part of arbitrary coefficients."""
        axes = _spatial_axes(quadrature.dimension)
        symmetric = 0.5 * (coefficients + np.conj(np.flip(coefficients, axis=axes)))
        return cls(coefficients=symmetric, cutoff=cutoff, quadrature=quadrature)

    @classmethod
    def constant(cls, value: float, cutoff: int, quadrature: VelocityQuadrature) -> Self:
        shape = (2 * cutoff + 1,) * quadrature.dimension + (quadrature.size,)
        coefficients = np.zeros(shape, dtype=np.complex128)
        coefficients[(cutoff,) * quadrature.dimension] = value
        return cls(coefficients=coefficients, cutoff=cutoff, quadrature=quadrature)

    @classmethod
    def from_grid(
        cls,
        values: FloatArray,
        cutoff: int,
        quadrature: VelocityQuadrature,
    ) -> Self:
        """Projects samples f(j / G, v) of shape (G,)*D + (N,) onto |xi_i| <= cutoff."""
        dimension = quadrature.dimension
        grid_size = values.shape[0]
        if grid_size < 2 * cutoff + 1:
            msg = f"Grid size {grid_size} cannot resolve modes up to {cutoff}"
            raise AliasingError(msg)
        axes = _spatial_axes(dimension)
        spectrum = np.fft.fftn(np.asarray(values, dtype=np.float64), axes=axes)
        spectrum /= grid_size**dimension
        index = np.arange(-cutoff, cutoff + 1) % grid_size
        coefficients = spectrum[np.ix_(*([index] * dimension), np.arange(quadrature.size))]
        return cls.hermitian(coefficients, cutoff, quadrature)

    @classmethod
    def from_function(
        cls,
        func: GridFunction,
        cutoff: int,
        quadrature: VelocityQuadrature,
        grid_size: int | None = None,
    ) -> Self:
        """Samples f(x, v) on a torus grid and projects it.

        ``func`` receives the (P, D) grid points and the (N, D) nodes and returns
        a (P, N) array.
        """
        dimension = quadrature.dimension
        grid_size = grid_size or 4 * cutoff + 4
        axis = np.arange(grid_size) / grid_size
        mesh = np.stack(np.meshgrid(*([axis] * dimension), indexing="ij"), axis=-1)
        values = np.asarray(func(mesh.reshape(-1, dimension), quadrature.nodes))
        shape = (grid_size,) * dimension + (quadrature.size,)
        return cls.from_grid(values.reshape(shape), cutoff, quadrature)

    @classmethod
    def random(
        cls,
        rng: np.random.Generator,
        cutoff: int,
        quadrature: VelocityQuadrature,
        *,
        mean: float = 1.0,
    ) -> Self:
        """Random real field with every mode excited, average ``mean``."""
        shape = (2 * cutoff + 1,) * quadrature.dimension + (quadrature.size,)
        coefficients = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        field = cls.hermitian(coefficients / np.sqrt(2.0), cutoff, quadrature)
        zero = (cutoff,) * quadrature.dimension
        field.coefficients[zero] += mean - average_braket(field)
        return field

    def to_grid(self, grid_size: int) -> FloatArray:
        """Evaluates f(j / G, v) on a uniform grid, shape (G,)*D + (N,)."""
        if grid_size < 2 * self.cutoff + 1:
            msg = f"Grid size {grid_size} cannot hold modes up to {self.cutoff}"
            raise AliasingError(msg)
        dimension = self.dimension
        spectrum = np.zeros((grid_size,) * dimension + (self.quadrature.size,), dtype=np.complex128)
        index = np.arange(-self.cutoff, self.cutoff + 1) % grid_size
        spectrum[np.ix_(*([index] * dimension), np.arange(self.quadrature.size))] = self.coefficients
        values = np.fft.ifftn(spectrum, axes=_spatial_axes(dimension)) * grid_size**dimension
        return values.real


def average_braket(f: KineticField) -> float:
    """<f>, the average over the torus and the velocity measure."""
    zero = (f.cutoff,) * f.dimension
    return float(f.quadrature.weights @ f.coefficients[zero].real)


def l2_distance_to_equilibrium(f: KineticField) -> float:
    """L2 distance from f to its average <f>, by Parseval."""
    deviation = f.coefficients.copy()
    deviation[(f.cutoff,) * f.dimension] -= average_braket(f)
    power = np.abs(deviation) ** 2
    return float(np.sqrt(np.sum(power @ f.quadrature.weights)))
