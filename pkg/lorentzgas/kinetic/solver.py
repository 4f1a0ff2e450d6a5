from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from typing import TYPE_CHECKING

import msgspec
import numpy as np
import numpy.typing as npt
from scipy import linalg

from lorentzgas._types import ComplexArray, FloatArray
from lorentzgas.errors import ModeCutoffMismatchError
from lorentzgas.kinetic.field import KineticField, l2_distance_to_equilibrium, mode_vectors
from lorentzgas.serialization import RunHeader

if TYPE_CHECKING:
    from lorentzgas.kinetic.kernel import CollisionKernelSpec


class ModeAbscissa(msgspec.Struct, frozen=True):
    xi: list[int]
    abscissa: float


class SpectralReport(msgspec.Struct, kw_only=True, frozen=True):
    sigma: float
    nodes: int = msgspec.field(name="N")
    modes: int = msgspec.field(name="M")
    dimension: int
    kernel: str
    gap: float
    per_mode_abscissa: list[ModeAbscissa]
    run: RunHeader | None = None


def generator_matrix(xi: Sequence[int], kernel: CollisionKernelSpec) -> ComplexArray:
    """A_xi = -2 pi i diag(xi . v) - sigma I + sigma K_w, the generator on mode xi."""
    nodes = kernel.quadrature.nodes
    phases = -2j * np.pi * (nodes @ np.asarray(xi, dtype=np.float64))
    size = kernel.quadrature.size
    return np.diag(phases) - kernel.sigma * np.eye(size) + kernel.sigma * kernel.weighted


def _half_modes(cutoff: int, dimension: int) -> list[tuple[int, ...]]:
    """One representative of every pair {xi, -xi}, xi = 0 included."""
    half = []
    for xi in mode_vectors(cutoff, dimension):
        nonzero = xi[xi != 0]
        if nonzero.size == 0 or nonzero[0] > 0:
            half.append(tuple(int(k) for k in xi))
    return half


def _validate_times(t_points: npt.ArrayLike) -> FloatArray:
    times = np.asarray(t_points, dtype=np.float64)
    if times.ndim != 1 or np.any(times < 0) or np.any(np.diff(times) < 0):
        msg = "Times must be a nonnegative ascending sequence"
        raise ValueError(msg)
    return times


def solve_linear_boltzmann(
    f_in: KineticField,
    kernel: CollisionKernelSpec,
    t_points: npt.ArrayLike,
    *,
    cutoff: int | None = None,
) -> list[KineticField]:
    """Exact-in-time evolution of every Fourier mode by matrix exponentials.

    Propagators exp(dt A_xi) are applied stepwise along the sorted times and
    reused for repeated steps. Modes -xi are filled by conjugation.
    """
    if cutoff is not None and cutoff != f_in.cutoff:
        msg = f"Field cutoff {f_in.cutoff} does not match the requested cutoff {cutoff}"
        raise ModeCutoffMismatchError(msg)
    if f_in.quadrature.size != kernel.quadrature.size or not np.array_equal(
        f_in.quadrature.nodes,
        kernel.quadrature.nodes,
    ):
        msg = "Field and kernel use different velocity nodes"
        raise ModeCutoffMismatchError(msg)
    times = _validate_times(t_points)
    steps = np.diff(times, prepend=0.0)

    shape = (times.size, *f_in.coefficients.shape)
    evolved = np.zeros(shape, dtype=np.complex128)
    m = f_in.cutoff
    dimension = f_in.dimension
    for xi in _half_modes(m, dimension):
        index = tuple(k + m for k in xi)
        mirror = tuple(m - k for k in xi)
        generator = generator_matrix(xi, kernel)
        propagators: dict[float, ComplexArray] = {}
        state = f_in.coefficients[index]
        for step_index, dt in enumerate(steps):
            if dt > 0:
                if dt not in propagators:
                    propagators[dt] = linalg.expm(dt * generator)
                state = propagators[dt] @ state
            evolved[(step_index, *index)] = state
            evolved[(step_index, *mirror)] = np.conj(state)
        if not any(xi):
            # the zero mode of a real field is real
            evolved[(slice(None), *index)] = evolved[(slice(None), *index)].real

    logging.debug("Evolved %s modes over %s times", (2 * m + 1) ** dimension, times.size)
    return [f_in.with_coefficients(evolved[i]) for i in range(times.size)]


def decay_trace(
    f_in: KineticField,
    kernel: CollisionKernelSpec,
    t_points: npt.ArrayLike,
) -> FloatArray:
    """L2 distance to equilibrium along the solution at each time."""
    solutions = solve_linear_boltzmann(f_in, kernel, t_points)
    return np.array([l2_distance_to_equilibrium(f) for f in solutions])


def _abscissa(xi: Sequence[int], kernel: CollisionKernelSpec) -> float:
    eigenvalues = linalg.eigvals(generator_matrix(xi, kernel))
    if not any(xi):
        # drop the single conserved direction
        eigenvalues = np.delete(eigenvalues, np.argmin(np.abs(eigenvalues)))
    if eigenvalues.size == 0:
        return float("inf")
    return -float(np.max(eigenvalues.real))


def spectral_abscissae(kernel: CollisionKernelSpec, cutoff: int) -> list[ModeAbscissa]:
    """Decay rate of every mode pair {xi, -xi} with |xi_i| <= cutoff."""
    return [
        ModeAbscissa(xi=list(xi), abscissa=_abscissa(xi, kernel))
        for xi in _half_modes(cutoff, kernel.quadrature.dimension)
    ]


def spectral_gap(kernel: CollisionKernelSpec, mode_set: int | Iterable[Sequence[int]]) -> float:
    """Smallest decay rate over the modes, the zero eigenvalue of xi = 0 excluded.

    ``mode_set`` is either a cutoff M or an explicit collection of modes.
    """
    if isinstance(mode_set, int):
        return min(entry.abscissa for entry in spectral_abscissae(kernel, mode_set))
    modes = [tuple(int(k) for k in xi) for xi in mode_set]
    dimension = kernel.quadrature.dimension
    if (0,) * dimension not in modes:
        msg = "The mode set must contain xi = 0"
        raise ValueError(msg)
    return min(_abscissa(xi, kernel) for xi in modes)


def spectral_report(kernel: CollisionKernelSpec, cutoff: int) -> SpectralReport:
    abscissae = spectral_abscissae(kernel, cutoff)
    return SpectralReport(
        sigma=kernel.sigma,
        nodes=kernel.quadrature.size,
        modes=cutoff,
        dimension=kernel.quadrature.dimension,
        kernel=kernel.kind,
        gap=min(entry.abscissa for entry in abscissae),
        per_mode_abscissa=abscissae,
    )
