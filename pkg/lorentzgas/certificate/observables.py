from __future__ import annotations

import dataclasses
import functools
import logging
from collections.abc import Callable, Mapping, Sequence
from typing import TYPE_CHECKING

import anyio
import msgspec
import numpy as np

from lorentzgas._types import FloatArray
from lorentzgas.billiard import SPECULAR, evolve_batch, first_hit_batch
from lorentzgas.ensemble import BlockRunner, partition, sample_mu_r_batch
from lorentzgas.errors import CertificateInvariantError
from lorentzgas.kinetic import velocity_nodes

if TYPE_CHECKING:
    import numpy.typing as npt

    from lorentzgas._types import IntArray
    from lorentzgas.billiard import BoundaryLaw, LatticeConfig
    from lorentzgas.certificate.abc import InitialDensity
    from lorentzgas.ensemble import Block

TestFunction = Callable[[FloatArray, FloatArray], FloatArray]

DOMINANCE_TOLERANCE = 1e-12
JENSEN_TOLERANCE = 1e-12
SCATTERING_STREAM = 1


def _uniform_phase_points(
    block: Block,
    cfg: LatticeConfig,
) -> tuple[FloatArray, FloatArray, FloatArray]:
    """Uniform phase points of the scaled table.

    Returns unscaled cell positions y, the cell offsets k in {0..n-1}^D and
    velocities; the scaled position is eps * (y + k).
    """
    rng = block.generator()
    positions, velocities, _ = sample_mu_r_batch(rng, cfg, block.count)
    cells = rng.integers(0, cfg.n, size=positions.shape).astype(np.float64)
    return positions, cells, velocities


def _dominance_block(
    block: Block,
    *,
    t: float,
    cfg: LatticeConfig,
    rho: InitialDensity,
    law: BoundaryLaw,
) -> tuple[int, int]:
    positions, cells, velocities = _uniform_phase_points(block, cfg)
    eps = cfg.epsilon
    start = eps * (positions + cells)
    horizon = t / eps

    backward = evolve_batch(
        positions,
        -velocities,
        horizon,
        cfg.radius,
        law=law,
        rng=block.generator(SCATTERING_STREAM),
    )
    specular = rho(start + eps * (backward.unfolded() - positions))

    if horizon > 0:
        hits = first_hit_batch(positions, -velocities, cfg.radius, horizon)
        survived = hits.censored
    else:
        survived = np.ones(block.count, dtype=bool)
    absorbing = np.where(survived, rho(start - t * velocities), 0.0)

    dominated = specular >= absorbing - DOMINANCE_TOLERANCE
    consistent = np.where(survived, backward.event_counts == 0, backward.event_counts >= 1)
    return int(np.sum(dominated & consistent)), block.count


async def dominance_check_async(  # noqa: PLR0913
    n_samples: int,
    t: float,
    cfg: LatticeConfig,
    rho: InitialDensity,
    seed: int,
    *,
    law: BoundaryLaw = SPECULAR,
    concurrency: int | None = None,
) -> float:
    """Fraction of phase points with rho(S_-t(x, v)) >= rho(x - t v) 1{no collision}.

    A point that survives the absorbing flow follows the same free trajectory
    under the billiard flow, so the fraction is 1 for any nonnegative rho and
    any boundary law that keeps the particle. Anything less raises
    :class:`CertificateInvariantError`.
    """
    if t < 0:
        msg = f"Time must be nonnegative, got {t}"
        raise ValueError(msg)
    runner = BlockRunner(
        functools.partial(_dominance_block, t=t, cfg=cfg, rho=rho, law=law),
        concurrency=concurrency,
    )
    tallies = await runner.run(partition(n_samples, seed))
    passed = sum(tally[0] for tally in tallies)
    if passed != n_samples:
        msg = f"Dominance failed on {n_samples - passed} of {n_samples} samples at t = {t}"
        raise CertificateInvariantError(msg)
    return passed / n_samples


def dominance_check(  # noqa: PLR0913
    n_samples: int,
    t: float,
    cfg: LatticeConfig,
    rho: InitialDensity,
    seed: int,
    *,
    law: BoundaryLaw = SPECULAR,
    concurrency: int | None = None,
) -> float:
    return anyio.run(
        functools.partial(
            dominance_check_async,
            n_samples,
            t,
            cfg,
            rho,
            seed,
            law=law,
            concurrency=concurrency,
        )
    )


class ObservableRow(msgspec.Struct, kw_only=True, frozen=True):
    """Estimates of the pairings of f_eps and g_eps with one test function."""

    epsilon: float
    t: float
    test_function: str
    specular: float
    specular_err: float
    absorbing: float
    absorbing_err: float


class SurvivalRow(msgspec.Struct, kw_only=True, frozen=True):
    """rho-weighted survival sum(w 1{survived}) / sum(w) and the Jensen slack.

    ``jensen_slack`` is the minimum over velocity bins of
    sum_b w_b Phi_b^2 - (sum_b w_b Phi_b)^2.
    """

    epsilon: float
    t: float
    survival: float
    std_err: float
    jensen_slack: float


class ObservableTable(msgspec.Struct, kw_only=True, frozen=True):
    n_particles: int
    seed: int
    observables: list[ObservableRow]
    survival: list[SurvivalRow]


@dataclasses.dataclass(slots=True, kw_only=True)
class _Sums:
    """Per-block sums; index order (time, test function) or (time, bin)."""

    specular: FloatArray
    specular_sq: FloatArray
    absorbing: FloatArray
    absorbing_sq: FloatArray
    weight: float
    weight_sq: float
    survived: FloatArray
    survived_sq: FloatArray
    bin_weight: FloatArray
    bin_survived: FloatArray

    def __add__(self, other: _Sums) -> _Sums:
        return _Sums(
            **{
                field.name: getattr(self, field.name) + getattr(other, field.name)
                for field in dataclasses.fields(self)
            }
        )


def _bin_nodes(dimension: int, bins: int) -> FloatArray:
    """Velocity quadrature nodes used as bin centres; D = 3 uses about bins / 4 polar rings."""
    if dimension == 2:  # noqa: PLR2004
        return velocity_nodes(2, bins).nodes
    return velocity_nodes(dimension, max(2, 2 * (bins // 8))).nodes


def _velocity_bins(velocities: FloatArray, nodes: FloatArray) -> IntArray:
    return np.argmax(velocities @ nodes.T, axis=1)


def _observable_block(  # noqa: PLR0913
    block: Block,
    *,
    cfg: LatticeConfig,
    rho: InitialDensity,
    times: FloatArray,
    tests: Sequence[TestFunction],
    bin_nodes: FloatArray,
) -> _Sums:
    positions, cells, velocities = _uniform_phase_points(block, cfg)
    eps = cfg.epsilon
    start = eps * (positions + cells)
    weights = rho(start)
    bins = _velocity_bins(velocities, bin_nodes)

    # forward absorbing exit time, one ray per particle
    hits = first_hit_batch(positions, velocities, cfg.radius, times[-1] / eps)
    exit_time = eps * hits.tau

    shape = (times.size, len(tests))
    sums = _Sums(
        specular=np.zeros(shape),
        specular_sq=np.zeros(shape),
        absorbing=np.zeros(shape),
        absorbing_sq=np.zeros(shape),
        weight=float(weights.sum()),
        weight_sq=float(np.sum(weights**2)),
        survived=np.zeros(times.size),
        survived_sq=np.zeros(times.size),
        bin_weight=np.bincount(bins, weights=weights, minlength=bin_nodes.shape[0]),
        bin_survived=np.zeros((times.size, bin_nodes.shape[0])),
    )

    current = positions
    current_velocity = velocities
    displacement = np.zeros_like(positions)
    elapsed = 0.0
    for index, t in enumerate(times):
        if t > elapsed:
            flow = evolve_batch(current, current_velocity, (t - elapsed) / eps, cfg.radius)
            displacement += flow.offsets + flow.positions - current
            current = flow.positions
            current_velocity = flow.velocities
            elapsed = float(t)
        specular_position = start + eps * displacement
        survived = exit_time > t
        free_position = start + t * velocities
        for column, test in enumerate(tests):
            moved = weights * test(specular_position, current_velocity)
            frozen = np.where(survived, weights * test(free_position, velocities), 0.0)
            sums.specular[index, column] = moved.sum()
            sums.specular_sq[index, column] = np.sum(moved**2)
            sums.absorbing[index, column] = frozen.sum()
            sums.absorbing_sq[index, column] = np.sum(frozen**2)
        survived_weight = np.where(survived, weights, 0.0)
        sums.survived[index] = survived_weight.sum()
        sums.survived_sq[index] = np.sum(survived_weight**2)
        sums.bin_survived[index] = np.bincount(
            bins,
            weights=survived_weight,
            minlength=bin_nodes.shape[0],
        )
    return sums


def _jensen_slack(sums: _Sums, index: int) -> float:
    occupied = sums.bin_weight > 0
    if not occupied.any():
        return 0.0
    phi = sums.bin_survived[index, occupied] / sums.bin_weight[occupied]
    weights = sums.bin_weight[occupied] / sums.bin_weight[occupied].sum()
    slack = float(weights @ phi**2 - (weights @ phi) ** 2)
    if slack < -JENSEN_TOLERANCE:
        msg = f"Jensen inequality violated by {slack:.3e}"
        raise CertificateInvariantError(msg)
    return slack


def _mean_and_error(
    total: FloatArray,
    total_sq: FloatArray,
    n: int,
    scale: float,
) -> tuple[FloatArray, FloatArray]:
    mean = total / n
    variance = np.maximum(total_sq / n - mean**2, 0.0)
    return scale * mean, scale * np.sqrt(variance / n)


async def empirical_fe_observables_async(  # noqa: PLR0913
    rho: InitialDensity,
    t_list: npt.ArrayLike,
    configs: Sequence[LatticeConfig],
    test_functions: Mapping[str, TestFunction] | None,
    n_particles: int,
    seed: int,
    *,
    velocity_bins: int = 16,
    concurrency: int | None = None,
) -> ObservableTable:
    """Monte Carlo pairings of the billiard and absorbing solutions with test functions.

    Initial phase points are uniform on the scaled table and carry the weight
    rho(x0); the specular estimate transports them by the billiard flow, the
    absorbing one drops them at their first collision. Pairings are scaled by
    the phase volume |Y_r| of the table.
    """
    times = np.asarray(t_list, dtype=np.float64)
    if times.ndim != 1 or times.size == 0 or np.any(times < 0) or np.any(np.diff(times) < 0):
        msg = "Times must be a nonempty nonnegative ascending sequence"
        raise ValueError(msg)
    tests = dict(test_functions or {"one": lambda x, _: np.ones(x.shape[0])})

    observables: list[ObservableRow] = []
    survival: list[SurvivalRow] = []
    for cfg in configs:
        bin_nodes = _bin_nodes(cfg.dimension, velocity_bins)
        runner = BlockRunner(
            functools.partial(
                _observable_block,
                cfg=cfg,
                rho=rho,
                times=times,
                tests=list(tests.values()),
                bin_nodes=bin_nodes,
            ),
            concurrency=concurrency,
        )
        blocks = await runner.run(partition(n_particles, seed))
        sums = functools.reduce(lambda a, b: a + b, blocks)

        volume = cfg.free_volume
        specular, specular_err = _mean_and_error(sums.specular, sums.specular_sq, n_particles, volume)
        absorbing, absorbing_err = _mean_and_error(sums.absorbing, sums.absorbing_sq, n_particles, volume)
        for index, t in enumerate(times):
            for column, name in enumerate(tests):
                observables.append(
                    ObservableRow(
                        epsilon=cfg.epsilon,
                        t=float(t),
                        test_function=name,
                        specular=float(specular[index, column]),
                        specular_err=float(specular_err[index, column]),
                        absorbing=float(absorbing[index, column]),
                        absorbing_err=float(absorbing_err[index, column]),
                    )
                )
            ratio = sums.survived[index] / sums.weight if sums.weight > 0 else 0.0
            spread = sums.survived_sq[index] * (1.0 - 2.0 * ratio) + ratio**2 * sums.weight_sq
            survival.append(
                SurvivalRow(
                    epsilon=cfg.epsilon,
                    t=float(t),
                    survival=float(ratio),
                    std_err=float(np.sqrt(max(spread, 0.0)) / sums.weight) if sums.weight > 0 else 0.0,
                    jensen_slack=_jensen_slack(sums, index),
                )
            )
        logging.info("Observables for eps = %s done", cfg.epsilon)
    return ObservableTable(
        n_particles=n_particles,
        seed=seed,
        observables=observables,
        survival=survival,
    )


def empirical_fe_observables(  # noqa: PLR0913
    rho: InitialDensity,
    t_list: npt.ArrayLike,
    configs: Sequence[LatticeConfig],
    test_functions: Mapping[str, TestFunction] | None,
    n_particles: int,
    seed: int,
    *,
    velocity_bins: int = 16,
    concurrency: int | None = None,
) -> ObservableTable:
    return anyio.run(
        functools.partial(
            empirical_fe_observables_async,
            rho,
            t_list,
            configs,
            test_functions,
            n_particles,
            seed,
            velocity_bins=velocity_bins,
            concurrency=concurrency,
        )
    )
