import math

import numpy as np
import pytest
from lorentzgas.billiard import LatticeConfig, brute_force_first_hit
from lorentzgas.ensemble import (
    confidence_band,
    estimate_survival,
    estimate_survival_async,
    geometric_grid,
    parse_grid,
    survivor_counts,
    validate_grid,
)

from tests.utils import rejection_sample


def test_survivor_counts_are_strict() -> None:
    tau = np.array([0.5, 1.0, math.inf])
    grid = np.array([0.0, 0.5, 1.0, 2.0])

    assert survivor_counts(tau, grid).tolist() == [3, 2, 1, 1]


def test_curve_shape(lattice: LatticeConfig) -> None:
    grid = [0.0, 0.5, 1.0, 2.0, 5.0]
    curve = estimate_survival(lattice, 5000, grid, 5.0, seed=1, concurrency=2)
    times, survival, std_err = curve.arrays()

    assert times.tolist() == grid
    assert survival[0] == 1.0
    assert np.all(np.diff(survival) <= 0)
    assert np.all(std_err <= 0.5 / math.sqrt(5000))
    assert curve.n_samples == 5000  # noqa: PLR2004
    assert curve.kind == "periodic"
    assert 0 <= curve.censored_fraction <= survival[-1]


async def test_curve_does_not_depend_on_worker_count(lattice: LatticeConfig) -> None:
    grid = geometric_grid(0.1, 50.0, 30)
    kwargs = {"seed": 42, "block_size": 512}

    single = await estimate_survival_async(lattice, 3000, grid, 50.0, concurrency=1, **kwargs)
    many = await estimate_survival_async(lattice, 3000, grid, 50.0, concurrency=4, **kwargs)

    assert single == many


def test_curve_matches_brute_force_oracle(lattice: LatticeConfig) -> None:
    grid = np.array([0.5, 1.0, 2.0, 5.0])
    n_samples = 20_000
    curve = estimate_survival(lattice, n_samples, grid, 5.0, seed=3)

    rng = np.random.default_rng(99)
    positions, velocities = rejection_sample(rng, lattice.radius, 2, 4000)
    tau = np.array(
        [brute_force_first_hit(x, v, lattice.radius, 5.0) for x, v in zip(positions, velocities)],
    )
    oracle = survivor_counts(tau, grid) / tau.size

    _, survival, std_err = curve.arrays()
    oracle_err = np.sqrt(oracle * (1 - oracle) / tau.size)
    assert np.all(np.abs(survival - oracle) <= 4 * np.hypot(std_err, oracle_err))


@pytest.mark.parametrize("method", ["normal", "wilson"])
def test_confidence_band(lattice: LatticeConfig, method: str) -> None:
    curve = estimate_survival(lattice, 2000, [0.0, 1.0, 10.0], 10.0, seed=8)
    lower, upper = confidence_band(curve, method=method)  # type: ignore[arg-type]
    _, survival, _ = curve.arrays()

    assert np.all((lower >= 0) & (upper <= 1))
    assert np.all(lower <= survival + 1e-15)
    assert np.all(survival <= upper + 1e-15)


def test_parse_grid() -> None:
    grid = parse_grid("geometric:0.1:100:40")

    assert grid.size == 40  # noqa: PLR2004
    assert grid[0] == pytest.approx(0.1)
    assert grid[-1] == pytest.approx(100.0)
    np.testing.assert_allclose(parse_grid("linear:0:1:3"), [0.0, 0.5, 1.0])


@pytest.mark.parametrize(
    "spec",
    ["geometric:0.1:100", "cubic:0:1:3", "geometric:0:1:3", "linear:1:0:3"],
)
def test_parse_grid_rejects(spec: str) -> None:
    with pytest.raises(ValueError):  # noqa: PT011
        parse_grid(spec)


@pytest.mark.parametrize(
    ("grid", "t_max"),
    [
        ([1.0, 0.5], 2.0),
        ([-1.0, 0.5], 2.0),
        ([0.5, 1.0], 0.9),
        ([0.5, 1.0], math.inf),
        ([], 1.0),
    ],
)
def test_validate_grid_rejects(grid: list[float], t_max: float) -> None:
    with pytest.raises(ValueError):  # noqa: PT011
        validate_grid(np.asarray(grid), t_max)
