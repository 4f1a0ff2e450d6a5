import math

import numpy as np
import pytest
from lorentzgas.billiard import LatticeConfig
from lorentzgas.ensemble import (
    fit_tail_models,
    matched_poisson_intensity,
    poisson_decay_rate,
    poisson_survival,
)


def test_decay_rate() -> None:
    assert poisson_decay_rate(1.0, 0.1, 2) == pytest.approx(0.2)
    assert poisson_decay_rate(2.0, 0.1, 3) == pytest.approx(2 * math.pi * 0.01)


def test_matched_intensity(lattice: LatticeConfig) -> None:
    intensity = matched_poisson_intensity(lattice)

    assert intensity == pytest.approx(1 / (1 - math.pi * 0.01))
    assert 1 / poisson_decay_rate(intensity, lattice.radius, 2) == pytest.approx(
        lattice.mean_free_path,
    )


def test_poisson_survival_is_exponential() -> None:
    grid = np.linspace(0.0, 20.0, 41)
    curve = poisson_survival(1.0, 0.1, 2, 20_000, grid, seed=3)
    times, survival, std_err = curve.arrays()

    assert curve.kind == "poisson"
    assert curve.intensity == 1.0
    assert survival[0] == 1.0
    exact = np.exp(-0.2 * times)
    assert np.all(np.abs(survival - exact) <= 4 * np.maximum(std_err, 1 / 20_000))

    fit = fit_tail_models(curve, (0.5, 10.0))
    assert fit.exp_rate == pytest.approx(0.2, rel=0.1)
    assert fit.exp_r2 > fit.power_r2


def test_poisson_survival_in_three_dimensions() -> None:
    grid = np.linspace(0.0, 10.0, 11)
    curve = poisson_survival(5.0, 0.2, 3, 10_000, grid, seed=4)
    rate = poisson_decay_rate(5.0, 0.2, 3)
    times, survival, std_err = curve.arrays()

    assert np.all(np.abs(survival - np.exp(-rate * times)) <= 4 * np.maximum(std_err, 1e-4))


@pytest.mark.parametrize(
    ("intensity", "radius", "dimension"),
    [(0.0, 0.1, 2), (1.0, 0.0, 2), (1.0, 0.1, 1)],
)
def test_poisson_rejects_parameters(intensity: float, radius: float, dimension: int) -> None:
    with pytest.raises(ValueError):  # noqa: PT011
        poisson_survival(intensity, radius, dimension, 10, [0.0, 1.0], seed=0)
