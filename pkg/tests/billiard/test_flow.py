import numpy as np
import pytest
from lorentzgas.billiard import (
    DIFFUSE,
    SPECULAR,
    BoundaryLaw,
    LatticeConfig,
    PhasePoint,
    absorbing_transport,
    evolve_batch,
    evolve_billiard,
    evolve_scaled,
    survival_indicator,
    survival_indicator_batch,
)
from lorentzgas.ensemble import sample_mu_r_batch
from lorentzgas.errors import EventBudgetExceededError

from tests.utils import torus_distance

HEAD_ON = PhasePoint.create([0.5, 0.0], [1.0, 0.0])


def test_free_flight(lattice: LatticeConfig) -> None:
    final, events = evolve_billiard(HEAD_ON, 0.2, lattice)

    assert events == []
    assert torus_distance(final.position, [0.7, 0.0])[0] < 1e-12
    np.testing.assert_array_equal(final.velocity, [1.0, 0.0])


def test_head_on_bounce(lattice: LatticeConfig) -> None:
    final, events = evolve_billiard(HEAD_ON, 0.8, lattice)

    assert len(events) == 1
    assert events[0].time == pytest.approx(0.4, abs=1e-12)
    assert events[0].obstacle_center.tolist() == [1, 0]
    assert events[0].cosine == pytest.approx(1.0)
    assert torus_distance(final.position, [0.5, 0.0])[0] < 1e-12
    np.testing.assert_allclose(final.velocity, [-1.0, 0.0], atol=1e-12)


def test_event_budget(lattice: LatticeConfig) -> None:
    with pytest.raises(EventBudgetExceededError):
        evolve_billiard(HEAD_ON, 2.0, lattice, max_events=1)


@pytest.mark.parametrize("law", [SPECULAR, DIFFUSE])
def test_speed_is_conserved(rng: np.random.Generator, law: BoundaryLaw) -> None:
    cfg = LatticeConfig(dimension=3, radius=0.2)
    positions, velocities, _ = sample_mu_r_batch(rng, cfg, 500)

    flow = evolve_batch(positions, velocities, 10.0, cfg.radius, law=law, rng=rng)

    np.testing.assert_allclose(np.linalg.norm(flow.velocities, axis=1), 1.0, atol=1e-12)
    assert np.all(np.linalg.norm(flow.positions, axis=1) >= cfg.radius - 1e-9)
    assert flow.event_counts.sum() > 0


def test_time_reversibility() -> None:
    """Forward then backward specular flow returns to the start within 1e-8.

    Only trajectories with at most three collisions, each with |v . n| > 0.2,
    are compared: collisions amplify rounding, so longer or more grazing
    trajectories drift past 1e-8 without any integration error.
    """
    cfg = LatticeConfig(dimension=2, radius=0.15)
    rng = np.random.default_rng(7)
    positions, velocities, _ = sample_mu_r_batch(rng, cfg, 2000)
    t = 25.0

    forward = evolve_batch(positions, velocities, t, cfg.radius)
    backward = evolve_batch(forward.positions, -forward.velocities, t, cfg.radius)
    recovered = forward.unfolded() + (backward.unfolded() - forward.positions)

    selected = (forward.event_counts <= 3) & (forward.min_cosine > 0.2)  # noqa: PLR2004
    assert selected.sum() >= 20  # noqa: PLR2004
    np.testing.assert_allclose(recovered[selected], positions[selected], atol=1e-8)
    np.testing.assert_allclose(-backward.velocities[selected], velocities[selected], atol=1e-8)


def test_scaled_flow_bounce() -> None:
    cfg = LatticeConfig.boltzmann_grad(dimension=2, r_star=1.0, n=10)
    start = PhasePoint.create([0.05, 0.0], [1.0, 0.0])

    final, events = evolve_scaled(start, 0.08, cfg)

    assert len(events) == 1
    assert events[0].time == pytest.approx(0.04, abs=1e-12)
    assert events[0].obstacle_center.tolist() == [1, 0]
    assert torus_distance(final.position, [0.05, 0.0])[0] < 1e-12
    np.testing.assert_allclose(final.velocity, [-1.0, 0.0], atol=1e-12)


def test_scaled_backward_flow() -> None:
    cfg = LatticeConfig.boltzmann_grad(dimension=2, r_star=1.0, n=10)
    start = PhasePoint.create([0.05, 0.0], [-1.0, 0.0])

    backward, _ = evolve_scaled(start, 0.08, cfg, backward=True)
    forward, _ = evolve_scaled(start.reversed(), 0.08, cfg)

    np.testing.assert_allclose(backward.position, forward.position, atol=1e-12)
    np.testing.assert_allclose(backward.velocity, -forward.velocity, atol=1e-12)
    np.testing.assert_allclose(backward.velocity, [1.0, 0.0], atol=1e-12)


@pytest.mark.parametrize(("t", "survived"), [(0.0, True), (0.3, True), (0.5, False)])
def test_absorbing_transport(lattice: LatticeConfig, t: float, *, survived: bool) -> None:
    alive, transported = absorbing_transport(HEAD_ON, t, lattice)

    assert alive is survived
    assert torus_distance(transported.position, [0.5 + t, 0.0])[0] < 1e-12


@pytest.mark.parametrize(("t", "expected"), [(0.0, 1), (0.03, 1), (0.05, 0)])
def test_survival_indicator(t: float, expected: int) -> None:
    cfg = LatticeConfig.boltzmann_grad(dimension=2, r_star=1.0, n=10)

    assert survival_indicator(t, [0.05, 0.0], [-1.0, 0.0], cfg) == expected


def test_survival_indicator_needs_coupling(lattice: LatticeConfig) -> None:
    with pytest.raises(ValueError, match="coupled"):
        survival_indicator_batch(0.1, [[0.3, 0.3]], [[1.0, 0.0]], lattice)


@pytest.mark.parametrize("t", [0.0, 0.1, 0.4])
def test_survival_indicator_matches_absorbing_transport(t: float) -> None:
    cfg = LatticeConfig.boltzmann_grad(dimension=2, r_star=1.0, n=8)
    rng = np.random.default_rng(11)
    positions, velocities, _ = sample_mu_r_batch(rng, cfg, 10_000)

    indicator = survival_indicator_batch(t, cfg.epsilon * positions, velocities, cfg)

    expected = [
        absorbing_transport(PhasePoint(position=x, velocity=-v), t / cfg.epsilon, cfg)[0]
        for x, v in zip(positions, velocities, strict=True)
    ]
    np.testing.assert_array_equal(indicator, np.array(expected, dtype=np.int64))
