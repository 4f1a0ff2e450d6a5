import numpy as np
import pytest
from lorentzgas.certificate import (
    UniformDensity,
    cosine_squared,
    make_bump_rho,
    quadrature_norms,
)
from lorentzgas.errors import InvalidProfileError
from lorentzgas.kinetic import average_braket, velocity_nodes


def test_unit_bump_norms() -> None:
    data = make_bump_rho(1)

    assert data.l1_norm == pytest.approx(1 / 16)
    assert data.l2_norm == pytest.approx(3 / 16)
    assert data.norm_ratio == pytest.approx(1 / 3)


@pytest.mark.parametrize("m", [1, 2, 4])
@pytest.mark.parametrize("dimension", [2, 3])
def test_closed_form_matches_quadrature(m: int, dimension: int) -> None:
    data = make_bump_rho(m, dimension=dimension)

    l1, l2 = quadrature_norms(data)

    assert l1 == pytest.approx(data.l1_norm, rel=1e-8)
    assert l2 == pytest.approx(data.l2_norm, rel=1e-8)
    assert data.norm_ratio == pytest.approx((3 * m) ** (-dimension / 2), rel=1e-12)


@pytest.mark.parametrize("dimension", [2, 3])
def test_doubling_m_shrinks_ratio(dimension: int) -> None:
    coarse = make_bump_rho(3, dimension=dimension)
    fine = make_bump_rho(6, dimension=dimension)

    assert fine.norm_ratio == pytest.approx(coarse.norm_ratio / 2 ** (dimension / 2))


def test_bump_values() -> None:
    data = make_bump_rho(2)

    values = data(np.array([[0.0, 0.0], [0.5, 0.5], [0.1, 0.0], [0.3, 0.0]]))

    np.testing.assert_allclose(values, [1.0, 0.0, np.cos(0.4 * np.pi) ** 2, 0.0], atol=1e-15)


def test_bump_is_periodic_in_the_cell() -> None:
    data = make_bump_rho(1)
    points = np.array([[0.1, -0.05], [1.1, 2.95]])

    values = data(points)

    assert values[0] == pytest.approx(values[1])
    assert values[0] == pytest.approx(cosine_squared(np.array([[0.1, -0.05]]))[0])


def test_custom_profile() -> None:
    data = make_bump_rho(2, lambda z: cosine_squared(z) ** 2)

    assert 0 < data.l1_norm < make_bump_rho(2).l1_norm
    assert data.l2_norm > 0


@pytest.mark.parametrize(
    "profile",
    [
        lambda z: 2 * cosine_squared(z),
        lambda z: np.ones(np.atleast_2d(z).shape[0]),
        lambda z: np.zeros(np.atleast_2d(z).shape[0]),
    ],
)
def test_invalid_profiles(profile: object) -> None:
    with pytest.raises(InvalidProfileError):
        make_bump_rho(1, profile)  # type: ignore[arg-type]


def test_m_must_be_positive() -> None:
    with pytest.raises(ValueError, match="positive"):
        make_bump_rho(0)


def test_field_average_is_l1_norm() -> None:
    data = make_bump_rho(2)

    field = data.to_field(8, velocity_nodes(2, 8))

    assert average_braket(field) == pytest.approx(data.l1_norm, abs=1e-12)


def test_uniform_density() -> None:
    rho = UniformDensity()

    assert rho.l1_norm == rho.l2_norm == 1.0
    np.testing.assert_array_equal(rho(np.zeros((3, 2))), np.ones(3))
