import dataclasses

import numpy as np
import pytest
from lorentzgas.errors import KernelValidationError
from lorentzgas.kinetic import (
    CollisionKernelSpec,
    VelocityQuadrature,
    build_kernel,
    kernel_from_function,
    velocity_nodes,
)


def test_uniform_kernel(uniform_kernel: CollisionKernelSpec) -> None:
    assert uniform_kernel.kind == "uniform"
    assert uniform_kernel.normalization_residual <= 1e-14  # noqa: PLR2004
    np.testing.assert_allclose(uniform_kernel.weighted.sum(axis=1), 1.0, atol=1e-14)


def test_custom_table_of_ones_is_uniform(quadrature: VelocityQuadrature) -> None:
    kernel = build_kernel("custom", 1.0, quadrature, np.ones((16, 16)))

    np.testing.assert_array_equal(kernel.k_matrix, np.ones((16, 16)))


def test_custom_cosine_kernel_is_normalized() -> None:
    quadrature = velocity_nodes(2, 64)
    table = kernel_from_function(lambda cosine: 1.0 + 0.5 * cosine, quadrature)

    kernel = build_kernel("custom", 2.0, quadrature, table)

    assert kernel.kind == "custom"
    assert kernel.normalization_residual < 1e-12  # noqa: PLR2004
    np.testing.assert_array_equal(kernel.k_matrix, kernel.k_matrix.T)


def test_asymmetric_table_is_symmetrized(quadrature: VelocityQuadrature) -> None:
    nodes = quadrature.nodes
    cosines = nodes @ nodes.T
    sines = np.outer(nodes[:, 0], nodes[:, 1]) - np.outer(nodes[:, 1], nodes[:, 0])
    table = 1.0 + 0.5 * cosines + 0.2 * sines

    kernel = build_kernel("custom", 1.0, quadrature, table)

    np.testing.assert_array_equal(kernel.k_matrix, kernel.k_matrix.T)
    assert kernel.normalization_residual < 1e-12  # noqa: PLR2004


def test_table_needing_several_rescalings_is_rejected(quadrature: VelocityQuadrature) -> None:
    rng = np.random.default_rng(5)
    raw = 1.0 + 0.01 * rng.random((16, 16))
    table = raw + raw.T

    with pytest.raises(KernelValidationError, match="one symmetric rescaling"):
        build_kernel("custom", 1.0, quadrature, table)


@pytest.mark.parametrize(
    "table",
    [
        np.zeros((16, 16)),
        -np.ones((16, 16)),
        np.ones((8, 8)),
        np.full((16, 16), np.nan),
    ],
)
def test_invalid_tables(quadrature: VelocityQuadrature, table: np.ndarray) -> None:
    with pytest.raises(KernelValidationError):
        build_kernel("custom", 1.0, quadrature, table)


def test_custom_kernel_needs_table(quadrature: VelocityQuadrature) -> None:
    with pytest.raises(KernelValidationError, match="table"):
        build_kernel("custom", 1.0, quadrature)


@pytest.mark.parametrize("sigma", [0.0, -1.0])
def test_builder_rejects_sigma(quadrature: VelocityQuadrature, sigma: float) -> None:
    with pytest.raises(KernelValidationError):
        build_kernel("uniform", sigma, quadrature)


def test_free_transport_kernel(uniform_kernel: CollisionKernelSpec) -> None:
    kernel = dataclasses.replace(uniform_kernel, sigma=0.0)

    assert kernel.sigma == 0.0


def test_unnormalized_spec_is_rejected(quadrature: VelocityQuadrature) -> None:
    with pytest.raises(KernelValidationError, match="normalized"):
        CollisionKernelSpec(sigma=1.0, k_matrix=np.full((16, 16), 2.0), quadrature=quadrature)
