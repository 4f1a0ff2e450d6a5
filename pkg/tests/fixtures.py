import numpy as np
import pytest
from lorentzgas.billiard import LatticeConfig
from lorentzgas.kinetic import CollisionKernelSpec, VelocityQuadrature, build_kernel, velocity_nodes


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def lattice() -> LatticeConfig:
    return LatticeConfig(dimension=2, radius=0.1)


@pytest.fixture(scope="session")
def quadrature() -> VelocityQuadrature:
    return velocity_nodes(2, 16)


@pytest.fixture(scope="session")
def uniform_kernel(quadrature: VelocityQuadrature) -> CollisionKernelSpec:
    return build_kernel("uniform", 1.0, quadrature)
