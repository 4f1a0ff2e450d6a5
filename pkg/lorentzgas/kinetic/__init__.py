from .field import KineticField, average_braket, l2_distance_to_equilibrium, mode_vectors
from .fitting import DecayFit, fit_decay
from .kernel import CollisionKernelSpec, KernelKind, build_kernel, kernel_from_function
from .quadrature import VelocityQuadrature, velocity_nodes
from .solver import (
    ModeAbscissa,
    SpectralReport,
    decay_trace,
    generator_matrix,
    solve_linear_boltzmann,
    spectral_abscissae,
    spectral_gap,
    spectral_report,
)

__all__ = [
    "CollisionKernelSpec",
    "DecayFit",
    "KernelKind",
    "KineticField",
    "ModeAbscissa",
    "SpectralReport",
    "VelocityQuadrature",
    "average_braket",
    "build_kernel",
    "decay_trace",
    "fit_decay",
    "generator_matrix",
    "kernel_from_function",
    "l2_distance_to_equilibrium",
    "mode_vectors",
    "solve_linear_boltzmann",
    "spectral_abscissae",
    "spectral_gap",
    "spectral_report",
    "velocity_nodes",
]
