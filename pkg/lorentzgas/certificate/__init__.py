from .abc import BumpProfile, InitialDensity
from .bounds import (
    contradiction_time,
    critical_ratio,
    lower_bound_L,
    ratio_inequality_slack,
    smallest_feasible_m,
    upper_bound_U,
)
from .bump import BumpInitialData, UniformDensity, cosine_squared, make_bump_rho, quadrature_norms
from .observables import (
    ObservableRow,
    ObservableTable,
    SurvivalRow,
    dominance_check,
    dominance_check_async,
    empirical_fe_observables,
    empirical_fe_observables_async,
)
from .report import NonConvergenceReport, Provenance, certify_nonconvergence, default_horizon

__all__ = [
    "BumpInitialData",
    "BumpProfile",
    "InitialDensity",
    "NonConvergenceReport",
    "ObservableRow",
    "ObservableTable",
    "Provenance",
    "SurvivalRow",
    "UniformDensity",
    "certify_nonconvergence",
    "contradiction_time",
    "cosine_squared",
    "critical_ratio",
    "default_horizon",
    "dominance_check",
    "dominance_check_async",
    "empirical_fe_observables",
    "empirical_fe_observables_async",
    "lower_bound_L",
    "make_bump_rho",
    "quadrature_norms",
    "ratio_inequality_slack",
    "smallest_feasible_m",
    "upper_bound_U",
]
