from ._flow import (
    DEFAULT_MAX_EVENTS,
    EventRecords,
    FlowBatch,
    absorbing_transport,
    evolve_batch,
    evolve_billiard,
    evolve_scaled,
    survival_indicator,
    survival_indicator_batch,
)
from ._geometry import (
    GRAZING_TOLERANCE,
    RESTART_TOLERANCE,
    HitBatch,
    brute_force_first_hit,
    first_hit,
    first_hit_batch,
)
from ._laws import ABSORBING, DIFFUSE, SPECULAR, Absorbing, Diffuse, Specular, reflect
from .abc import BoundaryLaw, BoundaryLawKind
from .config import LatticeConfig
from .phase import CollisionEvent, ExitTimeResult, PhasePoint, validate_phase

__all__ = [
    "ABSORBING",
    "DEFAULT_MAX_EVENTS",
    "DIFFUSE",
    "GRAZING_TOLERANCE",
    "RESTART_TOLERANCE",
    "SPECULAR",
    "Absorbing",
    "BoundaryLaw",
    "BoundaryLawKind",
    "CollisionEvent",
    "Diffuse",
    "EventRecords",
    "ExitTimeResult",
    "FlowBatch",
    "HitBatch",
    "LatticeConfig",
    "PhasePoint",
    "Specular",
    "absorbing_transport",
    "brute_force_first_hit",
    "evolve_batch",
    "evolve_billiard",
    "evolve_scaled",
    "first_hit",
    "first_hit_batch",
    "reflect",
    "survival_indicator",
    "survival_indicator_batch",
    "validate_phase",
]
