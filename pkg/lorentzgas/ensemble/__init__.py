from ._rng import BLOCK_SIZE, Block, partition, substream
from ._runner import BlockRunner, run_blocks
from .grids import geometric_grid, linear_grid, parse_grid, validate_grid
from .poisson import (
    matched_poisson_intensity,
    poisson_decay_rate,
    poisson_survival,
    poisson_survival_async,
)
from .sampling import acceptance_rate, sample_mu_r, sample_mu_r_batch, uniform_sphere
from .survival import (
    SurvivalCurve,
    confidence_band,
    estimate_survival,
    estimate_survival_async,
    survivor_counts,
)
from .tails import ModelFit, TailBoundsEstimate, check_bgw_bounds, default_window, fit_tail_models
from .two_scale import ModeMagnitude, ModeTable, survival_field, two_scale_fourier_check

__all__ = [
    "BLOCK_SIZE",
    "Block",
    "BlockRunner",
    "ModeMagnitude",
    "ModeTable",
    "ModelFit",
    "SurvivalCurve",
    "TailBoundsEstimate",
    "acceptance_rate",
    "check_bgw_bounds",
    "confidence_band",
    "default_window",
    "estimate_survival",
    "estimate_survival_async",
    "fit_tail_models",
    "geometric_grid",
    "linear_grid",
    "matched_poisson_intensity",
    "parse_grid",
    "partition",
    "poisson_decay_rate",
    "poisson_survival",
    "poisson_survival_async",
    "run_blocks",
    "sample_mu_r",
    "sample_mu_r_batch",
    "substream",
    "survival_field",
    "survivor_counts",
    "two_scale_fourier_check",
    "uniform_sphere",
    "validate_grid",
]
