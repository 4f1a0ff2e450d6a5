import numpy as np
import numpy.typing as npt
from lorentzgas._types import FloatArray
from lorentzgas._util import reduce_to_cell
from lorentzgas.ensemble import SurvivalCurve


def torus_distance(a: npt.ArrayLike, b: npt.ArrayLike) -> FloatArray:
    """Distance on R^D / Z^D, row-wise for batches."""
    difference = reduce_to_cell(np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64))
    return np.linalg.norm(np.atleast_2d(difference), axis=-1)


def rejection_sample(
    rng: np.random.Generator,
    radius: float,
    dimension: int,
    count: int,
) -> tuple[FloatArray, FloatArray]:
    """Point-by-point sampler of mu_r, independent of the library sampler."""
    positions = []
    while len(positions) < count:
        candidate = rng.uniform(-0.5, 0.5, size=dimension)
        if np.linalg.norm(candidate) >= radius:
            positions.append(candidate)
    angles = rng.normal(size=(count, dimension))
    return np.array(positions), angles / np.linalg.norm(angles, axis=1, keepdims=True)


def synthetic_curve(
    times: npt.ArrayLike,
    survival: npt.ArrayLike,
    *,
    radius: float,
    dimension: int = 2,
    t_max: float | None = None,
) -> SurvivalCurve:
    times = np.asarray(times, dtype=np.float64)
    return SurvivalCurve(
        times=times.tolist(),
        survival=np.asarray(survival, dtype=np.float64).tolist(),
        std_err=np.zeros(times.size).tolist(),
        n_samples=1,
        t_max=float(times[-1]) if t_max is None else t_max,
        radius=radius,
        dimension=dimension,
        seed=0,
    )
