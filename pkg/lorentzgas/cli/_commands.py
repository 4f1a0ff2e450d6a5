from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import TYPE_CHECKING

import msgspec
import msgspec.structs
import numpy as np

from lorentzgas.billiard import (
    DIFFUSE,
    SPECULAR,
    BoundaryLaw,
    Diffuse,
    EventRecords,
    LatticeConfig,
    evolve_batch,
    validate_phase,
)
from lorentzgas.certificate import NonConvergenceReport, Provenance, certify_nonconvergence
from lorentzgas.ensemble import (
    ModeTable,
    SurvivalCurve,
    TailBoundsEstimate,
    check_bgw_bounds,
    estimate_survival,
    fit_tail_models,
    matched_poisson_intensity,
    parse_grid,
    poisson_survival,
    substream,
    survival_field,
    two_scale_fourier_check,
)
from lorentzgas.errors import InconsistentInputsError
from lorentzgas.kinetic import (
    CollisionKernelSpec,
    DecayFit,
    KineticField,
    build_kernel,
    decay_trace,
    fit_decay,
    spectral_report,
    velocity_nodes,
)
from lorentzgas.serialization import (
    CODECS,
    JsonCodec,
    RunHeader,
    curve_to_csv,
    read_curve,
    read_json,
    write_output,
    write_table,
)

if TYPE_CHECKING:
    from lorentzgas._types import FloatArray
    from lorentzgas.cli._config import (
        BoltzmannConfig,
        CertifyConfig,
        FplConfig,
        PoissonFplConfig,
        TailCheckConfig,
        TraceConfig,
        TwoScaleConfig,
    )

COUPLING_TOLERANCE = 1e-9


class TailCheckReport(msgspec.Struct, kw_only=True, frozen=True):
    c_low: float
    c_high: float
    spread: float | None
    power_r2: float
    exp_r2: float
    power_exponent: float
    exp_rate: float
    window: tuple[float, float]
    fit_window: tuple[float, float]
    dimension: int = msgspec.field(name="D")
    radius: float = msgspec.field(name="r")
    n_samples: int
    seed: int
    kind: str
    run: RunHeader | None = None

    def bounds(self) -> TailBoundsEstimate:
        return TailBoundsEstimate(
            window=self.window,
            c_low=self.c_low,
            c_high=self.c_high,
            spread=self.spread,
            n_points=0,
        )


class DecayReport(msgspec.Struct, kw_only=True, frozen=True):
    c_fit: float
    gamma_fit: float
    residual: float
    window: tuple[float, float]
    sigma: float
    nodes: int = msgspec.field(name="N")
    modes: int = msgspec.field(name="M")
    dimension: int = msgspec.field(name="D")
    seed: int
    run: RunHeader | None = None

    def fit(self) -> DecayFit:
        return DecayFit(
            c_fit=self.c_fit,
            gamma_fit=self.gamma_fit,
            residual=self.residual,
            window=self.window,
            n_points=0,
        )


class TwoScaleReport(msgspec.Struct, kw_only=True, frozen=True):
    table: ModeTable
    run: RunHeader


def _vector(text: str, dimension: int) -> FloatArray:
    values = np.array([float(item) for item in text.split(",")])
    if values.shape != (dimension,):
        msg = f"Expected {dimension} comma-separated numbers, got {text!r}"
        raise ValueError(msg)
    return values


def _interval(text: str | None) -> tuple[float, float] | None:
    if text is None:
        return None
    lo, sep, hi = text.partition(":")
    if not sep:
        msg = f"Expected an interval lo:hi, got {text!r}"
        raise ValueError(msg)
    return float(lo), float(hi)


def _schedule(text: str) -> list[int]:
    """``a:b`` for the integers a..b, or a comma-separated list."""
    if ":" in text:
        lo, hi = (int(part) for part in text.split(":"))
        return list(range(lo, hi + 1))
    return [int(item) for item in text.split(",") if item]


def _write(path: str, value: object) -> None:
    codec = write_output(Path(path), value, JsonCodec, CODECS)
    logging.info("Wrote %s (%s)", path, codec)


def _survival(config: FplConfig | CertifyConfig, radius: float) -> SurvivalCurve:
    cfg = LatticeConfig(dimension=config.dim, radius=radius)
    threshold = cfg.bgw_threshold
    spec = config.t_grid or f"geometric:{0.1 * threshold!r}:{20.0 * threshold!r}:60"
    grid = parse_grid(spec)
    t_max = config.t_max or float(grid.max())
    return estimate_survival(cfg, config.samples, grid, t_max, config.seed, concurrency=config.threads)


def cmd_fpl(config: FplConfig) -> None:
    curve = _survival(config, config.radius)
    header = config.header("fpl")
    run = msgspec.json.encode(header.params, order="deterministic").decode()
    Path(config.out).write_bytes(curve_to_csv(curve, [f"command=fpl params={run}"]))


def cmd_poisson_fpl(config: PoissonFplConfig) -> None:
    intensity = config.intensity
    if intensity is None:
        intensity = matched_poisson_intensity(LatticeConfig(dimension=config.dim, radius=config.radius))
    curve = poisson_survival(
        intensity,
        config.radius,
        config.dim,
        config.samples,
        parse_grid(config.t_grid),
        config.seed,
        t_max=config.t_max,
        concurrency=config.threads,
    )
    run = msgspec.json.encode(config.header("poisson-fpl").params, order="deterministic").decode()
    Path(config.out).write_bytes(curve_to_csv(curve, [f"command=poisson-fpl params={run}"]))


def _tail_report(
    curve: SurvivalCurve,
    window: tuple[float, float] | None,
    fit_window: tuple[float, float] | None,
    header: RunHeader | None,
) -> TailCheckReport:
    bounds = check_bgw_bounds(curve, window)
    fit = fit_tail_models(curve, fit_window or bounds.window)
    return TailCheckReport(
        c_low=bounds.c_low,
        c_high=bounds.c_high,
        spread=bounds.spread,
        power_r2=fit.power_r2,
        exp_r2=fit.exp_r2,
        power_exponent=fit.power_exponent,
        exp_rate=fit.exp_rate,
        window=bounds.window,
        fit_window=fit.window,
        dimension=curve.dimension,
        radius=curve.radius,
        n_samples=curve.n_samples,
        seed=curve.seed,
        kind=curve.kind,
        run=header,
    )


def cmd_tail_check(config: TailCheckConfig) -> None:
    curve = read_curve(Path(config.curve))
    report = _tail_report(
        curve,
        _interval(config.window),
        _interval(config.fit_window),
        config.header("tail-check"),
    )
    _write(config.out, report)


def _kernel(spec: str, sigma: float, dimension: int, nodes: int) -> CollisionKernelSpec:
    quadrature = velocity_nodes(dimension, nodes)
    if spec == "uniform":
        return build_kernel("uniform", sigma, quadrature)
    kind, sep, path = spec.partition(":")
    if kind != "file" or not sep:
        msg = f"Kernel must be 'uniform' or 'file:PATH', got {spec!r}"
        raise ValueError(msg)
    table = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    return build_kernel("custom", sigma, quadrature, table)


def _relaxation(  # noqa: PLR0913
    *,
    dimension: int,
    nodes: int,
    modes: int,
    sigma: float,
    kernel_spec: str,
    t_final: float,
    t_count: int,
    fit_window: tuple[float, float] | None,
    seed: int,
) -> tuple[CollisionKernelSpec, FloatArray, FloatArray, DecayFit]:
    kernel = _kernel(kernel_spec, sigma, dimension, nodes)
    f_in = KineticField.random(substream(seed), modes, kernel.quadrature)
    times = np.linspace(0.0, t_final, t_count)
    distances = decay_trace(f_in, kernel, times)
    window = fit_window or (min(3.0 / sigma, t_final), t_final)
    return kernel, times, distances, fit_decay(times, distances, window)


def cmd_boltzmann(config: BoltzmannConfig) -> None:
    kernel, times, distances, fit = _relaxation(
        dimension=config.dim,
        nodes=config.nodes,
        modes=config.modes,
        sigma=config.sigma,
        kernel_spec=config.kernel,
        t_final=config.t_final,
        t_count=config.t_count,
        fit_window=_interval(config.fit_window),
        seed=config.seed,
    )
    header = config.header("boltzmann")
    prefix = config.out_prefix
    run = msgspec.json.encode(header.params, order="deterministic").decode()
    Path(f"{prefix}_decay.csv").write_bytes(
        write_table(
            ("t", "l2_distance"),
            zip(times.tolist(), distances.tolist(), strict=True),
            [f"command=boltzmann params={run}"],
        )
    )
    spectrum = msgspec.structs.replace(spectral_report(kernel, config.modes), run=header)
    _write(f"{prefix}_spectrum.json", spectrum)
    _write(
        f"{prefix}_fit.json",
        DecayReport(
            c_fit=fit.c_fit,
            gamma_fit=fit.gamma_fit,
            residual=fit.residual,
            window=fit.window,
            sigma=config.sigma,
            nodes=kernel.quadrature.size,
            modes=config.modes,
            dimension=config.dim,
            seed=config.seed,
            run=header,
        ),
    )


def _coupled_r_star(radius: float, r_star: float | None, dimension: int) -> float:
    """Checks that eps = (r / r_star)^(D-1) is 1/n for a positive integer n."""
    if r_star is None:
        return radius
    if not r_star > 0:
        msg = f"r_star must be positive, got {r_star}"
        raise InconsistentInputsError(msg)
    eps = (radius / r_star) ** (dimension - 1)
    n = round(1.0 / eps) if eps > 0 else 0
    if n < 1 or abs(n * eps - 1.0) > COUPLING_TOLERANCE:
        msg = f"r = {radius} and r_star = {r_star} give eps = {eps}, which is not 1/n"
        raise InconsistentInputsError(msg)
    return r_star


def cmd_certify(config: CertifyConfig) -> None:
    header = config.header("certify")
    if config.full:
        if config.radius is None:
            msg = "--full needs --radius"
            raise ValueError(msg)
        tail = _tail_report(_survival(config, config.radius), None, None, header)
        kernel, _, _, fit = _relaxation(
            dimension=config.dim,
            nodes=config.nodes,
            modes=config.modes,
            sigma=config.sigma,
            kernel_spec="uniform",
            t_final=config.t_final,
            t_count=config.t_count,
            fit_window=None,
            seed=config.seed,
        )
        decay = DecayReport(
            c_fit=fit.c_fit,
            gamma_fit=fit.gamma_fit,
            residual=fit.residual,
            window=fit.window,
            sigma=config.sigma,
            nodes=kernel.quadrature.size,
            modes=config.modes,
            dimension=config.dim,
            seed=config.seed,
        )
    else:
        if config.tail_json is None or config.decay_json is None:
            msg = "certify needs --tail-json and --decay-json, or --full"
            raise ValueError(msg)
        tail = read_json(Path(config.tail_json), TailCheckReport)
        decay = read_json(Path(config.decay_json), DecayReport)

    if tail.dimension != decay.dimension:
        msg = f"Tail data is {tail.dimension}-dimensional but the decay fit is {decay.dimension}-dimensional"
        raise InconsistentInputsError(msg)
    r_star = _coupled_r_star(tail.radius, config.r_star, tail.dimension)
    report: NonConvergenceReport = certify_nonconvergence(
        tail.bounds(),
        decay.fit(),
        r_star,
        tail.dimension,
        _schedule(config.m_schedule),
        horizon=config.horizon,
        provenance=Provenance(
            seeds=[tail.seed, decay.seed],
            n_samples=tail.n_samples,
            nodes=decay.nodes,
            modes=decay.modes,
            window=tail.window,
        ),
    )
    _write(config.out, msgspec.structs.replace(report, run=header))


def cmd_two_scale(config: TwoScaleConfig) -> None:
    if config.field == "cos":
        table = two_scale_fourier_check(
            config.n,
            lambda y: np.cos(2.0 * np.pi * y[:, 0]),
            config.dim,
            config.grid_size,
        )
    else:
        cfg = LatticeConfig.boltzmann_grad(dimension=config.dim, r_star=config.r_star, n=config.n)
        velocity = (
            _vector(config.velocity, config.dim)
            if config.velocity
            else np.full(config.dim, 1.0 / math.sqrt(config.dim))
        )
        velocity = velocity / np.linalg.norm(velocity)
        table = two_scale_fourier_check(
            config.n,
            survival_field(config.t, velocity, cfg),
            config.dim,
            config.grid_size,
        )
    _write(config.out, TwoScaleReport(table=table, run=config.header("two-scale")))


def _law(name: str) -> BoundaryLaw:
    laws: dict[str, BoundaryLaw] = {
        "specular": SPECULAR,
        "diffuse": DIFFUSE,
        "lambert": Diffuse(cosine_weighted=True),
    }
    return laws[name]


def cmd_trace(config: TraceConfig) -> None:
    dimension = config.dim
    position = _vector(config.x, dimension)
    velocity = _vector(config.v, dimension)
    velocity = velocity / np.linalg.norm(velocity)
    validate_phase(position, velocity, config.radius)

    rows: list[list[float | str]] = [[0.0, *position.tolist(), *velocity.tolist(), "start"]]

    def record(batch: EventRecords) -> None:
        for i in range(batch.rays.size):
            rows.append(
                [
                    float(batch.times[i]),
                    *batch.hit_points[i].tolist(),
                    *batch.velocity_out[i].tolist(),
                    "collision",
                ]
            )

    flow = evolve_batch(
        position,
        velocity,
        config.t,
        config.radius,
        law=_law(config.law),
        rng=substream(config.seed),
        max_events=config.max_events,
        on_events=record,
    )
    end = flow.unfolded()[0]
    rows.append([float(config.t), *end.tolist(), *flow.velocities[0].tolist(), "end"])

    columns = [
        "t",
        *(f"x{i + 1}" for i in range(dimension)),
        *(f"v{i + 1}" for i in range(dimension)),
        "event",
    ]
    run = msgspec.json.encode(config.header("trace").params, order="deterministic").decode()
    Path(config.out).write_bytes(write_table(columns, rows, [f"command=trace params={run}"]))
