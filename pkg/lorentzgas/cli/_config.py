from __future__ import annotations

from typing import Any, Literal

import msgspec

from lorentzgas.serialization import RunHeader

# flags that do not change a command's output
_EXCLUDED = frozenset({"out", "out_prefix", "threads"})


class RunConfig(msgspec.Struct, kw_only=True, frozen=True):
    threads: int | None = None

    def header(self, command: str) -> RunHeader:
        params: dict[str, Any] = {
            key: value
            for key, value in msgspec.to_builtins(self).items()
            if key not in _EXCLUDED
        }
        return RunHeader(command=command, params=params)


class FplConfig(RunConfig, kw_only=True, frozen=True):
    dim: int
    radius: float
    samples: int
    t_grid: str
    t_max: float | None = None
    seed: int = 0
    out: str


class PoissonFplConfig(RunConfig, kw_only=True, frozen=True):
    dim: int
    radius: float
    intensity: float | None = None
    samples: int
    t_grid: str
    t_max: float | None = None
    seed: int = 0
    out: str


class TailCheckConfig(RunConfig, kw_only=True, frozen=True):
    curve: str
    window: str | None = None
    fit_window: str | None = None
    out: str


class BoltzmannConfig(RunConfig, kw_only=True, frozen=True):
    dim: int = 2
    nodes: int = 32
    modes: int = 8
    sigma: float = 1.0
    kernel: str = "uniform"
    t_final: float = 20.0
    t_count: int = 81
    fit_window: str | None = None
    seed: int = 0
    out_prefix: str


class CertifyConfig(RunConfig, kw_only=True, frozen=True):
    tail_json: str | None = None
    decay_json: str | None = None
    full: bool = False
    r_star: float | None = None
    m_schedule: str = "1:64"
    horizon: float | None = None
    # pipeline flags used with --full
    dim: int = 2
    radius: float | None = None
    samples: int = 100_000
    t_grid: str | None = None
    t_max: float | None = None
    nodes: int = 32
    modes: int = 8
    sigma: float = 1.0
    t_final: float = 20.0
    t_count: int = 81
    seed: int = 0
    out: str


class TwoScaleConfig(RunConfig, kw_only=True, frozen=True):
    n: int
    grid_size: int
    dim: int = 2
    field: Literal["cos", "survival"] = "cos"
    t: float = 0.3
    r_star: float = 1.0
    velocity: str | None = None
    out: str


class TraceConfig(RunConfig, kw_only=True, frozen=True):
    dim: int = 2
    radius: float
    x: str
    v: str
    t: float
    law: Literal["specular", "diffuse", "lambert"] = "specular"
    max_events: int = 100_000
    seed: int = 0
    out: str
