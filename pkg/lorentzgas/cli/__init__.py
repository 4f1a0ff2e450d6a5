from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from typing import Any

import msgspec

from lorentzgas._version import VERSION
from lorentzgas.cli import _commands
from lorentzgas.cli._config import (
    BoltzmannConfig,
    CertifyConfig,
    FplConfig,
    PoissonFplConfig,
    RunConfig,
    TailCheckConfig,
    TraceConfig,
    TwoScaleConfig,
)
from lorentzgas.errors import LorentzGasError

EXIT_OK = 0
EXIT_FAILURE = 1

Handler = Callable[[Any], None]

COMMANDS: dict[str, tuple[type[RunConfig], Handler]] = {
    "fpl": (FplConfig, _commands.cmd_fpl),
    "poisson-fpl": (PoissonFplConfig, _commands.cmd_poisson_fpl),
    "tail-check": (TailCheckConfig, _commands.cmd_tail_check),
    "boltzmann": (BoltzmannConfig, _commands.cmd_boltzmann),
    "certify": (CertifyConfig, _commands.cmd_certify),
    "two-scale": (TwoScaleConfig, _commands.cmd_two_scale),
    "trace": (TraceConfig, _commands.cmd_trace),
}


def _add_threads(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="Worker threads (default: LORENTZGAS_THREADS or the CPU count)",
    )


def _add_survival_flags(parser: argparse.ArgumentParser, *, required: bool) -> None:
    parser.add_argument("--samples", type=int, required=required, default=None if required else 100_000)
    parser.add_argument(
        "--t-grid",
        required=required,
        default=None,
        help="kind:lo:hi:count with kind geometric or linear",
    )
    parser.add_argument("--t-max", type=float, default=None, help="Censoring horizon (default: grid end)")
    parser.add_argument("--seed", type=int, default=0)


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--nodes", type=int, default=32, help="Velocity nodes (D = 3: polar nodes)")
    parser.add_argument("--modes", type=int, default=8, help="Fourier mode cutoff M")
    parser.add_argument("--sigma", type=float, default=1.0)
    parser.add_argument("--t-final", type=float, default=20.0)
    parser.add_argument("--t-count", type=int, default=81)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lorentzgas",
        description="Periodic Lorentz gas simulations and kinetic non-convergence checks",
        allow_abbrev=False,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="-v for progress, -vv for debugging output",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    fpl = commands.add_parser("fpl", help="Free path length survival under mu_r")
    fpl.add_argument("--dim", type=int, required=True)
    fpl.add_argument("--radius", type=float, required=True)
    _add_survival_flags(fpl, required=True)
    fpl.add_argument("--out", required=True)
    _add_threads(fpl)

    poisson = commands.add_parser("poisson-fpl", help="Free path survival among Poisson obstacles")
    poisson.add_argument("--dim", type=int, required=True)
    poisson.add_argument("--radius", type=float, required=True)
    poisson.add_argument(
        "--intensity",
        type=float,
        default=None,
        help="Obstacle intensity (default: matched to the periodic mean free path)",
    )
    _add_survival_flags(poisson, required=True)
    poisson.add_argument("--out", required=True)
    _add_threads(poisson)

    tail = commands.add_parser("tail-check", help="Tail bounds and model fits of a survival CSV")
    tail.add_argument("--curve", required=True)
    tail.add_argument("--window", default=None, help="lo:hi (default: 2/r^(D-1):20/r^(D-1))")
    tail.add_argument("--fit-window", default=None, help="lo:hi (default: the bounds window)")
    tail.add_argument("--out", required=True)

    boltzmann = commands.add_parser("boltzmann", help="Linear Boltzmann relaxation and spectral gap")
    boltzmann.add_argument("--dim", type=int, default=2)
    _add_solver_flags(boltzmann)
    boltzmann.add_argument("--kernel", default="uniform", help="uniform or file:PATH")
    boltzmann.add_argument("--fit-window", default=None, help="lo:hi (default: 3/sigma:t_final)")
    boltzmann.add_argument("--seed", type=int, default=0)
    boltzmann.add_argument("--out-prefix", required=True)

    certify = commands.add_parser("certify", help="Non-convergence certificate")
    certify.add_argument("--tail-json", default=None)
    certify.add_argument("--decay-json", default=None)
    certify.add_argument("--full", action="store_true", help="Run the whole pipeline")
    certify.add_argument("--r-star", type=float, default=None)
    certify.add_argument("--m-schedule", default="1:64", help="a:b or a comma-separated list")
    certify.add_argument("--horizon", type=float, default=None)
    certify.add_argument("--dim", type=int, default=2)
    certify.add_argument("--radius", type=float, default=None)
    _add_survival_flags(certify, required=False)
    _add_solver_flags(certify)
    certify.add_argument("--out", required=True)
    _add_threads(certify)

    two_scale = commands.add_parser("two-scale", help="Fourier test of the 1/n oscillation")
    two_scale.add_argument("--n", type=int, required=True)
    two_scale.add_argument("--grid-size", type=int, required=True)
    two_scale.add_argument("--dim", type=int, default=2)
    two_scale.add_argument("--field", choices=("cos", "survival"), default="cos")
    two_scale.add_argument("--t", type=float, default=0.3)
    two_scale.add_argument("--r-star", type=float, default=1.0)
    two_scale.add_argument("--velocity", default=None, help="Comma-separated direction")
    two_scale.add_argument("--out", required=True)

    trace = commands.add_parser("trace", help="Collision trace of one trajectory")
    trace.add_argument("--dim", type=int, default=2)
    trace.add_argument("--radius", type=float, required=True)
    trace.add_argument("--x", required=True, help="Comma-separated position")
    trace.add_argument("--v", required=True, help="Comma-separated direction")
    trace.add_argument("--t", type=float, required=True)
    trace.add_argument("--law", choices=("specular", "diffuse", "lambert"), default="specular")
    trace.add_argument("--max-events", type=int, default=100_000)
    trace.add_argument("--seed", type=int, default=0)
    trace.add_argument("--out", required=True)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    config_type, handler = COMMANDS[args.command]
    params = {
        key: value
        for key, value in vars(args).items()
        if key not in {"command", "verbose"} and value is not None
    }
    try:
        config = msgspec.convert(params, config_type)
        handler(config)
    except (LorentzGasError, ValueError, OSError, msgspec.MsgspecError) as e:
        print(f"lorentzgas {args.command}: error: {e}", file=sys.stderr)  # noqa: T201
        return EXIT_FAILURE
    return EXIT_OK
