"""Command line interface.

Subcommands: certify (verdict for a frame file), rho (stability radius of a
retrievable frame), construct (write a named frame family to a file),
experiment (perturbation sweep or two frame path), bounds (cardinality
landscape for a dimension).

Exit codes: 0 Retrievable / success, 1 NotRetrievable or a non retrievable
input where retrievability was required, 2 Inconclusive, 64 usage, IO, or
malformed input.

The default seed is 42; the environment variable FRAME_CERTIFY_SEED
overrides it, and an explicit --seed overrides both.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from ._version import __version__
from .certify import (
    VERDICT_INCONCLUSIVE,
    VERDICT_NOT_RETRIEVABLE,
    VERDICT_RETRIEVABLE,
    certify_complex,
    certify_real,
    hmw_lower_bound,
)
from .constructions import (
    BodmannHammenParams,
    bodmann_hammen,
    connect_frames,
    path_eval,
    r3_example,
    random_frame,
    trivial_non_retrievable,
)
from .core import frame_bounds
from .errors import FramecertError, NotRetrievableInput
from .frameio import frame_to_dict, load_frame
from .stability import stability_experiment, stability_radius

__all__ = ["RunConfig", "build_parser", "main"]

DEFAULT_SEED = 42
DEFAULT_STARTS = 64
DEFAULT_TOL = 1e-10
DEFAULT_TRIALS = 100
DEFAULT_RADIUS_FRACTION = 0.99
DEFAULT_MAX_ITER = 2000
SEED_ENV_VAR = "FRAME_CERTIFY_SEED"

EXIT_USAGE = 64
VERDICT_EXIT = {
    VERDICT_RETRIEVABLE: 0,
    VERDICT_NOT_RETRIEVABLE: 1,
    VERDICT_INCONCLUSIVE: 2,
}


@dataclass(frozen=True)
class RunConfig:
    """Resolved run parameters, embedded verbatim in every report."""

    seed: int = DEFAULT_SEED
    starts: int = DEFAULT_STARTS
    tol: float = DEFAULT_TOL
    trials: int = DEFAULT_TRIALS
    radius_fraction: float = DEFAULT_RADIUS_FRACTION
    output_format: str = "json"
    strict_angles: bool = False

    def __post_init__(self) -> None:
        if self.starts < 1:
            raise ValueError(f"starts must be >= 1, got {self.starts}")
        if self.tol <= 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.radius_fraction <= 0.0:
            raise ValueError(
                f"radius_fraction must be positive, got {self.radius_fraction}"
            )
        if self.output_format not in ("json", "csv"):
            raise ValueError(f"output_format must be json or csv, got {self.output_format!r}")


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with code 64."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="framecert",
                     description="Certify phase retrievability of finite frames.")
    parser.add_argument("--version", action="version", version=f"framecert {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_seed(p):
        p.add_argument("--seed", type=int, default=None,
                       help=f"rng seed (default {DEFAULT_SEED}, or ${SEED_ENV_VAR})")

    def add_solver(p):
        p.add_argument("--starts", type=int, default=DEFAULT_STARTS)
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    def add_output(p):
        p.add_argument("--output", default=None, help="write to a file instead of stdout")

    p = sub.add_parser("certify", help="certify a frame file")
    p.add_argument("--frame", required=True, help="frame JSON file")
    p.add_argument("--method", choices=["auto", "eigen", "complement"], default="auto")
    add_solver(p)
    add_seed(p)
    add_output(p)

    p = sub.add_parser("rho", help="stability radius of a retrievable frame")
    p.add_argument("--frame", required=True)
    add_solver(p)
    add_seed(p)
    add_output(p)

    p = sub.add_parser("construct", help="write a named frame family")
    p.add_argument("--family", required=True,
                   choices=["bodmann-hammen", "r3-example", "trivial", "random"])
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--angle-variant", choices=["two_pi", "verbatim"], default="two_pi")
    p.add_argument("--strict-angles", action="store_true")
    add_seed(p)
    add_output(p)

    p = sub.add_parser("experiment", help="perturbation sweep or two frame path")
    p.add_argument("kind", choices=["perturb", "path"])
    p.add_argument("--frame", required=True)
    p.add_argument("--frame2", default=None, help="end frame (path only)")
    p.add_argument("--grid", type=int, default=21, help="path sample count")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--radius-fraction", type=float, default=DEFAULT_RADIUS_FRACTION)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    add_solver(p)
    add_seed(p)
    add_output(p)

    p = sub.add_parser("bounds", help="cardinality bounds for dimension n")
    p.add_argument("--n", type=int, required=True)
    add_output(p)

    return parser


def _resolve_seed(args: argparse.Namespace) -> int:
    if not hasattr(args, "seed"):
        return DEFAULT_SEED
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {env!r}")
    return DEFAULT_SEED


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        seed=_resolve_seed(args),
        starts=getattr(args, "starts", DEFAULT_STARTS),
        tol=getattr(args, "tol", DEFAULT_TOL),
        trials=getattr(args, "trials", DEFAULT_TRIALS),
        radius_fraction=getattr(args, "radius_fraction", DEFAULT_RADIUS_FRACTION),
        output_format=getattr(args, "format", "json"),
        strict_angles=getattr(args, "strict_angles", False),
    )


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _wrap(config: RunConfig, report: dict) -> str:
    return json.dumps(
        {"version": __version__, "config": asdict(config), "report": report},
        indent=2,
    )


def _cmd_certify(args: argparse.Namespace, config: RunConfig) -> int:
    fr = load_frame(args.frame)
    method = args.method
    if method == "auto":
        method = "complement" if fr.field == "real" else "eigen"
    if method == "complement":
        report = certify_real(fr, starts=config.starts, tol=config.tol, seed=config.seed)
    else:
        report = certify_complex(fr, starts=config.starts, max_iter=DEFAULT_MAX_ITER,
                                 tol=config.tol, seed=config.seed)
    _emit(_wrap(config, report.to_dict()), args.output)
    return VERDICT_EXIT[report.verdict]


def _cmd_rho(args: argparse.Namespace, config: RunConfig) -> int:
    fr = load_frame(args.frame)
    report = certify_complex(fr, starts=config.starts, max_iter=DEFAULT_MAX_ITER,
                             tol=config.tol, seed=config.seed)
    if report.verdict != VERDICT_RETRIEVABLE:
        _emit(_wrap(config, {"certification": report.to_dict(), "stability_radius": None}),
              args.output)
        return VERDICT_EXIT[report.verdict]
    radius = stability_radius(fr, report.a0)
    _emit(_wrap(config, {"certification": report.to_dict(),
                         "stability_radius": radius.to_dict()}), args.output)
    return 0


def _cmd_construct(args: argparse.Namespace, config: RunConfig) -> int:
    if args.family == "bodmann-hammen":
        params = BodmannHammenParams(n=args.n, a=args.a, angle_variant=args.angle_variant)
        fr = bodmann_hammen(params, strict=config.strict_angles)
    elif args.family == "r3-example":
        fr = r3_example()
    elif args.family == "trivial":
        m = args.m if args.m is not None else 2 * args.n
        fr = trivial_non_retrievable(args.n, m)
    else:
        m = args.m if args.m is not None else 4 * args.n - 4
        fr = random_frame(args.n, m, seed=config.seed)
    _emit(json.dumps(frame_to_dict(fr), indent=2), args.output)
    return 0


def _cmd_experiment(args: argparse.Namespace, config: RunConfig) -> int:
    fr = load_frame(args.frame)
    if args.kind == "perturb":
        report = stability_experiment(
            fr, trials=config.trials, radius_fraction=config.radius_fraction,
            seed=config.seed, starts=config.starts, tol=config.tol,
            max_iter=DEFAULT_MAX_ITER,
        )
        if config.output_format == "csv":
            _emit(report.to_csv(), args.output)
        else:
            _emit(_wrap(config, report.to_dict()), args.output)
        return 0
    if args.frame2 is None:
        raise ValueError("path experiment needs --frame2")
    if args.grid < 2:
        raise ValueError(f"grid must be >= 2, got {args.grid}")
    fr2 = load_frame(args.frame2)
    path = connect_frames(fr, fr2)
    ts = [(-1.0 + 2.0 * i / (args.grid - 1)) for i in range(args.grid)]
    lower = [frame_bounds(path_eval(path, t)).A for t in ts]
    start_exact = bool(np.array_equal(path_eval(path, -1.0).vectors, fr.vectors))
    end_exact = bool(np.array_equal(path_eval(path, 1.0).vectors, fr2.vectors))
    report = {
        "index_set": list(path.index_set),
        "complement": list(path.complement),
        "grid": args.grid,
        "t_values": ts,
        "lower_bounds": lower,
        "min_lower_bound": min(lower),
        "endpoints_exact": {"start": start_exact, "end": end_exact},
    }
    _emit(_wrap(config, report), args.output)
    return 0


def _cmd_bounds(args: argparse.Namespace, config: RunConfig) -> int:
    bounds = hmw_lower_bound(args.n)
    _emit(_wrap(config, bounds.to_dict()), args.output)
    return 0


_COMMANDS = {
    "certify": _cmd_certify,
    "rho": _cmd_rho,
    "construct": _cmd_construct,
    "experiment": _cmd_experiment,
    "bounds": _cmd_bounds,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        config = _resolve_config(args)
        return _COMMANDS[args.command](args, config)
    except NotRetrievableInput as exc:
        print(f"framecert: {exc}", file=sys.stderr)
        return 1
    except (FramecertError, OSError, ValueError) as exc:
        print(f"framecert: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
