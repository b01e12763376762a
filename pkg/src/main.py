"""
NLS Well Atlas

Command-line entry point.

    python -m src.main <verb> [options]

Verbs: exponents, groundstate, classify, evolve, sweep, virial, selftest
(plus gronwall-selftest and cutoff-selftest as single-suite shortcuts).

Exit status: 0 success, 1 selftest failure, 2 usage or configuration
error, 3 solver non-convergence, 4 any other numerical error.
"""
import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from src.cli.commands import COMMANDS, RunContext
from src.cli.schemas import ErrorRecord
from src.core.config import load_config
from src.core.dependencies import get_repositories, get_services
from src.core.exceptions import AtlasError
from src.core.log_setup import LOG_LEVELS, configure_logging

logger = logging.getLogger("src.main")


def float_list(text: str) -> List[float]:
    """Comma-separated floats; the empty string is the empty list."""
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nls-atlas",
        description="Numerical atlas of the focusing NLS potential well.",
    )
    parser.add_argument("verb", choices=list(COMMANDS), help="What to run")

    # ========== GLOBAL FLAGS ==========
    parser.add_argument("--config", help="dotenv-style config file or a run manifest to replay")
    parser.add_argument("--out", help="Run directory")
    parser.add_argument("--seed", type=int, help="Seed of the randomized suites")
    parser.add_argument("--jobs", type=int, help="Worker processes for sweeps")
    parser.add_argument("--log-level", default="INFO", choices=LOG_LEVELS, help="Log verbosity")

    # ========== PROBLEM ==========
    parser.add_argument("--N", type=int, dest="N", help="Spatial dimension")
    parser.add_argument("--p", help="Nonlinearity power, e.g. 7 or 7/3")
    parser.add_argument("--extent", type=float, help="Box half-width L")
    parser.add_argument("--points", type=int, help="Samples per axis")

    # ========== INITIAL DATA ==========
    parser.add_argument("--family", help="scaledQ, dilatedQ, gaussian or file")
    parser.add_argument("--lambda", type=float, dest="lam", help="Family parameter")
    parser.add_argument("--amplitude", type=float, help="Gaussian amplitude")
    parser.add_argument("--width", type=float, help="Gaussian width")
    parser.add_argument("--kick", type=float_list, help="Gaussian momentum kick")
    parser.add_argument("--field", dest="path", help="Field binary for the file family")

    # ========== EVOLUTION ==========
    parser.add_argument("--dt", type=float, help="Base time step")
    parser.add_argument("--t-end", type=float, help="Final time")
    parser.add_argument("--checkpoint-every", type=int, help="Base steps between checkpoints")
    parser.add_argument("--keep-fields", action="store_true", default=None,
                        help="Keep checkpoint fields for the scattering diagnostic")
    parser.add_argument("--save-field", action="store_true", default=None,
                        help="Write the terminal field")

    # ========== VERB OPTIONS ==========
    parser.add_argument("--lambdas", type=float_list, help="Sweep values, comma-separated")
    parser.add_argument("--radius", type=float, help="Virial localization radius R")
    parser.add_argument(
        "--suite", action="append", dest="suites", help="Selftest suite (repeatable)"
    )
    parser.add_argument("--corrupt-norms", action="store_true", default=None,
                        help="Fault injection: perturb the ground-state mass")
    return parser


def collect_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Nested config values for every flag that was given."""
    sections = {
        "": {"N": args.N, "p": args.p, "seed": args.seed, "jobs": args.jobs,
             "output_dir": args.out, "save_field": args.save_field},
        "grid": {"extent": args.extent, "points": args.points},
        "initial": {"family": args.family, "lam": args.lam, "amplitude": args.amplitude,
                    "width": args.width, "kick": args.kick, "path": args.path},
        "controls": {"dt": args.dt, "t_end": args.t_end,
                     "checkpoint_every": args.checkpoint_every, "keep_fields": args.keep_fields},
        "sweep": {"lambdas": args.lambdas},
        "virial": {"radius": args.radius},
        "selftest": {"suites": args.suites, "corrupt_norms": args.corrupt_norms},
    }
    overrides: Dict[str, Any] = {"experiment": args.verb}
    for section, values in sections.items():
        given = {key: value for key, value in values.items() if value is not None}
        if not given:
            continue
        if section:
            overrides[section] = given
        else:
            overrides.update(given)
    return overrides


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        config = load_config(args.config, collect_overrides(args))
        context = RunContext(config, get_repositories(config), get_services(config))
        return COMMANDS[args.verb](context)
    except AtlasError as exc:
        logger.error("%s: %s", type(exc).__name__, exc.message)
        record = ErrorRecord(error=type(exc).__name__, message=exc.message, exitCode=exc.exit_code)
        print(json.dumps(record.model_dump()), file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
