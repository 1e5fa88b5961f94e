"""Command-line entry point: preprocess, sample, validate, bench, experiment."""
import argparse
import logging
import sys

from pydantic import ValidationError

import commands.bench as bench
import commands.experiment as experiment
import commands.preprocess as preprocess
import commands.sample as sample
import commands.validate as validate
from config import (
    APP_NAME,
    BOUND_MODES,
    COMMANDS,
    EXPERIMENT_MODES,
    LOG_FORMAT,
    LOG_LEVEL,
    OUTPUT_FORMATS,
)
from errors import CurveSamplerError, MalformedInputError
from schemas import RunConfig

logger = logging.getLogger(__name__)


class ArgumentParser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so bad flags share the exit-2 path."""

    def error(self, message):
        raise MalformedInputError(message)


def _plan_flags(p: argparse.ArgumentParser) -> None:
    budget = p.add_mutually_exclusive_group()
    budget.add_argument("--ell", type=int, help="TV budget 2^-ell")
    budget.add_argument("--epsilon", type=float, help="TV budget as a real in (0, 1)")
    p.add_argument("--splits", type=int, help="number of equal pieces (0 = none)")
    p.add_argument("--bound", choices=BOUND_MODES, help="how M is estimated")


def build_parser() -> argparse.ArgumentParser:
    parser = ArgumentParser(prog="curve-sampler", description=f"{APP_NAME}: uniform sampling on polynomial curves")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    p = sub.add_parser("preprocess", help="build a sampler plan from a curve file")
    p.add_argument("--curve", dest="curve_path", required=True)
    _plan_flags(p)
    p.add_argument("--no-root-split", dest="root_split", action="store_false", default=True)
    p.add_argument("--out", dest="output_path")

    p = sub.add_parser("sample", help="draw points from a plan")
    p.add_argument("--plan", dest="plan_path", required=True)
    p.add_argument("--count", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=OUTPUT_FORMATS)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", dest="output_path")

    p = sub.add_parser("validate", help="measure a plan against the exact density")
    p.add_argument("--plan", dest="plan_path", required=True)
    p.add_argument("--curve", dest="curve_path", required=True)
    p.add_argument("--count", type=int)
    p.add_argument("--bins", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", dest="output_path")

    p = sub.add_parser("bench", help="time preprocessing and sampling")
    p.add_argument("--curve", dest="curve_path", required=True)
    _plan_flags(p)
    p.add_argument("--no-root-split", dest="root_split", action="store_false", default=True)
    p.add_argument("--count", type=int)
    p.add_argument("--repeats", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", dest="output_path")

    p = sub.add_parser("experiment", help="reproduction runs on curve families")
    p.add_argument("--mode", choices=EXPERIMENT_MODES)
    p.add_argument("--ell", type=int)
    p.add_argument("--bound", choices=BOUND_MODES)
    p.add_argument("--root-split", dest="root_split", action="store_true", default=False)
    p.add_argument("--trials", type=int)
    p.add_argument("--samples", type=int, help="draws timed per run")
    p.add_argument("--degrees", type=int, nargs="+")
    p.add_argument("--dimensions", type=int, nargs="+")
    p.add_argument("--epsilons", type=float, nargs="+")
    p.add_argument("--ells", type=int, nargs="+")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", dest="output_path")
    return parser


def parse_config(argv) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    # flags left unset fall back to the RunConfig defaults
    return RunConfig(**{k: v for k, v in args.items() if v is not None})


def main(argv=None) -> int:
    logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT, stream=sys.stderr)
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
        if config.verbose:
            logging.getLogger().setLevel(logging.DEBUG)

        if config.command == "preprocess":
            return preprocess.run(config)
        elif config.command == "sample":
            return sample.run(config)
        elif config.command == "validate":
            return validate.run(config)
        elif config.command == "bench":
            return bench.run(config)
        elif config.command == "experiment":
            return experiment.run(config)
        raise MalformedInputError(f"Unknown command {config.command!r}; expected one of {COMMANDS}.")
    except ValidationError as e:
        print(f"error: MALFORMED_INPUT: {e}", file=sys.stderr)
        return MalformedInputError.exit_code
    except CurveSamplerError as e:
        print(f"error: {e.code}: {e}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.exception("unexpected failure")
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
