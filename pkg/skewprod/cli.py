"""``skewprod classify|solve|average|expect [flags] [config]``.

Reports go to stdout as JSON unless ``--out`` names a file; diagnostics go
to stderr. Exit codes: 0 ok, 1 usage/I-O/parse, 2 invalid system or
unsupported shape, 3 hypothesis violation.
"""
import argparse
import csv
import json
import logging
import sys
from typing import Dict, List, Optional, TextIO

from .algebras import ZInfContext
from .angles import DEFAULT_BASIS
from .classifier import (
    AverageDiagnostics,
    birkhoff_trace,
    cesaro_orbit_average,
    classify,
    conditional_expectation_phi,
)
from .cohomology import detect_group, solve_level
from .config import ScenarioConfig, load_config, log_level_from_env
from .errors import ConfigError, HypothesisViolation, SkewProductError
from .presets import preset_names
from .skew import require_valid

_LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_HYPOTHESIS = 3

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - [%(filename)s:%(lineno)d] %(message)s"
CSV_HEADER = ("j", "distance")


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _key_value(text: str):
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    return key.strip(), value.strip()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", nargs="?", help="scenario JSON file")
    common.add_argument("--preset", choices=preset_names(), help="built-in system, replaces the config's system")
    common.add_argument("--param", action="append", type=_key_value, default=[], metavar="KEY=VALUE",
                        help="preset parameter override, repeatable")
    common.add_argument("--n-max", type=int, dest="n_max", help="largest level scanned")
    common.add_argument("--truncation", type=int, help="truncation radius M of the GNS box")
    common.add_argument("--tol", type=float, help="singular value threshold of the oracle")
    common.add_argument("--iterations", type=int, help="number of Cesàro / Birkhoff iterates")
    common.add_argument("--convergence-tol", type=float, dest="convergence_tol",
                        help="final distance below which an average counts as converging")
    common.add_argument("--level", type=int, help="level n of the cohomological equation")
    common.add_argument("--oracle", action="store_true", default=None, help="run the nullspace oracle")
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--csv", help="write the (j, distance) trace here")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true", help="log at DEBUG")
    verbosity.add_argument("--quiet", "-q", action="store_true", help="log errors only")

    parser = _ArgumentParser(prog="skewprod", description="Ergodic analysis of noncommutative skew products.")
    commands = parser.add_subparsers(dest="command", metavar="command", parser_class=_ArgumentParser)
    commands.required = True
    commands.add_parser("classify", parents=[common], help="ergodic classification report")
    commands.add_parser("solve", parents=[common], help="solve the cohomological equation at one level")
    commands.add_parser("average", parents=[common], help="Cesàro or Birkhoff averages with a distance trace")
    commands.add_parser("expect", parents=[common], help="conditional expectation onto the fixed points")
    return parser


def configure_logging(args: argparse.Namespace) -> None:
    if args.verbose:
        level = "DEBUG"
    elif args.quiet:
        level = "ERROR"
    else:
        level = log_level_from_env()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logging.basicConfig(level=logging.getLevelName(level), handlers=[handler], force=True)


def scenario_from_args(args: argparse.Namespace) -> ScenarioConfig:
    config = load_config(args.config) if args.config else ScenarioConfig()
    return config.with_overrides(
        preset=args.preset,
        params=dict(args.param) if args.param else None,
        n_max=args.n_max,
        truncation=args.truncation,
        tol=args.tol,
        iterations=args.iterations,
        convergence_tol=args.convergence_tol,
        level=args.level,
        oracle=args.oracle,
        out=args.out,
        csv=args.csv,
    )


def _envelope(config: ScenarioConfig, system, **body) -> dict:
    return {"basis": DEFAULT_BASIS.to_json(), "system": system.to_json(), **body, "config": {
        "n_max": config.n_max, "truncation": config.truncation, "tol": config.tol,
        "iterations": config.iterations, "convergence_tol": config.convergence_tol, "level": config.level,
    }}


def cmd_classify(config: ScenarioConfig) -> dict:
    system = config.build_system()
    return _envelope(config, system, classification=classify(system, config.n_max).to_json())


def cmd_solve(config: ScenarioConfig) -> dict:
    system = require_valid(config.build_system())
    report = solve_level(system, config.level, config.oracle, config.truncation, config.tol)
    return _envelope(config, system, level=report.to_json())


def cmd_average(config: ScenarioConfig) -> dict:
    system = require_valid(config.build_system())
    if config.observable is not None:
        if not isinstance(system.context, ZInfContext):
            raise ConfigError("observables apply to processes over Z∞; use element instead")
        q, l0 = config.build_observable()
        diagnostics = birkhoff_trace(system, q, l0, config.iterations, config.convergence_tol)
        body = {"observable": {"q": q, "l0": l0}}
    else:
        x = config.build_element(system)
        diagnostics = cesaro_orbit_average(system, x, config.iterations, detect_group(system, config.n_max),
                                           config.convergence_tol)
        body = {"element": x.to_json()}
    _write_trace(config, diagnostics)
    return _envelope(config, system, diagnostics=diagnostics.to_json(), **body)


def cmd_expect(config: ScenarioConfig) -> dict:
    system = require_valid(config.build_system())
    x = config.build_element(system)
    fp = detect_group(system, config.n_max)
    return _envelope(config, system, element=x.to_json(),
                     expectation=conditional_expectation_phi(system, fp, x).to_json())


COMMANDS = {
    "classify": cmd_classify,
    "solve": cmd_solve,
    "average": cmd_average,
    "expect": cmd_expect,
}


def write_csv(file: TextIO, rows: List) -> None:
    writer = csv.writer(file, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows((j, repr(float(distance))) for j, distance in rows)


def _write_trace(config: ScenarioConfig, diagnostics: AverageDiagnostics) -> None:
    if config.csv:
        with open(config.csv, "w", encoding="utf-8") as file:
            write_csv(file, diagnostics.rows())
        _LOGGER.info("wrote %d trace rows to %s", len(diagnostics.rows()), config.csv)
    elif config.out:
        # stdout is free when the report goes to a file
        write_csv(sys.stdout, diagnostics.rows())


def _emit(config: ScenarioConfig, report: Dict) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as file:
            file.write(text + "\n")
        _LOGGER.info("wrote report to %s", config.out)
    else:
        sys.stdout.write(text + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exp:
        print(f"skewprod: {exp}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging(args)
    try:
        config = scenario_from_args(args)
        _emit(config, COMMANDS[args.command](config))
    except HypothesisViolation as exp:
        print(f"skewprod: hypothesis violation: {exp}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (ConfigError, OSError) as exp:
        print(f"skewprod: {exp}", file=sys.stderr)
        return EXIT_USAGE
    except SkewProductError as exp:
        print(f"skewprod: {exp}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK
