import argparse
import csv
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .consistency.analytic_fields import field_names, get_field
from .consistency.consistency_checker import (
    DEFAULT_AMPLITUDES, ROW_HEADER, NonlinearForm, OrderEstimate, Probe, alternative_order,
    observed_order,
)
from .grid.grid_state import ModelParams, TruncationLevel
from .harness.experiment import run_comparison
from .harness.suites import SuiteKind, run_suite
from .operators.operator_series import coth_half_series
from .settings import ConfigurationError, ExperimentConfig

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
EXIT_OK = 0
EXIT_NUMERICAL_FAILURE = 1
EXIT_CONFIGURATION_ERROR = 2


def configure_logging(log_file: Optional[str] = None, verbose: bool = False):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format=LOG_FORMAT,
        filename=log_file,
    )


def _m_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


def _amplitudes(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holistic-ks",
        description="Holistic finite-difference models of the Kuramoto-Sivashinsky equation",
    )
    parser.add_argument("--log-file", help="write the log to this file instead of stderr")
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG level")
    commands = parser.add_subparsers(dest="command", required=True)

    scheme_names = [level.value for level in TruncationLevel]

    compare = commands.add_parser("compare", help="integrate the models against the spectral reference")
    compare.add_argument("--config", help="JSON configuration file")
    compare.add_argument("--R", type=float)
    compare.add_argument("--m", type=int)
    compare.add_argument("--scheme", action="append", choices=scheme_names, dest="schemes")
    compare.add_argument("--gamma", type=float)
    compare.add_argument("--t-end", type=float, dest="t_end")
    compare.add_argument("--oracle-n", type=int, dest="oracle_n")
    compare.add_argument("--out", default="results", help="output directory")

    consistency = commands.add_parser("consistency", help="observed truncation orders")
    consistency.add_argument("--schemes", nargs="+", choices=scheme_names, default=scheme_names)
    consistency.add_argument("--m", type=_m_list, default=[8, 16, 32, 64], dest="m_values")
    consistency.add_argument("--probe", choices=[p.value for p in Probe], default=Probe.FULL.value)
    consistency.add_argument("--field", choices=field_names(), default="sine")
    consistency.add_argument("--R", type=float, default=2.0)
    consistency.add_argument("--gamma", type=float, default=1.0)
    consistency.add_argument("--amplitudes", type=_amplitudes, default=list(DEFAULT_AMPLITUDES),
                             help="amplitudes scanned for the nonlinear and full probes")
    consistency.add_argument("--alternatives", action="store_true",
                             help="also fit the advective and conservative forms of u u_x")
    consistency.add_argument("--out", help="CSV file (default: standard output)")

    coefficients = commands.add_parser("coefficients", help="exact operator series coefficients")
    coefficients.add_argument("--max-order", type=int, default=6, dest="max_order")

    suite = commands.add_parser("suite", help="run a named check suite")
    suite.add_argument("kind", choices=[k.value for k in SuiteKind])
    suite.add_argument("--out", default="results", help="output directory")
    return parser


def _write_rows(header: Sequence[str], rows, out: Optional[str]) -> bool:
    try:
        if out is None:
            stream = sys.stdout
        else:
            Path(out).parent.mkdir(parents=True, exist_ok=True)
            stream = open(out, "w", encoding="utf-8", newline="")
        try:
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
        finally:
            if out is not None:
                stream.close()
    except OSError as e:
        logger.error(f"Failed to write {out}: {e}")
        return False
    return True


def cmd_compare(args) -> int:
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    cfg = cfg.with_overrides(R=args.R, m=args.m, schemes=args.schemes, gamma=args.gamma,
                             t_end=args.t_end, oracle_n=args.oracle_n)
    report = run_comparison(cfg, args.out)
    return report.exit_status


def cmd_consistency(args) -> int:
    try:
        params = ModelParams(R=args.R, gamma=args.gamma)
        field_ = get_field(args.field)
        probe = Probe(args.probe)
        estimates: List[OrderEstimate] = [
            observed_order(field_, params, TruncationLevel.from_name(name), args.m_values, probe,
                           amplitudes=args.amplitudes)
            for name in args.schemes
        ]
        if args.alternatives:
            estimates += [alternative_order(form, field_, args.m_values) for form in NonlinearForm]
    except (KeyError, ValueError) as e:
        raise ConfigurationError(str(e)) from e

    rows = [row for estimate in estimates for row in estimate.rows()]
    return EXIT_OK if _write_rows(ROW_HEADER, rows, args.out) else EXIT_NUMERICAL_FAILURE


def cmd_coefficients(args) -> int:
    try:
        coefficients = coth_half_series(args.max_order)
    except ValueError as e:
        raise ConfigurationError(str(e)) from e
    rows = [(c.order, c.numerator, c.denominator) for c in coefficients]
    return EXIT_OK if _write_rows(["order", "numerator", "denominator"], rows, None) else EXIT_NUMERICAL_FAILURE


def cmd_suite(args) -> int:
    return run_suite(args.kind, args.out)


COMMANDS = {
    "compare": cmd_compare,
    "consistency": cmd_consistency,
    "coefficients": cmd_coefficients,
    "suite": cmd_suite,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_file, args.verbose)
    try:
        logger.info(f"Running {args.command}")
        status = COMMANDS[args.command](args)
    except ConfigurationError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIGURATION_ERROR
    except Exception as e:
        logger.error(f"Fatal error: {str(e)}")
        raise
    finally:
        logger.info(f"{args.command} finished")
    return status


if __name__ == '__main__':
    sys.exit(main())
