from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from .config import (
    HTTP_TIMEOUT_SECONDS,
    LOG_LEVEL,
    OUTPUT_DIR,
    REPLICATES,
    SEED,
    SLICES,
    WINE_BASE_URL,
    WINE_DATA_DIR,
    WORKERS,
)
from .dataio import abbreviate, analyze, format_report, load_csv, write_qq_files
from .datasets import WINE_COLORS, fetch_wine
from .distributions import DistributionSpec, SeededStream, covariance_scale, sample
from .errors import ConfigInvalid, DegenerateSpectrum, IoError, PsrfrError
from .estimators import METHODS, fit_method
from .models import COVARIANCE_SCENARIOS, MODEL_IDS, covariance_for, default_covariance, default_spec
from .montecarlo import ExperimentConfig, grid
from .tables import PRESETS, format_aggregate_table, table_configs
from .utils import configure_logging, parse_float_list, parse_name_list, utc_now

logger = logging.getLogger(__name__)

DIST_CHOICES = ("normal", "t", "cauchy", "pe", "mixture")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}") from exc
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {number}")
    return number


def _methods(value: str) -> tuple[str, ...]:
    names = tuple(parse_name_list(value))
    unknown = [name for name in names if name not in METHODS]
    if not names or unknown:
        raise argparse.ArgumentTypeError(f"methods must be a comma list drawn from {', '.join(METHODS)}")
    return names


def _diagonal(value: str) -> list[float]:
    try:
        entries = parse_float_list(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {value!r}") from exc
    if not entries:
        raise argparse.ArgumentTypeError("the covariance diagonal is empty")
    return entries


def _covariance(args: argparse.Namespace, kind: str) -> np.ndarray:
    if args.cov_diag is not None:
        sigma = np.diag(args.cov_diag)
    elif args.cov is not None:
        sigma = covariance_for(args.cov)
    else:
        return default_covariance(kind, args.p if args.p is not None else 10)
    if args.p is not None and args.p != sigma.shape[0]:
        raise ConfigInvalid(f"--p {args.p} does not match the {sigma.shape[0]}-dimensional covariance")
    return sigma


def _distribution(args: argparse.Namespace) -> DistributionSpec:
    kind = args.dist
    if kind == "cauchy":
        return DistributionSpec.student_t(_covariance(args, "t"), 1.0)
    if kind == "t":
        return DistributionSpec.student_t(_covariance(args, kind), args.nu)
    if kind == "pe":
        return DistributionSpec.power_exponential(_covariance(args, kind), args.beta)
    if kind == "mixture":
        return DistributionSpec.mixture(_covariance(args, kind), args.mixture_weight, args.halfwidth)
    return DistributionSpec.normal(_covariance(args, kind))


def _add_distribution_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dist", choices=DIST_CHOICES, default="normal", help="predictor law")
    parser.add_argument("--nu", type=float, default=3.0, help="Student's t degrees of freedom")
    parser.add_argument("--beta", type=float, default=1.0, help="power exponential kurtosis parameter")
    parser.add_argument("--p", type=_positive_int, default=None, help="dimension (default 10)")
    parser.add_argument("--cov", choices=COVARIANCE_SCENARIOS, default=None, help="covariance preset")
    parser.add_argument("--cov-diag", type=_diagonal, default=None, help="explicit covariance diagonal, e.g. 1,2,3")
    parser.add_argument("--mixture-weight", type=float, default=0.8, help="probability of the normal branch")
    parser.add_argument("--halfwidth", type=float, default=3.0, help="half-width of the uniform branch")


def _add_data_flags(parser: argparse.ArgumentParser, response_required: bool = True) -> None:
    parser.add_argument("--data", required=True, help="headered CSV file")
    parser.add_argument("--response", required=response_required, default="quality", help="response column")
    parser.add_argument("--delimiter", default=",", help="field delimiter (the UCI wine files use ';')")
    parser.add_argument("--limit", type=int, default=None, help="keep only the first rows after the header")


def run_simulate(args: argparse.Namespace) -> int:
    distribution = _distribution(args)
    k = args.k if args.k is not None else default_spec(args.model, distribution.p, args.sigma).k
    config = ExperimentConfig(
        model_id=args.model,
        distribution=distribution,
        n=args.n,
        k=k,
        methods=args.methods,
        slices=args.slices,
        replicates=args.reps,
        base_seed=args.seed,
        sigma_noise=args.sigma,
    )
    out = args.out or str(Path(OUTPUT_DIR) / "replicates.csv")
    aggregate_out = args.aggregate_out or str(Path(OUTPUT_DIR) / "aggregate.csv")
    results = grid([config], out, aggregate_out, workers=args.workers)
    print(format_aggregate_table(row for _, rows in results for row in rows))
    return EXIT_OK


def run_tables(args: argparse.Namespace) -> int:
    configs = table_configs(args.preset, replicates=args.reps, base_seed=args.seed)
    out_dir = Path(args.out_dir)
    results = grid(
        configs,
        out_dir / f"{args.preset}_replicates.csv",
        out_dir / f"{args.preset}_aggregate.csv",
        workers=args.workers,
    )
    print(format_aggregate_table(row for _, rows in results for row in rows))
    return EXIT_OK


def run_fit(args: argparse.Namespace) -> int:
    ds = load_csv(args.data, args.response, args.limit, args.delimiter)
    estimate = fit_method(args.method, ds.predictors, ds.response, args.k, args.slices)
    columns = [f"b{j + 1}" for j in range(estimate.basis.shape[1])]
    print(f"method: {estimate.method}")
    print("| variable | " + " | ".join(columns) + " |")
    print("|" + "---|" * (len(columns) + 1))
    for name, row in zip(ds.column_names, estimate.basis):
        print(f"| {abbreviate(name)} | " + " | ".join(f"{value:.6g}" for value in row) + " |")
    print("eigenvalues: [" + ", ".join(f"{value:.6g}" for value in estimate.eigenvalues) + "]")
    try:
        proportions = estimate.proportions()
    except DegenerateSpectrum:
        logger.warning("%s spectrum does not sum to a positive total; proportions omitted", estimate.method)
    else:
        print("proportions: [" + ", ".join(f"{value:.6g}" for value in proportions) + "]")
    return EXIT_OK


def run_analyze(args: argparse.Namespace) -> int:
    ds = load_csv(args.data, args.response, args.limit, args.delimiter)
    print(format_report(analyze(ds, args.threshold)))
    return EXIT_OK


def run_sample(args: argparse.Namespace) -> int:
    spec = _distribution(args)
    draws = sample(spec, args.n, SeededStream(args.seed, args.stream))
    frame = pd.DataFrame(draws.values, columns=[f"x{j + 1}" for j in range(spec.p)])
    target = Path(args.out)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(target, index=False, lineterminator="\n")
    except OSError as exc:
        raise IoError(f"cannot write {target}: {exc}") from exc
    logger.info("wrote %d draws of dimension %d to %s", args.n, spec.p, target)
    scale = covariance_scale(spec)
    if scale is not None:
        logger.info("population covariance = %.6g * sigma", scale)
    return EXIT_OK


def run_qq(args: argparse.Namespace) -> int:
    ds = load_csv(args.data, args.response, args.limit, args.delimiter)
    for path in write_qq_files(ds, args.out_dir):
        print(path)
    return EXIT_OK


def run_fetch_wine(args: argparse.Namespace) -> int:
    colors = WINE_COLORS if args.color == "both" else (args.color,)
    for color in colors:
        print(fetch_wine(color, args.out_dir, args.base_url, args.timeout, args.force))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default=LOG_LEVEL, help="DEBUG, INFO, WARNING or ERROR")

    parser = _Parser(prog="psrfr", description="Principal square response forward regression toolkit")
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", parents=[common], help="run one Monte Carlo configuration")
    simulate.add_argument("--model", choices=MODEL_IDS, required=True, help="model id")
    _add_distribution_flags(simulate)
    simulate.add_argument("--n", type=_positive_int, default=500)
    simulate.add_argument("--k", type=_positive_int, default=None, help="fitted dimension (default: the model's)")
    simulate.add_argument("--sigma", type=float, default=None, help="noise scale (default: the model's)")
    simulate.add_argument(
        "--methods", type=_methods, default=("psrfr",), help=f"comma list from {', '.join(METHODS)}"
    )
    simulate.add_argument("--slices", type=_positive_int, default=SLICES)
    simulate.add_argument("--reps", type=_positive_int, default=REPLICATES)
    simulate.add_argument("--seed", type=int, default=SEED)
    simulate.add_argument("--out", default=None, help="replicate CSV path")
    simulate.add_argument("--aggregate-out", default=None, help="aggregate CSV path")
    simulate.add_argument("--workers", type=_positive_int, default=WORKERS)
    simulate.set_defaults(handler=run_simulate)

    tables = commands.add_parser("tables", parents=[common], help="run a simulation table preset")
    tables.add_argument("--preset", choices=PRESETS, required=True)
    tables.add_argument("--reps", type=_positive_int, default=REPLICATES)
    tables.add_argument("--seed", type=int, default=SEED)
    tables.add_argument("--out-dir", default=OUTPUT_DIR)
    tables.add_argument("--workers", type=_positive_int, default=WORKERS)
    tables.set_defaults(handler=run_tables)

    fit = commands.add_parser("fit", parents=[common], help="fit one estimator to a CSV file")
    _add_data_flags(fit)
    fit.add_argument("--k", type=_positive_int, required=True)
    fit.add_argument("--method", choices=METHODS, default="psrfr")
    fit.add_argument("--slices", type=_positive_int, default=SLICES)
    fit.set_defaults(handler=run_fit)

    analysis = commands.add_parser("analyze", parents=[common], help="rank predictors of a CSV file")
    _add_data_flags(analysis, response_required=False)
    analysis.add_argument("--threshold", type=float, default=0.99, help="eigenvalue proportion target")
    analysis.set_defaults(handler=run_analyze)

    draw = commands.add_parser("sample", parents=[common], help="write predictor draws to CSV")
    _add_distribution_flags(draw)
    draw.add_argument("--n", type=_positive_int, default=100)
    draw.add_argument("--seed", type=int, default=SEED)
    draw.add_argument("--stream", type=int, default=0)
    draw.add_argument("--out", required=True)
    draw.set_defaults(handler=run_sample)

    qq = commands.add_parser("qq", parents=[common], help="write normal QQ points and a predictor summary")
    _add_data_flags(qq, response_required=False)
    qq.add_argument("--out-dir", default=str(Path(OUTPUT_DIR) / "qq"))
    qq.set_defaults(handler=run_qq)

    wine = commands.add_parser("fetch-wine", parents=[common], help="download the UCI wine-quality files")
    wine.add_argument("--color", choices=(*WINE_COLORS, "both"), default="both")
    wine.add_argument("--out-dir", default=WINE_DATA_DIR)
    wine.add_argument("--base-url", default=WINE_BASE_URL)
    wine.add_argument("--timeout", type=_positive_int, default=HTTP_TIMEOUT_SECONDS)
    wine.add_argument("--force", action="store_true", help="download even when the file exists")
    wine.set_defaults(handler=run_fetch_wine)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    configure_logging(args.log_level)
    logger.debug("%s started at %s", args.command, utc_now().isoformat())
    try:
        return args.handler(args)
    except ConfigInvalid as exc:
        logger.error("%s: %s", exc.code, exc)
        return EXIT_USAGE
    except PsrfrError as exc:
        logger.error("%s: %s", exc.code, exc)
        return EXIT_RUNTIME


if __name__ == "__main__":
    raise SystemExit(main())
