"""Main CLI entry point for joint_mixreg."""

import argparse
import logging
import sys
from pathlib import Path

from joint_mixreg import __version__
from joint_mixreg.cli.commands import benchmark, cluster, cv, fit, fpca, mspe, predict, simulate
from joint_mixreg.cli.common import EXIT_USAGE, exit_code_for
from joint_mixreg.config import load_option_file
from joint_mixreg.exceptions import ConfigurationError, JointMixregException
from joint_mixreg.presenters import ConsolePresenter, NullPresenter

logger = logging.getLogger(__name__)

INVARIANT_HELP = "Comma-separated covariate columns treated as invariant"

COMMANDS = {
    "fit": fit.fit_command,
    "predict": predict.predict_command,
    "cluster": cluster.cluster_command,
    "simulate": simulate.simulate_command,
    "benchmark": benchmark.benchmark_command,
    "fpca": fpca.fpca_command,
    "cv": cv.cv_command,
    "mspe": mspe.mspe_command,
}


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file of option values (flags win on conflict)")
    common.add_argument("-v", "--verbose", action="store_true", help="Log progress (INFO)")
    common.add_argument("--debug", action="store_true", help="Log diagnostics (DEBUG)")
    common.add_argument("-q", "--quiet", action="store_true", help="Suppress status output")
    return common


def _fit_options() -> argparse.ArgumentParser:
    fitting = argparse.ArgumentParser(add_help=False)
    fitting.add_argument("--restarts", type=int, help="EM restarts (default: 10)")
    fitting.add_argument("--seed", type=int, default=0, help="Root random seed (default: 0)")
    fitting.add_argument("--max-iter", type=int, help="EM iteration cap (default: 1000)")
    fitting.add_argument("--tol", type=float, help="Relative log-likelihood tolerance")
    fitting.add_argument(
        "--threads", type=int, help="Worker threads (default: $JOINT_MIXREG_THREADS or 1)"
    )
    return fitting


def _curve_options() -> argparse.ArgumentParser:
    curves = argparse.ArgumentParser(add_help=False)
    curves.add_argument("--order", type=int, default=5, help="B-spline order (default: 5)")
    curves.add_argument("--grid", type=int, default=201, help="Quadrature grid size (default: 201)")
    curves.add_argument("--knots", type=int, help="Breakpoints including the domain ends")
    curves.add_argument("--m", type=int, default=3, help="Number of eigenfunctions (default: 3)")
    curves.add_argument(
        "--derivative",
        action="store_true",
        help="Use the first derivative of each smoothed curve as the covariate",
    )
    curves.add_argument(
        "--endpoint-as-invariant",
        action="store_true",
        help="Add the curve value at the right end of the domain as an invariant covariate",
    )
    return curves


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    """The top-level parser and its subcommand parsers by name."""
    parser = argparse.ArgumentParser(
        prog="joint_mixreg",
        description="Joint mixture regression: fitting, prediction, functional covariates "
        "and simulation benchmarks",
        epilog="Use 'joint_mixreg <command> --help' for command-specific help",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    common = _common_options()
    fitting = _fit_options()
    curves = _curve_options()
    subs: dict[str, argparse.ArgumentParser] = {}

    # joint_mixreg fit <dataset> -o model.json
    p = subparsers.add_parser(
        "fit",
        parents=[common, fitting],
        help="Fit a mixture model to a dataset",
        description="Fit a JMR, OMR or covariate-only mixture by EM, optionally choosing K by BIC",
    )
    p.add_argument("dataset", help="Dataset CSV (y, x1..xp, z1..zq[, truth])")
    p.add_argument("-o", "--output", help="Model JSON to write")
    p.add_argument("--kind", default="jmr", choices=["jmr", "omr", "gmm"], help="Model kind")
    p.add_argument("--k", type=int, default=2, help="Number of components (default: 2)")
    p.add_argument("--k-max", type=int, help="Choose K in 1..K_MAX by BIC instead of --k")
    p.add_argument("--invariant-cols", help=INVARIANT_HELP)
    subs["fit"] = p

    # joint_mixreg predict <model> <covariates> -o predictions.csv
    p = subparsers.add_parser(
        "predict",
        parents=[common],
        help="Predict responses from a fitted model",
        description="Posterior-weighted predictions with per-component posterior columns",
    )
    p.add_argument("model", help="Model JSON written by 'fit'")
    p.add_argument("covariates", help="Covariate CSV (x1..xp, z1..zq; y is ignored)")
    p.add_argument("-o", "--output", help="Predictions CSV to write")
    p.add_argument("--invariant-cols", help=INVARIANT_HELP)
    subs["predict"] = p

    # joint_mixreg cluster <model> <dataset> -o clusters.csv
    p = subparsers.add_parser(
        "cluster",
        parents=[common],
        help="Assign observations to components",
        description="Assign each (y, x) pair to the component with the largest posterior",
    )
    p.add_argument("model", help="Model JSON written by 'fit'")
    p.add_argument("dataset", help="Dataset CSV")
    p.add_argument("-o", "--output", help="Assignments CSV to write")
    p.add_argument("--invariant-cols", help=INVARIANT_HELP)
    subs["cluster"] = p

    # joint_mixreg simulate --scenario 1 --n 100 -o train.csv
    p = subparsers.add_parser(
        "simulate",
        parents=[common],
        help="Draw a dataset from a simulation scenario",
        description="Sample training (and optional test) data with truth labels",
    )
    p.add_argument("--scenario", type=int, default=1, help="Scenario 1-4 (default: 1)")
    p.add_argument("--n", type=int, default=100, help="Training sample size (default: 100)")
    p.add_argument("--seed", type=int, default=0, help="Root random seed (default: 0)")
    p.add_argument("-o", "--output", help="Training CSV to write")
    p.add_argument("--test-output", help="Also write the independent test sample here")
    p.add_argument("--test-n", type=int, default=500, help="Test sample size (default: 500)")
    subs["simulate"] = p

    # joint_mixreg benchmark --scenarios 1,2 --ns 100,300 --reps 200 -o tables.csv
    p = subparsers.add_parser(
        "benchmark",
        parents=[common, fitting],
        help="Compare OLS, OMR, JMR and MBC on simulated scenarios",
        description="Replicated MSPE, misclassification and parameter-RMSE comparison",
    )
    p.add_argument("--scenarios", default="1,2,3,4", help="Comma-separated scenario ids")
    p.add_argument("--ns", default="100,300", help="Comma-separated training sizes")
    p.add_argument("--reps", type=int, default=200, help="Replicates per cell (default: 200)")
    p.add_argument("--test-n", type=int, default=500, help="Test sample size (default: 500)")
    p.add_argument(
        "--max-failure-rate",
        type=float,
        default=0.05,
        help="Largest tolerated fraction of failed replicates (default: 0.05)",
    )
    p.add_argument("-o", "--output", help="Long-format results CSV to write")
    subs["benchmark"] = p

    # joint_mixreg fpca <curves> -o eigen.json
    p = subparsers.add_parser(
        "fpca",
        parents=[common, curves],
        help="Smooth curves and compute functional principal components",
        description="B-spline smoothing, FPCA on a quadrature grid and score projection",
    )
    p.add_argument("curves", help="Curve CSV (subject_id, t, value)")
    p.add_argument("-o", "--output", help="Eigen-system JSON to write")
    p.add_argument("--scores", help="Scores CSV to write (default: <output>.scores.csv)")
    subs["fpca"] = p

    # joint_mixreg cv (--dataset data.csv | --curves c.csv --response r.csv) -o cv.csv
    p = subparsers.add_parser(
        "cv",
        parents=[common, fitting, curves],
        help="Leave-one-out cross-validation",
        description="Leave-one-subject-out CV with threshold curves and misclassification counts",
    )
    p.add_argument("--dataset", help="Scalar dataset CSV")
    p.add_argument("--curves", help="Curve CSV (subject_id, t, value)")
    p.add_argument("--response", help="Per-subject CSV with subject_id, y[, truth]")
    p.add_argument("--invariants", help="Per-subject CSV of invariant covariates")
    p.add_argument("--methods", default="ols,omr,jmr", help="Comma-separated methods")
    p.add_argument("--k", type=int, default=2, help="Number of components (default: 2)")
    p.add_argument("--thresholds", help="Comma-separated posterior thresholds in [0.5, 1)")
    p.add_argument("-o", "--output", help="CV report CSV to write")
    subs["cv"] = p

    # joint_mixreg mspe <model> -o report.json
    p = subparsers.add_parser(
        "mspe",
        parents=[common],
        help="Monte-Carlo MSPE decomposition of a JMR model",
        description="Excess MSPE of adaptive and fixed weighting with dominance checks",
    )
    p.add_argument("model", help="Model JSON written by 'fit'")
    p.add_argument("-o", "--output", help="Report JSON to write")
    p.add_argument("--mc-n", type=int, default=200_000, help="Monte-Carlo draws")
    p.add_argument("--seed", type=int, default=0, help="Root random seed (default: 0)")
    p.add_argument("--chunk-size", type=int, default=50_000, help="Draws per chunk")
    p.add_argument("--threads", type=int, help="Worker threads")
    p.add_argument("--weights", help="Comma-separated fixed weights (default: pi)")
    p.add_argument(
        "--beta-star",
        help="Biased slope limits, components separated by ';' (e.g. '1,1;1,2')",
    )
    p.add_argument("--pi-star", help="Biased mixing limits (default: pi)")
    subs["mspe"] = p

    return parser, subs


def _configure_logging(args) -> None:
    level = logging.WARNING
    if getattr(args, "debug", False):
        level = logging.DEBUG
    elif getattr(args, "verbose", False):
        level = logging.INFO
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _apply_config_file(
    parser: argparse.ArgumentParser,
    subparser: argparse.ArgumentParser,
    argv: list[str] | None,
    path: Path,
) -> argparse.Namespace:
    """Re-parse with config-file values installed as subcommand defaults."""
    options = load_option_file(path)
    options.pop("config", None)
    known = {action.dest for action in subparser._actions}
    unknown = sorted(set(options) - known)
    if unknown:
        raise ConfigurationError(f"Config file {path} has unknown option(s): {unknown}")
    defaults = {
        k: ",".join(str(v) for v in value) if isinstance(value, list) else value
        for k, value in options.items()
    }
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    """Main CLI entry point with subcommands."""
    parser, subs = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    presenter = NullPresenter() if args.quiet else ConsolePresenter()
    try:
        if args.config:
            args = _apply_config_file(parser, subs[args.command], argv, Path(args.config))
        _configure_logging(args)
        logger.debug(f"Running {args.command} with {vars(args)}")
        return COMMANDS[args.command](args, presenter)
    except (JointMixregException, OSError) as e:
        ConsolePresenter().show_error(str(e))
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
