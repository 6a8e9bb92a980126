"""CLI command for leave-one-out cross-validation."""

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from joint_mixreg.cli.commands.fpca import smoothed_covariate
from joint_mixreg.cli.common import (
    EXIT_OK,
    app_config,
    fit_config,
    float_list,
    name_list,
    require_output,
)
from joint_mixreg.config import FitConfig
from joint_mixreg.exceptions import ConfigurationError, DataParseError, NumericalError
from joint_mixreg.interfaces import PresenterProtocol
from joint_mixreg.models import CvResult, Dataset, FunctionalDesign, ModelKind
from joint_mixreg.orchestration import CrossValidator, cv_threshold_curve
from joint_mixreg.orchestration.benchmark_runner import misclassification_count
from joint_mixreg.orchestration.cross_validation import functional_dataset, parse_method
from joint_mixreg.presenters import ConsoleProgressCallback, NullProgressCallback
from joint_mixreg.services.baselines import fit_mbc
from joint_mixreg.services.dataset_io import (
    align_subjects,
    read_curves,
    read_dataset,
    read_subject_table,
    write_frame,
)
from joint_mixreg.services.em_estimator import fit
from joint_mixreg.services.functional import evaluate_curves
from joint_mixreg.utils.file_utils import derived_path

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["method", "metric", "threshold", "value"]


def _functional_design(args) -> FunctionalDesign:
    if not args.response:
        raise ConfigurationError("--curves requires --response")
    raw = read_curves(Path(args.curves))
    level, covariate = smoothed_covariate(args, raw)
    ids = covariate.subject_ids

    response_path = Path(args.response)
    table = align_subjects(read_subject_table(response_path), ids, response_path)
    if "y" not in table.columns:
        raise DataParseError(f"{response_path}: missing column 'y'", line=1)
    truth = table["truth"] if "truth" in table.columns else None

    invariants = None
    if args.invariants:
        path = Path(args.invariants)
        invariants = align_subjects(read_subject_table(path), ids, path)
    endpoint = None
    if args.endpoint_as_invariant:
        endpoint = pd.Series(evaluate_curves(level, level.domain[1]), index=list(ids))

    return FunctionalDesign(
        curves=covariate,
        response=table["y"],
        n_eigen=args.m,
        endpoint=endpoint,
        invariants=invariants,
        truth=truth,
    )


def _load_design(args) -> Dataset | FunctionalDesign:
    if bool(args.dataset) == bool(args.curves):
        raise ConfigurationError("Give exactly one of --dataset or --curves")
    if args.dataset:
        return read_dataset(Path(args.dataset))
    return _functional_design(args)


def _misclassified(
    design: Dataset | FunctionalDesign, method: str, n_components: int, cfg: FitConfig
) -> int | None:
    """Misclassified subjects of a full-sample fit, or None without truth labels."""
    d = design if isinstance(design, Dataset) else functional_dataset(design)
    if d.truth is None or method == "ols":
        return None
    if method == "mbc":
        labels = fit_mbc(d, n_components, cfg).labels
    else:
        labels = fit(d, n_components, ModelKind.parse(method), cfg).labels()
    n_labels = max(n_components, int(d.truth.max()) + 1)
    return misclassification_count(labels, d.truth, n_labels)


def _row(method: str, metric: str, threshold: float, value: float) -> dict:
    return {"method": method, "metric": metric, "threshold": threshold, "value": float(value)}


def _report_rows(
    results: dict[str, CvResult], thresholds: list[float], presenter: PresenterProtocol
) -> list[dict]:
    rows = []
    reference = results["jmr"].posteriors if "jmr" in results else None
    for method, result in results.items():
        rows.append(_row(method, "cv", np.nan, result.cv))
        rows.append(_row(method, "failed_folds", np.nan, len(result.failed_folds)))
        if not thresholds:
            continue
        posteriors = result.posteriors if result.posteriors is not None else reference
        if posteriors is None:
            presenter.show_warning(f"No posteriors to threshold {method.upper()} errors with")
            continue
        for point in cv_threshold_curve(result, thresholds, posteriors):
            cv = np.nan if point.cv is None else point.cv
            rows.append(_row(method, "cv", point.threshold, cv))
            rows.append(_row(method, "retained", point.threshold, point.retained))
    return rows


def cv_command(args, presenter: PresenterProtocol) -> int:
    """Execute the cv subcommand.

    Writes a long-format report (method, metric, threshold, value) to
    --output and per-subject fold results to ``<output>.folds.csv``. Methods
    without posteriors are thresholded with the JMR posteriors when JMR is
    among the methods.
    """
    output = require_output(args)
    config = app_config(args)
    cfg = fit_config(args, config)
    methods = [parse_method(m) for m in name_list(args.methods)]
    if not methods:
        raise ConfigurationError("--methods must name at least one method")
    thresholds = float_list(args.thresholds, "--thresholds") if args.thresholds else []

    design = _load_design(args)
    validator = CrossValidator(presenter, cfg, max_workers=config.max_workers)
    progress = NullProgressCallback() if args.quiet else ConsoleProgressCallback()

    results: dict[str, CvResult] = {}
    for method in dict.fromkeys(methods):
        results[method] = validator.loocv(design, method, args.k, cfg.seed, progress)
        presenter.show_cv_result(results[method])

    rows = _report_rows(results, thresholds, presenter)
    for method in results:
        try:
            count = _misclassified(design, method, args.k, cfg)
        except NumericalError as e:
            logger.warning(f"Full-sample {method.upper()} fit failed: {e}")
            continue
        if count is not None:
            presenter.show_info(f"{method.upper()} misclassified {count} subject(s)")
            rows.append(_row(method, "misclassified", np.nan, count))

    write_frame(output, pd.DataFrame(rows, columns=REPORT_COLUMNS))
    folds = pd.concat(
        [r.to_frame().assign(method=m) for m, r in results.items()], ignore_index=True
    )
    write_frame(derived_path(output, ".folds.csv"), folds)
    presenter.show_success(f"CV report written to {output}")
    return EXIT_OK
