"""Leave-one-out cross-validation for scalar and functional designs."""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, replace

import numpy as np

from joint_mixreg.config import FitConfig
from joint_mixreg.exceptions import NumericalError, ValidationError
from joint_mixreg.interfaces import PresenterProtocol, ProgressCallback
from joint_mixreg.models import CvResult, Dataset, FunctionalDesign, ModelKind, ThresholdPoint
from joint_mixreg.services.baselines import fit_mbc, fit_ols
from joint_mixreg.services.em_estimator import fit
from joint_mixreg.services.functional import (
    assemble_design,
    fpca,
    project_scores,
    subset_curves,
)
from joint_mixreg.services.prediction import predict_many, threshold_filter
from joint_mixreg.utils.seeding import derive_seed

logger = logging.getLogger(__name__)

CV_METHODS = ("ols", "omr", "jmr", "mbc")


@dataclass(frozen=True)
class _FoldOutcome:
    prediction: float
    posteriors: np.ndarray | None


def parse_method(method: str) -> str:
    """Normalize a CV method name ("pcr" is accepted for "ols").

    Raises:
        ValidationError: If the method is unknown
    """
    name = str(method).strip().lower()
    if name == "pcr":
        name = "ols"
    if name not in CV_METHODS:
        raise ValidationError(f"Unknown method {method!r}; expected one of {CV_METHODS}")
    return name


def functional_split(
    design: FunctionalDesign, train_rows, test_rows
) -> tuple[Dataset, Dataset]:
    """Training and test datasets with FPCA computed on the training curves only."""
    train_curves = subset_curves(design.curves, train_rows)
    test_curves = subset_curves(design.curves, test_rows)
    eigen = fpca(train_curves, design.n_eigen)

    def build(curves) -> Dataset:
        ids = list(curves.subject_ids)
        return assemble_design(
            project_scores(curves, eigen),
            design.response.loc[ids],
            endpoint=None if design.endpoint is None else design.endpoint.loc[ids],
            invariants=None if design.invariants is None else design.invariants.loc[ids],
            truth=None if design.truth is None else design.truth.loc[ids],
        )

    return build(train_curves), build(test_curves)


def functional_dataset(design: FunctionalDesign) -> Dataset:
    """Full-sample dataset of a functional design (FPCA on every subject)."""
    rows = np.arange(design.n_subjects)
    return functional_split(design, rows, rows)[0]


def _dimensions(design: Dataset | FunctionalDesign) -> tuple[int, int, int]:
    if isinstance(design, Dataset):
        return design.n, design.p, design.q
    q = (design.endpoint is not None) + (
        0 if design.invariants is None else design.invariants.shape[1]
    )
    return design.n_subjects, design.n_eigen, int(q)


class CrossValidator:
    """Leave-one-subject-out CV with per-fold refits."""

    def __init__(
        self,
        presenter: PresenterProtocol,
        fit_config: FitConfig | None = None,
        max_workers: int = 1,
    ):
        """Initialize the cross-validator.

        Args:
            presenter: Presenter for user-facing messages
            fit_config: EM settings; each fold replaces the seed with its own
            max_workers: Number of folds fitted concurrently
        """
        self.presenter = presenter
        self.fit_config = fit_config or FitConfig()
        self.max_workers = max_workers

    def _split(self, design: Dataset | FunctionalDesign, i: int) -> tuple[Dataset, Dataset]:
        if isinstance(design, Dataset):
            return design.without(i), design.subset([i])
        train_rows = np.delete(np.arange(design.n_subjects), i)
        return functional_split(design, train_rows, [i])

    def _fold(
        self,
        design: Dataset | FunctionalDesign,
        method: str,
        n_components: int,
        i: int,
        seed: int,
    ) -> _FoldOutcome:
        train, test = self._split(design, i)
        if method == "ols":
            return _FoldOutcome(float(fit_ols(train).predict(test.X, test.Z)[0]), None)

        cfg = replace(self.fit_config, seed=derive_seed(seed, i), max_workers=1)
        if method == "mbc":
            model = fit_mbc(train, n_components, cfg).predictive
        else:
            model = fit(train, n_components, ModelKind.parse(method), cfg).model
        yhat, weights = predict_many(model, test.X, test.Z)
        return _FoldOutcome(float(yhat[0]), weights[0])

    def loocv(
        self,
        design: Dataset | FunctionalDesign,
        method: str,
        n_components: int = 2,
        seed: int = 0,
        progress_callback: ProgressCallback | None = None,
    ) -> CvResult:
        """Leave each subject out in turn, refit, and predict it.

        Fold i fits with seed derive_seed(seed, i). For a functional design the
        FPCA is recomputed on the n - 1 training curves of every fold. A fold
        whose fit fails is recorded in failed_folds with NaN outputs.

        Raises:
            ValidationError: If the method is unknown or n < K(p + q + 2) + 1
        """
        method = parse_method(method)
        n, p, q = _dimensions(design)
        k = 1 if method == "ols" else n_components
        if n < k * (p + q + 2) + 1:
            raise ValidationError(
                f"Leave-one-out with K={k}, p={p}, q={q} needs at least "
                f"{k * (p + q + 2) + 1} subjects, got {n}"
            )
        if isinstance(design, Dataset):
            subject_ids = tuple(str(i + 1) for i in range(n))
            y = np.asarray(design.y)
        else:
            subject_ids = design.subject_ids
            y = design.response.loc[list(subject_ids)].to_numpy(dtype=float)

        predictions = np.full(n, np.nan)
        posteriors = None if method == "ols" else np.full((n, n_components), np.nan)
        failed = []

        if progress_callback:
            progress_callback.on_start(n, f"Leave-one-out CV ({method.upper()})")

        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            future_to_fold = {
                executor.submit(self._fold, design, method, n_components, i, seed): i
                for i in range(n)
            }
            for completed, future in enumerate(as_completed(future_to_fold), 1):
                i = future_to_fold[future]
                try:
                    outcome = future.result()
                except (NumericalError, ValidationError) as e:
                    failed.append(i)
                    logger.warning(f"CV fold {i} ({subject_ids[i]}) failed: {e}")
                    if progress_callback:
                        progress_callback.on_error(subject_ids[i], str(e))
                    continue
                predictions[i] = outcome.prediction
                if posteriors is not None and outcome.posteriors is not None:
                    posteriors[i] = outcome.posteriors
                if progress_callback:
                    progress_callback.on_progress(completed, subject_ids[i])

        if progress_callback:
            progress_callback.on_complete()
        if failed:
            self.presenter.show_warning(f"{len(failed)} of {n} CV folds failed")

        return CvResult(
            method=method,
            subject_ids=subject_ids,
            predictions=predictions,
            squared_errors=(y - predictions) ** 2,
            posteriors=posteriors,
            failed_folds=tuple(sorted(failed)),
            seed=seed,
        )


def loocv(
    design: Dataset | FunctionalDesign,
    method: str,
    n_components: int = 2,
    cfg: FitConfig | None = None,
    seed: int = 0,
) -> CvResult:
    """Sequential leave-one-out CV without user-facing output."""
    from joint_mixreg.presenters import NullPresenter

    return CrossValidator(NullPresenter(), cfg).loocv(design, method, n_components, seed)


def cv_threshold_curve(
    result: CvResult,
    thresholds,
    posteriors: np.ndarray | None = None,
) -> list[ThresholdPoint]:
    """CV over the subjects whose largest posterior reaches each threshold.

    posteriors defaults to the result's own; passing another method's matrix
    restricts this result's errors to the subsample that method selects.
    A threshold that retains no subject yields cv=None.

    Raises:
        ValidationError: If no posteriors are available or shapes disagree
    """
    posteriors = result.posteriors if posteriors is None else np.asarray(posteriors, dtype=float)
    if posteriors is None:
        raise ValidationError(f"Method {result.method!r} has no posteriors to threshold")
    if posteriors.ndim != 2 or posteriors.shape[0] != result.n:
        raise ValidationError(f"Posteriors must have {result.n} rows, got shape {posteriors.shape}")

    usable = result.succeeded & np.all(np.isfinite(posteriors), axis=1)
    safe = np.where(usable[:, None], posteriors, 0.0)
    points = []
    for t in thresholds:
        mask = threshold_filter(safe, float(t)) & usable
        retained = int(mask.sum())
        cv = float(np.mean(result.squared_errors[mask])) if retained else None
        points.append(ThresholdPoint(threshold=float(t), cv=cv, retained=retained))
    return points
