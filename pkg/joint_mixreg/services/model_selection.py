"""Choosing the number of components by BIC."""

import logging

from joint_mixreg.config import FitConfig
from joint_mixreg.exceptions import FitFailedError, NumericalError, ValidationError
from joint_mixreg.models import Dataset, FitResult, ModelKind, SelectionResult

from .em_estimator import bic_score, fit, param_count

logger = logging.getLogger(__name__)

__all__ = ["bic_score", "param_count", "select_k"]


def select_k(
    d: Dataset,
    k_max: int,
    kind: ModelKind | str = ModelKind.JMR,
    cfg: FitConfig | None = None,
) -> SelectionResult:
    """Fit K = 1..k_max and keep the K with the largest BIC (smaller K on ties).

    A K whose fit fails, or for which the data are too few, is excluded and
    recorded in ``excluded`` rather than aborting the sweep.

    Raises:
        ValidationError: If k_max < 1
        FitFailedError: If no K could be fitted
    """
    if k_max < 1:
        raise ValidationError(f"k_max must be >= 1, got {k_max}")
    kind = ModelKind.parse(kind)

    fits: dict[int, FitResult] = {}
    excluded: dict[int, str] = {}
    for k in range(1, k_max + 1):
        try:
            fits[k] = fit(d, k, kind, cfg)
        except (NumericalError, ValidationError) as e:
            logger.warning(f"Excluding K={k} from BIC selection: {e}")
            excluded[k] = str(e)
            continue
        logger.info(f"K={k}: loglik={fits[k].loglik:.4f}, BIC={fits[k].bic:.4f}")

    if not fits:
        raise FitFailedError(
            f"No K in 1..{k_max} could be fitted", [f"K={k}: {msg}" for k, msg in excluded.items()]
        )

    best_k = None
    for k, result in fits.items():
        if best_k is None or result.bic > fits[best_k].bic:
            best_k = k
    assert best_k is not None
    return SelectionResult(best_k=best_k, fits=fits, excluded=excluded)
