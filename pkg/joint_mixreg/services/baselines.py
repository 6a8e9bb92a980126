"""Comparator estimators: OLS, covariate-only Gaussian mixtures and two-step MBC."""

import logging

import numpy as np

from joint_mixreg.config import FitConfig
from joint_mixreg.exceptions import DegenerateClusterError, DegenerateVarianceError, ValidationError
from joint_mixreg.models import (
    Component,
    Dataset,
    LinearModel,
    MbcModel,
    MixtureModel,
    ModelKind,
)
from joint_mixreg.utils.linalg_utils import least_squares_qr

from .em_estimator import fit
from .prediction import posterior_matrix

logger = logging.getLogger(__name__)


def fit_ols(d: Dataset) -> LinearModel:
    """Ordinary least squares of y on [1, Z, X] via a pivoted QR factorization.

    sigma2 is RSS / n and is exactly 0 for a perfect fit.

    Raises:
        ValidationError: If the dataset is empty
        SingularDesignError: If the design is rank deficient
    """
    if d.n == 0:
        raise ValidationError("Cannot fit OLS to an empty dataset")
    design = d.design_matrix()
    coef = least_squares_qr(design, d.y)
    resid = d.y - design @ coef
    return LinearModel(
        alpha=coef[0],
        zeta=coef[1 : 1 + d.q],
        beta=coef[1 + d.q :],
        sigma2=float(resid @ resid) / d.n,
    )


def fit_gmm_covariate(
    X: np.ndarray,
    n_components: int,
    cfg: FitConfig | None = None,
) -> MixtureModel:
    """Gaussian mixture on the covariates alone, with the same restarts and floors as fit."""
    X = np.asarray(X, dtype=float)
    d = Dataset(y=np.zeros(X.shape[0]), X=X)
    return fit(d, n_components, ModelKind.GMM, cfg).model


def fit_mbc(
    d: Dataset,
    n_components: int,
    cfg: FitConfig | None = None,
) -> MbcModel:
    """Model-based clustering on X followed by OLS within each hard cluster.

    Points are assigned to the component with the largest GMM posterior. The
    returned ``predictive`` model pairs each cluster's OLS line with its GMM
    covariate law, so posterior-weighted prediction from it uses exactly the
    GMM posteriors of a new covariate.

    Raises:
        DegenerateClusterError: If a cluster has fewer than p + q + 2 points
        DegenerateVarianceError: If a cluster fits exactly and y has no spread to floor against
    """
    cfg = cfg or FitConfig()
    gmm = fit_gmm_covariate(d.X, n_components, cfg)
    labels = np.argmax(posterior_matrix(gmm, d.X), axis=1)

    minimum = d.p + d.q + 2
    variance_floor = cfg.floors.variance_rel * float(np.var(d.y))
    cluster_fits = []
    components = []
    for k, gc in enumerate(gmm.components):
        rows = np.flatnonzero(labels == k)
        if rows.size < minimum:
            raise DegenerateClusterError(
                f"Cluster {k} has {rows.size} point(s); at least {minimum} are needed"
            )
        ols = fit_ols(d.subset(rows))
        sigma2 = max(ols.sigma2, variance_floor)
        if not sigma2 > 0:
            raise DegenerateVarianceError(f"Cluster {k} has zero residual variance")
        cluster_fits.append(ols)
        components.append(
            Component(
                alpha=ols.alpha, beta=ols.beta, zeta=ols.zeta, sigma2=sigma2, mu=gc.mu, cov=gc.cov
            )
        )
        logger.debug(f"MBC cluster {k}: {rows.size} points, {ols}")

    predictive = MixtureModel(pi=gmm.pi, components=tuple(components), kind=ModelKind.JMR)
    labels.setflags(write=False)
    return MbcModel(
        gmm=gmm, labels=labels, cluster_fits=tuple(cluster_fits), predictive=predictive
    )
