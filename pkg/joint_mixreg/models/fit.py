"""Data models for estimation results."""

from dataclasses import dataclass, field

import numpy as np

from joint_mixreg.exceptions import DimensionMismatchError, ValidationError
from joint_mixreg.utils.array_utils import readonly

from .dataset import Responsibilities
from .mixture import MixtureModel


@dataclass(frozen=True, eq=False)
class FitResult:
    """Outcome of a best-of-restarts EM fit."""

    model: MixtureModel
    loglik_trace: tuple[float, ...]
    bic: float
    tau: Responsibilities
    converged: bool
    restart_index: int
    seed: int = 0
    failed_restarts: tuple[str, ...] = field(default_factory=tuple)

    @property
    def loglik(self) -> float:
        """Log-likelihood at the returned model."""
        return self.loglik_trace[-1]

    @property
    def iterations(self) -> int:
        return len(self.loglik_trace)

    def labels(self) -> np.ndarray:
        """Training assignments (argmax of the converged responsibilities)."""
        return self.tau.labels()

    def __str__(self) -> str:
        status = "converged" if self.converged else "max_iter reached"
        return (
            f"FitResult(K={self.model.K}, kind={self.model.kind.value}, "
            f"loglik={self.loglik:.4f}, bic={self.bic:.4f}, iterations={self.iterations}, "
            f"restart={self.restart_index}, {status})"
        )


@dataclass(frozen=True, eq=False)
class LinearModel:
    """A single linear regression y = alpha + z'zeta + x'beta + e, e ~ N(0, sigma2).

    sigma2 is the maximum-likelihood residual variance and may be 0 for an
    exact fit.
    """

    alpha: float
    beta: np.ndarray
    zeta: np.ndarray
    sigma2: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", readonly(self.beta, 1, "beta"))
        object.__setattr__(self, "zeta", readonly(self.zeta, 1, "zeta"))
        if self.sigma2 < 0:
            raise ValidationError(f"sigma2 must be non-negative, got {self.sigma2}")
        object.__setattr__(self, "sigma2", float(self.sigma2))

    @property
    def p(self) -> int:
        return int(self.beta.size)

    @property
    def q(self) -> int:
        return int(self.zeta.size)

    def predict(self, X: np.ndarray, Z: np.ndarray | None = None) -> np.ndarray:
        """Fitted values for the rows of X (and Z)."""
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.p:
            raise DimensionMismatchError(f"X has shape {X.shape}, expected (n, {self.p})")
        out = self.alpha + X @ self.beta
        if self.q:
            if Z is None or np.asarray(Z).shape != (X.shape[0], self.q):
                raise DimensionMismatchError(f"Expected Z with {self.q} column(s)")
            out = out + np.asarray(Z, dtype=float) @ self.zeta
        return out

    def __str__(self) -> str:
        return (
            f"LinearModel(alpha={self.alpha:.4g}, beta={np.round(self.beta, 4).tolist()}, "
            f"sigma2={self.sigma2:.4g})"
        )


@dataclass(frozen=True, eq=False)
class MbcModel:
    """Two-step model-based clustering fit.

    Attributes:
        gmm: Gaussian mixture fitted to the covariates
        labels: Hard training assignments (argmax of the GMM posterior)
        cluster_fits: Per-cluster OLS fits, indexed like gmm components
        predictive: JMR-form model combining gmm and cluster_fits; its
            prediction weights are exactly the GMM covariate posteriors
    """

    gmm: MixtureModel
    labels: np.ndarray
    cluster_fits: tuple[LinearModel, ...]
    predictive: MixtureModel

    @property
    def K(self) -> int:
        return self.gmm.K


@dataclass(frozen=True, eq=False)
class SelectionResult:
    """BIC sweep over K = 1..k_max."""

    best_k: int
    fits: dict[int, FitResult]
    excluded: dict[int, str] = field(default_factory=dict)

    @property
    def best(self) -> FitResult:
        return self.fits[self.best_k]

    @property
    def bic_table(self) -> dict[int, float]:
        return {k: fit.bic for k, fit in sorted(self.fits.items())}

    def __str__(self) -> str:
        bics = ", ".join(f"K={k}: {bic:.3f}" for k, bic in self.bic_table.items())
        return f"SelectionResult(best_k={self.best_k}, {bics})"
