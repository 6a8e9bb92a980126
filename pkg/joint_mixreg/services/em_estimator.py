"""EM estimation for joint (JMR), conditional (OMR) and covariate-only (GMM) mixtures."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp
from sklearn.cluster import KMeans, kmeans_plusplus
from sklearn.metrics import pairwise_distances_argmin

from joint_mixreg.config import FitConfig, Floors
from joint_mixreg.exceptions import (
    ComponentCollapseError,
    DegenerateVarianceError,
    FitFailedError,
    NumericalError,
    ValidationError,
)
from joint_mixreg.models import (
    Component,
    Dataset,
    FitResult,
    MixtureModel,
    ModelKind,
    Responsibilities,
)
from joint_mixreg.utils.linalg_utils import floor_covariance, weighted_least_squares
from joint_mixreg.utils.seeding import derive_seed, make_rng

from .density import component_log_densities

logger = logging.getLogger(__name__)


def param_count(n_components: int, p: int, q: int, kind: ModelKind | str) -> int:
    """Number of free parameters |Psi|.

    JMR: (K-1) + K(1 + q + p + 1 + p + p(p+1)/2)
    OMR: (K-1) + K(1 + q + p + 1)
    GMM: (K-1) + K(p + p(p+1)/2)
    """
    if min(n_components, p, q) < 0:
        raise ValidationError("K, p and q must be non-negative")
    kind = ModelKind.parse(kind)
    regression = 1 + q + p + 1
    covariate = p + p * (p + 1) // 2
    per_component = 0
    if kind.has_regression:
        per_component += regression
    if kind.has_covariate_law:
        per_component += covariate
    return max(n_components - 1, 0) + n_components * per_component


def bic_score(log_likelihood: float, n_params: int, n: int) -> float:
    """BIC in maximization form: loglik - |Psi|/2 * ln n."""
    return float(log_likelihood - 0.5 * n_params * np.log(n))


def _expectation(m: MixtureModel, d: Dataset) -> tuple[np.ndarray, float]:
    """Responsibilities and log-likelihood of m in one pass."""
    log_dens = component_log_densities(m, d)
    log_norm = logsumexp(log_dens, axis=1, keepdims=True)
    if not np.all(np.isfinite(log_norm)):
        raise NumericalError("Every component density vanished for some observation")
    tau = np.exp(log_dens - log_norm)
    return tau, float(np.sum(log_norm))


def estep(m: MixtureModel, d: Dataset) -> Responsibilities:
    """Posterior membership probabilities tau_ik, normalized in log space."""
    tau, _ = _expectation(m, d)
    return Responsibilities(tau)


def mstep(
    tau: Responsibilities | np.ndarray,
    d: Dataset,
    kind: ModelKind | str,
    floors: Floors | None = None,
    min_effective_weight: float | None = None,
) -> MixtureModel:
    """Closed-form M-step.

    For each component: pi_k is the mean of column k; (alpha, zeta, beta)
    solves the tau-weighted least squares of y on [1, Z, X]; sigma2_k is the
    weighted mean squared residual; mu_k and cov_k are the tau-weighted mean
    and covariance of x (divisor sum_i tau_ik). Regression updates are skipped
    for GMM and covariate updates for OMR.

    Args:
        tau: n x K responsibilities
        d: Dataset the responsibilities refer to
        kind: Model kind to estimate
        floors: Variance, covariance and ridge floors
        min_effective_weight: Collapse threshold; defaults to p + q + 2

    Raises:
        ComponentCollapseError: If some component's effective weight is below the threshold
        SingularDesignError: If a weighted regression design is singular even after ridging
        DegenerateVarianceError: If an error variance is zero after flooring
        DegenerateCovarianceError: If a covariate covariance has non-positive trace
    """
    kind = ModelKind.parse(kind)
    floors = floors or Floors()
    tau_arr = tau.tau if isinstance(tau, Responsibilities) else np.asarray(tau, dtype=float)
    if tau_arr.ndim != 2 or tau_arr.shape[0] != d.n:
        raise ValidationError(f"tau has shape {tau_arr.shape}, dataset has {d.n} rows")

    q = d.q if kind.has_regression else 0
    threshold = (
        float(min_effective_weight) if min_effective_weight is not None else float(d.p + q + 2)
    )
    nk = tau_arr.sum(axis=0)
    for k, weight in enumerate(nk):
        if weight < threshold:
            raise ComponentCollapseError(
                f"Component {k} collapsed: effective weight {weight:.3g} < {threshold:.3g}",
                component=k,
                weight=float(weight),
            )

    design = d.design_matrix() if kind.has_regression else None
    variance_floor = floors.variance_rel * float(np.var(d.y)) if kind.has_regression else 0.0

    components = []
    for k in range(tau_arr.shape[1]):
        w = tau_arr[:, k]
        fields: dict = {}
        if design is not None:
            coef = weighted_least_squares(design, d.y, w, floors.ridge_rel)
            resid = d.y - design @ coef
            sigma2 = max(float(np.sum(w * resid * resid) / nk[k]), variance_floor)
            if not sigma2 > 0:
                raise DegenerateVarianceError(f"Component {k} has zero error variance")
            fields.update(
                alpha=coef[0], zeta=coef[1 : 1 + q], beta=coef[1 + q :], sigma2=sigma2
            )
        if kind.has_covariate_law:
            mu = w @ d.X / nk[k]
            diff = d.X - mu
            cov = (diff * w[:, None]).T @ diff / nk[k]
            fields.update(mu=mu, cov=floor_covariance(cov, floors.covariance_rel))
        components.append(Component(**fields))

    return MixtureModel(pi=nk / nk.sum(), components=tuple(components), kind=kind)


def canonical_order(m: MixtureModel) -> list[int]:
    """Permutation that sorts components by (pi descending, mu[0] ascending).

    Regression-only models use the intercept in place of mu[0]; the original
    index breaks any remaining tie.
    """

    def location(c: Component) -> float:
        if c.mu is not None and c.mu.size:
            return float(c.mu[0])
        if c.alpha is not None:
            return float(c.alpha)
        return 0.0

    return sorted(
        range(m.K), key=lambda k: (-float(m.pi[k]), location(m.components[k]), k)
    )


def canonicalize(m: MixtureModel) -> MixtureModel:
    """Return m with components in canonical order."""
    return m.permuted(canonical_order(m))


def _standardize(features: np.ndarray) -> np.ndarray:
    scale = features.std(axis=0)
    scale[scale == 0] = 1.0
    return (features - features.mean(axis=0)) / scale


def initial_partition(
    d: Dataset,
    n_components: int,
    kind: ModelKind,
    rng: np.random.Generator,
    kmeans_iter: int = 10,
) -> np.ndarray:
    """Hard starting partition from k-means++ on standardized features.

    Features are (x, y) for regression kinds and x alone for GMM. With
    kmeans_iter=0 the seeded centers are used as-is; otherwise up to
    kmeans_iter Lloyd steps follow.
    """
    if kind.has_regression:
        features = np.column_stack([d.X, d.y])
    else:
        features = np.asarray(d.X, dtype=float)
    features = _standardize(features)
    state = int(rng.integers(np.iinfo(np.int32).max))

    if kmeans_iter == 0:
        centers, _ = kmeans_plusplus(features, n_components, random_state=state)
        return np.asarray(pairwise_distances_argmin(features, centers), dtype=np.intp)

    kmeans = KMeans(
        n_clusters=n_components,
        init="k-means++",
        n_init=1,
        max_iter=kmeans_iter,
        random_state=state,
    )
    return np.asarray(kmeans.fit_predict(features), dtype=np.intp)


@dataclass(frozen=True)
class _RestartOutcome:
    model: MixtureModel
    tau: np.ndarray
    trace: tuple[float, ...]
    converged: bool


def run_em(
    d: Dataset,
    start: MixtureModel,
    kind: ModelKind,
    cfg: FitConfig,
) -> tuple[MixtureModel, np.ndarray, tuple[float, ...], bool]:
    """Iterate E and M steps from a starting model until the relative loglik change < tol."""
    threshold = cfg.effective_weight_floor(d.p, d.q if kind.has_regression else 0)
    model = start
    trace: list[float] = []
    converged = False
    previous: float | None = None
    for _ in range(cfg.max_iter):
        tau, ll = _expectation(model, d)
        trace.append(ll)
        if previous is not None and abs(ll - previous) < cfg.tol * max(abs(previous), 1e-300):
            converged = True
            break
        previous = ll
        if len(trace) == cfg.max_iter:
            break
        model = mstep(tau, d, kind, cfg.floors, threshold)
    return model, tau, tuple(trace), converged


def _run_restart(
    d: Dataset,
    n_components: int,
    kind: ModelKind,
    cfg: FitConfig,
    restart: int,
) -> _RestartOutcome:
    rng = make_rng(cfg.seed, restart)
    labels = initial_partition(d, n_components, kind, rng, cfg.kmeans_iter)
    threshold = cfg.effective_weight_floor(d.p, d.q if kind.has_regression else 0)
    start = mstep(
        Responsibilities.from_labels(labels, n_components), d, kind, cfg.floors, threshold
    )
    model, tau, trace, converged = run_em(d, start, kind, cfg)
    return _RestartOutcome(model, tau, trace, converged)


def fit(
    d: Dataset,
    n_components: int,
    kind: ModelKind | str = ModelKind.JMR,
    cfg: FitConfig | None = None,
) -> FitResult:
    """Best-of-restarts EM fit.

    Restart r seeds its initial partition with derive_seed(cfg.seed, r). The
    restart with the highest final log-likelihood wins (the smaller index on
    ties) and its model is returned in canonical order.

    Raises:
        ValidationError: If there are too few observations for K components
        FitFailedError: If every restart failed
    """
    kind = ModelKind.parse(kind)
    cfg = cfg or FitConfig()
    if n_components < 1:
        raise ValidationError(f"K must be >= 1, got {n_components}")
    q = d.q if kind.has_regression else 0
    block = d.p + q + 2
    if d.n <= n_components * block:
        raise ValidationError(
            f"n={d.n} is too small for K={n_components} components of {block} parameters each"
        )

    def attempt(restart: int) -> _RestartOutcome | str:
        try:
            return _run_restart(d, n_components, kind, cfg, restart)
        except NumericalError as e:
            logger.warning(f"EM restart {restart} (K={n_components}, {kind.value}) failed: {e}")
            return f"restart {restart}: {e}"

    restarts = range(cfg.n_restarts)
    if cfg.max_workers > 1 and cfg.n_restarts > 1:
        with ThreadPoolExecutor(max_workers=cfg.max_workers) as executor:
            outcomes = list(executor.map(attempt, restarts))
    else:
        outcomes = [attempt(r) for r in restarts]

    best_index = -1
    best: _RestartOutcome | None = None
    diagnostics = []
    for r, outcome in enumerate(outcomes):
        if isinstance(outcome, str):
            diagnostics.append(outcome)
            continue
        if best is None or outcome.trace[-1] > best.trace[-1]:
            best, best_index = outcome, r
    if best is None:
        raise FitFailedError(
            f"All {cfg.n_restarts} EM restarts failed for K={n_components}", diagnostics
        )

    order = canonical_order(best.model)
    model = best.model.permuted(order)
    tau = Responsibilities(best.tau[:, order])
    n_params = param_count(n_components, d.p, q, kind)
    result = FitResult(
        model=model,
        loglik_trace=best.trace,
        bic=bic_score(best.trace[-1], n_params, d.n),
        tau=tau,
        converged=best.converged,
        restart_index=best_index,
        seed=cfg.seed,
        failed_restarts=tuple(diagnostics),
    )
    logger.debug(f"Fitted {result}")
    return result
