"""Monte-Carlo evaluation of asymptotic excess prediction error.

All inner products use intercept-augmented vectors: x_bar = (1, x) and
beta_bar_k = (alpha_k, beta_k), so nonzero intercepts are kept. Draws are
made in chunks whose seeds derive from (seed, chunk index); chunk results
are merged in chunk order, so estimates do not depend on the worker count.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from joint_mixreg.exceptions import (
    DimensionMismatchError,
    UnsupportedOperationError,
    ValidationError,
)
from joint_mixreg.models import (
    DominanceCheck,
    DominanceReport,
    MixtureModel,
    ModelKind,
    MspeEstimate,
    MspeReport,
)
from joint_mixreg.utils.seeding import make_rng

from .prediction import posterior_matrix

logger = logging.getLogger(__name__)

MIN_MC_N = 100
DEFAULT_MC_N = 200_000
DEFAULT_CHUNK_SIZE = 50_000
PSD_RTOL = 1e-10


@dataclass(frozen=True)
class _Moments:
    """Count, mean and centered sum of squares of a batch of draws."""

    count: int
    mean: float
    m2: float

    @classmethod
    def of(cls, values: np.ndarray) -> "_Moments":
        mean = float(np.mean(values))
        return cls(int(values.size), mean, float(np.sum((values - mean) ** 2)))

    def merge(self, other: "_Moments") -> "_Moments":
        count = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / count
        m2 = self.m2 + other.m2 + delta * delta * self.count * other.count / count
        return _Moments(count, mean, m2)

    def estimate(self) -> MspeEstimate:
        se = float(np.sqrt(self.m2 / (self.count - 1) / self.count)) if self.count > 1 else 0.0
        return MspeEstimate(value=self.mean, std_error=se, n=self.count)


def _merge_all(batches: list[_Moments]) -> MspeEstimate:
    total = batches[0]
    for batch in batches[1:]:
        total = total.merge(batch)
    return total.estimate()


def _check_model(m: MixtureModel) -> None:
    if m.kind is not ModelKind.JMR:
        raise UnsupportedOperationError(
            f"MSPE analysis needs the covariate law of a JMR model, got {m.kind.value}"
        )
    if m.q:
        raise UnsupportedOperationError("MSPE analysis does not support invariant covariates")


def _check_mc_n(mc_n: int) -> None:
    if mc_n < MIN_MC_N:
        raise ValidationError(f"mc_n must be >= {MIN_MC_N}, got {mc_n}")


def _check_weights(weights, n_components: int, name: str = "weights") -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.shape != (n_components,):
        raise DimensionMismatchError(f"{name} has shape {w.shape}, expected ({n_components},)")
    if np.any(w < 0) or abs(float(w.sum()) - 1.0) > 1e-10:
        raise ValidationError(f"{name} must be a probability vector, got {w.tolist()}")
    return w


def augmented_coefficients(m: MixtureModel) -> np.ndarray:
    """K x (p + 1) matrix of (alpha_k, beta_k)."""
    return np.array([np.concatenate([[c.alpha], c.beta]) for c in m.components])


def augmented_second_moment(m: MixtureModel, k: int) -> np.ndarray:
    """E[x_bar x_bar'] under component k: [[1, mu'], [mu, cov + mu mu']]."""
    c = m.components[k]
    p = m.p
    gamma = np.empty((p + 1, p + 1))
    gamma[0, 0] = 1.0
    gamma[0, 1:] = c.mu
    gamma[1:, 0] = c.mu
    gamma[1:, 1:] = c.cov + np.outer(c.mu, c.mu)
    return gamma


def _chunks(mc_n: int, chunk_size: int) -> list[int]:
    sizes = [chunk_size] * (mc_n // chunk_size)
    if mc_n % chunk_size:
        sizes.append(mc_n % chunk_size)
    return sizes


def _map_chunks(func, mc_n: int, chunk_size: int, max_workers: int) -> list:
    sizes = _chunks(mc_n, max(int(chunk_size), 1))
    jobs = list(enumerate(sizes))
    if max_workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            return list(executor.map(lambda job: func(*job), jobs))
    return [func(index, size) for index, size in jobs]


def _mixture_draws(m: MixtureModel, size: int, seed: int, chunk: int) -> np.ndarray:
    """size covariate draws from the mixture law of x."""
    rng = make_rng(seed, chunk)
    labels = rng.choice(m.K, size=size, p=m.pi)
    noise = rng.standard_normal((size, m.p))
    X = np.empty((size, m.p))
    for k, c in enumerate(m.components):
        rows = labels == k
        X[rows] = c.mu + noise[rows] @ c.chol.T  # type: ignore[operator]
    return X


def _component_draws(m: MixtureModel, size: int, seed: int, chunk: int) -> np.ndarray:
    """size draws from every component separately, shape (K, size, p)."""
    rng = make_rng(seed, chunk)
    noise = rng.standard_normal((m.K, size, m.p))
    return np.array(
        [c.mu + noise[k] @ c.chol.T for k, c in enumerate(m.components)]  # type: ignore[operator]
    )


def _paired_pass(
    m: MixtureModel,
    weights: np.ndarray,
    mc_n: int,
    seed: int,
    chunk_size: int,
    max_workers: int,
) -> tuple[MspeEstimate, MspeEstimate, MspeEstimate]:
    """Adaptive, fixed and fixed-minus-adaptive excess terms on shared draws."""
    coef = augmented_coefficients(m)

    def run(chunk: int, size: int) -> tuple[_Moments, _Moments, _Moments]:
        X = _mixture_draws(m, size, seed, chunk)
        post = posterior_matrix(m, X)
        preds = coef[:, 0] + X @ coef[:, 1:].T  # e_k = <beta_bar_k, x_bar>
        adaptive_center = np.sum(post * preds, axis=1)
        fixed_center = preds @ weights
        adaptive = np.sum(post * (preds - adaptive_center[:, None]) ** 2, axis=1)
        fixed = np.sum(post * (preds - fixed_center[:, None]) ** 2, axis=1)
        # fixed - adaptive reduces to a square, so it is nonnegative per draw
        difference = (adaptive_center - fixed_center) ** 2
        return _Moments.of(adaptive), _Moments.of(fixed), _Moments.of(difference)

    batches = _map_chunks(run, mc_n, chunk_size, max_workers)
    return (
        _merge_all([b[0] for b in batches]),
        _merge_all([b[1] for b in batches]),
        _merge_all([b[2] for b in batches]),
    )


def mspe_adaptive(
    m: MixtureModel,
    mc_n: int = DEFAULT_MC_N,
    seed: int = 0,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    max_workers: int = 1,
) -> MspeEstimate:
    """Excess MSPE of the posterior-weighted predictor.

    Monte-Carlo mean over x of sum_k p_k(x) (e_k(x) - sum_l p_l(x) e_l(x))^2
    with e_k(x) = alpha_k + beta_k'x.

    Raises:
        UnsupportedOperationError: If m is not a JMR model
        ValidationError: If mc_n < 100
    """
    _check_model(m)
    _check_mc_n(mc_n)
    adaptive, _, _ = _paired_pass(m, np.asarray(m.pi), mc_n, seed, chunk_size, max_workers)
    return adaptive


def mspe_fixed(
    m: MixtureModel,
    weights,
    mc_n: int = DEFAULT_MC_N,
    seed: int = 0,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    max_workers: int = 1,
) -> MspeEstimate:
    """Excess MSPE when the inner weights are the fixed vector ``weights``.

    Uses the same draws as mspe_adaptive for the same seed.

    Raises:
        ValidationError: If weights is not a probability vector or mc_n < 100
    """
    _check_model(m)
    _check_mc_n(mc_n)
    w = _check_weights(weights, m.K)
    _, fixed, _ = _paired_pass(m, w, mc_n, seed, chunk_size, max_workers)
    return fixed


def mspe_fixed_exact(m: MixtureModel, weights) -> float:
    """Closed form of the fixed-weight excess via component second moments.

    sum_k pi_k v_k' E_k[x_bar x_bar'] v_k with v_k = beta_bar_k - sum_l w_l beta_bar_l.
    """
    _check_model(m)
    w = _check_weights(weights, m.K)
    coef = augmented_coefficients(m)
    center = w @ coef
    total = 0.0
    for k in range(m.K):
        v = coef[k] - center
        total += float(m.pi[k]) * float(v @ augmented_second_moment(m, k) @ v)
    return total


def _star_coefficients(
    m: MixtureModel, beta_star, alpha_star=None
) -> np.ndarray:
    beta_star = np.atleast_2d(np.asarray(beta_star, dtype=float))
    if beta_star.shape != (m.K, m.p):
        raise DimensionMismatchError(
            f"beta_star has shape {beta_star.shape}, expected ({m.K}, {m.p})"
        )
    if alpha_star is None:
        alpha_star = [c.alpha for c in m.components]
    alpha_star = np.asarray(alpha_star, dtype=float)
    if alpha_star.shape != (m.K,):
        raise DimensionMismatchError(f"alpha_star has shape {alpha_star.shape}, expected ({m.K},)")
    return np.column_stack([alpha_star, beta_star])


def _biased_pass(
    m: MixtureModel,
    centers: list[np.ndarray],
    mc_n: int,
    seed: int,
    chunk_size: int,
    max_workers: int,
) -> list[MspeEstimate]:
    """sum_k pi_k <beta_bar_k - center, x_bar_k>^2 with x_k drawn from component k, per center."""
    coef = augmented_coefficients(m)
    pi = np.asarray(m.pi)

    def run(chunk: int, size: int) -> list[_Moments]:
        draws = _component_draws(m, size, seed, chunk)
        out = []
        for center in centers:
            v = coef - center  # K x (p + 1)
            inner = v[:, 0][:, None] + np.einsum("kip,kp->ki", draws, v[:, 1:])
            out.append(_Moments.of(pi @ inner**2))
        return out

    batches = _map_chunks(run, mc_n, chunk_size, max_workers)
    return [_merge_all([b[j] for b in batches]) for j in range(len(centers))]


def mspe_biased(
    m: MixtureModel,
    beta_star,
    pi_star,
    mc_n: int = DEFAULT_MC_N,
    seed: int = 0,
    alpha_star=None,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    max_workers: int = 1,
) -> MspeEstimate:
    """Excess MSPE of a fixed-weight predictor built from biased limits (beta*, pi*).

    Monte-Carlo mean of sum_k pi_k <sum_l pi*_l (beta_bar_k - beta_bar*_l), x_bar_k>^2
    with x_k drawn from component k. alpha_star defaults to the model intercepts.
    """
    _check_model(m)
    _check_mc_n(mc_n)
    w = _check_weights(pi_star, m.K, "pi_star")
    center = w @ _star_coefficients(m, beta_star, alpha_star)
    return _biased_pass(m, [center], mc_n, seed, chunk_size, max_workers)[0]


def dominance_quadratic_form(beta, pi, beta_star, pi_star, gamma) -> float:
    """Closed-form biased-minus-fixed excess under a common second moment gamma.

    Returns v' gamma v with
    v = sum_{l<K} (pi*_l - pi_l)(beta_K - beta_l) + sum_l pi*_l (beta_l - beta*_l).
    gamma must be positive semi-definite up to rounding; otherwise
    ValidationError is raised. The value itself is not clipped.
    beta and beta_star are K x d (intercept-augmented when intercepts matter).
    """
    beta = np.atleast_2d(np.asarray(beta, dtype=float))
    beta_star = np.atleast_2d(np.asarray(beta_star, dtype=float))
    pi = np.asarray(pi, dtype=float)
    pi_star = np.asarray(pi_star, dtype=float)
    gamma = np.atleast_2d(np.asarray(gamma, dtype=float))
    n_components, dim = beta.shape
    if beta_star.shape != beta.shape or pi.shape != (n_components,) or pi_star.shape != pi.shape:
        raise DimensionMismatchError("beta, beta_star, pi and pi_star disagree in shape")
    if gamma.shape != (dim, dim):
        raise DimensionMismatchError(f"gamma has shape {gamma.shape}, expected ({dim}, {dim})")

    last = beta[-1]
    v = np.zeros(dim)
    for ell in range(n_components - 1):
        v += (pi_star[ell] - pi[ell]) * (last - beta[ell])
    v += pi_star @ (beta - beta_star)

    sym = (gamma + gamma.T) / 2.0
    eigvals = linalg.eigvalsh(sym)
    if eigvals[0] < -PSD_RTOL * max(float(np.max(np.abs(eigvals))), 1.0):
        raise ValidationError(
            f"gamma is not positive semi-definite (smallest eigenvalue {eigvals[0]:.3g})"
        )
    return float(v @ sym @ v)


def _quadratic_tolerance(beta, beta_star, gamma) -> float:
    """Rounding allowance for dominance_quadratic_form on these inputs."""
    beta = np.asarray(beta, dtype=float)
    beta_star = np.asarray(beta_star, dtype=float)
    gamma = np.atleast_2d(np.asarray(gamma, dtype=float))
    size = float(np.sum(np.abs(beta)) + np.sum(np.abs(beta_star)))
    return PSD_RTOL * max(float(np.linalg.norm(gamma, 2)), 1.0) * max(size, 1.0) ** 2


def equal_second_moments(m: MixtureModel, rtol: float = 1e-12) -> bool:
    """True if every component has the same augmented second moment."""
    first = augmented_second_moment(m, 0)
    scale = max(float(np.max(np.abs(first))), 1.0)
    return all(
        np.allclose(augmented_second_moment(m, k), first, rtol=0.0, atol=rtol * scale)
        for k in range(1, m.K)
    )


def sigma_bar(m: MixtureModel) -> float:
    """Irreducible error variance sum_k pi_k sigma2_k."""
    return float(sum(float(pi) * c.sigma2 for pi, c in zip(m.pi, m.components, strict=True)))


def mspe_report(
    m: MixtureModel,
    mc_n: int = DEFAULT_MC_N,
    seed: int = 0,
    weights=None,
    beta_star=None,
    pi_star=None,
    alpha_star=None,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    max_workers: int = 1,
) -> MspeReport:
    """Full excess-MSPE decomposition; weights default to pi.

    The fixed-weight term is also given in closed form (excess_fixed_exact).
    """
    _check_model(m)
    _check_mc_n(mc_n)
    w = _check_weights(m.pi if weights is None else weights, m.K)
    adaptive, fixed, difference = _paired_pass(m, w, mc_n, seed, chunk_size, max_workers)
    biased = None
    if beta_star is not None:
        biased = mspe_biased(
            m,
            beta_star,
            m.pi if pi_star is None else pi_star,
            mc_n,
            seed,
            alpha_star,
            chunk_size,
            max_workers,
        )
    return MspeReport(
        sigma_bar=sigma_bar(m),
        excess_adaptive=adaptive,
        excess_fixed=fixed,
        excess_biased=biased,
        mc_n=mc_n,
        seed=seed,
        fixed_minus_adaptive=difference,
        excess_fixed_exact=mspe_fixed_exact(m, w),
    )


def verify_dominance(
    m: MixtureModel,
    mc_n: int = DEFAULT_MC_N,
    seed: int = 0,
    beta_star=None,
    pi_star=None,
    alpha_star=None,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    max_workers: int = 1,
) -> DominanceReport:
    """Check the ordering of the adaptive, fixed and biased excess terms.

    Always checks fixed(pi) >= adaptive - 3 SE on paired draws. With biased
    limits supplied it evaluates the closed-form quadratic form (using the
    pi-averaged augmented second moment) and, when all components share the
    same second moment, checks biased >= fixed - 3 SE on paired component draws.
    """
    _check_model(m)
    _check_mc_n(mc_n)
    pi = np.asarray(m.pi)
    adaptive, fixed, difference = _paired_pass(m, pi, mc_n, seed, chunk_size, max_workers)
    checks = [
        DominanceCheck(
            name="fixed >= adaptive",
            passed=difference.value >= -3.0 * difference.std_error,
            lhs=fixed.value,
            rhs=adaptive.value,
            detail=f"(difference {difference})",
        )
    ]

    biased = None
    fixed_components = None
    quadratic = None
    if beta_star is not None:
        w_star = _check_weights(m.pi if pi_star is None else pi_star, m.K, "pi_star")
        star = _star_coefficients(m, beta_star, alpha_star)
        coef = augmented_coefficients(m)
        fixed_components, biased = _biased_pass(
            m, [pi @ coef, w_star @ star], mc_n, seed, chunk_size, max_workers
        )
        gamma = sum(float(pi[k]) * augmented_second_moment(m, k) for k in range(m.K))
        quadratic = dominance_quadratic_form(coef, pi, star, w_star, gamma)
        checks.append(
            DominanceCheck(
                name="quadratic form >= 0",
                passed=quadratic >= -_quadratic_tolerance(coef, star, gamma),
                lhs=quadratic,
                rhs=0.0,
            )
        )
        if equal_second_moments(m):
            combined = float(np.hypot(biased.std_error, fixed_components.std_error))
            checks.append(
                DominanceCheck(
                    name="biased >= fixed",
                    passed=biased.value >= fixed_components.value - 3.0 * combined,
                    lhs=biased.value,
                    rhs=fixed_components.value,
                    detail="(equal second moments)",
                )
            )
        else:
            logger.info("Component second moments differ; biased-vs-fixed ordering not checked")

    report = DominanceReport(
        adaptive=adaptive,
        fixed=fixed,
        difference=difference,
        biased=biased,
        fixed_equal_moments=fixed_components,
        quadratic_form=quadratic,
        checks=tuple(checks),
    )
    for check in report.checks:
        logger.debug(str(check))
    return report
