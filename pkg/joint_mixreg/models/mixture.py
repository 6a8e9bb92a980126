"""Data models for mixture components and fitted mixture models."""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

from joint_mixreg.exceptions import DimensionMismatchError, ValidationError
from joint_mixreg.utils.array_utils import readonly
from joint_mixreg.utils.linalg_utils import cholesky_lower

PI_SUM_TOLERANCE = 1e-12


class ModelKind(Enum):
    """Which parts of the joint density a mixture carries."""

    JMR = "jmr"  # Regression of y on (z, x) and Gaussian law of x
    OMR = "omr"  # Regression only; x treated as fixed
    GMM = "gmm"  # Gaussian law of x only (model-based clustering)

    @property
    def has_regression(self) -> bool:
        return self is not ModelKind.GMM

    @property
    def has_covariate_law(self) -> bool:
        return self is not ModelKind.OMR

    @classmethod
    def parse(cls, value: "str | ModelKind") -> "ModelKind":
        """Accept an enum member or its case-insensitive value."""
        if isinstance(value, ModelKind):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError as e:
            raise ValidationError(f"Unknown model kind: {value!r}") from e


@dataclass(frozen=True, eq=False)
class Component:
    """One mixture component.

    Regression fields (alpha, beta, zeta, sigma2) are all set or all None;
    so are the covariate-law fields (mu, cov). cov is the p x p covariate
    covariance and only has to be positive definite here. The configured
    eigenvalue floor (Floors.covariance_rel) is enforced by mstep through
    floor_covariance, not by this class.
    """

    alpha: float | None = None
    beta: np.ndarray | None = None
    zeta: np.ndarray | None = None
    sigma2: float | None = None
    mu: np.ndarray | None = None
    cov: np.ndarray | None = None

    def __post_init__(self):
        regression = (self.alpha, self.beta, self.sigma2)
        if any(v is not None for v in regression) and any(v is None for v in regression):
            raise ValidationError("alpha, beta and sigma2 must be given together")
        if (self.mu is None) != (self.cov is None):
            raise ValidationError("mu and cov must be given together")
        if self.alpha is None and self.mu is None:
            raise ValidationError("Component needs a regression part, a covariate law, or both")

        if self.alpha is not None:
            object.__setattr__(self, "alpha", float(self.alpha))
            object.__setattr__(self, "beta", readonly(self.beta, 1, "beta"))
            zeta = np.zeros(0) if self.zeta is None else self.zeta
            object.__setattr__(self, "zeta", readonly(zeta, 1, "zeta"))
            sigma2 = float(self.sigma2)  # type: ignore[arg-type]
            if not np.isfinite(sigma2) or sigma2 <= 0:
                raise ValidationError(f"sigma2 must be positive, got {sigma2}")
            object.__setattr__(self, "sigma2", sigma2)
        elif self.zeta is not None:
            raise ValidationError("zeta requires a regression part")

        if self.mu is not None:
            mu = readonly(self.mu, 1, "mu")
            cov = np.array(self.cov, dtype=float)
            if cov.ndim != 2 or cov.shape != (mu.size, mu.size):
                raise DimensionMismatchError(
                    f"cov has shape {cov.shape}, expected ({mu.size}, {mu.size})"
                )
            scale = float(np.max(np.abs(cov))) if cov.size else 0.0
            if not np.allclose(cov, cov.T, rtol=0.0, atol=1e-12 * max(scale, 1.0)):
                raise ValidationError("cov must be symmetric")
            object.__setattr__(self, "mu", mu)
            object.__setattr__(self, "cov", readonly((cov + cov.T) / 2.0, 2, "cov"))
            if self.beta is not None and self.beta.size != mu.size:
                raise DimensionMismatchError(
                    f"beta has length {self.beta.size} but mu has length {mu.size}"
                )
            # Raises DegenerateCovarianceError for a non positive definite cov
            _ = self.chol

    @property
    def has_regression(self) -> bool:
        return self.alpha is not None

    @property
    def has_covariate_law(self) -> bool:
        return self.mu is not None

    @property
    def p(self) -> int:
        """Covariate dimension."""
        if self.beta is not None:
            return int(self.beta.size)
        return int(self.mu.size)  # type: ignore[union-attr]

    @property
    def q(self) -> int:
        """Invariant-covariate dimension (0 without a regression part)."""
        return 0 if self.zeta is None else int(self.zeta.size)

    @cached_property
    def chol(self) -> np.ndarray:
        """Lower Cholesky factor of cov."""
        if self.cov is None:
            raise ValidationError("Component has no covariate law")
        return cholesky_lower(self.cov)

    def linear_predictor(self, x: np.ndarray, z: np.ndarray | None = None) -> np.ndarray:
        """alpha + x @ beta (+ z @ zeta) for the rows of x."""
        if self.beta is None:
            raise ValidationError("Component has no regression part")
        x = np.asarray(x, dtype=float)
        out = self.alpha + x @ self.beta
        if self.q:
            if z is None:
                raise DimensionMismatchError(f"Component expects {self.q} invariant covariate(s)")
            out = out + np.asarray(z, dtype=float) @ self.zeta
        return out

    def __str__(self) -> str:
        parts = []
        if self.has_regression:
            parts.append(
                f"alpha={self.alpha:.4g}, beta={np.round(self.beta, 4).tolist()}, "
                f"sigma2={self.sigma2:.4g}"
            )
            if self.q:
                parts.append(f"zeta={np.round(self.zeta, 4).tolist()}")
        if self.has_covariate_law:
            parts.append(f"mu={np.round(self.mu, 4).tolist()}")
        return "Component(" + ", ".join(parts) + ")"


@dataclass(frozen=True, eq=False)
class MixtureModel:
    """A K-component mixture: proportions, components and kind."""

    pi: np.ndarray
    components: tuple[Component, ...]
    kind: ModelKind = ModelKind.JMR

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind.parse(self.kind))
        object.__setattr__(self, "components", tuple(self.components))
        pi = readonly(self.pi, 1, "pi")
        object.__setattr__(self, "pi", pi)

        if len(self.components) < 1:
            raise ValidationError("A mixture needs at least one component")
        if pi.size != len(self.components):
            raise DimensionMismatchError(
                f"pi has {pi.size} entries for {len(self.components)} components"
            )
        if np.any(pi <= 0):
            raise ValidationError(f"Mixing proportions must be positive, got {pi.tolist()}")
        if abs(float(pi.sum()) - 1.0) > PI_SUM_TOLERANCE:
            raise ValidationError(f"Mixing proportions sum to {pi.sum()!r}, not 1")

        for k, c in enumerate(self.components):
            if c.has_regression != self.kind.has_regression:
                raise ValidationError(f"Component {k} does not match kind {self.kind.value}")
            if c.has_covariate_law != self.kind.has_covariate_law:
                raise ValidationError(f"Component {k} does not match kind {self.kind.value}")
        first = self.components[0]
        for k, c in enumerate(self.components[1:], start=1):
            if c.p != first.p or c.q != first.q:
                raise DimensionMismatchError(
                    f"Component {k} has (p={c.p}, q={c.q}); component 0 has "
                    f"(p={first.p}, q={first.q})"
                )

    @property
    def K(self) -> int:
        """Number of components."""
        return len(self.components)

    @property
    def p(self) -> int:
        return self.components[0].p

    @property
    def q(self) -> int:
        return self.components[0].q

    def permuted(self, order) -> "MixtureModel":
        """Return the model with components (and proportions) taken in the given order."""
        order = [int(k) for k in order]
        if sorted(order) != list(range(self.K)):
            raise ValidationError(f"{order} is not a permutation of range({self.K})")
        return MixtureModel(
            pi=self.pi[order],
            components=tuple(self.components[k] for k in order),
            kind=self.kind,
        )

    def __str__(self) -> str:
        return (
            f"MixtureModel(kind={self.kind.value}, K={self.K}, p={self.p}, q={self.q}, "
            f"pi={np.round(self.pi, 4).tolist()})"
        )
