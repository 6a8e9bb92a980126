"""Data models for predictions, Monte-Carlo reports, benchmarks and cross-validation."""

from dataclasses import dataclass, field

import numpy as np
import pandas as pd


@dataclass(frozen=True, eq=False)
class PredictionResult:
    """Prediction at a single covariate point."""

    yhat: float
    posteriors: np.ndarray
    top_component: int
    top_posterior: float

    def __str__(self) -> str:
        return (
            f"PredictionResult(yhat={self.yhat:.6g}, component={self.top_component}, "
            f"posterior={self.top_posterior:.4f})"
        )


@dataclass(frozen=True)
class MspeEstimate:
    """A Monte-Carlo mean with its standard error."""

    value: float
    std_error: float
    n: int

    def within(self, other: "MspeEstimate", n_se: float = 3.0) -> bool:
        """True if the two estimates differ by less than n_se combined standard errors."""
        combined = float(np.hypot(self.std_error, other.std_error))
        return abs(self.value - other.value) <= n_se * combined

    def __str__(self) -> str:
        return f"{self.value:.6g} (se {self.std_error:.2g}, n={self.n})"


@dataclass(frozen=True)
class MspeReport:
    """Asymptotic MSPE decomposition: error variance plus excess terms."""

    sigma_bar: float
    excess_adaptive: MspeEstimate
    excess_fixed: MspeEstimate
    excess_biased: MspeEstimate | None
    mc_n: int
    seed: int
    fixed_minus_adaptive: MspeEstimate | None = None
    excess_fixed_exact: float | None = None

    @property
    def mspe_adaptive(self) -> float:
        return self.sigma_bar + self.excess_adaptive.value

    @property
    def mspe_fixed(self) -> float:
        return self.sigma_bar + self.excess_fixed.value


@dataclass(frozen=True)
class DominanceCheck:
    """One inequality verified by the dominance report."""

    name: str
    passed: bool
    lhs: float
    rhs: float
    detail: str = ""

    def __str__(self) -> str:
        mark = "OK" if self.passed else "FAIL"
        return f"[{mark}] {self.name}: {self.lhs:.6g} vs {self.rhs:.6g} {self.detail}".rstrip()


@dataclass(frozen=True)
class DominanceReport:
    """Results of the adaptive/fixed/biased MSPE inequality checks."""

    adaptive: MspeEstimate
    fixed: MspeEstimate
    difference: MspeEstimate
    biased: MspeEstimate | None
    fixed_equal_moments: MspeEstimate | None
    quadratic_form: float | None
    checks: tuple[DominanceCheck, ...] = field(default_factory=tuple)

    @property
    def all_passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def strict_dominance(self) -> bool:
        """Fixed weighting is worse than adaptive by more than 3 standard errors."""
        return self.difference.value > 3.0 * self.difference.std_error


@dataclass(frozen=True)
class ReplicateOutcome:
    """Per-replicate metrics for one method."""

    method: str
    mspe: float
    mcr: float | None
    squared_errors: dict[str, float]


@dataclass
class BenchmarkTable:
    """Aggregated metrics for one (scenario, n) cell, one row per method."""

    scenario: int
    n: int
    seed: int
    replicates: int
    failures: int
    mspe: dict[str, float] = field(default_factory=dict)
    mcr: dict[str, float] = field(default_factory=dict)
    rmse: dict[str, dict[str, float]] = field(default_factory=dict)

    @property
    def methods(self) -> list[str]:
        return list(self.mspe)

    def records(self) -> list[dict]:
        """Long-format rows (scenario, n, method, metric, value, replicates, seed)."""
        rows = []
        for method in self.methods:
            metrics: list[tuple[str, float]] = [("mspe", self.mspe[method])]
            if method in self.mcr:
                metrics.append(("mcr", self.mcr[method]))
            for name, value in self.rmse.get(method, {}).items():
                metrics.append((f"rmse_{name}", value))
            for metric, value in metrics:
                rows.append(
                    {
                        "scenario": self.scenario,
                        "n": self.n,
                        "method": method,
                        "metric": metric,
                        "value": value,
                        "replicates": self.replicates,
                        "seed": self.seed,
                    }
                )
        return rows

    def __str__(self) -> str:
        parts = ", ".join(f"{m}={v:.4f}" for m, v in self.mspe.items())
        return (
            f"BenchmarkTable(scenario={self.scenario}, n={self.n}, reps={self.replicates}, "
            f"failures={self.failures}, MSPE: {parts})"
        )


@dataclass(frozen=True)
class ThresholdPoint:
    """CV restricted to subjects whose top posterior reaches a threshold."""

    threshold: float
    cv: float | None  # None when no subject qualifies
    retained: int


@dataclass(frozen=True, eq=False)
class CvResult:
    """Leave-one-out cross-validation outcome.

    predictions and squared_errors are NaN for failed folds. posteriors is
    n x K for mixture methods (NaN rows for failed folds) and None for OLS.
    """

    method: str
    subject_ids: tuple[str, ...]
    predictions: np.ndarray
    squared_errors: np.ndarray
    posteriors: np.ndarray | None
    failed_folds: tuple[int, ...]
    seed: int

    @property
    def n(self) -> int:
        return len(self.subject_ids)

    @property
    def succeeded(self) -> np.ndarray:
        return ~np.isnan(self.squared_errors)

    @property
    def cv(self) -> float:
        """Mean squared leave-one-out error over successful folds (NaN if none succeeded)."""
        ok = self.succeeded
        if not np.any(ok):
            return float("nan")
        return float(np.mean(self.squared_errors[ok]))

    def to_frame(self) -> pd.DataFrame:
        """Per-subject predictions, squared errors and posteriors."""
        frame = pd.DataFrame(
            {
                "subject_id": list(self.subject_ids),
                "prediction": self.predictions,
                "squared_error": self.squared_errors,
            }
        )
        if self.posteriors is not None:
            for k in range(self.posteriors.shape[1]):
                frame[f"posterior{k}"] = self.posteriors[:, k]
        return frame

    def __str__(self) -> str:
        return (
            f"CvResult(method={self.method}, cv={self.cv:.6g}, n={self.n}, "
            f"failed={len(self.failed_folds)})"
        )
