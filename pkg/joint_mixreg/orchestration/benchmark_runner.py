"""Orchestrator for the simulation benchmark (OLS / OMR / JMR / MBC per scenario)."""

import itertools
import logging
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import replace

import numpy as np
import pandas as pd

from joint_mixreg.config import FitConfig, JointMixregConfig
from joint_mixreg.exceptions import BenchmarkError, NumericalError, ValidationError
from joint_mixreg.interfaces import PresenterProtocol, ProgressCallback
from joint_mixreg.models import BenchmarkTable, Dataset, MixtureModel, ModelKind, ReplicateOutcome
from joint_mixreg.services.baselines import fit_mbc, fit_ols
from joint_mixreg.services.em_estimator import fit
from joint_mixreg.services.prediction import predict_many
from joint_mixreg.services.scenarios import make_scenario, scenario_model
from joint_mixreg.utils.seeding import derive_seed

logger = logging.getLogger(__name__)

METHODS = ("OLS", "OMR", "JMR", "MBC")
BENCHMARK_COLUMNS = ("scenario", "n", "method", "metric", "value", "replicates", "seed")

DatasetFactory = Callable[[int, int, int, int], tuple[Dataset, Dataset]]


def _check_labels(labels: np.ndarray, n_components: int, name: str) -> np.ndarray:
    labels = np.asarray(labels)
    if labels.size and (labels.min() < 0 or labels.max() >= n_components):
        raise ValidationError(f"{name} labels must lie in [0, {n_components})")
    return labels.astype(int)


def misclassification_count(assigned, truth, n_components: int) -> int:
    """Fewest mismatches between assigned and true labels over all relabelings."""
    assigned = _check_labels(assigned, n_components, "assigned")
    truth = _check_labels(truth, n_components, "truth")
    if assigned.shape != truth.shape:
        raise ValidationError("assigned and truth must have equal length")
    best = assigned.size
    for perm in itertools.permutations(range(n_components)):
        mapped = np.asarray(perm)[assigned]
        best = min(best, int(np.sum(mapped != truth)))
    return best


def misclassification_rate(assigned, truth, n_components: int) -> float:
    """Mismatch fraction minimized over all K! label permutations (0 for empty input)."""
    assigned = np.asarray(assigned)
    if assigned.size == 0:
        return 0.0
    return misclassification_count(assigned, truth, n_components) / assigned.size


def align_to_truth(fitted_betas: np.ndarray, true_betas: np.ndarray) -> tuple[int, ...]:
    """Permutation perm with fitted component perm[j] matched to true component j.

    Chosen to minimize the summed squared slope error; the first such
    permutation in lexicographic order wins ties.
    """
    fitted_betas = np.asarray(fitted_betas, dtype=float)
    true_betas = np.asarray(true_betas, dtype=float)
    best_perm: tuple[int, ...] = tuple(range(true_betas.shape[0]))
    best_err = np.inf
    for perm in itertools.permutations(range(true_betas.shape[0])):
        err = float(np.sum((fitted_betas[list(perm)] - true_betas) ** 2))
        if err < best_err:
            best_perm, best_err = perm, err
    return best_perm


def parameter_names(n_components: int, p: int) -> list[str]:
    """RMSE keys in report order: pi_k, alpha_k, beta_kj and sigma2_k (1-based)."""
    ks = range(1, n_components + 1)
    return (
        [f"pi{k}" for k in ks]
        + [f"alpha{k}" for k in ks]
        + [f"beta{k}{j}" for k in ks for j in range(1, p + 1)]
        + [f"sigma2_{k}" for k in ks]
    )


def _parameter_errors(
    pi: np.ndarray,
    alphas: np.ndarray,
    betas: np.ndarray,
    sigma2s: np.ndarray,
    truth: MixtureModel,
) -> dict[str, float]:
    """Squared errors of every regression-side parameter after label alignment.

    Invariant coefficients and covariate-law parameters are not scored.
    """
    true_betas = np.array([c.beta for c in truth.components])
    perm = list(align_to_truth(betas, true_betas))
    fitted = np.concatenate(
        [
            np.asarray(pi, dtype=float)[perm],
            np.asarray(alphas, dtype=float)[perm],
            np.asarray(betas, dtype=float)[perm].ravel(),
            np.asarray(sigma2s, dtype=float)[perm],
        ]
    )
    target = np.concatenate(
        [
            truth.pi,
            [c.alpha for c in truth.components],
            true_betas.ravel(),
            [c.sigma2 for c in truth.components],
        ]
    )
    names = parameter_names(truth.K, truth.p)
    return {name: float((f - t) ** 2) for name, f, t in zip(names, fitted, target, strict=True)}


class BenchmarkRunner:
    """Run replicated method comparisons on simulated scenarios."""

    def __init__(
        self,
        config: JointMixregConfig,
        presenter: PresenterProtocol,
        dataset_factory: DatasetFactory | None = None,
        truth_model: Callable[[int], MixtureModel] | None = None,
    ):
        """Initialize the benchmark runner.

        Args:
            config: Application configuration (fit settings, test size, workers, failure policy)
            presenter: Output presenter
            dataset_factory: (scenario, n, seed, test_n) -> (train, test); defaults to make_scenario
            truth_model: scenario -> true model used for parameter errors
        """
        self.config = config
        self.presenter = presenter
        self.dataset_factory = dataset_factory or make_scenario
        self.truth_model = truth_model or scenario_model

    def _fit_config(self, seed: int) -> FitConfig:
        return replace(self.config.fit, seed=seed, max_workers=1)

    def run_replicate(self, scenario_id: int, n: int, seed: int) -> list[ReplicateOutcome]:
        """Fit every method on one simulated training set and score it.

        Raises:
            NumericalError: If any method fails on this replicate
            ValidationError: If the simulated data cannot be fitted
        """
        train, test = self.dataset_factory(scenario_id, n, seed, self.config.test_n)
        truth = self.truth_model(scenario_id)
        n_components = truth.K
        cfg = self._fit_config(derive_seed(seed, 2))

        def mcr(labels: np.ndarray) -> float | None:
            if train.truth is None:
                return None
            return misclassification_rate(labels, train.truth, n_components)

        outcomes = []
        ols = fit_ols(train)
        residual = test.y - ols.predict(test.X, test.Z)
        outcomes.append(ReplicateOutcome("OLS", float(np.mean(residual**2)), None, {}))

        for kind in (ModelKind.OMR, ModelKind.JMR):
            result = fit(train, n_components, kind, cfg)
            yhat, _ = predict_many(result.model, test.X, test.Z)
            components = result.model.components
            outcomes.append(
                ReplicateOutcome(
                    kind.name,
                    float(np.mean((test.y - yhat) ** 2)),
                    mcr(result.labels()),
                    _parameter_errors(
                        result.model.pi,
                        np.array([c.alpha for c in components]),
                        np.array([c.beta for c in components]),
                        np.array([c.sigma2 for c in components]),
                        truth,
                    ),
                )
            )

        mbc = fit_mbc(train, n_components, cfg)
        yhat, _ = predict_many(mbc.predictive, test.X, test.Z)
        outcomes.append(
            ReplicateOutcome(
                "MBC",
                float(np.mean((test.y - yhat) ** 2)),
                mcr(mbc.labels),
                _parameter_errors(
                    mbc.gmm.pi,
                    np.array([f.alpha for f in mbc.cluster_fits]),
                    np.array([f.beta for f in mbc.cluster_fits]),
                    np.array([f.sigma2 for f in mbc.cluster_fits]),
                    truth,
                ),
            )
        )
        return outcomes

    def run_cell(
        self,
        scenario_id: int,
        n: int,
        reps: int,
        seed: int,
        progress_callback: ProgressCallback | None = None,
    ) -> BenchmarkTable:
        """Run reps replicates of one (scenario, n) cell and aggregate them.

        Replicate r uses seed derive_seed(seed, scenario_id, n, r). Failed
        replicates are dropped and counted.

        Raises:
            BenchmarkError: If the failure rate exceeds the configured maximum
        """
        if reps < 1:
            raise ValidationError(f"reps must be >= 1, got {reps}")
        seeds = [derive_seed(seed, scenario_id, n, r) for r in range(reps)]
        results: list[list[ReplicateOutcome] | None] = [None] * reps
        label = f"scenario {scenario_id}, n={n}"

        if progress_callback:
            progress_callback.on_start(reps, f"Benchmark {label}")

        def attempt(r: int) -> list[ReplicateOutcome]:
            return self.run_replicate(scenario_id, n, seeds[r])

        failures = 0
        with ThreadPoolExecutor(max_workers=self.config.max_workers) as executor:
            future_to_rep = {executor.submit(attempt, r): r for r in range(reps)}
            for completed, future in enumerate(as_completed(future_to_rep), 1):
                r = future_to_rep[future]
                try:
                    results[r] = future.result()
                    if progress_callback:
                        progress_callback.on_progress(completed, f"replicate {r}")
                except (NumericalError, ValidationError) as e:
                    failures += 1
                    logger.warning(f"Dropping replicate {r} of {label}: {e}")
                    if progress_callback:
                        progress_callback.on_error(f"replicate {r}", str(e))

        if progress_callback:
            progress_callback.on_complete()

        if failures / reps > self.config.max_failure_rate:
            raise BenchmarkError(
                f"{failures} of {reps} replicates failed for {label} "
                f"(limit {self.config.max_failure_rate:.0%})",
                failures=failures,
                attempted=reps,
            )
        if failures:
            self.presenter.show_warning(f"{label}: dropped {failures} of {reps} replicates")
        kept = [r for r in results if r is not None]
        return self._aggregate(scenario_id, n, seed, kept, failures)

    def _aggregate(
        self,
        scenario_id: int,
        n: int,
        seed: int,
        replicates: list[list[ReplicateOutcome]],
        failures: int,
    ) -> BenchmarkTable:
        table = BenchmarkTable(
            scenario=scenario_id, n=n, seed=seed, replicates=len(replicates), failures=failures
        )
        for j, method in enumerate(METHODS):
            outcomes = [rep[j] for rep in replicates]
            table.mspe[method] = float(np.mean([o.mspe for o in outcomes]))
            rates = [o.mcr for o in outcomes if o.mcr is not None]
            if rates:
                table.mcr[method] = float(np.mean(rates))
            first = outcomes[0].squared_errors
            names = [p for p in first if all(p in o.squared_errors for o in outcomes)]
            if names:
                table.rmse[method] = {
                    p: float(np.sqrt(np.mean([o.squared_errors[p] for o in outcomes])))
                    for p in names
                }
        return table

    def run(
        self,
        scenario_ids: list[int],
        ns: list[int],
        reps: int,
        seed: int,
        progress_callback: ProgressCallback | None = None,
    ) -> list[BenchmarkTable]:
        """Run every (scenario, n) cell in order."""
        tables = []
        for scenario_id in scenario_ids:
            for n in ns:
                self.presenter.show_info(f"Running scenario {scenario_id}, n={n} ({reps} reps)")
                table = self.run_cell(scenario_id, n, reps, seed, progress_callback)
                self.presenter.show_benchmark_table(table)
                tables.append(table)
        return tables


def benchmark_frame(tables: list[BenchmarkTable]) -> pd.DataFrame:
    """Long-format table with columns (scenario, n, method, metric, value, replicates, seed)."""
    rows = [row for table in tables for row in table.records()]
    return pd.DataFrame(rows, columns=list(BENCHMARK_COLUMNS))


def run_benchmark(
    scenario_ids: list[int],
    ns: list[int],
    reps: int,
    seed: int,
    config: JointMixregConfig | None = None,
    presenter: PresenterProtocol | None = None,
    dataset_factory: DatasetFactory | None = None,
) -> list[BenchmarkTable]:
    """Convenience wrapper around BenchmarkRunner.run."""
    from joint_mixreg.config import create_default_config
    from joint_mixreg.presenters import NullPresenter

    runner = BenchmarkRunner(
        config or create_default_config(),
        presenter or NullPresenter(),
        dataset_factory=dataset_factory,
    )
    return runner.run(list(scenario_ids), list(ns), reps, seed)
