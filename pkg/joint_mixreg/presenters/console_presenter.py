"""Console presenter for CLI output (standard error)."""

import sys

from joint_mixreg.models import (
    BenchmarkTable,
    CvResult,
    DominanceReport,
    FitResult,
    SelectionResult,
)


def _err(message: str = "") -> None:
    print(message, file=sys.stderr)


class ConsolePresenter:
    """Present output on standard error so result files and pipes stay clean."""

    def show_info(self, message: str) -> None:
        """Display an informational message."""
        _err(message)

    def show_success(self, message: str) -> None:
        """Display a success message."""
        _err(f"[OK] {message}")

    def show_warning(self, message: str) -> None:
        """Display a warning message."""
        _err(f"[WARN] {message}")

    def show_error(self, message: str) -> None:
        """Display an error message."""
        _err(f"[ERROR] {message}")

    def show_fit_result(self, result: FitResult) -> None:
        """Display a fitted mixture and its diagnostics."""
        m = result.model
        _err(f"\nFit ({m.kind.value.upper()}, K={m.K}, p={m.p}, q={m.q}):")
        _err(f"  Log-likelihood: {result.loglik:.6f}")
        _err(f"  BIC: {result.bic:.6f}")
        status = "converged" if result.converged else "not converged"
        _err(f"  Iterations: {result.iterations} ({status})")
        _err(f"  Winning restart: {result.restart_index}")
        for k, (pi, c) in enumerate(zip(m.pi, m.components, strict=True)):
            _err(f"  [{k}] pi={pi:.4f} {c}")
        if result.failed_restarts:
            _err(f"  Failed restarts: {len(result.failed_restarts)}")

    def show_selection(self, result: SelectionResult) -> None:
        """Display a BIC sweep."""
        _err("\nBIC selection:")
        for k, bic in result.bic_table.items():
            marker = " <- selected" if k == result.best_k else ""
            _err(f"  K={k}: BIC={bic:.6f}{marker}")
        for k, reason in result.excluded.items():
            _err(f"  K={k}: excluded ({reason})")

    def show_benchmark_table(self, table: BenchmarkTable) -> None:
        """Display one aggregated benchmark cell."""
        _err(
            f"\nScenario {table.scenario}, n={table.n} "
            f"({table.replicates} replicates, {table.failures} dropped):"
        )
        for method in table.methods:
            mcr = table.mcr.get(method)
            mcr_text = f"  MCR={mcr:.4f}" if mcr is not None else ""
            _err(f"  {method:4s} MSPE={table.mspe[method]:.4f}{mcr_text}")

    def show_cv_result(self, result: CvResult) -> None:
        """Display a cross-validation summary."""
        _err(f"\nLeave-one-out CV ({result.method}): {result.cv:.6f}")
        _err(f"  Folds: {result.n - len(result.failed_folds)}/{result.n} succeeded")

    def show_dominance_report(self, report: DominanceReport) -> None:
        """Display MSPE inequality checks."""
        _err("\nMSPE dominance:")
        _err(f"  Adaptive excess: {report.adaptive}")
        _err(f"  Fixed excess: {report.fixed}")
        if report.biased is not None:
            _err(f"  Biased excess: {report.biased}")
        for check in report.checks:
            _err(f"  {check}")


class ConsoleProgressCallback:
    """Console implementation of progress callback."""

    def __init__(self):
        """Initialize the progress callback."""
        self.total = 0
        self.current = 0
        self.description = ""

    def on_start(self, total: int, description: str) -> None:
        """Called when a batch of jobs starts."""
        self.total = total
        self.current = 0
        self.description = description
        _err(f"\n{description}...")

    def on_progress(self, current: int, item_description: str) -> None:
        """Called when a job finishes."""
        self.current = current
        _err(f"  [{current}/{self.total}] {item_description}")

    def on_complete(self) -> None:
        """Called when the batch completes."""
        _err(f"  [OK] Complete: {self.current}/{self.total}")

    def on_error(self, item_description: str, error_message: str) -> None:
        """Called when a job fails."""
        _err(f"  [ERROR] {item_description}: {error_message}")
