"""Presenter protocol for output abstraction."""

from typing import Protocol

from joint_mixreg.models import (
    BenchmarkTable,
    CvResult,
    DominanceReport,
    FitResult,
    SelectionResult,
)


class PresenterProtocol(Protocol):
    """Interface for presenting human-readable output.

    Machine-readable results always go to files; presenters only carry
    status lines and summaries, so commands can run silently under test.
    """

    def show_info(self, message: str) -> None:
        """Display an informational message.

        Args:
            message: The informational message to display
        """
        ...

    def show_success(self, message: str) -> None:
        """Display a success message.

        Args:
            message: The success message to display
        """
        ...

    def show_warning(self, message: str) -> None:
        """Display a warning message.

        Args:
            message: The warning message to display
        """
        ...

    def show_error(self, message: str) -> None:
        """Display an error message.

        Args:
            message: The error message to display
        """
        ...

    def show_fit_result(self, result: FitResult) -> None:
        """Display a fitted mixture and its diagnostics.

        Args:
            result: The fit to display
        """
        ...

    def show_selection(self, result: SelectionResult) -> None:
        """Display a BIC sweep.

        Args:
            result: The selection result to display
        """
        ...

    def show_benchmark_table(self, table: BenchmarkTable) -> None:
        """Display one aggregated benchmark cell.

        Args:
            table: The table to display
        """
        ...

    def show_cv_result(self, result: CvResult) -> None:
        """Display a cross-validation summary.

        Args:
            result: The CV result to display
        """
        ...

    def show_dominance_report(self, report: DominanceReport) -> None:
        """Display MSPE inequality checks.

        Args:
            report: The dominance report to display
        """
        ...
