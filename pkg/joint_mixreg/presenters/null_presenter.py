"""Null presenter for testing (no output)."""

from joint_mixreg.models import (
    BenchmarkTable,
    CvResult,
    DominanceReport,
    FitResult,
    SelectionResult,
)


class NullPresenter:
    """Present output to nowhere (testing implementation)."""

    def show_info(self, message: str) -> None:
        pass

    def show_success(self, message: str) -> None:
        pass

    def show_warning(self, message: str) -> None:
        pass

    def show_error(self, message: str) -> None:
        pass

    def show_fit_result(self, result: FitResult) -> None:
        pass

    def show_selection(self, result: SelectionResult) -> None:
        pass

    def show_benchmark_table(self, table: BenchmarkTable) -> None:
        pass

    def show_cv_result(self, result: CvResult) -> None:
        pass

    def show_dominance_report(self, report: DominanceReport) -> None:
        pass


class NullProgressCallback:
    """Null implementation of progress callback (testing)."""

    def on_start(self, total: int, description: str) -> None:
        pass

    def on_progress(self, current: int, item_description: str) -> None:
        pass

    def on_complete(self) -> None:
        pass

    def on_error(self, item_description: str, error_message: str) -> None:
        pass
