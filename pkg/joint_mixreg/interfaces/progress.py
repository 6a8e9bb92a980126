"""Progress callback protocol for progress reporting."""

from typing import Protocol


class ProgressCallback(Protocol):
    """Interface for progress reporting during long-running jobs.

    Orchestrators report replicate and fold progress through this protocol
    without knowing how (or whether) it is displayed.
    """

    def on_start(self, total: int, description: str) -> None:
        """Called when a batch of jobs starts.

        Args:
            total: Total number of jobs
            description: Description of the batch
        """
        ...

    def on_progress(self, current: int, item_description: str) -> None:
        """Called when a job finishes.

        Args:
            current: Number of jobs finished so far (1-based)
            item_description: Description of the finished job
        """
        ...

    def on_complete(self) -> None:
        """Called when the batch completes."""
        ...

    def on_error(self, item_description: str, error_message: str) -> None:
        """Called when a job fails.

        Args:
            item_description: Description of the failed job
            error_message: Error message
        """
        ...
