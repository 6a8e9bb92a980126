"""Orchestrators for replicated benchmarks and cross-validation."""

from .benchmark_runner import BenchmarkRunner, benchmark_frame, run_benchmark
from .cross_validation import CrossValidator, cv_threshold_curve, loocv

__all__ = [
    "BenchmarkRunner",
    "CrossValidator",
    "benchmark_frame",
    "cv_threshold_curve",
    "loocv",
    "run_benchmark",
]
