"""Data models for Joint Mixreg."""

from .dataset import Dataset, Responsibilities
from .document import SCHEMA_VERSION, ModelDocument
from .fit import FitResult, LinearModel, MbcModel, SelectionResult
from .functional import CurveSample, EigenSystem, FunctionalDesign, ScoreDesign, SmoothedCurves
from .mixture import Component, MixtureModel, ModelKind
from .reports import (
    BenchmarkTable,
    CvResult,
    DominanceCheck,
    DominanceReport,
    MspeEstimate,
    MspeReport,
    PredictionResult,
    ReplicateOutcome,
    ThresholdPoint,
)

__all__ = [
    "ModelKind",
    "Component",
    "MixtureModel",
    "Dataset",
    "Responsibilities",
    "ModelDocument",
    "SCHEMA_VERSION",
    "FitResult",
    "LinearModel",
    "MbcModel",
    "SelectionResult",
    "CurveSample",
    "SmoothedCurves",
    "EigenSystem",
    "ScoreDesign",
    "FunctionalDesign",
    "PredictionResult",
    "MspeEstimate",
    "MspeReport",
    "DominanceCheck",
    "DominanceReport",
    "ReplicateOutcome",
    "BenchmarkTable",
    "ThresholdPoint",
    "CvResult",
]
