"""
Custom exceptions for the scenic-rating application.

This module re-exports the core exception classes used throughout the package. Command
specific exceptions are defined within their plugin modules and registered via the plugin
exception registry.

Core Exception Classes:
    - ScenicError: Base class, exit code 3
    - UsageError / ConfigError / MissingConfigVariable: Invocation problems, exit code 1
    - DataError and its component subclasses: Bad input data, exit code 2
"""

from scenic_rating.exceptions.exceptions import (
    ConfigError,
    DataError,
    DatasetError,
    EnsembleError,
    EvaluationError,
    FeatureError,
    IngestError,
    MissingConfigVariable,
    ModelFormatError,
    PredictionError,
    SamplingError,
    ScenicError,
    StageError,
    TreeError,
    UsageError,
)

__all__ = [
    "ConfigError",
    "DataError",
    "DatasetError",
    "EnsembleError",
    "EvaluationError",
    "FeatureError",
    "IngestError",
    "MissingConfigVariable",
    "ModelFormatError",
    "PredictionError",
    "SamplingError",
    "ScenicError",
    "StageError",
    "TreeError",
    "UsageError",
]
