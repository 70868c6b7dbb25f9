#!/usr/bin/env python
"""
This module defines core exceptions for the scenic-rating application.

Command-specific exceptions live in their plugin modules and are registered via the
PluginRegistry's exception registration framework. The exceptions defined here are shared
by the geo and learning packages.

Every exception carries an `exit_code` used by the CLI when the error escapes a command:
1 for usage and configuration problems, 2 for bad input data, 3 for anything else.
"""


class ScenicError(Exception):
    """Base class for all scenic-rating errors."""

    exit_code = 3


class UsageError(ScenicError):
    """Raised when a command is invoked with inconsistent arguments."""

    exit_code = 1


class ConfigError(UsageError):
    """Raised when a pipeline configuration file or value is invalid."""


class MissingConfigVariable(ConfigError):
    """Represents an exception raised when a required environment variable is missing."""


class DataError(ScenicError):
    """Base class for errors caused by the content of input data."""

    exit_code = 2


class IngestError(DataError):
    """Raised when a photo or location file cannot be parsed."""

    def __init__(self, message: str, line: int = None, source: str = None):
        self.line = line
        self.source = source
        prefix = ""
        if source:
            prefix += f"{source}: "
        if line is not None:
            prefix += f"line {line}: "
        super().__init__(f"{prefix}{message}")


class DatasetError(DataError):
    """Raised when a dataset file or in-memory dataset is malformed."""


class FeatureError(DataError):
    """Raised when feature computations receive invalid parameters."""


class SamplingError(DataError):
    """Raised when SMOTE oversampling cannot be performed."""


class TreeError(DataError):
    """Raised when tree induction receives invalid data or parameters."""


class PredictionError(DataError):
    """Raised when a model is applied to inputs of the wrong shape."""


class EnsembleError(DataError):
    """Raised when bagging or boosting cannot be performed."""


class EvaluationError(DataError):
    """Raised when cross-validation or metric computation receives invalid input."""


class ModelFormatError(DataError):
    """Raised when a serialized model document cannot be decoded."""


class StageError(DataError):
    """Raised by pipeline commands to name the stage in which a data error happened."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"{stage}: {cause}")
