#!/usr/bin/env python
"""
Abstract base class that defines the interface shared by every base learner.

A learner bundles an induction algorithm with its hyperparameters. Ensembles only talk to
this interface, so any learner can be bagged or boosted.

Methods:
- fit(data, seed, weights=None, n_jobs=1): Train a model on a LabeledMatrix.
- describe(): Hyperparameters recorded in reports and model files.
"""

from abc import ABC, abstractmethod
from dataclasses import fields, replace
from typing import Any, Dict, Optional

import numpy as np

from scenic_rating.geo.features import LabeledMatrix
from scenic_rating.learning.models import Model


class Learner(ABC):
    """
    Base class for the tree learners.

    Attributes:
    - name (str): Registry name of the learner.
    - supports_weights (bool): Whether fit honours row weights natively. Boosting resamples
      by weight for learners that do not.
    """

    name: str = ""
    supports_weights: bool = True

    @staticmethod
    def apply_overrides(params, overrides: Dict[str, Any]):
        """
        Return a copy of a parameter dataclass with the matching, non-None overrides applied.

        Arguments:
        - params: A frozen parameter dataclass.
        - overrides (Dict[str, Any]): Candidate values keyed by field name; other keys are ignored.

        Returns:
        - The updated dataclass.
        """
        names = {f.name for f in fields(params)}
        relevant = {key: value for key, value in overrides.items() if key in names and value is not None}
        return replace(params, **relevant) if relevant else params

    @abstractmethod
    def fit(self, data: LabeledMatrix, seed: int, weights: Optional[np.ndarray] = None, n_jobs: int = 1) -> Model:
        """Train a model on the given rows."""

    @abstractmethod
    def describe(self) -> Dict[str, Any]:
        """Hyperparameters of this learner."""

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.describe()})"
