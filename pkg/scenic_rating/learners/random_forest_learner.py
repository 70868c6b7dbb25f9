#!/usr/bin/env python
"""
Random forest of unpruned information-gain trees.

The forest draws its own bootstrap resamples, so it ignores row weights; boosting a forest
therefore falls back to weighted resampling.
"""

from typing import Any, Dict, Optional

import numpy as np

from scenic_rating.geo.features import LabeledMatrix
from scenic_rating.learners.learner import Learner
from scenic_rating.learning.models import EnsembleModel
from scenic_rating.learning.trees import FOREST_TREE_PARAMS, ForestParams, train_forest


class RandomForestLearner(Learner):
    """Bootstrap forest with per-node feature sampling."""

    name = "rf"
    supports_weights = False

    def __init__(self, **overrides):
        self.forest_params = self.apply_overrides(ForestParams(), overrides)
        self.tree_params = self.apply_overrides(FOREST_TREE_PARAMS, overrides)

    def fit(
        self, data: LabeledMatrix, seed: int, weights: Optional[np.ndarray] = None, n_jobs: int = 1
    ) -> EnsembleModel:
        return train_forest(data, self.forest_params, self.tree_params, seed=seed, n_jobs=n_jobs)

    def describe(self) -> Dict[str, Any]:
        return {"learner": self.name, **self.forest_params.to_dict(), "tree": self.tree_params.to_dict()}
