#!/usr/bin/env python
"""
Gain-ratio tree with pessimistic error pruning.

Defaults follow the classic C4.5 settings: confidence factor 0.25 and at least two rows per
branch.
"""

from typing import Any, Dict, Optional

import numpy as np

from scenic_rating.geo.features import LabeledMatrix
from scenic_rating.learners.learner import Learner
from scenic_rating.learning.models import TreeModel
from scenic_rating.learning.trees import TreeParams, train_tree

J48_DEFAULTS = TreeParams(criterion="gain_ratio", min_leaf=2, pruning="pessimistic", confidence=0.25)


class J48Learner(Learner):
    """C4.5-style learner."""

    name = "j48"
    supports_weights = True

    def __init__(self, **overrides):
        self.params = self.apply_overrides(J48_DEFAULTS, overrides)

    def fit(self, data: LabeledMatrix, seed: int, weights: Optional[np.ndarray] = None, n_jobs: int = 1) -> TreeModel:
        return train_tree(data, self.params, seed=seed, weights=weights)

    def describe(self) -> Dict[str, Any]:
        return {"learner": self.name, **self.params.to_dict()}
