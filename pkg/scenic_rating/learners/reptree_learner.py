#!/usr/bin/env python
"""
Information-gain tree with reduced-error pruning on a seeded stratified holdout.

A third of every class is held out for pruning by default.
"""

from typing import Any, Dict, Optional

import numpy as np

from scenic_rating.geo.features import LabeledMatrix
from scenic_rating.learners.learner import Learner
from scenic_rating.learning.models import TreeModel
from scenic_rating.learning.trees import TreeParams, train_tree

REPTREE_DEFAULTS = TreeParams(criterion="info_gain", min_leaf=2, pruning="reduced_error", holdout_fraction=1.0 / 3.0)


class REPTreeLearner(Learner):
    """Fast tree learner pruned against holdout error."""

    name = "reptree"
    supports_weights = True

    def __init__(self, **overrides):
        self.params = self.apply_overrides(REPTREE_DEFAULTS, overrides)

    def fit(self, data: LabeledMatrix, seed: int, weights: Optional[np.ndarray] = None, n_jobs: int = 1) -> TreeModel:
        return train_tree(data, self.params, seed=seed, weights=weights)

    def describe(self) -> Dict[str, Any]:
        return {"learner": self.name, **self.params.to_dict()}
