#!/usr/bin/env python
"""
Learner registry.

`get_learner` maps a learner name to a configured Learner instance:

- "j48": gain-ratio tree, pessimistic pruning
- "reptree": information-gain tree, reduced-error pruning
- "rf": random forest

Usage example:
learner = get_learner("j48", min_leaf=3)
model = learner.fit(dataset.to_matrix(), seed=1)

Exceptions:
- UsageError: Raised for unknown learner names.
"""

from typing import Dict, Type

from scenic_rating.exceptions.exceptions import UsageError

from .j48_learner import J48Learner
from .learner import Learner
from .random_forest_learner import RandomForestLearner
from .reptree_learner import REPTreeLearner

LEARNERS: Dict[str, Type[Learner]] = {
    "j48": J48Learner,
    "reptree": REPTreeLearner,
    "rf": RandomForestLearner,
}


def get_learner(name: str, **overrides) -> Learner:
    """
    Build a learner by name.

    Arguments:
    - name (str): One of "j48", "reptree" or "rf" (case-insensitive).
    - **overrides: Hyperparameter values; None values and keys the learner does not use are ignored.

    Returns:
    - Learner: The configured learner.

    Exceptions:
    - UsageError: Raised if the name is unknown.
    """
    key = name.lower()
    if key not in LEARNERS:
        raise UsageError(f"Unsupported learner: {name} (choose from {', '.join(LEARNERS)})")
    return LEARNERS[key](**overrides)


__all__ = ["LEARNERS", "J48Learner", "Learner", "REPTreeLearner", "RandomForestLearner", "get_learner"]
