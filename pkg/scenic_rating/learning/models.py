#!/usr/bin/env python
"""
Trained model structures and prediction.

Models are immutable: a TreeModel wraps a tree of Leaf and Split nodes, an EnsembleModel
wraps an ordered list of (member, weight) pairs. Both carry the ratings of the classes they
were trained on, so class indices map back to ClassLabel values.

Prediction routes by threshold (values equal to the threshold go left). A tree reports the
normalized counts of the leaf it reaches; an ensemble reports the normalized weighted vote
of its members' hard predictions. Every argmax resolves ties toward the lower rating.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Sequence, Tuple, Union

import numpy as np

from scenic_rating.exceptions.exceptions import PredictionError
from scenic_rating.geo.features import N_FEATURES
from scenic_rating.geo.ingest import ClassLabel

ENSEMBLE_KINDS = ("bagging", "boosting", "forest")


@dataclass(frozen=True)
class Leaf:
    """Terminal node holding the (weighted) class counts of its training rows."""

    counts: Tuple[float, ...]
    predicted: int


@dataclass(frozen=True)
class Split:
    """Binary split: rows with features[feature] <= threshold go left."""

    feature: int
    threshold: float
    left: "TreeNode"
    right: "TreeNode"
    counts: Tuple[float, ...]


TreeNode = Union[Leaf, Split]


@dataclass(frozen=True)
class TreeModel:
    """A trained decision tree."""

    root: TreeNode
    classes: Tuple[float, ...]
    params: Dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    n_features: int = N_FEATURES

    @property
    def n_classes(self) -> int:
        return len(self.classes)


@dataclass(frozen=True)
class EnsembleModel:
    """
    An ordered list of weighted member models.

    Attributes:
        members: (model, weight) pairs; members are TreeModel or EnsembleModel instances
        kind: One of "bagging", "boosting" or "forest"
        classes: Ratings of the classes, ascending
        params: Training parameters, recorded for serialization
        seed: Seed the ensemble was trained with
    """

    members: Tuple[Tuple["Model", float], ...]
    kind: str
    classes: Tuple[float, ...]
    params: Dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    n_features: int = N_FEATURES

    def __post_init__(self):
        if self.kind not in ENSEMBLE_KINDS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}")
        if not self.members:
            raise ValueError("an ensemble needs at least one member")
        for _, weight in self.members:
            if not np.isfinite(weight) or weight < 0:
                raise ValueError(f"member weights must be finite and non-negative, got {weight}")

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def weights(self) -> List[float]:
        return [weight for _, weight in self.members]


Model = Union[TreeModel, EnsembleModel]


def argmax_lowest(values: np.ndarray) -> int:
    """Index of the maximum; the first (lowest-rated) index wins ties."""
    return int(np.argmax(values))


def iter_nodes(node: TreeNode) -> Iterator[TreeNode]:
    """Pre-order traversal of a tree."""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        if isinstance(current, Split):
            stack.append(current.right)
            stack.append(current.left)


def route(root: TreeNode, x: Sequence[float]) -> Leaf:
    """Follow thresholds from the root to the leaf reached by one feature vector."""
    node = root
    while isinstance(node, Split):
        node = node.left if x[node.feature] <= node.threshold else node.right
    return node


def _check_vector(model: Model, features: Sequence[float]) -> np.ndarray:
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != model.n_features:
        raise PredictionError(f"expected {model.n_features} feature values, got shape {x.shape}")
    return x


def _check_matrix(model: Model, features: np.ndarray) -> np.ndarray:
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise PredictionError(f"expected an (n, {model.n_features}) matrix, got shape {X.shape}")
    return X


def _leaf_distribution(leaf: Leaf, n_classes: int) -> np.ndarray:
    counts = np.asarray(leaf.counts, dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        return np.full(n_classes, 1.0 / n_classes)
    return counts / total


def _tree_leaf_indices(node: TreeNode, X: np.ndarray, rows: np.ndarray, out: np.ndarray) -> None:
    if isinstance(node, Leaf):
        out[rows] = node.predicted
        return
    goes_left = X[rows, node.feature] <= node.threshold
    if np.any(goes_left):
        _tree_leaf_indices(node.left, X, rows[goes_left], out)
    if not np.all(goes_left):
        _tree_leaf_indices(node.right, X, rows[~goes_left], out)


def vote_matrix(model: EnsembleModel, X: np.ndarray) -> np.ndarray:
    """
    Weighted member votes for every row.

    Arguments:
        model: Ensemble to evaluate
        X: (n, 11) feature matrix

    Returns:
        np.ndarray: (n, n_classes) summed member weights per predicted class. Rows where
        every voting member has weight 0 fall back to unweighted counts.
    """
    n = X.shape[0]
    weighted = np.zeros((n, model.n_classes))
    unweighted = np.zeros((n, model.n_classes))
    rows = np.arange(n)
    for member, weight in model.members:
        predicted = predict_indices(member, X)
        weighted[rows, predicted] += weight
        unweighted[rows, predicted] += 1.0
    empty = weighted.sum(axis=1) <= 0
    weighted[empty] = unweighted[empty]
    return weighted


def predict_indices(model: Model, features: np.ndarray) -> np.ndarray:
    """
    Predicted class index for every row of a feature matrix.

    Arguments:
        model: Tree or ensemble
        features: (n, 11) matrix

    Returns:
        np.ndarray: (n,) class indices into model.classes

    Raises:
        PredictionError: On a column count different from the model's
    """
    X = _check_matrix(model, features)
    if isinstance(model, TreeModel):
        out = np.zeros(X.shape[0], dtype=np.intp)
        if X.shape[0]:
            _tree_leaf_indices(model.root, X, np.arange(X.shape[0]), out)
        return out
    if X.shape[0] == 0:
        return np.zeros(0, dtype=np.intp)
    return np.argmax(vote_matrix(model, X), axis=1).astype(np.intp)


def distribution(model: Model, features: Sequence[float]) -> np.ndarray:
    """Per-class distribution for one feature vector, summing to 1."""
    x = _check_vector(model, features)
    if isinstance(model, TreeModel):
        return _leaf_distribution(route(model.root, x), model.n_classes)
    votes = vote_matrix(model, x.reshape(1, -1))[0]
    return votes / votes.sum()


def predict(model: Model, features: Sequence[float]) -> Tuple[ClassLabel, np.ndarray]:
    """
    Predict the class of one feature vector.

    Arguments:
        model: Tree or ensemble
        features: The 11 feature values in schema order

    Returns:
        Tuple[ClassLabel, np.ndarray]: Predicted label and the per-class distribution
        (normalized leaf counts for a tree, weighted vote shares for an ensemble)

    Raises:
        PredictionError: On an arity mismatch
    """
    shares = distribution(model, features)
    if isinstance(model, TreeModel):
        index = route(model.root, np.asarray(features, dtype=np.float64)).predicted
    else:
        index = argmax_lowest(shares)
    return ClassLabel(model.classes[index]), shares


def tree_depth(node: TreeNode) -> int:
    """Number of edges on the longest root-to-leaf path."""
    depth = 0
    stack = [(node, 0)]
    while stack:
        current, level = stack.pop()
        depth = max(depth, level)
        if isinstance(current, Split):
            stack.append((current.left, level + 1))
            stack.append((current.right, level + 1))
    return depth


def model_summary(model: Model) -> Dict[str, Any]:
    """
    Describe the size of a trained model.

    Returns:
        Dict[str, Any]: nodes, leaves and depth for a tree; kind, member count and
        weights for an ensemble
    """
    if isinstance(model, TreeModel):
        nodes = list(iter_nodes(model.root))
        return {
            "kind": "tree",
            "nodes": len(nodes),
            "leaves": sum(1 for node in nodes if isinstance(node, Leaf)),
            "depth": tree_depth(model.root),
        }
    return {
        "kind": model.kind,
        "members": len(model.members),
        "weights": model.weights,
    }
