#!/usr/bin/env python
"""
Decision-tree induction.

Trees are grown greedily top-down with binary numeric splits whose thresholds are midpoints
between consecutive distinct feature values. Two scoring criteria are available: information
gain, and gain ratio restricted to candidate thresholds whose gain reaches the mean gain of
the feature's candidates. Rows may carry weights; class counts are weighted, leaf-size limits
count rows.

Pruning variants:
    pessimistic    error-based subtree replacement using the upper confidence limit of the
                   binomial error rate at each node
    reduced_error  bottom-up replacement of any subtree that does not beat a leaf on a
                   seeded stratified holdout carved from the training rows
    none           keep the grown tree

A random forest trains independent unpruned trees on bootstrap resamples, sampling a subset
of candidate features at every node.
"""

import math
from dataclasses import asdict, dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed
from scipy.stats import norm

from scenic_rating.core.logger import get_logger
from scenic_rating.exceptions.exceptions import TreeError
from scenic_rating.geo.features import N_FEATURES, Dataset, LabeledMatrix
from scenic_rating.learning.models import (
    EnsembleModel,
    Leaf,
    Split,
    TreeModel,
    TreeNode,
    argmax_lowest,
    model_summary,
    predict,
    predict_indices,
)
from scenic_rating.learning.seeding import derive_seed, substream, validate_seed

logger = get_logger("trees")

CRITERIA = ("gain_ratio", "info_gain")
PRUNING_METHODS = ("pessimistic", "reduced_error", "none")

# scores closer than this (relative to the best) count as ties
TIE_TOLERANCE = 1e-12
MIN_GAIN = 1e-12

__all__ = [
    "CRITERIA",
    "PRUNING_METHODS",
    "ForestParams",
    "TreeParams",
    "best_split",
    "canonical_order",
    "entropy",
    "model_summary",
    "pessimistic_errors",
    "predict",
    "predict_indices",
    "train_forest",
    "train_tree",
]


@dataclass(frozen=True)
class TreeParams:
    """
    Tree induction settings.

    Attributes:
        criterion: "gain_ratio" or "info_gain"
        min_leaf: Minimum number of rows on each side of a split
        max_depth: Maximum depth, None for unlimited
        pruning: "pessimistic", "reduced_error" or "none"
        confidence: Confidence factor of pessimistic pruning, in (0, 0.5)
        holdout_fraction: Share of each class held out for reduced-error pruning, in (0, 1)
    """

    criterion: str = "gain_ratio"
    min_leaf: int = 2
    max_depth: Optional[int] = None
    pruning: str = "pessimistic"
    confidence: float = 0.25
    holdout_fraction: float = 1.0 / 3.0

    def __post_init__(self):
        if self.criterion not in CRITERIA:
            raise TreeError(f"criterion must be one of {', '.join(CRITERIA)}, got {self.criterion!r}")
        if self.pruning not in PRUNING_METHODS:
            raise TreeError(f"pruning must be one of {', '.join(PRUNING_METHODS)}, got {self.pruning!r}")
        if self.min_leaf < 1:
            raise TreeError(f"min_leaf must be >= 1, got {self.min_leaf}")
        if self.max_depth is not None and self.max_depth < 0:
            raise TreeError(f"max_depth must be >= 0, got {self.max_depth}")
        if not 0.0 < self.confidence < 0.5:
            raise TreeError(f"confidence must be in (0, 0.5), got {self.confidence}")
        if not 0.0 < self.holdout_fraction < 1.0:
            raise TreeError(f"holdout_fraction must be in (0, 1), got {self.holdout_fraction}")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ForestParams:
    """Random forest settings."""

    n_trees: int = 100
    features_per_split: int = int(math.log2(N_FEATURES) + 1)
    bootstrap: bool = True

    def __post_init__(self):
        if self.n_trees < 1:
            raise TreeError(f"n_trees must be >= 1, got {self.n_trees}")
        if not 1 <= self.features_per_split <= N_FEATURES:
            raise TreeError(f"features_per_split must be in [1, {N_FEATURES}], got {self.features_per_split}")

    def to_dict(self) -> dict:
        return asdict(self)


# Unpruned info-gain trees grown to purity, the usual forest members.
FOREST_TREE_PARAMS = TreeParams(criterion="info_gain", min_leaf=1, pruning="none")


def entropy(class_counts: Sequence[float]) -> float:
    """
    Shannon entropy of a class distribution in bits.

    Arguments:
        class_counts: Non-negative (possibly weighted) counts per class

    Returns:
        float: -sum(p * log2 p) over classes with p > 0

    Raises:
        TreeError: If a count is negative or all counts are zero
    """
    counts = np.asarray(class_counts, dtype=np.float64)
    if np.any(counts < 0):
        raise TreeError(f"class counts must be non-negative, got {list(class_counts)}")
    total = counts.sum()
    if total <= 0:
        raise TreeError("entropy is undefined for all-zero class counts")
    p = counts[counts > 0] / total
    return float(max(0.0, -np.sum(p * np.log2(p))))


def _entropy_rows(counts: np.ndarray) -> np.ndarray:
    """Row-wise entropy of a (m, C) count matrix; all-zero rows give 0."""
    totals = counts.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(totals > 0, counts / totals, 0.0)
        terms = np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return np.maximum(0.0, -terms.sum(axis=1))


def _score_feature(
    values: np.ndarray, onehot: np.ndarray, criterion: str, min_leaf: int
) -> Optional[Tuple[float, float, float]]:
    """
    Best threshold of one feature.

    Arguments:
        values: (m,) feature values of the node's rows
        onehot: (m, C) row weight placed in each row's class column
        criterion: Scoring criterion
        min_leaf: Minimum rows per side

    Returns:
        Optional[Tuple[float, float, float]]: (threshold, score, gain), or None when no
        admissible threshold exists
    """
    m = values.shape[0]
    if m < 2:
        return None
    order = np.argsort(values, kind="stable")
    sorted_values = values[order]
    cumulative = np.cumsum(onehot[order], axis=0)
    total = cumulative[-1]

    positions = np.nonzero(sorted_values[:-1] < sorted_values[1:])[0]
    left_rows = positions + 1
    positions = positions[(left_rows >= min_leaf) & (m - left_rows >= min_leaf)]
    if positions.size == 0:
        return None

    left = cumulative[positions]
    right = total - left
    w_left = left.sum(axis=1)
    w_right = right.sum(axis=1)
    w_total = float(total.sum())
    if w_total <= 0:
        return None

    parent = _entropy_rows(total.reshape(1, -1))[0]
    gain = parent - (w_left / w_total) * _entropy_rows(left) - (w_right / w_total) * _entropy_rows(right)

    if criterion == "info_gain":
        score = gain
        eligible = np.ones_like(gain, dtype=bool)
    else:
        split_info = _entropy_rows(np.column_stack([w_left, w_right]))
        eligible = (gain >= gain.mean() - TIE_TOLERANCE) & (split_info > 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            score = np.where(split_info > 0, gain / split_info, 0.0)
    if not np.any(eligible):
        return None

    best = float(np.max(score[eligible]))
    tolerance = TIE_TOLERANCE * max(1.0, abs(best))
    chosen = int(np.nonzero(eligible & (score >= best - tolerance))[0][0])
    i = positions[chosen]
    low, high = float(sorted_values[i]), float(sorted_values[i + 1])
    threshold = (low + high) / 2.0
    if threshold >= high:
        threshold = low
    return threshold, float(score[chosen]), float(gain[chosen])


def _onehot(labels: np.ndarray, weights: np.ndarray, n_classes: int) -> np.ndarray:
    onehot = np.zeros((labels.shape[0], n_classes))
    onehot[np.arange(labels.shape[0]), labels] = weights
    return onehot


def best_split(
    features: np.ndarray,
    labels: np.ndarray,
    feature_index: int,
    criterion: str = "info_gain",
    weights: Optional[np.ndarray] = None,
    n_classes: Optional[int] = None,
    min_leaf: int = 1,
) -> Optional[Tuple[float, float]]:
    """
    Best threshold for one feature.

    Every midpoint between consecutive distinct sorted values is scored; ties go to the
    lower threshold.

    Arguments:
        features: (m, F) feature matrix of the rows under consideration
        labels: (m,) class indices
        feature_index: Column to split on
        criterion: "info_gain" or "gain_ratio"
        weights: Optional row weights, default 1
        n_classes: Number of classes, default max(labels) + 1
        min_leaf: Minimum number of rows on each side

    Returns:
        Optional[Tuple[float, float]]: (threshold, score in bits or as a ratio), or None
        when the feature is constant or no threshold satisfies min_leaf
    """
    if criterion not in CRITERIA:
        raise TreeError(f"criterion must be one of {', '.join(CRITERIA)}, got {criterion!r}")
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.intp)
    w = np.ones(y.shape[0]) if weights is None else np.asarray(weights, dtype=np.float64)
    if n_classes is None:
        n_classes = int(y.max()) + 1 if y.size else 1
    result = _score_feature(X[:, feature_index], _onehot(y, w, n_classes), criterion, min_leaf)
    if result is None:
        return None
    threshold, score, _ = result
    return threshold, score


class _TreeGrower:
    """Greedy top-down induction over a fixed training matrix."""

    def __init__(
        self,
        X: np.ndarray,
        y: np.ndarray,
        w: np.ndarray,
        n_classes: int,
        params: TreeParams,
        features_per_split: Optional[int] = None,
        rng: Optional[np.random.Generator] = None,
    ):
        self.X = X
        self.y = y
        self.w = w
        self.n_classes = n_classes
        self.params = params
        self.features_per_split = features_per_split
        self.rng = rng
        self.onehot = _onehot(y, w, n_classes)

    def _counts(self, rows: np.ndarray) -> np.ndarray:
        return self.onehot[rows].sum(axis=0)

    def _candidate_features(self) -> np.ndarray:
        n_features = self.X.shape[1]
        if self.rng is None or self.features_per_split is None:
            return np.arange(n_features)
        chosen = self.rng.choice(n_features, size=self.features_per_split, replace=False)
        return np.sort(chosen)

    def _leaf(self, counts: np.ndarray) -> Leaf:
        return Leaf(counts=tuple(float(c) for c in counts), predicted=argmax_lowest(counts))

    def grow(self, rows: np.ndarray, depth: int = 0) -> TreeNode:
        counts = self._counts(rows)
        params = self.params
        if (
            np.count_nonzero(counts > 0) <= 1
            or rows.shape[0] < 2 * params.min_leaf
            or (params.max_depth is not None and depth >= params.max_depth)
        ):
            return self._leaf(counts)

        best = None
        for feature in self._candidate_features():
            result = _score_feature(self.X[rows, feature], self.onehot[rows], params.criterion, params.min_leaf)
            if result is None:
                continue
            threshold, score, gain = result
            if gain <= MIN_GAIN:
                continue
            if best is None or score > best[2] + TIE_TOLERANCE * max(1.0, abs(best[2])):
                best = (int(feature), threshold, score)
        if best is None:
            return self._leaf(counts)

        feature, threshold, _ = best
        goes_left = self.X[rows, feature] <= threshold
        return Split(
            feature=feature,
            threshold=threshold,
            left=self.grow(rows[goes_left], depth + 1),
            right=self.grow(rows[~goes_left], depth + 1),
            counts=tuple(float(c) for c in counts),
        )


def pessimistic_errors(n: float, errors: float, confidence: float) -> float:
    """
    Extra errors added to the observed count by the pessimistic estimate.

    Uses the upper limit of the binomial confidence interval (normal approximation with
    continuity correction); counts below one are interpolated.

    Arguments:
        n: Weighted number of rows at the node
        errors: Weighted number of misclassified rows
        confidence: Confidence factor in (0, 0.5)

    Returns:
        float: Number of errors to add to `errors`
    """
    if n <= 0:
        return 0.0
    if errors < 1:
        base = n * (1.0 - confidence ** (1.0 / n))
        if errors == 0:
            return base
        return base + errors * (pessimistic_errors(n, 1.0, confidence) - base)
    if errors + 0.5 >= n:
        return max(n - errors, 0.0)
    z = float(norm.ppf(1.0 - confidence))
    f = (errors + 0.5) / n
    r = (f + (z * z) / (2 * n) + z * math.sqrt(f / n - f * f / n + z * z / (4 * n * n))) / (1 + z * z / n)
    return r * n - errors


def _leaf_estimate(counts: Sequence[float], confidence: float) -> float:
    n = float(sum(counts))
    errors = n - float(max(counts))
    return errors + pessimistic_errors(n, errors, confidence)


def _prune_pessimistic(node: TreeNode, confidence: float) -> Tuple[TreeNode, float]:
    """Bottom-up subtree replacement; returns the new node and its estimated errors."""
    if isinstance(node, Leaf):
        return node, _leaf_estimate(node.counts, confidence)
    left, left_estimate = _prune_pessimistic(node.left, confidence)
    right, right_estimate = _prune_pessimistic(node.right, confidence)
    subtree_estimate = left_estimate + right_estimate
    leaf_estimate = _leaf_estimate(node.counts, confidence)
    if leaf_estimate <= subtree_estimate:
        counts = np.asarray(node.counts)
        return Leaf(counts=node.counts, predicted=argmax_lowest(counts)), leaf_estimate
    return Split(node.feature, node.threshold, left, right, node.counts), subtree_estimate


def _prune_reduced_error(
    node: TreeNode, X: np.ndarray, y: np.ndarray, w: np.ndarray, rows: np.ndarray
) -> Tuple[TreeNode, float]:
    """Bottom-up replacement judged on holdout rows; returns the new node and its holdout errors."""
    if isinstance(node, Leaf):
        return node, float(w[rows][y[rows] != node.predicted].sum())
    goes_left = X[rows, node.feature] <= node.threshold
    left, left_errors = _prune_reduced_error(node.left, X, y, w, rows[goes_left])
    right, right_errors = _prune_reduced_error(node.right, X, y, w, rows[~goes_left])
    predicted = argmax_lowest(np.asarray(node.counts))
    leaf_errors = float(w[rows][y[rows] != predicted].sum())
    if leaf_errors <= left_errors + right_errors:
        return Leaf(counts=node.counts, predicted=predicted), leaf_errors
    return Split(node.feature, node.threshold, left, right, node.counts), left_errors + right_errors


def canonical_order(X: np.ndarray, y: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Permutation sorting rows lexicographically by features, then label, then weight."""
    keys = [w, y] + [X[:, j] for j in range(X.shape[1] - 1, -1, -1)]
    return np.lexsort(keys)


def stratified_holdout(y: np.ndarray, n_classes: int, fraction: float, rng: np.random.Generator) -> np.ndarray:
    """
    Boolean mask selecting floor(fraction * |class|) seeded rows of every class.

    Classes are visited in ascending order, so the mask depends only on the row order,
    the labels and the generator state.
    """
    holdout = np.zeros(y.shape[0], dtype=bool)
    for c in range(n_classes):
        members = np.nonzero(y == c)[0]
        n_hold = int(math.floor(members.shape[0] * fraction))
        if n_hold:
            holdout[rng.permutation(members)[:n_hold]] = True
    return holdout


def _as_matrix(data: Union[Dataset, LabeledMatrix]) -> LabeledMatrix:
    return data.to_matrix() if isinstance(data, Dataset) else data


def _normalized_weights(weights: Optional[np.ndarray], n: int) -> np.ndarray:
    if weights is None:
        return np.ones(n)
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (n,):
        raise TreeError(f"expected {n} row weights, got shape {w.shape}")
    if not np.all(np.isfinite(w)) or np.any(w < 0) or w.sum() <= 0:
        raise TreeError("row weights must be finite, non-negative and not all zero")
    return w * (n / w.sum())


def _fit_tree(
    data: LabeledMatrix,
    params: TreeParams,
    seed: int,
    weights: Optional[np.ndarray],
    features_per_split: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> TreeModel:
    n = len(data)
    if n == 0:
        raise TreeError("cannot train a tree on an empty dataset")
    X = np.asarray(data.features, dtype=np.float64)
    y = np.asarray(data.labels, dtype=np.intp)
    w = _normalized_weights(weights, n)

    if params.pruning == "reduced_error":
        order = canonical_order(X, y, w)
        X, y, w = X[order], y[order], w[order]
        holdout = stratified_holdout(y, data.n_classes, params.holdout_fraction, substream(seed, 0))
    else:
        holdout = np.zeros(n, dtype=bool)

    grower = _TreeGrower(X, y, w, data.n_classes, params, features_per_split, rng)
    root = grower.grow(np.nonzero(~holdout)[0])

    if params.pruning == "pessimistic":
        root, _ = _prune_pessimistic(root, params.confidence)
    elif params.pruning == "reduced_error":
        if holdout.any():
            root, _ = _prune_reduced_error(root, X, y, w, np.nonzero(holdout)[0])
        else:
            logger.debug("Holdout set is empty; skipping reduced-error pruning")

    return TreeModel(root=root, classes=tuple(data.classes), params=params.to_dict(), seed=seed, n_features=X.shape[1])


def train_tree(
    dataset: Union[Dataset, LabeledMatrix],
    params: TreeParams = TreeParams(),
    seed: int = 1,
    weights: Optional[np.ndarray] = None,
) -> TreeModel:
    """
    Grow (and prune) one decision tree.

    Arguments:
        dataset: Training rows
        params: Induction and pruning settings
        seed: Seed of the reduced-error holdout split
        weights: Optional non-negative row weights, rescaled to sum to the row count

    Returns:
        TreeModel: The trained tree

    Raises:
        TreeError: On an empty dataset or invalid weights
    """
    seed = validate_seed(seed)
    model = _fit_tree(_as_matrix(dataset), params, seed, weights)
    logger.debug("Trained tree: %s", model_summary(model))
    return model


def _train_forest_member(
    data: LabeledMatrix, forest: ForestParams, tree_params: TreeParams, tree_seed: int
) -> TreeModel:
    rng = substream(tree_seed)
    n = len(data)
    sample = rng.integers(0, n, size=n) if forest.bootstrap else np.arange(n)
    return _fit_tree(data.take(sample), tree_params, tree_seed, None, forest.features_per_split, rng)


def train_forest(
    dataset: Union[Dataset, LabeledMatrix],
    params: ForestParams = ForestParams(),
    tree_params: Optional[TreeParams] = None,
    seed: int = 1,
    n_jobs: int = 1,
) -> EnsembleModel:
    """
    Train a random forest.

    Tree t uses seed + t for its bootstrap resample and its per-node feature sampling, so
    the forest does not depend on n_jobs.

    Arguments:
        dataset: Training rows
        params: Forest settings
        tree_params: Member tree settings, unpruned info-gain trees by default
        seed: Forest seed
        n_jobs: Worker threads

    Returns:
        EnsembleModel: kind "forest", every member with weight 1

    Raises:
        TreeError: On an empty dataset
    """
    seed = validate_seed(seed)
    tree_params = tree_params or FOREST_TREE_PARAMS
    data = _as_matrix(dataset)
    if len(data) == 0:
        raise TreeError("cannot train a forest on an empty dataset")
    order = canonical_order(data.features, data.labels, np.ones(len(data)))
    data = data.take(order)

    trees: List[TreeModel] = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_train_forest_member)(data, params, tree_params, derive_seed(seed, t)) for t in range(params.n_trees)
    )
    logger.info("Trained forest of %d trees", len(trees))
    return EnsembleModel(
        members=tuple((tree, 1.0) for tree in trees),
        kind="forest",
        classes=tuple(data.classes),
        params={"forest": params.to_dict(), "tree": tree_params.to_dict()},
        seed=seed,
        n_features=data.features.shape[1],
    )
