#!/usr/bin/env python
"""
SMOTE oversampling and class balancing.

A synthetic instance is placed at a uniformly drawn point of the segment between a
minority row and one of its k nearest same-class neighbours (Euclidean distance in the raw
feature space, ties resolved toward the lower row index). Base rows are visited
round-robin in a seeded order; every class draws from its own substream, so classes can be
oversampled in any order or in parallel with identical results.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import cdist

from scenic_rating.core.logger import get_logger
from scenic_rating.exceptions.exceptions import SamplingError
from scenic_rating.geo.features import Dataset, FeatureVector, LabeledMatrix
from scenic_rating.geo.ingest import ClassLabel
from scenic_rating.learning.seeding import substream

logger = get_logger("sampling")

DEFAULT_K_NEIGHBORS = 5


@dataclass(frozen=True)
class SmoteParams:
    """
    SMOTE configuration.

    Attributes:
        k_neighbors: Number of nearest same-class neighbours considered (>= 1)
        target: Absolute per-class row count to reach; None means the majority count
        percentage: Classic SMOTE N%: synthesize round(|class| * N / 100) rows for every
            class smaller than the majority. Mutually exclusive with target.
    """

    k_neighbors: int = DEFAULT_K_NEIGHBORS
    target: Optional[int] = None
    percentage: Optional[float] = None

    def __post_init__(self):
        if self.k_neighbors < 1:
            raise SamplingError(f"k_neighbors must be >= 1, got {self.k_neighbors}")
        if self.target is not None and self.percentage is not None:
            raise SamplingError("target and percentage are mutually exclusive")
        if self.target is not None and self.target < 0:
            raise SamplingError(f"target must be non-negative, got {self.target}")
        if self.percentage is not None and self.percentage < 0:
            raise SamplingError(f"percentage must be non-negative, got {self.percentage}")


def nearest_neighbors(points: np.ndarray, k: int) -> np.ndarray:
    """
    Indices of each point's k nearest other points.

    Arguments:
        points: (m, d) matrix, m >= 1
        k: Requested neighbour count; the effective count is min(k, m - 1)

    Returns:
        np.ndarray: (m, k_eff) index matrix; for a single point, [[0]]
    """
    m = points.shape[0]
    if m == 1:
        return np.zeros((1, 1), dtype=np.intp)
    k_eff = min(k, m - 1)
    distances = cdist(points, points, metric="euclidean")
    neighbours = np.empty((m, k_eff), dtype=np.intp)
    for i in range(m):
        order = np.argsort(distances[i], kind="stable")
        order = order[order != i]
        neighbours[i] = order[:k_eff]
    return neighbours


def smote_points(points: np.ndarray, n_synthetic: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """
    Generate synthetic points for one class.

    Arguments:
        points: (m, d) minority rows
        n_synthetic: Number of points to create
        k: Neighbour count
        rng: Generator of this class's substream

    Returns:
        np.ndarray: (n_synthetic, d) synthetic rows

    Raises:
        SamplingError: On a negative count or an empty class with n_synthetic > 0
    """
    if n_synthetic < 0:
        raise SamplingError(f"n_synthetic must be non-negative, got {n_synthetic}")
    if k < 1:
        raise SamplingError(f"k must be >= 1, got {k}")
    points = np.asarray(points, dtype=np.float64)
    if n_synthetic == 0:
        return np.empty((0, points.shape[1] if points.ndim == 2 else 0), dtype=np.float64)
    if points.shape[0] == 0:
        raise SamplingError("cannot synthesize rows for an empty class")

    neighbours = nearest_neighbors(points, k)
    visit_order = rng.permutation(points.shape[0])
    synthetic = np.empty((n_synthetic, points.shape[1]), dtype=np.float64)
    for s in range(n_synthetic):
        base = visit_order[s % points.shape[0]]
        partner = neighbours[base, rng.integers(neighbours.shape[1])]
        gap = rng.random()
        synthetic[s] = points[base] + gap * (points[partner] - points[base])
    return synthetic


def _synthetic_id(label: ClassLabel, n: int) -> str:
    return f"synthetic:{label}:{n}"


def smote_class(
    rows: Sequence[FeatureVector], n_synthetic: int, k: int, seed: int, stream: int = 0
) -> List[FeatureVector]:
    """
    SMOTE for the rows of one class.

    Arguments:
        rows: Rows that all share one label
        n_synthetic: Number of synthetic rows to return
        k: Neighbour count
        seed: RNG seed
        stream: Substream key (the class index when called from balance)

    Returns:
        List[FeatureVector]: Synthetic rows marked synthetic, labelled with the class

    Raises:
        SamplingError: On invalid counts or mixed labels
    """
    if n_synthetic < 0:
        raise SamplingError(f"n_synthetic must be non-negative, got {n_synthetic}")
    if n_synthetic == 0:
        return []
    if not rows:
        raise SamplingError("cannot synthesize rows for an empty class")
    labels = {row.label for row in rows}
    if len(labels) != 1:
        raise SamplingError(f"rows must share one label, got {sorted(str(label) for label in labels)}")
    label = rows[0].label

    points = np.array([row.values() for row in rows], dtype=np.float64)
    generated = smote_points(points, n_synthetic, k, substream(seed, stream))
    return [
        FeatureVector.from_values(_synthetic_id(label, n), values, label, synthetic=True)
        for n, values in enumerate(generated)
    ]


def synthetic_counts(class_sizes: Sequence[int], params: SmoteParams) -> List[int]:
    """
    Number of synthetic rows each class receives.

    Arguments:
        class_sizes: Row count per class
        params: SMOTE configuration

    Returns:
        List[int]: Synthetic count per class; classes at or above the target get 0
    """
    majority = max(class_sizes, default=0)
    if params.percentage is not None:
        return [int(round(size * params.percentage / 100.0)) if size < majority else 0 for size in class_sizes]
    target = majority if params.target is None else params.target
    return [max(0, target - size) for size in class_sizes]


def balance_matrix(
    data: LabeledMatrix, params: SmoteParams, seed: int, skip_empty: bool = False
) -> Tuple[LabeledMatrix, np.ndarray]:
    """
    Balance a numeric dataset.

    Arguments:
        data: Rows to balance
        params: SMOTE configuration
        seed: RNG seed; class c draws from substream (seed, c)
        skip_empty: Leave classes without rows empty instead of failing

    Returns:
        Tuple[LabeledMatrix, np.ndarray]: Original rows followed by synthetic rows, and a
        boolean mask flagging the synthetic ones

    Raises:
        SamplingError: If an active class has no rows and skip_empty is False
    """
    sizes = [int(np.count_nonzero(data.labels == c)) for c in range(data.n_classes)]
    empty = [data.classes[c] for c, size in enumerate(sizes) if size == 0]
    if empty and skip_empty:
        logger.warning("Skipping SMOTE for classes without rows: %s", empty)
    elif empty:
        raise SamplingError(f"classes without rows cannot be oversampled: {empty}")

    counts = [0 if size == 0 else count for size, count in zip(sizes, synthetic_counts(sizes, params))]
    blocks = [data.features]
    labels = [data.labels]
    for c, n_new in enumerate(counts):
        if n_new == 0:
            continue
        members = data.features[data.labels == c]
        blocks.append(smote_points(members, n_new, params.k_neighbors, substream(seed, c)))
        labels.append(np.full(n_new, c, dtype=np.intp))
        logger.debug("Class %s: %d original, %d synthetic", data.classes[c], sizes[c], n_new)

    features = np.vstack(blocks)
    all_labels = np.concatenate(labels)
    mask = np.zeros(all_labels.shape[0], dtype=bool)
    mask[len(data) :] = True
    return LabeledMatrix(features, all_labels, data.classes), mask


def balance(dataset: Dataset, params: SmoteParams, seed: int) -> Dataset:
    """
    Oversample every class of a dataset up to the target.

    Original rows are kept verbatim and precede the synthetic rows, which are grouped by
    class in ascending rating order.

    Arguments:
        dataset: Dataset to balance
        params: SMOTE configuration
        seed: RNG seed

    Returns:
        Dataset: Balanced dataset with the same class set

    Raises:
        SamplingError: If an active class has no rows
    """
    counts_by_label = dataset.class_counts()
    empty = [str(label) for label, count in counts_by_label.items() if count == 0]
    if empty:
        raise SamplingError(f"classes without rows cannot be oversampled: {', '.join(empty)}")

    sizes = list(counts_by_label.values())
    rows = list(dataset.rows)
    for c, (label, n_new) in enumerate(zip(dataset.class_set, synthetic_counts(sizes, params))):
        if n_new == 0:
            continue
        members = [row for row in dataset.rows if row.label == label]
        rows.extend(smote_class(members, n_new, params.k_neighbors, seed, stream=c))

    logger.info("Balanced %d rows into %d rows", len(dataset), len(rows))
    return Dataset(rows=rows, class_set=dataset.class_set)
