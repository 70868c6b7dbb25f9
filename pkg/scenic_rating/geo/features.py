#!/usr/bin/env python
"""
Aggregate social-metadata features per location.

Each location is described by eleven aggregates of the photos assigned to it: the photo
count within the join radius (the "photo density"), the total and per-photo views,
favorites and comments, the favorite-to-view and comment-to-view ratios, the number of
distinct owners and the largest number of photos contributed by a single owner.

Averages over zero photos and ratios over zero views are defined as 0.

The module also holds the Dataset container, its CSV file format and the per-class
feature histograms.
"""

import io
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from scenic_rating.core.atomic_io import atomic_write_text
from scenic_rating.core.logger import get_logger
from scenic_rating.exceptions.exceptions import DatasetError, FeatureError
from scenic_rating.geo.ingest import ClassLabel, LocationRecord, PhotoMeta, parse_rating

logger = get_logger("features")

FEATURE_NAMES: Tuple[str, ...] = (
    "photo_density",
    "total_views",
    "total_favorites",
    "total_comments",
    "avg_views",
    "avg_favorites",
    "avg_comments",
    "fav_to_view_ratio",
    "comment_to_view_ratio",
    "distinct_users",
    "max_photos_per_user",
)

N_FEATURES = len(FEATURE_NAMES)

DATASET_COLUMNS: Tuple[str, ...] = ("location_id",) + FEATURE_NAMES + ("label",)
SYNTHETIC_COLUMN = "synthetic"
HISTOGRAM_COLUMNS: Tuple[str, ...] = ("feature", "bin_low", "bin_high", "class", "count")


@dataclass(frozen=True)
class FeatureVector:
    """The eleven aggregate features of one location plus its label."""

    location_id: str
    photo_density: float
    total_views: float
    total_favorites: float
    total_comments: float
    avg_views: float
    avg_favorites: float
    avg_comments: float
    fav_to_view_ratio: float
    comment_to_view_ratio: float
    distinct_users: float
    max_photos_per_user: float
    label: ClassLabel
    synthetic: bool = False

    def values(self) -> Tuple[float, ...]:
        """Return the feature values in schema order."""
        return tuple(getattr(self, name) for name in FEATURE_NAMES)

    @classmethod
    def from_values(
        cls, location_id: str, values: Sequence[float], label: ClassLabel, synthetic: bool = False
    ) -> "FeatureVector":
        """Build a vector from values given in schema order."""
        if len(values) != N_FEATURES:
            raise FeatureError(f"expected {N_FEATURES} feature values, got {len(values)}")
        named = {name: float(v) for name, v in zip(FEATURE_NAMES, values)}
        return cls(location_id=location_id, label=label, synthetic=synthetic, **named)


@dataclass(frozen=True)
class LabeledMatrix:
    """
    Numeric view of a dataset used by the learners.

    Attributes:
        features: (n, 11) float64 matrix in schema order
        labels: (n,) int array of indices into classes
        classes: Ratings of the active classes, ascending
    """

    features: np.ndarray
    labels: np.ndarray
    classes: Tuple[float, ...]

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def take(self, indices: Sequence[int]) -> "LabeledMatrix":
        """Return the rows at the given positions (repetition allowed)."""
        idx = np.asarray(indices, dtype=np.intp)
        return LabeledMatrix(self.features[idx], self.labels[idx], self.classes)


@dataclass
class Dataset:
    """
    Feature rows of a set of locations.

    Attributes:
        rows: One FeatureVector per location (or synthetic instance)
        class_set: Active class labels in ascending rating order
        schema: Feature names, fixed to FEATURE_NAMES
    """

    rows: List[FeatureVector]
    class_set: Tuple[ClassLabel, ...]
    schema: Tuple[str, ...] = field(default=FEATURE_NAMES)

    def __post_init__(self):
        self.class_set = tuple(sorted(set(self.class_set)))
        if tuple(self.schema) != FEATURE_NAMES:
            raise DatasetError(f"unsupported schema {self.schema}")
        allowed = set(self.class_set)
        for row in self.rows:
            if row.label not in allowed:
                raise DatasetError(f"row {row.location_id!r} has label {row.label} outside the class set")

    @classmethod
    def from_rows(cls, rows: Sequence[FeatureVector], class_set: Optional[Sequence[ClassLabel]] = None) -> "Dataset":
        """Build a dataset, inferring the class set from the rows when not given."""
        rows = list(rows)
        if class_set is None:
            class_set = sorted({row.label for row in rows})
        return cls(rows=rows, class_set=tuple(class_set))

    def __len__(self) -> int:
        return len(self.rows)

    def class_index(self) -> Dict[ClassLabel, int]:
        """Map each active label to its position in class_set."""
        return {label: i for i, label in enumerate(self.class_set)}

    def class_counts(self) -> Dict[ClassLabel, int]:
        """Number of rows per active class, in class order."""
        counts = Counter(row.label for row in self.rows)
        return {label: counts.get(label, 0) for label in self.class_set}

    def subset(self, indices: Sequence[int]) -> "Dataset":
        """Return the rows at the given positions with the same class set."""
        return Dataset(rows=[self.rows[i] for i in indices], class_set=self.class_set)

    def to_matrix(self) -> LabeledMatrix:
        """Convert to the numeric form consumed by samplers and learners."""
        index = self.class_index()
        features = np.array([row.values() for row in self.rows], dtype=np.float64).reshape(len(self.rows), N_FEATURES)
        labels = np.array([index[row.label] for row in self.rows], dtype=np.intp)
        return LabeledMatrix(features, labels, tuple(label.rating for label in self.class_set))


@dataclass(frozen=True)
class HistogramBin:
    """Count of one class within one equal-width bin of one feature."""

    feature: str
    bin_low: float
    bin_high: float
    label: ClassLabel
    count: int


def extract_features(location: LocationRecord, photos: Sequence[PhotoMeta]) -> FeatureVector:
    """
    Compute the eleven aggregate features of one location.

    Arguments:
        location: The location being described
        photos: Photos assigned to it (possibly empty)

    Returns:
        FeatureVector: Aggregates of the photos, labelled with the location's class
    """
    n_photos = len(photos)
    total_views = sum(p.views for p in photos)
    total_favorites = sum(p.favorites for p in photos)
    total_comments = sum(p.comments for p in photos)
    per_owner = Counter(p.owner_id for p in photos)

    def per_photo(total: int) -> float:
        return total / n_photos if n_photos else 0.0

    def per_view(total: int) -> float:
        return total / total_views if total_views else 0.0

    return FeatureVector(
        location_id=location.location_id,
        photo_density=float(n_photos),
        total_views=float(total_views),
        total_favorites=float(total_favorites),
        total_comments=float(total_comments),
        avg_views=per_photo(total_views),
        avg_favorites=per_photo(total_favorites),
        avg_comments=per_photo(total_comments),
        fav_to_view_ratio=per_view(total_favorites),
        comment_to_view_ratio=per_view(total_comments),
        distinct_users=float(len(per_owner)),
        max_photos_per_user=float(max(per_owner.values(), default=0)),
        label=location.label,
    )


def build_dataset(
    assignments: Mapping[str, Sequence[PhotoMeta]], locations: Sequence[LocationRecord], drop_empty: bool = False
) -> Dataset:
    """
    Build one feature row per location.

    Arguments:
        assignments: location_id to assigned photos (missing ids mean no photos)
        locations: Locations in output order
        drop_empty: Exclude locations without any photo

    Returns:
        Dataset: Rows in location order, class set inferred from the labels present

    Raises:
        DatasetError: If assignments mentions an unknown location id
    """
    known = {loc.location_id for loc in locations}
    unknown = sorted(set(assignments) - known)
    if unknown:
        raise DatasetError(f"assignments reference unknown locations: {', '.join(unknown[:5])}")

    rows = []
    dropped = 0
    for location in locations:
        photos = assignments.get(location.location_id, [])
        if drop_empty and not photos:
            dropped += 1
            continue
        rows.append(extract_features(location, photos))

    if dropped:
        logger.info("Dropped %d location(s) without photos", dropped)
    return Dataset.from_rows(rows)


def class_distribution(dataset: Dataset) -> Dict[ClassLabel, int]:
    """Number of locations per aesthetic rating, ascending by rating."""
    return dataset.class_counts()


def feature_histograms(dataset: Dataset, bins: int) -> List[HistogramBin]:
    """
    Per-class equal-width histograms of every feature.

    Each feature's range [min, max] is split into `bins` equal-width bins (the last bin is
    closed); a feature that is constant across rows collapses to a single bin. Every bin
    reports one count per active class, so the counts of one feature sum to the row count.

    Arguments:
        dataset: Dataset to describe
        bins: Number of bins per feature, at least 1

    Returns:
        List[HistogramBin]: Ordered by feature, then bin, then class

    Raises:
        FeatureError: If bins < 1
    """
    if isinstance(bins, bool) or not isinstance(bins, (int, np.integer)) or bins < 1:
        raise FeatureError(f"bins must be a positive integer, got {bins!r}")
    if not dataset.rows:
        return []

    matrix = dataset.to_matrix()
    result: List[HistogramBin] = []
    for j, name in enumerate(FEATURE_NAMES):
        column = matrix.features[:, j]
        lo, hi = float(column.min()), float(column.max())
        if lo == hi:
            edges = np.array([lo, hi])
            counts = np.array([[np.count_nonzero(matrix.labels == k)] for k in range(matrix.n_classes)])
        else:
            edges = np.histogram_bin_edges(column, bins=int(bins), range=(lo, hi))
            counts = np.array([np.histogram(column[matrix.labels == k], bins=edges)[0] for k in range(matrix.n_classes)])

        for b in range(len(edges) - 1):
            for k, label in enumerate(dataset.class_set):
                result.append(HistogramBin(name, float(edges[b]), float(edges[b + 1]), label, int(counts[k, b])))
    return result


def format_real(value: float) -> str:
    """Shortest text that reads back as exactly the same float."""
    return repr(float(value))


def _format_label(label: ClassLabel) -> str:
    return str(label)


def dataset_to_csv(dataset: Dataset, include_synthetic: Optional[bool] = None) -> str:
    """
    Serialize a dataset to CSV text.

    Arguments:
        dataset: Dataset to serialize
        include_synthetic: Append the synthetic column; by default only when a row is synthetic

    Returns:
        str: CSV text with LF line endings
    """
    if include_synthetic is None:
        include_synthetic = any(row.synthetic for row in dataset.rows)
    columns = list(DATASET_COLUMNS) + ([SYNTHETIC_COLUMN] if include_synthetic else [])
    records = []
    for row in dataset.rows:
        record = [row.location_id] + [format_real(v) for v in row.values()] + [_format_label(row.label)]
        if include_synthetic:
            record.append("true" if row.synthetic else "false")
        records.append(record)
    frame = pd.DataFrame(records, columns=columns, dtype=str)
    return frame.to_csv(index=False, lineterminator="\n")


def write_dataset(dataset: Dataset, path: Union[str, Path], include_synthetic: Optional[bool] = None) -> Path:
    """Write a dataset CSV atomically."""
    return atomic_write_text(path, dataset_to_csv(dataset, include_synthetic=include_synthetic))


def _parse_bool(raw: str, line: int) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "1"):
        return True
    if lowered in ("false", "0", ""):
        return False
    raise DatasetError(f"line {line}: synthetic must be true or false, got {raw!r}")


def read_dataset(source: Union[str, Path, io.TextIOBase]) -> Dataset:
    """
    Read a dataset CSV.

    Arguments:
        source: Path or text stream

    Returns:
        Dataset: Rows in file order; class set inferred from the labels

    Raises:
        DatasetError: On a wrong header or malformed values
    """
    try:
        frame = pd.read_csv(source, dtype=str, keep_default_na=False, na_filter=False, encoding="utf-8")
    except FileNotFoundError as e:
        raise DatasetError(f"dataset file not found: {source}") from e
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise DatasetError(f"malformed dataset file {source}: {e}") from e

    header = [str(c).strip() for c in frame.columns]
    has_synthetic = header == list(DATASET_COLUMNS) + [SYNTHETIC_COLUMN]
    if header != list(DATASET_COLUMNS) and not has_synthetic:
        raise DatasetError(f"unexpected dataset header: {','.join(header)}")

    rows = []
    for position, record in enumerate(frame.itertuples(index=False, name=None)):
        line = position + 2
        try:
            values = [float(v) for v in record[1 : 1 + N_FEATURES]]
            label = parse_rating(record[1 + N_FEATURES])
        except (TypeError, ValueError) as e:
            raise DatasetError(f"line {line}: {e}") from e
        if not all(np.isfinite(values)):
            raise DatasetError(f"line {line}: feature values must be finite")
        synthetic = _parse_bool(record[-1], line) if has_synthetic else False
        rows.append(FeatureVector.from_values(str(record[0]), values, label, synthetic=synthetic))

    logger.info("Read %d dataset rows from %s", len(rows), source)
    return Dataset.from_rows(rows)


def histograms_to_csv(histograms: Sequence[HistogramBin]) -> str:
    """Serialize histogram bins to CSV text."""
    records = [
        [h.feature, format_real(h.bin_low), format_real(h.bin_high), _format_label(h.label), str(h.count)]
        for h in histograms
    ]
    frame = pd.DataFrame(records, columns=list(HISTOGRAM_COLUMNS), dtype=str)
    return frame.to_csv(index=False, lineterminator="\n")


def write_histograms(histograms: Sequence[HistogramBin], path: Union[str, Path]) -> Path:
    """Write the histogram CSV atomically."""
    return atomic_write_text(path, histograms_to_csv(histograms))


