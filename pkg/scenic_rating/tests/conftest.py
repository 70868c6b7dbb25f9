#!/usr/bin/env python
"""
Pytest configuration and fixtures shared by the scenic-rating test suite.

The factories build LabeledMatrix inputs over the rating grid and write small photo,
location and dataset files into a temporary directory.
"""

from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np
import pytest

from scenic_rating.core.logger import ScenicLogger
from scenic_rating.geo.features import N_FEATURES, Dataset, FeatureVector, LabeledMatrix, write_dataset
from scenic_rating.geo.ingest import RATING_SCALE, ClassLabel

PHOTO_HEADER = "photo_id,owner_id,latitude,longitude,views,favorites,comments\n"
LOCATION_HEADER = "location_id,name,latitude,longitude,rating\n"


@pytest.fixture(autouse=True)
def reset_logging():
    """Every test starts from an unconfigured logger."""
    ScenicLogger.reset()
    yield
    ScenicLogger.reset()


@pytest.fixture
def make_matrix() -> Callable[..., LabeledMatrix]:
    """Factory for LabeledMatrix inputs whose classes are the lowest ratings of the grid."""

    def factory(features, labels, n_classes: Optional[int] = None) -> LabeledMatrix:
        X = np.asarray(features, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        y = np.asarray(labels, dtype=np.intp)
        if n_classes is None:
            n_classes = int(y.max()) + 1 if y.size else 1
        return LabeledMatrix(X, y, tuple(RATING_SCALE[:n_classes]))

    return factory


@pytest.fixture
def planted_signal() -> Callable[..., LabeledMatrix]:
    """Six classes determined by thresholds on features 0, 3 and 7, plus a little label noise."""

    def factory(n: int = 600, noise: float = 0.01, seed: int = 7) -> LabeledMatrix:
        rng = np.random.default_rng(seed)
        X = rng.random((n, N_FEATURES))
        band = np.minimum((X[:, 0] * 3).astype(np.intp), 2)
        y = 2 * band + ((X[:, 3] > 0.5) & (X[:, 7] > 0.25)).astype(np.intp)
        flip = rng.random(n) < noise
        y[flip] = rng.integers(0, 6, size=int(flip.sum()))
        return LabeledMatrix(X, y, tuple(RATING_SCALE[:6]))

    return factory


@pytest.fixture
def random_labels() -> Callable[..., LabeledMatrix]:
    """Balanced classes independent of the features."""

    def factory(n: int = 600, n_classes: int = 6, seed: int = 11) -> LabeledMatrix:
        rng = np.random.default_rng(seed)
        X = rng.random((n, N_FEATURES))
        y = rng.permutation(np.arange(n) % n_classes).astype(np.intp)
        return LabeledMatrix(X, y, tuple(RATING_SCALE[:n_classes]))

    return factory


@pytest.fixture
def to_dataset() -> Callable[[LabeledMatrix], Dataset]:
    """Wrap a LabeledMatrix into a Dataset with generated location ids."""

    def factory(data: LabeledMatrix, prefix: str = "loc") -> Dataset:
        rows = [
            FeatureVector.from_values(f"{prefix}{i}", values, ClassLabel(data.classes[label]))
            for i, (values, label) in enumerate(zip(data.features.tolist(), data.labels.tolist()))
        ]
        return Dataset.from_rows(rows)

    return factory


@pytest.fixture
def write_text(tmp_path) -> Callable[[str, str], Path]:
    """Write a text file below tmp_path and return its path."""

    def factory(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return factory


@pytest.fixture
def photo_csv(write_text) -> Callable[..., Path]:
    def factory(rows: Sequence[str], name: str = "photos.csv") -> Path:
        return write_text(name, PHOTO_HEADER + "".join(f"{row}\n" for row in rows))

    return factory


@pytest.fixture
def location_csv(write_text) -> Callable[..., Path]:
    def factory(rows: Sequence[str], name: str = "locations.csv") -> Path:
        return write_text(name, LOCATION_HEADER + "".join(f"{row}\n" for row in rows))

    return factory


@pytest.fixture
def small_dataset_file(tmp_path, planted_signal, to_dataset) -> Path:
    """60-row, three-class planted-signal dataset written as CSV."""
    data = planted_signal(n=60, noise=0.0, seed=3)
    three = LabeledMatrix(data.features, data.labels // 2, tuple(RATING_SCALE[2:5]))
    path = tmp_path / "dataset.csv"
    write_dataset(to_dataset(three), path)
    return path


@pytest.fixture
def planted_dataset_file(tmp_path, planted_signal, to_dataset) -> Path:
    """The default 600-row planted-signal dataset written as CSV."""
    path = tmp_path / "planted.csv"
    write_dataset(to_dataset(planted_signal()), path)
    return path
