#!/usr/bin/env python
"""Tests for feature extraction, the dataset file and histograms."""

import io

import numpy as np
import pandas as pd
import pytest

from scenic_rating.exceptions.exceptions import DatasetError, FeatureError
from scenic_rating.geo.features import (
    FEATURE_NAMES,
    N_FEATURES,
    Dataset,
    FeatureVector,
    build_dataset,
    class_distribution,
    dataset_to_csv,
    extract_features,
    feature_histograms,
    format_real,
    read_dataset,
    write_dataset,
    write_histograms,
)
from scenic_rating.geo.ingest import ClassLabel, GeoPoint, LocationRecord, PhotoMeta, assign_photos


def location(location_id="l1", rating=4.0, lat=41.89, lon=12.49):
    return LocationRecord(location_id, "Somewhere", GeoPoint(lat, lon), ClassLabel(rating))


def photo(photo_id, owner, views, favorites, comments, lat=41.89, lon=12.49):
    return PhotoMeta(photo_id, owner, GeoPoint(lat, lon), views, favorites, comments)


class TestExtractFeatures:
    """Test cases for extract_features."""

    def test_aggregates(self):
        """Three photos by two owners."""
        photos = [photo("p1", "a", 10, 1, 0), photo("p2", "a", 20, 2, 1), photo("p3", "b", 30, 3, 2)]

        row = extract_features(location(), photos)

        assert row.values() == pytest.approx((3.0, 60.0, 6.0, 3.0, 20.0, 2.0, 1.0, 0.1, 0.05, 2.0, 2.0))
        assert row.label == ClassLabel(4.0)
        assert row.synthetic is False

    def test_no_photos_gives_zeros(self):
        """Averages and ratios over nothing are zero."""
        row = extract_features(location(), [])
        assert row.values() == (0.0,) * N_FEATURES

    def test_zero_views_keeps_ratios_at_zero(self):
        """Ratios over zero views are defined as zero."""
        row = extract_features(location(), [photo("p1", "a", 0, 3, 2)])
        assert row.fav_to_view_ratio == 0.0
        assert row.comment_to_view_ratio == 0.0
        assert row.avg_favorites == 3.0

    def _random_photos(self, rng, min_views=0):
        n = int(rng.integers(1, 15))
        return [
            photo(
                f"p{i}",
                f"u{int(rng.integers(0, 4))}",
                int(rng.integers(min_views, 1000)),
                int(rng.integers(0, 50)),
                int(rng.integers(0, 20)),
            )
            for i in range(n)
        ]

    def test_invariant_under_photo_order(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            photos = self._random_photos(rng)
            shuffled = [photos[i] for i in rng.permutation(len(photos))]
            assert extract_features(location(), shuffled).values() == pytest.approx(
                extract_features(location(), photos).values()
            )

    def test_duplicating_every_photo(self):
        """Counts and the busiest owner double; averages, ratios and distinct owners stay."""
        rng = np.random.default_rng(32)
        doubled_names = ("photo_density", "total_views", "total_favorites", "total_comments", "max_photos_per_user")
        for _ in range(50):
            photos = self._random_photos(rng)
            once = dict(zip(FEATURE_NAMES, extract_features(location(), photos).values()))
            twice = dict(zip(FEATURE_NAMES, extract_features(location(), photos + photos).values()))
            for name in FEATURE_NAMES:
                expected = 2 * once[name] if name in doubled_names else once[name]
                assert twice[name] == pytest.approx(expected), name

    def test_favorites_follow_from_the_ratio(self):
        """With any views at all, total favorites never exceed total views times the ratio."""
        rng = np.random.default_rng(33)
        for _ in range(100):
            row = extract_features(location(), self._random_photos(rng, min_views=1))
            assert row.total_favorites <= row.total_views * row.fav_to_view_ratio + 1e-9

    def test_schema_order(self):
        """values() follows FEATURE_NAMES."""
        row = extract_features(location(), [photo("p1", "a", 7, 0, 0)])
        assert dict(zip(FEATURE_NAMES, row.values()))["total_views"] == 7.0


class TestBuildDataset:
    """Test cases for build_dataset."""

    def test_one_row_per_location(self):
        """Three nearby photos and one location give one row with a photo density of 3."""
        photos = [photo(f"p{i}", "a", 5, 0, 0) for i in range(3)]
        locations = [location()]

        dataset = build_dataset(assign_photos(photos, locations, 100.0), locations)

        assert len(dataset) == 1
        assert dataset.rows[0].photo_density == 3.0
        assert dataset.class_set == (ClassLabel(4.0),)

    def test_drop_empty(self):
        """Locations without photos are kept unless drop_empty is set."""
        locations = [location("l1"), location("l2", rating=3.0, lat=0.0, lon=0.0)]
        assignments = assign_photos([photo("p1", "a", 1, 0, 0)], locations, 100.0)

        assert len(build_dataset(assignments, locations)) == 2
        kept = build_dataset(assignments, locations, drop_empty=True)
        assert [row.location_id for row in kept.rows] == ["l1"]
        assert kept.class_set == (ClassLabel(4.0),)

    def test_unknown_location_in_assignments(self):
        with pytest.raises(DatasetError):
            build_dataset({"nope": []}, [location()])

    def test_class_distribution(self):
        """Locations are counted per rating, ascending."""
        locations = [location("l1", 4.0), location("l2", 2.5), location("l3", 4.0)]
        dataset = build_dataset({}, locations)
        assert class_distribution(dataset) == {ClassLabel(2.5): 1, ClassLabel(4.0): 2}


class TestDatasetFile:
    """Test cases for the dataset CSV."""

    def test_header_and_values(self):
        """The header lists the id, the features in order and the label."""
        dataset = build_dataset({}, [location("l1", 4.5)])
        lines = dataset_to_csv(dataset).splitlines()
        assert lines[0] == ",".join(("location_id",) + FEATURE_NAMES + ("label",))
        assert lines[1] == "l1," + ",".join(["0.0"] * N_FEATURES) + ",4.5"

    def test_write_and_read(self, tmp_path, planted_signal, to_dataset):
        """Values survive the file exactly."""
        dataset = to_dataset(planted_signal(n=20))
        path = write_dataset(dataset, tmp_path / "out" / "dataset.csv")

        loaded = read_dataset(path)

        assert [row.values() for row in loaded.rows] == [row.values() for row in dataset.rows]
        assert loaded.class_set == dataset.class_set

    def test_synthetic_column(self):
        """Synthetic rows add the synthetic column."""
        rows = [
            FeatureVector.from_values("l1", [1.0] * N_FEATURES, ClassLabel(3.0)),
            FeatureVector.from_values("synthetic:3.0:0", [2.0] * N_FEATURES, ClassLabel(3.0), synthetic=True),
        ]
        text = dataset_to_csv(Dataset.from_rows(rows))

        loaded = read_dataset(io.StringIO(text))

        assert text.splitlines()[0].endswith(",synthetic")
        assert [row.synthetic for row in loaded.rows] == [False, True]

    def test_bad_header(self):
        with pytest.raises(DatasetError, match="header"):
            read_dataset(io.StringIO("a,b\n1,2\n"))

    def test_bad_value_reports_line(self):
        header = ",".join(("location_id",) + FEATURE_NAMES + ("label",))
        text = header + "\nl1," + ",".join(["x"] * N_FEATURES) + ",3.0\n"
        with pytest.raises(DatasetError, match="line 2"):
            read_dataset(io.StringIO(text))

    def test_missing_file(self, tmp_path):
        with pytest.raises(DatasetError):
            read_dataset(tmp_path / "missing.csv")

    def test_format_real_is_exact(self):
        value = 0.1 + 0.2
        assert float(format_real(value)) == value


class TestFeatureHistograms:
    """Test cases for feature_histograms."""

    def test_shape(self, planted_signal, to_dataset):
        """Eleven features, ten bins and one row per class."""
        dataset = to_dataset(planted_signal(n=60))
        histograms = feature_histograms(dataset, 10)
        assert len(histograms) == N_FEATURES * 10 * len(dataset.class_set)

    def test_single_bin_holds_every_row(self, planted_signal, to_dataset):
        """With one bin each class's full count lands in it."""
        dataset = to_dataset(planted_signal(n=60))
        counts = dataset.class_counts()

        for h in feature_histograms(dataset, 1):
            assert h.count == counts[h.label]

    def test_counts_sum_to_rows_after_reading_back(self, tmp_path, planted_signal, to_dataset):
        """The written file re-sums to the row count for every feature."""
        dataset = to_dataset(planted_signal(n=45))
        path = write_histograms(feature_histograms(dataset, 7), tmp_path / "hist.csv")

        frame = pd.read_csv(path)

        assert list(frame.columns) == ["feature", "bin_low", "bin_high", "class", "count"]
        assert frame.groupby("feature")["count"].sum().to_dict() == {name: 45 for name in FEATURE_NAMES}

    def test_constant_feature_collapses(self):
        """A constant feature yields a single bin."""
        rows = [FeatureVector.from_values(f"l{i}", [1.0] * N_FEATURES, ClassLabel(3.0)) for i in range(4)]
        histograms = feature_histograms(Dataset.from_rows(rows), 5)
        assert len(histograms) == N_FEATURES
        assert all(h.count == 4 for h in histograms)

    def test_rejects_zero_bins(self):
        with pytest.raises(FeatureError):
            feature_histograms(Dataset.from_rows([]), 0)
