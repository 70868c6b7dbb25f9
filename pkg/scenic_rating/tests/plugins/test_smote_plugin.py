#!/usr/bin/env python
"""Tests for the smote plugin."""

from scenic_rating.geo.features import read_dataset
from scenic_rating.learning.sampling import SmoteParams
from scenic_rating.plugins.smote_plugin import SmotePlugin


class TestSmotePlugin:
    """Test cases for SmotePlugin."""

    def test_balances_to_the_majority(self, cli, tmp_path, small_dataset_file, capsys):
        out = tmp_path / "balanced.csv"

        assert cli("smote", small_dataset_file, out, "--seed", "3") == 0

        balanced = read_dataset(out)
        counts = set(balanced.class_counts().values())
        original = read_dataset(small_dataset_file)
        assert len(counts) == 1
        assert [row.location_id for row in balanced.rows[:60]] == [row.location_id for row in original.rows]
        assert not any(row.synthetic for row in balanced.rows[:60])
        assert all(row.synthetic for row in balanced.rows[60:])
        assert "Rating | Before | After" in capsys.readouterr().out

    def test_target(self, tmp_path, small_dataset_file):
        result = SmotePlugin().run_operation(
            dataset=small_dataset_file, out=tmp_path / "b.csv", params=SmoteParams(k_neighbors=3, target=40), seed=1
        )
        assert set(result["after"].values()) == {40}
        assert result["synthetic"] == 120 - 60

    def test_percentage(self, tmp_path, small_dataset_file):
        result = SmotePlugin().run_operation(
            dataset=small_dataset_file, out=tmp_path / "b.csv", params=SmoteParams(percentage=100.0), seed=1
        )
        majority = max(result["before"].values())
        for label, before in result["before"].items():
            assert result["after"][label] == (before if before == majority else 2 * before)

    def test_seeded(self, cli, tmp_path, small_dataset_file):
        for name in ("a.csv", "b.csv"):
            assert cli("smote", small_dataset_file, tmp_path / name, "--seed", "9", "--k", "2") == 0
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_seed_from_config_file(self, cli, tmp_path, small_dataset_file, write_text):
        config = write_text("pipeline.yaml", "seed: 9\nsmote_k: 2\n")

        assert cli("smote", small_dataset_file, tmp_path / "flags.csv", "--seed", "9", "--k", "2") == 0
        assert cli("smote", small_dataset_file, tmp_path / "file.csv", "--config", config) == 0

        assert (tmp_path / "flags.csv").read_bytes() == (tmp_path / "file.csv").read_bytes()

    def test_target_and_percentage_are_exclusive(self, cli, tmp_path, small_dataset_file):
        assert cli("smote", small_dataset_file, tmp_path / "b.csv", "--target", "5", "--percentage", "100") == 1

    def test_invalid_k(self, cli, tmp_path, small_dataset_file):
        assert cli("smote", small_dataset_file, tmp_path / "b.csv", "--k", "0") == 1
