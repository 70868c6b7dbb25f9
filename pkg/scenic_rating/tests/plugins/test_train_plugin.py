#!/usr/bin/env python
"""Tests for the train plugin."""

from scenic_rating.core.pipeline_config import PipelineConfig
from scenic_rating.learning.models import EnsembleModel, TreeModel
from scenic_rating.learning.serialization import load_model
from scenic_rating.plugins.train_plugin import TrainPlugin


class TestTrainPlugin:
    """Test cases for TrainPlugin."""

    def test_plugin_properties(self):
        plugin = TrainPlugin()
        assert plugin.command_name == "train"
        assert plugin.category == "Modeling"

    def test_single_tree(self, tmp_path, small_dataset_file):
        result = TrainPlugin().run_operation(
            dataset=small_dataset_file, out=tmp_path / "model.json", config=PipelineConfig(threads=1)
        )

        assert isinstance(result["model"], TreeModel)
        assert result["summary"]["kind"] == "tree"
        assert load_model(result["out"]) == result["model"]

    def test_boosted_forest(self, cli, tmp_path, small_dataset_file, capsys):
        out = tmp_path / "model.json"

        assert cli("train", small_dataset_file, out, "--learner", "rf", "--ensemble", "boosting", "--n-trees", "4") == 0

        model = load_model(out)
        assert isinstance(model, EnsembleModel)
        assert model.kind == "boosting"
        assert f"Saved boosting model to {out}" in capsys.readouterr().out

    def test_is_deterministic(self, cli, tmp_path, small_dataset_file):
        for name in ("a.json", "b.json"):
            assert cli("train", small_dataset_file, tmp_path / name, "--ensemble", "bagging", "--iterations", "3") == 0
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    def test_missing_dataset(self, cli, tmp_path):
        assert cli("train", tmp_path / "absent.csv", tmp_path / "model.json") == 2
