#!/usr/bin/env python
"""Tests for the table plugin."""

import json
from argparse import ArgumentTypeError

import pandas as pd
import pytest

from scenic_rating.core.pipeline_config import PipelineConfig
from scenic_rating.plugins.table_plugin import TablePlugin, choice_list


class TestChoiceList:
    """Test cases for choice_list."""

    def test_parses(self):
        assert choice_list(("j48", "rf"))(" rf, j48 ") == ["rf", "j48"]

    @pytest.mark.parametrize("raw", ["", "svm", "j48,svm"])
    def test_rejects(self, raw):
        with pytest.raises(ArgumentTypeError):
            choice_list(("j48", "rf"))(raw)


class TestTablePlugin:
    """Test cases for TablePlugin."""

    @pytest.mark.timeout(300)
    def test_six_combinations(self, cli, tmp_path, small_dataset_file, fast_flags, capsys):
        """Every learner under bagging and boosting, one row each, in table order."""
        summary = tmp_path / "summary.csv"
        reports = tmp_path / "reports"

        code = cli("table", small_dataset_file, "--report-dir", reports, "--summary-csv", summary, *fast_flags)

        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert [cell.strip() for cell in lines[0].split("|")] == ["Classifier", "Accuracy", "Precision", "Recall"]
        names = [line.split("|")[0].strip() for line in lines[2:8]]
        assert names == [
            "Bagging with J48",
            "Bagging with REPTree",
            "Bagging with RF",
            "Boosting with J48",
            "Boosting with REPTree",
            "Boosting with RF",
        ]
        assert all(len(line.split("|")) == 4 for line in lines[2:8])
        assert len(pd.read_csv(summary)) == 6
        assert sorted(p.name for p in reports.iterdir()) == [
            "bagging-j48.json",
            "bagging-reptree.json",
            "bagging-rf.json",
            "boosting-j48.json",
            "boosting-reptree.json",
            "boosting-rf.json",
        ]
        assert json.loads((reports / "bagging-rf.json").read_text(encoding="utf-8"))["folds"] == 3

    def test_run_operation(self, tmp_path, small_dataset_file):
        result = TablePlugin().run_operation(
            dataset=small_dataset_file,
            learners=["j48", "reptree"],
            ensembles=["none"],
            config=PipelineConfig(k_folds=3, threads=1),
        )
        assert [name for name, _ in result["rows"]] == ["J48", "REPTree"]
        assert result["written"] == []

    def test_unknown_learner(self, cli, small_dataset_file):
        assert cli("table", small_dataset_file, "--learners", "j48,svm") == 1
