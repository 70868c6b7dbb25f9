#!/usr/bin/env python
"""
Table plugin for scenic-rating.

This plugin implements the table command: cross-validate every learner and ensemble
combination with shared settings and print the Classifier | Accuracy | Precision | Recall
table.
"""

from argparse import ArgumentParser, ArgumentTypeError, Namespace
from pathlib import Path
from typing import Any, Callable, Dict, List, Sequence

from scenic_rating.core.atomic_io import atomic_write_text
from scenic_rating.core.pipeline_config import PipelineConfig, add_pipeline_arguments
from scenic_rating.core.plugin_base import ScenicPlugin
from scenic_rating.geo.features import read_dataset
from scenic_rating.learners import LEARNERS
from scenic_rating.learning.ensemble import ENSEMBLE_METHODS
from scenic_rating.learning.evaluation import format_table, run_grid, summary_csv


def choice_list(choices: Sequence[str]) -> Callable[[str], List[str]]:
    """argparse type for a comma-separated list drawn from choices."""

    def parse(raw: str) -> List[str]:
        values = [v.strip() for v in raw.split(",") if v.strip()]
        unknown = [v for v in values if v not in choices]
        if not values or unknown:
            raise ArgumentTypeError(f"expected a comma-separated list of {', '.join(choices)}, got {raw!r}")
        return values

    return parse


class TablePlugin(ScenicPlugin):
    """Plugin for evaluating a learner x ensemble grid."""

    @property
    def command_name(self) -> str:
        return "table"

    @property
    def help_text(self) -> str:
        return "Cross-validate a learner x ensemble grid and print the results table"

    @property
    def category(self) -> str:
        return "Evaluation"

    @property
    def example_commands(self) -> List[str]:
        return [
            "table dataset.csv --ensembles none",
            "table dataset.csv --ensembles bagging,boosting --report-dir reports --summary-csv summary.csv",
        ]

    def register_arguments(self, parser: ArgumentParser) -> None:
        parser.add_argument("dataset", help="Dataset CSV")
        parser.add_argument(
            "--learners", type=choice_list(tuple(LEARNERS)), default="j48,reptree,rf", help="Base learners, in order"
        )
        parser.add_argument(
            "--ensembles", type=choice_list(ENSEMBLE_METHODS), default="bagging,boosting", help="Ensembles, in order"
        )
        parser.add_argument("--report-dir", default=None, help="Write one JSON report per combination here")
        parser.add_argument("--summary-csv", default=None, help="Write a CSV summary of every combination")
        add_pipeline_arguments(parser)

    def execute(self, args: Namespace) -> bool:
        config = PipelineConfig.from_args(args)
        result = self.run_operation(
            dataset=args.dataset,
            learners=args.learners,
            ensembles=args.ensembles,
            config=config,
            report_dir=args.report_dir,
            summary_csv=args.summary_csv,
        )
        print(result["table"], end="")
        for path in result["written"]:
            print(f"💾 {path}")
        return True

    def run_operation(self, **kwargs) -> Dict[str, Any]:
        """
        Evaluate the grid.

        Arguments:
            **kwargs: 'dataset', 'learners', 'ensembles', 'config' and optional
                'report_dir' and 'summary_csv' paths

        Returns:
            Dict[str, Any]: (name, report) rows, the rendered table and written paths
        """
        config: PipelineConfig = kwargs["config"]
        dataset = read_dataset(kwargs["dataset"])
        results = run_grid(
            kwargs["learners"],
            kwargs["ensembles"],
            dataset,
            base=config.pipeline_spec(),
            k=config.k_folds,
            seed=config.seed,
            mode=config.mode,
            n_jobs=config.threads,
        )
        rows = [(spec.name, report) for spec, report in results]

        written = []
        if kwargs.get("report_dir"):
            for spec, report in results:
                target = Path(kwargs["report_dir"]) / f"{spec.ensemble}-{spec.learner}.json"
                written.append(atomic_write_text(target, report.to_json()))
        if kwargs.get("summary_csv"):
            written.append(atomic_write_text(kwargs["summary_csv"], summary_csv(rows)))

        return {"rows": rows, "table": format_table(rows), "written": written}
