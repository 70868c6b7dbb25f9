#!/usr/bin/env python
"""
SMOTE plugin for scenic-rating.

This plugin implements the smote command, which balances a dataset file on its own and
writes the result with a synthetic column.
"""

from argparse import ArgumentParser, Namespace
from typing import Any, Dict, List

from scenic_rating.core.pipeline_config import PipelineConfig, add_config_argument
from scenic_rating.core.plugin_base import ScenicPlugin
from scenic_rating.core.view_helpers import format_and_print_rows
from scenic_rating.geo.features import read_dataset, write_dataset
from scenic_rating.learning.sampling import SmoteParams, balance


class SmotePlugin(ScenicPlugin):
    """Plugin for oversampling a dataset file."""

    @property
    def command_name(self) -> str:
        return "smote"

    @property
    def help_text(self) -> str:
        return "Balance the classes of a dataset with SMOTE"

    @property
    def category(self) -> str:
        return "Data Preparation"

    @property
    def example_commands(self) -> List[str]:
        return ["smote dataset.csv balanced.csv", "smote dataset.csv balanced.csv --k 3 --percentage 200"]

    def register_arguments(self, parser: ArgumentParser) -> None:
        parser.add_argument("dataset", help="Dataset CSV")
        parser.add_argument("out", help="Balanced dataset CSV to write")
        parser.add_argument("--k", type=int, default=None, help="Nearest neighbours (config smote_k when unset)")
        target = parser.add_mutually_exclusive_group()
        target.add_argument("--target", type=int, default=None, help="Rows per class (majority count when unset)")
        target.add_argument("--percentage", type=float, default=None, help="Classic SMOTE N%%")
        parser.add_argument("--seed", type=int, default=None, help="Random seed (config seed when unset)")
        add_config_argument(parser)

    def execute(self, args: Namespace) -> bool:
        config = PipelineConfig.from_args(Namespace(config=getattr(args, "config", None)))
        overrides: Dict[str, Any] = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.k is not None:
            overrides["smote_k"] = args.k
        if args.target is not None or args.percentage is not None:
            overrides.update(smote_target=args.target, smote_percentage=args.percentage)
        config = PipelineConfig.from_mapping(overrides, config)
        params = SmoteParams(k_neighbors=config.smote_k, target=config.smote_target, percentage=config.smote_percentage)

        result = self.run_operation(dataset=args.dataset, out=args.out, params=params, seed=config.seed)

        print(f"✅ Wrote {result['rows']} rows ({result['synthetic']} synthetic) to {result['out']}")
        format_and_print_rows(
            [(str(label), result["before"][label], count) for label, count in result["after"].items()],
            ("Rating", "Before", "After"),
        )
        return True

    def run_operation(self, **kwargs) -> Dict[str, Any]:
        """
        Balance a dataset file.

        Arguments:
            **kwargs: 'dataset', 'out', 'params' (SmoteParams) and 'seed'

        Returns:
            Dict[str, Any]: Row counts before and after, per class, and the output path
        """
        dataset = read_dataset(kwargs["dataset"])
        balanced = balance(dataset, kwargs["params"], kwargs["seed"])
        out = write_dataset(balanced, kwargs["out"], include_synthetic=True)
        return {
            "rows": len(balanced),
            "synthetic": sum(1 for row in balanced.rows if row.synthetic),
            "before": dataset.class_counts(),
            "after": balanced.class_counts(),
            "out": out,
        }
