#!/usr/bin/env python
"""
Histogram plugin for scenic-rating.

This plugin implements the histogram command, which describes how every feature is
distributed within each aesthetic rating class.
"""

from argparse import ArgumentParser, Namespace
from typing import Any, Dict, List, Type

import pandas as pd

from scenic_rating.core.atomic_io import atomic_write_text
from scenic_rating.core.plugin_base import ScenicPlugin
from scenic_rating.core.view_helpers import format_and_print_rows
from scenic_rating.exceptions.exceptions import DataError
from scenic_rating.geo.features import class_distribution, feature_histograms, read_dataset, write_histograms


class HistogramError(DataError):
    """Exception raised when a histogram cannot be computed."""


class HistogramPlugin(ScenicPlugin):
    """Plugin for writing per-feature, per-class histograms."""

    @property
    def command_name(self) -> str:
        return "histogram"

    @property
    def help_text(self) -> str:
        return "Write per-feature histograms split by rating class"

    @property
    def category(self) -> str:
        return "Data Preparation"

    @property
    def example_commands(self) -> List[str]:
        return ["histogram dataset.csv histograms.csv --bins 10 --class-counts classes.csv"]

    def get_plugin_exceptions(self) -> Dict[str, Type[Exception]]:
        return {"HistogramError": HistogramError}

    def register_arguments(self, parser: ArgumentParser) -> None:
        parser.add_argument("dataset", help="Dataset CSV")
        parser.add_argument("out", help="Histogram CSV to write")
        parser.add_argument("--bins", type=int, default=10, help="Equal-width bins per feature")
        parser.add_argument("--class-counts", default=None, help="Also write the number of locations per rating")

    def execute(self, args: Namespace) -> bool:
        result = self.run_operation(dataset=args.dataset, out=args.out, bins=args.bins, class_counts=args.class_counts)

        print(f"✅ Wrote {result['bins']} histogram rows to {result['out']}")
        rows = [(str(label), count) for label, count in result["classes"].items()]
        format_and_print_rows(rows, ("Rating", "Locations"))
        return True

    def run_operation(self, **kwargs) -> Dict[str, Any]:
        """
        Compute and write the histograms.

        Arguments:
            **kwargs: 'dataset', 'out', 'bins' and optional 'class_counts' path

        Returns:
            Dict[str, Any]: Row count of the histogram file, the class distribution and the output path
        """
        dataset = read_dataset(kwargs["dataset"])
        if len(dataset) == 0:
            raise HistogramError("dataset has no rows")
        histograms = feature_histograms(dataset, kwargs["bins"])
        out = write_histograms(histograms, kwargs["out"])

        classes = class_distribution(dataset)
        if kwargs.get("class_counts"):
            frame = pd.DataFrame(
                [(str(label), count) for label, count in classes.items()], columns=["class", "count"]
            )
            atomic_write_text(kwargs["class_counts"], frame.to_csv(index=False, lineterminator="\n"))
        return {"bins": len(histograms), "classes": classes, "out": out}
