#!/usr/bin/env python
"""
Predict plugin for scenic-rating.

This plugin implements the predict command: apply a saved model to a dataset file and
write one prediction per location together with the per-class shares.
"""

from argparse import ArgumentParser, Namespace
from typing import Any, Dict, List

import pandas as pd

from scenic_rating.core.atomic_io import atomic_write_text
from scenic_rating.core.plugin_base import ScenicPlugin
from scenic_rating.geo.features import format_real, read_dataset
from scenic_rating.geo.ingest import ClassLabel
from scenic_rating.learning.models import predict
from scenic_rating.learning.serialization import load_model


class PredictPlugin(ScenicPlugin):
    """Plugin for applying a serialized model."""

    @property
    def command_name(self) -> str:
        return "predict"

    @property
    def help_text(self) -> str:
        return "Apply a saved model to a dataset and write the predictions"

    @property
    def category(self) -> str:
        return "Modeling"

    @property
    def example_commands(self) -> List[str]:
        return ["predict model.json dataset.csv predictions.csv"]

    def register_arguments(self, parser: ArgumentParser) -> None:
        parser.add_argument("model", help="Model JSON written by train or run --model-out")
        parser.add_argument("dataset", help="Dataset CSV")
        parser.add_argument("out", help="Prediction CSV to write")

    def execute(self, args: Namespace) -> bool:
        result = self.run_operation(model=args.model, dataset=args.dataset, out=args.out)
        print(f"✅ Wrote {result['rows']} predictions to {result['out']}")
        print(f"🎯 Accuracy against the file's ratings: {result['accuracy']:.2f}%")
        return True

    def run_operation(self, **kwargs) -> Dict[str, Any]:
        """
        Predict every row of a dataset file.

        Arguments:
            **kwargs: 'model', 'dataset' and 'out' paths

        Returns:
            Dict[str, Any]: Row count, accuracy in percent and the output path
        """
        model = load_model(kwargs["model"])
        dataset = read_dataset(kwargs["dataset"])

        share_columns = [str(ClassLabel(c)) for c in model.classes]
        records = []
        correct = 0
        for row in dataset.rows:
            label, shares = predict(model, row.values())
            correct += int(label == row.label)
            records.append([row.location_id, str(label)] + [format_real(s) for s in shares])

        frame = pd.DataFrame(records, columns=["location_id", "predicted"] + share_columns, dtype=str)
        out = atomic_write_text(kwargs["out"], frame.to_csv(index=False, lineterminator="\n"))
        accuracy = 100.0 * correct / len(dataset) if len(dataset) else 0.0
        return {"rows": len(dataset), "accuracy": accuracy, "out": out}
