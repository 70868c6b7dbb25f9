#!/usr/bin/env python
"""
Train plugin for scenic-rating.

This plugin implements the train command, which fits the configured pipeline on a whole
dataset file and saves the model as versioned JSON.
"""

from argparse import ArgumentParser, Namespace
from typing import Any, Dict, List

from scenic_rating.core.pipeline_config import PipelineConfig, add_pipeline_arguments
from scenic_rating.core.plugin_base import ScenicPlugin
from scenic_rating.geo.features import read_dataset
from scenic_rating.learning.ensemble import fit_ensemble
from scenic_rating.learning.models import model_summary
from scenic_rating.learning.sampling import balance_matrix
from scenic_rating.learning.serialization import save_model


class TrainPlugin(ScenicPlugin):
    """Plugin for training and saving a model."""

    @property
    def command_name(self) -> str:
        return "train"

    @property
    def help_text(self) -> str:
        return "Train the configured pipeline on a dataset and save the model"

    @property
    def category(self) -> str:
        return "Modeling"

    @property
    def example_commands(self) -> List[str]:
        return ["train dataset.csv model.json --learner rf --ensemble boosting"]

    def register_arguments(self, parser: ArgumentParser) -> None:
        parser.add_argument("dataset", help="Dataset CSV")
        parser.add_argument("out", help="Model JSON to write")
        add_pipeline_arguments(parser)

    def execute(self, args: Namespace) -> bool:
        config = PipelineConfig.from_args(args)
        result = self.run_operation(dataset=args.dataset, out=args.out, config=config)

        summary = result["summary"]
        print(f"✅ Saved {summary['kind']} model to {result['out']}")
        for key, value in summary.items():
            if key != "kind":
                print(f"   {key}: {value}")
        return True

    def run_operation(self, **kwargs) -> Dict[str, Any]:
        """
        Train on the whole dataset, balanced first when SMOTE is enabled.

        Arguments:
            **kwargs: 'dataset', 'out' and 'config' (PipelineConfig)

        Returns:
            Dict[str, Any]: The model, its summary and the output path
        """
        config: PipelineConfig = kwargs["config"]
        spec = config.pipeline_spec()
        data = read_dataset(kwargs["dataset"]).to_matrix()
        if spec.smote is not None:
            data, _ = balance_matrix(data, spec.smote, config.seed)

        model = fit_ensemble(
            spec.build_learner(),
            data,
            spec.ensemble,
            spec.iterations,
            config.seed,
            spec.boost_resample,
            n_jobs=config.threads,
        )
        out = save_model(model, kwargs["out"])
        return {"model": model, "summary": model_summary(model), "out": out}
