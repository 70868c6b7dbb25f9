#!/usr/bin/env python
"""
Run plugin for scenic-rating.

This plugin implements the run command: load a dataset, cross-validate the configured
pipeline and write the JSON report. With --model-out the dataset is also balanced and the
pipeline trained on all of it. Data errors are reported with the name of the stage that
failed.
"""

from argparse import ArgumentParser, Namespace
from contextlib import contextmanager
from typing import Any, Dict, Iterator, List, Type

from scenic_rating.core.atomic_io import atomic_write_text
from scenic_rating.core.logger import get_logger, log_duration
from scenic_rating.core.pipeline_config import PipelineConfig, add_pipeline_arguments
from scenic_rating.core.plugin_base import ScenicPlugin
from scenic_rating.exceptions.exceptions import DataError, StageError
from scenic_rating.geo.features import read_dataset
from scenic_rating.learning.ensemble import fit_ensemble
from scenic_rating.learning.evaluation import cross_validate, format_table
from scenic_rating.learning.models import model_summary
from scenic_rating.learning.sampling import balance_matrix
from scenic_rating.learning.serialization import save_model

logger = get_logger("run")

STAGES = ("load", "balance", "train", "cross-validate", "report")


class RunError(DataError):
    """Exception raised when a dataset cannot be evaluated."""


@contextmanager
def stage(name: str) -> Iterator[None]:
    """Time a pipeline stage and re-raise its data errors as StageError naming the stage."""
    try:
        with log_duration(logger, f"Stage {name}"):
            yield
    except StageError:
        raise
    except DataError as e:
        raise StageError(name, e) from e


class RunPlugin(ScenicPlugin):
    """Plugin for evaluating one configured pipeline on a dataset."""

    @property
    def command_name(self) -> str:
        return "run"

    @property
    def help_text(self) -> str:
        return "Cross-validate the configured pipeline and write a JSON report"

    @property
    def category(self) -> str:
        return "Evaluation"

    @property
    def example_commands(self) -> List[str]:
        return [
            "run dataset.csv --report report.json",
            "run dataset.csv --learner rf --ensemble bagging --mode paper_faithful",
        ]

    def get_plugin_exceptions(self) -> Dict[str, Type[Exception]]:
        return {"RunError": RunError}

    def register_arguments(self, parser: ArgumentParser) -> None:
        parser.add_argument("dataset", help="Dataset CSV")
        parser.add_argument("-o", "--report", default="report.json", help="JSON report to write")
        parser.add_argument("--model-out", default=None, help="Also save the model trained on the whole dataset")
        parser.add_argument(
            "--keep-folds", action="store_true", help="Include a per-fold breakdown in the report"
        )
        add_pipeline_arguments(parser)

    def execute(self, args: Namespace) -> bool:
        """
        Execute the run command.

        Arguments:
            args: Parsed command arguments

        Returns:
            bool: True if the report was written
        """
        config = PipelineConfig.from_args(args)
        result = self.run_operation(
            dataset=args.dataset,
            report=args.report,
            config=config,
            model_out=getattr(args, "model_out", None),
            keep_folds=getattr(args, "keep_folds", False),
        )

        print(result["table"], end="")
        print(f"✅ Report written to {result['report']}")
        if result.get("model"):
            print(f"💾 Model saved to {result['model']}")
        return True

    def run_operation(self, **kwargs) -> Dict[str, Any]:
        """
        Run every stage of the pipeline.

        Arguments:
            **kwargs: 'dataset', 'report', 'config', optional 'model_out' and 'keep_folds'

        Returns:
            Dict[str, Any]: The EvalReport, the rendered table and the written paths

        Raises:
            StageError: When a stage fails on its data
        """
        config: PipelineConfig = kwargs["config"]
        spec = config.pipeline_spec()

        with stage("load"):
            dataset = read_dataset(kwargs["dataset"])
            if len(dataset) == 0:
                raise RunError("dataset has no rows")
            data = dataset.to_matrix()

        model = None
        if kwargs.get("model_out"):
            with stage("balance"):
                training = data
                if spec.smote is not None:
                    training, synthetic = balance_matrix(data, spec.smote, config.seed)
                    logger.info("Balanced %d rows with %d synthetic rows", len(data), int(synthetic.sum()))

            with stage("train"):
                model = fit_ensemble(
                    spec.build_learner(),
                    training,
                    spec.ensemble,
                    spec.iterations,
                    config.seed,
                    spec.boost_resample,
                    n_jobs=config.threads,
                )
                logger.info("Trained %s: %s", spec.name, model_summary(model))
        else:
            logger.debug("No --model-out given; skipping the balance and train stages")

        with stage("cross-validate"):
            report = cross_validate(
                spec,
                data,
                k=config.k_folds,
                seed=config.seed,
                mode=config.mode,
                n_jobs=config.threads,
                keep_folds=kwargs.get("keep_folds", False),
            )

        with stage("report"):
            written = atomic_write_text(kwargs["report"], report.to_json())
            model_path = save_model(model, kwargs["model_out"]) if model is not None else None

        return {
            "report": written,
            "model": model_path,
            "result": report,
            "table": format_table([(spec.name, report)]),
        }
