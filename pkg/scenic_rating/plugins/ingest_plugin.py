#!/usr/bin/env python
"""
Ingest plugin for scenic-rating.

This plugin implements the ingest command: it joins a photo metadata file with a location
file by great-circle distance and writes one feature row per location.
"""

from argparse import ArgumentParser, Namespace
from typing import Any, Dict, List, Type

from scenic_rating.core.logger import get_logger
from scenic_rating.core.pipeline_config import PipelineConfig, add_pipeline_arguments
from scenic_rating.core.plugin_base import ScenicPlugin
from scenic_rating.exceptions.exceptions import DataError
from scenic_rating.geo.features import build_dataset, write_dataset
from scenic_rating.geo.ingest import assign_photos, parse_locations_file, parse_photos_file, summarize_join

logger = get_logger("ingest")


class IngestCommandError(DataError):
    """Exception raised when the join cannot produce a dataset."""


class IngestPlugin(ScenicPlugin):
    """Plugin for building a dataset from photo and location files."""

    @property
    def command_name(self) -> str:
        return "ingest"

    @property
    def help_text(self) -> str:
        return "Join photos to locations and write the feature dataset"

    @property
    def category(self) -> str:
        return "Data Preparation"

    @property
    def example_commands(self) -> List[str]:
        return [
            "ingest photos.csv locations.csv dataset.csv",
            "ingest photos.csv locations.csv dataset.csv --radius-m 250 --drop-empty",
        ]

    def get_plugin_exceptions(self) -> Dict[str, Type[Exception]]:
        return {"IngestCommandError": IngestCommandError}

    def register_arguments(self, parser: ArgumentParser) -> None:
        parser.add_argument("photos", help="Photo metadata CSV")
        parser.add_argument("locations", help="Location CSV with ratings")
        parser.add_argument("out", help="Dataset CSV to write")
        add_pipeline_arguments(parser, ingest=True, training=False)

    def execute(self, args: Namespace) -> bool:
        """
        Execute the ingest command.

        Arguments:
            args: Parsed command arguments

        Returns:
            bool: True if the dataset was written
        """
        config = PipelineConfig.from_args(args)
        result = self.run_operation(
            photos=args.photos,
            locations=args.locations,
            out=args.out,
            radius_m=config.radius_m,
            drop_empty=config.drop_empty,
        )

        summary = result["summary"]
        print(f"✅ Wrote {result['rows']} rows to {result['out']}")
        print(f"   📷 Photos: {summary.photos}")
        print(f"   📍 Locations: {summary.locations}")
        print(f"   🔗 Assignments: {summary.pairs}")
        print(f"   ⚪ Unassigned photos: {summary.unassigned_photos}")
        print(f"   🔁 Photos in several locations: {summary.multi_assigned_photos}")
        return True

    def run_operation(self, **kwargs) -> Dict[str, Any]:
        """
        Parse both files, join them and write the dataset.

        Arguments:
            **kwargs: 'photos', 'locations', 'out', 'radius_m' and 'drop_empty'

        Returns:
            Dict[str, Any]: 'rows', 'out' and the JoinSummary under 'summary'
        """
        photos = parse_photos_file(kwargs["photos"])
        locations = parse_locations_file(kwargs["locations"])
        try:
            assignments = assign_photos(photos, locations, kwargs["radius_m"])
        except ValueError as e:
            raise IngestCommandError(str(e)) from e

        dataset = build_dataset(assignments, locations, drop_empty=kwargs.get("drop_empty", False))
        out = write_dataset(dataset, kwargs["out"], include_synthetic=False)
        logger.info("Ingested %d photos and %d locations", len(photos), len(locations))
        return {"rows": len(dataset), "out": out, "summary": summarize_join(photos, assignments, len(locations))}
