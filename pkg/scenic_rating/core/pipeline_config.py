#!/usr/bin/env python
"""
Pipeline configuration.

This module provides the PipelineConfig dataclass shared by the pipeline commands, its flat
YAML file form and the command-line flags that override it.

Precedence, lowest first: built-in defaults, the configuration file (--config or
SCENIC_CONFIG), command-line flags. Learner hyperparameters left unset fall back to the
defaults of the chosen learner.
"""

from argparse import SUPPRESS, ArgumentParser, BooleanOptionalAction, Namespace
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import yaml

from scenic_rating.core.atomic_io import atomic_write_text
from scenic_rating.core.env_fetcher import EnvFetcher
from scenic_rating.core.logger import get_logger
from scenic_rating.exceptions.exceptions import ConfigError, ScenicError
from scenic_rating.geo.features import N_FEATURES
from scenic_rating.learners import LEARNERS
from scenic_rating.learning.ensemble import ENSEMBLE_METHODS
from scenic_rating.learning.evaluation import MODES, PipelineSpec
from scenic_rating.learning.sampling import SmoteParams
from scenic_rating.learning.seeding import MAX_SEED
from scenic_rating.learning.trees import CRITERIA

logger = get_logger("config")

FLOAT_KEYS = ("radius_m", "smote_percentage", "confidence", "holdout_fraction")
BOOL_KEYS = ("drop_empty", "smote", "boost_resample", "bootstrap")
STR_KEYS = ("learner", "ensemble", "mode", "criterion")
OPTIONAL_KEYS = (
    "smote_target",
    "smote_percentage",
    "criterion",
    "min_leaf",
    "max_depth",
    "confidence",
    "holdout_fraction",
    "n_trees",
    "features_per_split",
    "bootstrap",
)
LEARNER_KEYS = (
    "criterion",
    "min_leaf",
    "max_depth",
    "confidence",
    "holdout_fraction",
    "n_trees",
    "features_per_split",
    "bootstrap",
)


def _default_threads() -> int:
    return EnvFetcher.get_int("SCENIC_THREADS", 1)


@dataclass
class PipelineConfig:
    """
    Settings of the ingest, balance, train and evaluate pipeline.

    Attributes:
        radius_m: Join radius in meters
        drop_empty: Drop locations without photos
        smote: Balance classes with SMOTE before training
        smote_k: SMOTE neighbour count
        smote_target: Per-class row target, None for the majority count
        smote_percentage: Classic SMOTE N%, exclusive with smote_target
        learner: "j48", "reptree" or "rf"
        ensemble: "none", "bagging" or "boosting"
        iterations: Ensemble size
        boost_resample: Boost by weighted resampling instead of reweighting
        k_folds: Cross-validation folds
        mode: "leakage_safe" or "paper_faithful"
        seed: Seed of every random choice
        threads: Worker threads, default SCENIC_THREADS
        criterion, min_leaf, max_depth, confidence, holdout_fraction: Tree overrides
        n_trees, features_per_split, bootstrap: Forest overrides
    """

    radius_m: float = 100.0
    drop_empty: bool = False
    smote: bool = True
    smote_k: int = 5
    smote_target: Optional[int] = None
    smote_percentage: Optional[float] = None
    learner: str = "j48"
    ensemble: str = "none"
    iterations: int = 10
    boost_resample: bool = False
    k_folds: int = 10
    mode: str = "leakage_safe"
    seed: int = 1
    threads: int = field(default_factory=_default_threads)
    criterion: Optional[str] = None
    min_leaf: Optional[int] = None
    max_depth: Optional[int] = None
    confidence: Optional[float] = None
    holdout_fraction: Optional[float] = None
    n_trees: Optional[int] = None
    features_per_split: Optional[int] = None
    bootstrap: Optional[bool] = None

    def validate(self) -> "PipelineConfig":
        """
        Check every value.

        Returns:
            PipelineConfig: self

        Raises:
            ConfigError: Naming the first invalid key
        """
        checks = [
            ("radius_m", self.radius_m > 0, "must be positive"),
            ("smote_k", self.smote_k >= 1, "must be >= 1"),
            ("smote_target", self.smote_target is None or self.smote_target >= 0, "must be non-negative"),
            ("smote_percentage", self.smote_percentage is None or self.smote_percentage >= 0, "must be non-negative"),
            ("learner", self.learner in LEARNERS, f"must be one of {', '.join(LEARNERS)}"),
            ("ensemble", self.ensemble in ENSEMBLE_METHODS, f"must be one of {', '.join(ENSEMBLE_METHODS)}"),
            ("iterations", self.iterations >= 1, "must be >= 1"),
            ("k_folds", self.k_folds >= 2, "must be >= 2"),
            ("mode", self.mode in MODES, f"must be one of {', '.join(MODES)}"),
            ("seed", 0 <= self.seed <= MAX_SEED, "must be within [0, 2**64 - 1]"),
            ("threads", self.threads >= 1, "must be >= 1"),
            ("criterion", self.criterion is None or self.criterion in CRITERIA, f"must be one of {', '.join(CRITERIA)}"),
            ("min_leaf", self.min_leaf is None or self.min_leaf >= 1, "must be >= 1"),
            ("max_depth", self.max_depth is None or self.max_depth >= 0, "must be >= 0"),
            ("confidence", self.confidence is None or 0 < self.confidence < 0.5, "must be in (0, 0.5)"),
            ("holdout_fraction", self.holdout_fraction is None or 0 < self.holdout_fraction < 1, "must be in (0, 1)"),
            ("n_trees", self.n_trees is None or self.n_trees >= 1, "must be >= 1"),
            (
                "features_per_split",
                self.features_per_split is None or 1 <= self.features_per_split <= N_FEATURES,
                f"must be in [1, {N_FEATURES}]",
            ),
        ]
        for key, ok, message in checks:
            if not ok:
                raise ConfigError(f"{key} {message}, got {getattr(self, key)!r}")
        if self.smote_target is not None and self.smote_percentage is not None:
            raise ConfigError("smote_target and smote_percentage are mutually exclusive")
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_text(self) -> str:
        """Flat YAML mapping, keys sorted."""
        return yaml.safe_dump(self.to_dict(), sort_keys=True, default_flow_style=False)

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Any], base: Optional["PipelineConfig"] = None) -> "PipelineConfig":
        """
        Apply a flat mapping on top of a base configuration.

        Raises:
            ConfigError: On unknown keys, non-scalar values or wrongly typed values
        """
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(mapping) - known)
        if unknown:
            raise ConfigError(f"unknown configuration key(s): {', '.join(unknown)}")
        values = {key: _coerce(key, value) for key, value in mapping.items()}
        config = replace(base or cls(), **values)
        return config.validate()

    @classmethod
    def from_text(cls, text: str, base: Optional["PipelineConfig"] = None) -> "PipelineConfig":
        try:
            mapping = yaml.safe_load(text)
        except yaml.YAMLError as e:
            raise ConfigError(f"configuration is not valid YAML: {e}") from e
        if mapping is None:
            mapping = {}
        if not isinstance(mapping, dict):
            raise ConfigError("configuration must be a flat key: value mapping")
        return cls.from_mapping(mapping, base)

    @classmethod
    def load(cls, path: Union[str, Path], base: Optional["PipelineConfig"] = None) -> "PipelineConfig":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"cannot read configuration file {path}: {e}") from e
        logger.debug("Loaded configuration from %s", path)
        return cls.from_text(text, base)

    def save(self, path: Union[str, Path]) -> Path:
        return atomic_write_text(path, self.to_text())

    @classmethod
    def from_args(cls, args: Namespace) -> "PipelineConfig":
        """
        Resolve the configuration of a command invocation.

        Arguments:
            args: Parsed arguments; pipeline flags are present only when given

        Returns:
            PipelineConfig: Defaults, then the configuration file, then the flags
        """
        config = cls()
        path = getattr(args, "config", None) or EnvFetcher.get("SCENIC_CONFIG", default="")
        if path:
            config = cls.load(path, config)
        overrides = {f.name: getattr(args, f.name) for f in fields(cls) if getattr(args, f.name, None) is not None}
        return cls.from_mapping(overrides, config)

    def smote_params(self) -> Optional[SmoteParams]:
        if not self.smote:
            return None
        return SmoteParams(k_neighbors=self.smote_k, target=self.smote_target, percentage=self.smote_percentage)

    def learner_params(self) -> Dict[str, Any]:
        return {key: getattr(self, key) for key in LEARNER_KEYS if getattr(self, key) is not None}

    def pipeline_spec(self) -> PipelineSpec:
        try:
            return PipelineSpec(
                learner=self.learner,
                ensemble=self.ensemble,
                iterations=self.iterations,
                smote=self.smote_params(),
                learner_params=self.learner_params(),
                boost_resample=self.boost_resample,
            )
        except ScenicError as e:
            raise ConfigError(str(e)) from e


def _coerce(key: str, value: Any) -> Any:
    """Check the type of one configuration value."""
    if value is None:
        if key in OPTIONAL_KEYS:
            return None
        raise ConfigError(f"{key} must not be empty")
    if isinstance(value, (dict, list, tuple)):
        raise ConfigError(f"{key} must be a scalar value, got {type(value).__name__}")
    if key in BOOL_KEYS:
        if not isinstance(value, bool):
            raise ConfigError(f"{key} must be true or false, got {value!r}")
        return value
    if key in STR_KEYS:
        if not isinstance(value, str):
            raise ConfigError(f"{key} must be a string, got {value!r}")
        return value
    if isinstance(value, bool):
        raise ConfigError(f"{key} must be a number, got {value!r}")
    if key in FLOAT_KEYS:
        if not isinstance(value, (int, float)):
            raise ConfigError(f"{key} must be a number, got {value!r}")
        return float(value)
    if not isinstance(value, int):
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    return value


def add_config_argument(parser: ArgumentParser) -> None:
    """Register --config."""
    parser.add_argument("--config", default=SUPPRESS, help="Flat YAML configuration file (default: $SCENIC_CONFIG)")


def add_pipeline_arguments(parser: ArgumentParser, ingest: bool = False, training: bool = True) -> None:
    """
    Register the configuration override flags.

    Flags are absent from the parsed namespace unless given, so the configuration file
    keeps its values; the help text shows the built-in defaults.

    Arguments:
        parser: Subcommand parser
        ingest: Include the join flags
        training: Include the balancing, learner and evaluation flags
    """
    defaults = PipelineConfig(threads=1)
    add_config_argument(parser)

    def flag(name: str, help_text: str, **kwargs) -> None:
        default = getattr(defaults, name)
        shown = "per learner" if default is None else default
        parser.add_argument(
            f"--{name.replace('_', '-')}",
            dest=name,
            default=SUPPRESS,
            help=f"{help_text} (default: {shown})",
            **kwargs,
        )

    if ingest:
        flag("radius_m", "Join radius in meters", type=float)
        flag("drop_empty", "Drop locations without photos", action=BooleanOptionalAction)
    if not training:
        return
    flag("smote", "Balance classes with SMOTE", action=BooleanOptionalAction)
    flag("smote_k", "SMOTE nearest neighbours", type=int)
    flag("smote_target", "Rows per class after SMOTE (majority count when unset)", type=int)
    flag("smote_percentage", "Classic SMOTE N%% instead of a row target", type=float)
    flag("learner", "Base learner", choices=sorted(LEARNERS))
    flag("ensemble", "Ensemble wrapper", choices=list(ENSEMBLE_METHODS))
    flag("iterations", "Bagging or boosting iterations", type=int)
    flag("boost_resample", "Boost by weighted resampling", action=BooleanOptionalAction)
    flag("k_folds", "Cross-validation folds", type=int)
    flag("mode", "Evaluation mode", choices=list(MODES))
    flag("seed", "Random seed", type=int)
    parser.add_argument(
        "--threads", dest="threads", type=int, default=SUPPRESS, help="Worker threads (default: $SCENIC_THREADS or 1)"
    )
    flag("criterion", "Split criterion", choices=list(CRITERIA))
    flag("min_leaf", "Minimum rows per leaf", type=int)
    flag("max_depth", "Maximum tree depth", type=int)
    flag("confidence", "Pessimistic pruning confidence factor", type=float)
    flag("holdout_fraction", "Reduced-error pruning holdout share", type=float)
    flag("n_trees", "Random forest size", type=int)
    flag("features_per_split", "Features sampled per forest node", type=int)
    flag("bootstrap", "Bootstrap forest trees", action=BooleanOptionalAction)
