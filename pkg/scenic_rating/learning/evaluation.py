#!/usr/bin/env python
"""
Stratified cross-validation and multi-class metrics.

Two evaluation modes are supported:

    paper_faithful  SMOTE balances the whole dataset, then k-fold cross-validation runs on
                    the balanced rows (synthetic neighbours of test rows leak into training)
    leakage_safe    folds are carved from the original rows and SMOTE runs inside each
                    training fold only; test folds contain original rows exclusively

Precision of a class that is never predicted is UNDEFINED rather than 0, and an undefined
class precision makes the macro precision undefined as well.
"""

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from scenic_rating.core.logger import get_logger
from scenic_rating.core.view_helpers import format_rows
from scenic_rating.exceptions.exceptions import EvaluationError
from scenic_rating.geo.features import Dataset, LabeledMatrix, format_real
from scenic_rating.geo.ingest import ClassLabel
from scenic_rating.learners import Learner, get_learner
from scenic_rating.learning.ensemble import DEFAULT_ITERATIONS, ENSEMBLE_METHODS, fit_ensemble
from scenic_rating.learning.models import predict_indices
from scenic_rating.learning.sampling import SmoteParams, balance_matrix
from scenic_rating.learning.seeding import derive_seed, substream, validate_seed

logger = get_logger("evaluation")

MODES = ("paper_faithful", "leakage_safe")
DEFAULT_MODE = "leakage_safe"
DEFAULT_FOLDS = 10

TABLE_HEADERS = ("Classifier", "Accuracy", "Precision", "Recall")
SUMMARY_COLUMNS = (
    "classifier",
    "learner",
    "ensemble",
    "mode",
    "seed",
    "folds",
    "accuracy",
    "macro_precision",
    "macro_recall",
)
LEARNER_DISPLAY_NAMES = {"j48": "J48", "reptree": "REPTree", "rf": "RF"}


class Undefined(Enum):
    """Marker for a precision whose denominator is zero."""

    UNDEFINED = "undefined"

    def __str__(self) -> str:
        return "Undefined"


UNDEFINED = Undefined.UNDEFINED
Metric = Union[float, Undefined]


@dataclass(frozen=True)
class ConfusionMatrix:
    """counts[i][j] is the number of rows of true class i predicted as class j."""

    classes: Tuple[ClassLabel, ...]
    counts: np.ndarray

    def __post_init__(self):
        k = len(self.classes)
        if self.counts.shape != (k, k):
            raise EvaluationError(f"expected a {k}x{k} matrix, got shape {self.counts.shape}")
        if np.any(self.counts < 0):
            raise EvaluationError("confusion matrix entries must be non-negative")

    @classmethod
    def from_predictions(
        cls, classes: Sequence[ClassLabel], truth: Sequence[int], predicted: Sequence[int]
    ) -> "ConfusionMatrix":
        """Tally (true index, predicted index) pairs."""
        k = len(classes)
        counts = np.zeros((k, k), dtype=np.int64)
        np.add.at(counts, (np.asarray(truth, dtype=np.intp), np.asarray(predicted, dtype=np.intp)), 1)
        return cls(tuple(classes), counts)

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        if self.classes != other.classes:
            raise EvaluationError("cannot add confusion matrices over different classes")
        return ConfusionMatrix(self.classes, self.counts + other.counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_dict(self) -> Dict[str, Any]:
        return {"classes": [str(c) for c in self.classes], "counts": self.counts.astype(int).tolist()}


@dataclass(frozen=True)
class ClassMetrics:
    """Precision, recall and support of one class, in percent."""

    label: ClassLabel
    precision: Metric
    recall: float
    support: int


@dataclass(frozen=True)
class EvalReport:
    """
    Metrics of one evaluation.

    Attributes:
        accuracy: Percent of correctly classified rows
        macro_precision: Unweighted mean of class precisions, or UNDEFINED
        macro_recall: Unweighted mean of class recalls
        per_class: One entry per class, ascending by rating
        confusion_matrix: Pooled matrix the metrics were computed from
        mode: Evaluation mode, when produced by cross_validate
        seed: Seed of the evaluation
        pipeline: Description of the evaluated pipeline
        folds: Number of folds
        fold_reports: Optional per-fold breakdown
    """

    accuracy: float
    macro_precision: Metric
    macro_recall: float
    per_class: Tuple[ClassMetrics, ...]
    confusion_matrix: ConfusionMatrix
    mode: Optional[str] = None
    seed: Optional[int] = None
    pipeline: Optional[Dict[str, Any]] = None
    folds: Optional[int] = None
    fold_reports: Tuple["EvalReport", ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict[str, Any]:
        result = {
            "accuracy": self.accuracy,
            "macro_precision": _metric_value(self.macro_precision),
            "macro_recall": self.macro_recall,
            "per_class": [
                {
                    "class": str(m.label),
                    "precision": _metric_value(m.precision),
                    "recall": m.recall,
                    "support": m.support,
                }
                for m in self.per_class
            ],
            "confusion_matrix": self.confusion_matrix.to_dict(),
            "mode": self.mode,
            "seed": self.seed,
            "pipeline": self.pipeline,
            "folds": self.folds,
        }
        if self.fold_reports:
            result["fold_reports"] = [r.to_dict() for r in self.fold_reports]
        return result

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _metric_value(value: Metric):
    return value.value if isinstance(value, Undefined) else value


def format_metric(value: Metric) -> str:
    """Two-decimal percentage, or "Undefined"."""
    return str(value) if isinstance(value, Undefined) else f"{value:.2f}"


def metrics(cm: ConfusionMatrix) -> EvalReport:
    """
    Accuracy and macro-averaged precision and recall of a confusion matrix.

    Arguments:
        cm: Confusion matrix with at least one counted row

    Returns:
        EvalReport: Percentages; precision is UNDEFINED for a class never predicted and
        the macro precision is UNDEFINED when any class precision is

    Raises:
        EvaluationError: If the matrix is empty
    """
    total = cm.total
    if total == 0 or not cm.classes:
        raise EvaluationError("cannot compute metrics of an empty confusion matrix")
    counts = cm.counts
    diagonal = np.diag(counts)
    predicted_totals = counts.sum(axis=0)
    true_totals = counts.sum(axis=1)

    per_class = []
    for i, label in enumerate(cm.classes):
        precision: Metric = UNDEFINED
        if predicted_totals[i] > 0:
            precision = float(100.0 * diagonal[i] / predicted_totals[i])
        recall = 0.0 if true_totals[i] == 0 else 100.0 * diagonal[i] / true_totals[i]
        per_class.append(ClassMetrics(label, precision, float(recall), int(true_totals[i])))

    precisions = [m.precision for m in per_class]
    if any(isinstance(p, Undefined) for p in precisions):
        macro_precision: Metric = UNDEFINED
    else:
        macro_precision = float(np.mean(precisions))

    return EvalReport(
        accuracy=100.0 * float(diagonal.sum()) / total,
        macro_precision=macro_precision,
        macro_recall=float(np.mean([m.recall for m in per_class])),
        per_class=tuple(per_class),
        confusion_matrix=cm,
    )


def _labels_of(data: Union[Dataset, LabeledMatrix, np.ndarray, Sequence[int]]) -> np.ndarray:
    if isinstance(data, Dataset):
        return data.to_matrix().labels
    if isinstance(data, LabeledMatrix):
        return data.labels
    return np.asarray(data, dtype=np.intp)


def stratified_folds(
    data: Union[Dataset, LabeledMatrix, np.ndarray, Sequence[int]], k: int, seed: int
) -> List[np.ndarray]:
    """
    Split rows into k stratified folds.

    Classes are visited in ascending order; each class's rows are shuffled and dealt
    round-robin, continuing from the fold where the previous class stopped. Per-class
    counts across folds and total fold sizes therefore differ by at most one.

    Arguments:
        data: Dataset, LabeledMatrix or the class index of every row
        k: Number of folds, 2 <= k <= number of rows
        seed: Shuffle seed

    Returns:
        List[np.ndarray]: k disjoint, sorted index arrays covering every row

    Raises:
        EvaluationError: If k < 2 or k exceeds the number of rows
    """
    labels = _labels_of(data)
    n = labels.shape[0]
    if k < 2:
        raise EvaluationError(f"k must be >= 2, got {k}")
    if k > n:
        raise EvaluationError(f"k = {k} exceeds the number of rows ({n})")

    rng = substream(seed)
    folds: List[List[int]] = [[] for _ in range(k)]
    offset = 0
    for c in np.unique(labels):
        members = rng.permutation(np.nonzero(labels == c)[0])
        for j, row in enumerate(members):
            folds[(offset + j) % k].append(int(row))
        offset = (offset + members.shape[0]) % k
    return [np.sort(np.asarray(fold, dtype=np.intp)) for fold in folds]


@dataclass(frozen=True)
class PipelineSpec:
    """
    What cross_validate trains in every fold.

    Attributes:
        learner: "j48", "reptree" or "rf"
        ensemble: "none", "bagging" or "boosting"
        iterations: Ensemble size
        smote: SMOTE settings, None to train on the data as given
        learner_params: Hyperparameter overrides passed to get_learner
        boost_resample: Boost by weighted resampling even for weight-aware learners
    """

    learner: str = "j48"
    ensemble: str = "none"
    iterations: int = DEFAULT_ITERATIONS
    smote: Optional[SmoteParams] = field(default_factory=SmoteParams)
    learner_params: Dict[str, Any] = field(default_factory=dict)
    boost_resample: bool = False

    def __post_init__(self):
        if self.ensemble not in ENSEMBLE_METHODS:
            raise EvaluationError(f"ensemble must be one of {', '.join(ENSEMBLE_METHODS)}, got {self.ensemble!r}")
        if self.iterations < 1:
            raise EvaluationError(f"iterations must be >= 1, got {self.iterations}")

    def build_learner(self) -> Learner:
        return get_learner(self.learner, **self.learner_params)

    @property
    def name(self) -> str:
        """Row label in result tables, e.g. "Bagging with RF"."""
        learner = LEARNER_DISPLAY_NAMES.get(self.learner, self.learner)
        if self.ensemble == "none":
            return learner
        return f"{self.ensemble.capitalize()} with {learner}"

    def describe(self) -> Dict[str, Any]:
        return {
            "learner": self.build_learner().describe(),
            "ensemble": self.ensemble,
            "iterations": self.iterations,
            "boost_resample": self.boost_resample,
            "smote": None if self.smote is None else {
                "k_neighbors": self.smote.k_neighbors,
                "target": self.smote.target,
                "percentage": self.smote.percentage,
            },
        }


def _as_matrix(data: Union[Dataset, LabeledMatrix]) -> LabeledMatrix:
    return data.to_matrix() if isinstance(data, Dataset) else data


def _evaluate_fold(
    spec: PipelineSpec, learner: Learner, data: LabeledMatrix, test: np.ndarray, fold: int, seed: int, mode: str
) -> ConfusionMatrix:
    fold_seed = derive_seed(seed, fold)
    train_rows = np.setdiff1d(np.arange(len(data)), test, assume_unique=True)
    train = data.take(train_rows)
    if mode == "leakage_safe" and spec.smote is not None:
        train, _ = balance_matrix(train, spec.smote, fold_seed, skip_empty=True)
    model = fit_ensemble(learner, train, spec.ensemble, spec.iterations, fold_seed, spec.boost_resample)
    predicted = predict_indices(model, data.features[test])
    classes = tuple(ClassLabel(c) for c in data.classes)
    logger.debug("Fold %d: %d training rows, %d test rows", fold, len(train), test.shape[0])
    return ConfusionMatrix.from_predictions(classes, data.labels[test], predicted)


def cross_validate(
    spec: PipelineSpec,
    dataset: Union[Dataset, LabeledMatrix],
    k: int = DEFAULT_FOLDS,
    seed: int = 1,
    mode: str = DEFAULT_MODE,
    n_jobs: int = 1,
    keep_folds: bool = False,
) -> EvalReport:
    """
    Stratified k-fold cross-validation of a pipeline.

    Fold i trains with seed + i; predictions of all test folds are pooled into one
    confusion matrix, so the result does not depend on n_jobs.

    Arguments:
        spec: Pipeline to evaluate
        dataset: Original (unbalanced) rows
        k: Number of folds
        seed: Seed for balancing, fold assignment and training
        mode: "paper_faithful" or "leakage_safe"
        n_jobs: Folds evaluated concurrently
        keep_folds: Attach per-fold reports

    Returns:
        EvalReport: Pooled metrics with mode, seed, pipeline and fold count filled in

    Raises:
        EvaluationError: On an unknown mode, an empty dataset or an invalid k
    """
    seed = validate_seed(seed)
    if mode not in MODES:
        raise EvaluationError(f"mode must be one of {', '.join(MODES)}, got {mode!r}")
    data = _as_matrix(dataset)
    if len(data) == 0:
        raise EvaluationError("cannot cross-validate an empty dataset")

    if mode == "paper_faithful" and spec.smote is not None:
        data, _ = balance_matrix(data, spec.smote, seed)
        logger.info("Balanced the whole dataset to %d rows before cross-validation", len(data))

    folds = stratified_folds(data.labels, k, seed)
    learner = spec.build_learner()
    matrices: List[ConfusionMatrix] = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_evaluate_fold)(spec, learner, data, test, i, seed, mode) for i, test in enumerate(folds)
    )

    pooled = matrices[0]
    for matrix in matrices[1:]:
        pooled = pooled + matrix
    report = replace(
        metrics(pooled),
        mode=mode,
        seed=seed,
        pipeline=spec.describe(),
        folds=k,
        fold_reports=tuple(metrics(m) for m in matrices) if keep_folds else (),
    )
    logger.info("%s (%s): accuracy %.2f", spec.name, mode, report.accuracy)
    return report


def run_grid(
    learners: Sequence[str],
    ensembles: Sequence[str],
    dataset: Union[Dataset, LabeledMatrix],
    base: PipelineSpec = PipelineSpec(),
    k: int = DEFAULT_FOLDS,
    seed: int = 1,
    mode: str = DEFAULT_MODE,
    n_jobs: int = 1,
) -> List[Tuple[PipelineSpec, EvalReport]]:
    """
    Cross-validate every ensemble x learner combination.

    Combinations are ordered by ensemble, then learner, matching the result tables
    (e.g. Bagging with J48, Bagging with REPTree, Bagging with RF, Boosting with J48, ...).

    Returns:
        List[Tuple[PipelineSpec, EvalReport]]: One entry per combination
    """
    data = _as_matrix(dataset)
    results = []
    for ensemble in ensembles:
        for learner in learners:
            spec = replace(base, learner=learner, ensemble=ensemble)
            results.append((spec, cross_validate(spec, data, k=k, seed=seed, mode=mode, n_jobs=n_jobs)))
    return results


def format_table(rows: Sequence[Tuple[str, EvalReport]]) -> str:
    """
    Render the Classifier | Accuracy | Precision | Recall table.

    Arguments:
        rows: (classifier name, report) pairs in display order

    Returns:
        str: Table text with two-decimal percentages and "Undefined" spelled out
    """
    table = [
        (name, format_metric(r.accuracy), format_metric(r.macro_precision), format_metric(r.macro_recall))
        for name, r in rows
    ]
    return format_rows(table, TABLE_HEADERS)


def _summary_record(name: str, report: EvalReport) -> List[str]:
    pipeline = report.pipeline or {}
    learner = pipeline.get("learner") or {}
    precision = report.macro_precision
    return [
        name,
        str(learner.get("learner", "")),
        str(pipeline.get("ensemble", "")),
        report.mode or "",
        "" if report.seed is None else str(report.seed),
        "" if report.folds is None else str(report.folds),
        format_real(report.accuracy),
        precision.value if isinstance(precision, Undefined) else format_real(precision),
        format_real(report.macro_recall),
    ]


def summary_csv(rows: Sequence[Tuple[str, EvalReport]], header: bool = True) -> str:
    """CSV summary with one row per pipeline at full precision."""
    frame = pd.DataFrame([_summary_record(name, r) for name, r in rows], columns=list(SUMMARY_COLUMNS), dtype=str)
    return frame.to_csv(index=False, header=header, lineterminator="\n")


def summary_csv_row(name: str, report: EvalReport) -> str:
    """Single CSV summary line, without header."""
    return summary_csv([(name, report)], header=False)
