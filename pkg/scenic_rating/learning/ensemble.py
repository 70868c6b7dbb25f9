#!/usr/bin/env python
"""
Bagging and AdaBoost.M1 over any learner.

Bagging trains every member on its own bootstrap resample (member i uses seed + i) and
combines members by unweighted majority vote. Boosting trains members sequentially on
reweighted rows; learners that ignore row weights are trained on a weighted resample
instead. Both break vote ties toward the lower rating.
"""

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed

from scenic_rating.core.logger import get_logger
from scenic_rating.exceptions.exceptions import EnsembleError
from scenic_rating.geo.features import Dataset, LabeledMatrix
from scenic_rating.geo.ingest import ClassLabel
from scenic_rating.learners.learner import Learner
from scenic_rating.learning.models import EnsembleModel, Model, predict, predict_indices
from scenic_rating.learning.seeding import derive_seed, substream, validate_seed

logger = get_logger("ensemble")

ENSEMBLE_METHODS = ("none", "bagging", "boosting")
DEFAULT_ITERATIONS = 10


@dataclass(frozen=True)
class BoostRound:
    """
    Outcome of one boosting attempt, reported to the on_round callback.

    Attributes:
        index: Attempt number, starting at 0 (discarded attempts included)
        error: Weighted training error of the attempt's model
        weight: Member weight, 0 for a discarded attempt
        row_weights: Row weights after this attempt's update, summing to 1
        discarded: True when the error reached 0.5
    """

    index: int
    error: float
    weight: float
    row_weights: np.ndarray
    discarded: bool


def _as_matrix(data: Union[Dataset, LabeledMatrix]) -> LabeledMatrix:
    return data.to_matrix() if isinstance(data, Dataset) else data


def _check_inputs(data: LabeledMatrix, iterations: int) -> None:
    if len(data) == 0:
        raise EnsembleError("cannot train an ensemble on an empty dataset")
    if iterations < 1:
        raise EnsembleError(f"iterations must be >= 1, got {iterations}")


def _fit_bag_member(base: Learner, data: LabeledMatrix, member_seed: int, resample: bool) -> Model:
    n = len(data)
    sample = substream(member_seed).integers(0, n, size=n) if resample else np.arange(n)
    return base.fit(data.take(sample), member_seed)


def bag(
    base: Learner,
    dataset: Union[Dataset, LabeledMatrix],
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 1,
    n_jobs: int = 1,
    resample: bool = True,
) -> EnsembleModel:
    """
    Bootstrap aggregating.

    Arguments:
        base: Learner trained once per member
        dataset: Training rows
        iterations: Number of members
        seed: Ensemble seed; member i uses seed + i
        n_jobs: Worker threads
        resample: Draw bootstrap resamples; False trains every member on the full data

    Returns:
        EnsembleModel: kind "bagging", every member with weight 1

    Raises:
        EnsembleError: On an empty dataset or iterations < 1
    """
    seed = validate_seed(seed)
    data = _as_matrix(dataset)
    _check_inputs(data, iterations)

    models = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_fit_bag_member)(base, data, derive_seed(seed, i), resample) for i in range(iterations)
    )
    logger.info("Bagged %d %s members", len(models), base.name)
    return EnsembleModel(
        members=tuple((model, 1.0) for model in models),
        kind="bagging",
        classes=tuple(data.classes),
        params={"base": base.describe(), "iterations": iterations, "resample": resample},
        seed=seed,
        n_features=data.features.shape[1],
    )


def member_weight(error: float, n: int) -> float:
    """
    Vote weight of a boosting member.

    Arguments:
        error: Weighted training error in [0, 0.5)
        n: Number of training rows

    Returns:
        float: ln((1 - e) / e); a perfect member gets the capped value with e = 1 / (2n)
    """
    if error <= 0:
        error = 1.0 / (2.0 * n)
    return math.log((1.0 - error) / error)


def boost(
    base: Learner,
    dataset: Union[Dataset, LabeledMatrix],
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 1,
    resample: Optional[bool] = None,
    on_round: Optional[Callable[[BoostRound], None]] = None,
) -> EnsembleModel:
    """
    AdaBoost.M1.

    Each round trains on the current row weights and measures the weighted error e:

    - e >= 0.5: the model is discarded and the weights reset to uniform; at most
      `iterations` such retries are made before training stops
    - e == 0: the model joins with the capped weight and training stops
    - otherwise the model joins with weight ln((1 - e) / e) and misclassified rows are
      multiplied by (1 - e) / e before renormalizing

    If no round produced a member, the first trained model is kept with weight 1.

    Arguments:
        base: Learner to boost
        dataset: Training rows
        iterations: Number of accepted rounds to train
        seed: Ensemble seed; attempt a uses seed + a
        resample: Train on a weighted resample instead of passing weights; defaults to
            True for learners that ignore weights
        on_round: Optional callback receiving a BoostRound after every attempt

    Returns:
        EnsembleModel: kind "boosting"

    Raises:
        EnsembleError: On an empty dataset or iterations < 1
    """
    seed = validate_seed(seed)
    data = _as_matrix(dataset)
    _check_inputs(data, iterations)
    if resample is None:
        resample = not base.supports_weights

    n = len(data)
    weights = np.full(n, 1.0 / n)
    members: List[Tuple[Model, float]] = []
    first_model: Optional[Model] = None
    attempt = 0
    retries = 0

    while len(members) < iterations:
        round_seed = derive_seed(seed, attempt)
        if resample:
            sample = substream(round_seed).choice(n, size=n, replace=True, p=weights)
            model = base.fit(data.take(sample), round_seed)
        else:
            model = base.fit(data, round_seed, weights=weights)
        if first_model is None:
            first_model = model

        wrong = predict_indices(model, data.features) != data.labels
        error = float(weights[wrong].sum())

        if error >= 0.5:
            weights = np.full(n, 1.0 / n)
            logger.warning("Boosting round %d discarded (error %.4f)", attempt, error)
            if on_round:
                on_round(BoostRound(attempt, error, 0.0, weights.copy(), True))
            attempt += 1
            retries += 1
            if retries > iterations:
                break
            continue

        alpha = member_weight(error, n)
        members.append((model, alpha))
        if error > 0:
            weights = np.where(wrong, weights * (1.0 - error) / error, weights)
            weights = weights / weights.sum()
        if on_round:
            on_round(BoostRound(attempt, error, alpha, weights.copy(), False))
        logger.debug("Boosting round %d: error %.4f, weight %.4f", attempt, error, alpha)
        attempt += 1
        if error == 0:
            break

    if not members:
        logger.warning("No boosting round reached an error below 0.5; keeping the first model")
        members.append((first_model, 1.0))

    return EnsembleModel(
        members=tuple(members),
        kind="boosting",
        classes=tuple(data.classes),
        params={"base": base.describe(), "iterations": iterations, "resample": resample},
        seed=seed,
        n_features=data.features.shape[1],
    )


def predict_ensemble(model: EnsembleModel, features: Sequence[float]) -> Tuple[ClassLabel, np.ndarray]:
    """
    Weighted vote of an ensemble for one feature vector.

    Returns:
        Tuple[ClassLabel, np.ndarray]: Winning label (ties to the lower rating) and the
        vote shares, summing to 1
    """
    if not isinstance(model, EnsembleModel):
        raise EnsembleError(f"expected an ensemble model, got {type(model).__name__}")
    return predict(model, features)


def training_error_trace(model: EnsembleModel, dataset: Union[Dataset, LabeledMatrix]) -> List[float]:
    """
    Training error of the first t members' weighted vote, for t = 1..len(members).

    Arguments:
        model: Trained ensemble
        dataset: Rows to evaluate on

    Returns:
        List[float]: Misclassified fraction per prefix length
    """
    data = _as_matrix(dataset)
    n = len(data)
    if n == 0:
        raise EnsembleError("cannot trace the error of an empty dataset")
    rows = np.arange(n)
    weighted = np.zeros((n, model.n_classes))
    unweighted = np.zeros((n, model.n_classes))
    trace = []
    for member, weight in model.members:
        predicted = predict_indices(member, data.features)
        weighted[rows, predicted] += weight
        unweighted[rows, predicted] += 1.0
        votes = np.where((weighted.sum(axis=1) > 0)[:, None], weighted, unweighted)
        trace.append(float(np.mean(np.argmax(votes, axis=1) != data.labels)))
    return trace


def training_error_bound(rounds: Sequence[BoostRound]) -> List[float]:
    """
    Upper bound on the boosted training error after each accepted round.

    Round t contributes the factor (1 - (1 - b) * (1 - e)) / sqrt(b) with b = exp(-weight),
    which is 2 * sqrt(e * (1 - e)) for an uncapped member. The factors are at most 1, so the
    bound never increases, although the training error itself may. The bound holds for runs
    without discarded rounds, since a discarded round resets the row weights.

    Arguments:
        rounds: BoostRound records in the order on_round received them

    Returns:
        List[float]: Bound per accepted round, aligned with training_error_trace
    """
    bounds = []
    bound = 1.0
    for outcome in rounds:
        if outcome.discarded:
            continue
        beta = math.exp(-outcome.weight)
        bound *= (1.0 - (1.0 - beta) * (1.0 - outcome.error)) / math.sqrt(beta)
        bounds.append(bound)
    return bounds


def fit_ensemble(
    base: Learner,
    dataset: Union[Dataset, LabeledMatrix],
    method: str = "none",
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 1,
    boost_resample: bool = False,
    n_jobs: int = 1,
) -> Model:
    """
    Train a learner alone or wrapped in bagging or boosting.

    Arguments:
        base: Base learner
        dataset: Training rows
        method: "none", "bagging" or "boosting"
        iterations: Ensemble size
        seed: Seed
        boost_resample: Force weighted resampling in boosting
        n_jobs: Worker threads (forest trees or bagging members)

    Returns:
        Model: The trained model
    """
    if method == "none":
        data = _as_matrix(dataset)
        if len(data) == 0:
            raise EnsembleError("cannot train on an empty dataset")
        return base.fit(data, validate_seed(seed), n_jobs=n_jobs)
    if method == "bagging":
        return bag(base, dataset, iterations=iterations, seed=seed, n_jobs=n_jobs)
    if method == "boosting":
        return boost(base, dataset, iterations=iterations, seed=seed, resample=True if boost_resample else None)
    raise EnsembleError(f"ensemble must be one of {', '.join(ENSEMBLE_METHODS)}, got {method!r}")
