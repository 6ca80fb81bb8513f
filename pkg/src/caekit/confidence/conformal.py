"""Conformal prediction over labeled points.

The transductive form rates how unusual a candidate example would be
among the training examples: each training point is scored by a
nonconformity measure against the rest of the training set, the
candidate against all of it, and the candidate's rank yields a value
in (0, 1]. Low values mean the candidate fits in.

The inductive variant trades exactness for speed by scoring a fixed
calibration set once through a trained model and ranking new inputs
against those stored scores.
"""

from __future__ import annotations

import math
from bisect import bisect_right, insort
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class LabeledPoint:
    features: tuple[float, ...]
    label: str

    def __post_init__(self) -> None:
        feats = self.features
        if isinstance(feats, (int, float)):
            feats = (feats,)
        object.__setattr__(self, "features", tuple(float(v) for v in feats))


Measure = Callable[[Sequence[LabeledPoint], LabeledPoint], float]


def _distance(a: LabeledPoint, b: LabeledPoint) -> float:
    return math.dist(a.features, b.features)


def nn_blind(others: Sequence[LabeledPoint], candidate: LabeledPoint) -> float:
    """Distance to the nearest other point, labels ignored."""
    if not others:
        return math.inf
    return min(_distance(candidate, z) for z in others)


def nn_ratio(others: Sequence[LabeledPoint], candidate: LabeledPoint) -> float:
    """Nearest same-label distance over nearest other-label distance.

    Small when the candidate sits among its own class and far from the
    others. A zero same-label distance gives 0 outright; with no
    other-label point to compare against the measure is also 0; a zero
    other-label distance gives infinity.
    """
    d_same = math.inf
    d_other = math.inf
    for z in others:
        d = _distance(candidate, z)
        if z.label == candidate.label:
            d_same = min(d_same, d)
        else:
            d_other = min(d_other, d)
    if d_same == 0.0:
        return 0.0
    if d_other == math.inf:
        return 0.0
    if d_other == 0.0:
        return math.inf
    return d_same / d_other


def conformal_cp(
    examples: Iterable[LabeledPoint], candidate: LabeledPoint, measure: Measure
) -> float:
    """Rank of the candidate's nonconformity within the augmented set.

    Each training example is scored against the training set without
    itself; the candidate against the whole training set. The result
    counts the scores at or below the candidate's, the candidate
    included, out of the augmented total, so it lies in (0, 1].
    """
    pool = list(examples)
    if not pool:
        raise ValueError("need at least one training example")
    candidate_score = measure(pool, candidate)
    at_or_below = 1  # the candidate itself
    for i, z in enumerate(pool):
        others = pool[:i] + pool[i + 1 :]
        if measure(others, z) <= candidate_score:
            at_or_below += 1
    return at_or_below / (len(pool) + 1)


def _class_labels(pool: Sequence[LabeledPoint]) -> list[str]:
    return sorted({z.label for z in pool})


def conformal_prediction_set(
    examples: Iterable[LabeledPoint],
    features: Sequence[float] | float,
    confidence_level: float,
    measure: Measure = nn_ratio,
) -> set[str]:
    """Labels under which the input would still conform, at the given
    level: every label whose rank value stays strictly below it.

    The label universe is whatever appears in the examples. The set
    can be empty for inputs nothing in the training data resembles.
    """
    pool = list(examples)
    if not pool:
        raise ValueError("need at least one training example")
    return {
        label
        for label in _class_labels(pool)
        if conformal_cp(pool, LabeledPoint(features, label), measure) < confidence_level
    }


@dataclass(frozen=True, slots=True)
class ConformalResult:
    prediction: str
    confidence: float
    credibility: float


def conformal_point(
    examples: Iterable[LabeledPoint],
    features: Sequence[float] | float,
    measure: Measure = nn_ratio,
) -> ConformalResult:
    """Forced single-label prediction with its two quality scores.

    The prediction is the label with the lowest rank value (ties fall
    to label order). Confidence is the runner-up's rank value, the
    largest level at which the prediction set is a singleton;
    credibility is one minus the chosen label's own rank value, near
    zero when the input fits no class at all.
    """
    pool = list(examples)
    labels = _class_labels(pool)
    if len(labels) < 2:
        raise ValueError("point prediction needs at least two classes")
    ranked = sorted(
        (conformal_cp(pool, LabeledPoint(features, label), measure), label)
        for label in labels
    )
    best_cp, best_label = ranked[0]
    runner_up_cp, _ = ranked[1]
    return ConformalResult(
        prediction=best_label,
        confidence=runner_up_cp,
        credibility=1.0 - best_cp,
    )


@dataclass(frozen=True)
class IcpContext:
    """Calibrated state for inductive conformal prediction.

    Holds the model, the nonconformity metric, the sorted calibration
    scores, and the label universe seen during calibration. The scores
    are computed once; predictions only rank against them.
    """

    model: Callable[[Sequence[float]], object]
    metric: Callable[[object, str], float]
    calibration_scores: tuple[float, ...]
    labels: tuple[str, ...]


def icp_calibrate(
    model: Callable[[Sequence[float]], object],
    metric: Callable[[object, str], float],
    calibration: Iterable[LabeledPoint],
) -> IcpContext:
    """Score every calibration point once and store the sorted result.

    The metric sees the model's output for the point's features and
    the point's true label. The calibration set must be data the model
    was not trained on; that is the caller's responsibility.
    """
    pool = list(calibration)
    if not pool:
        raise ValueError("calibration set is empty")
    scores: list[float] = []
    for z in pool:
        insort(scores, metric(model(z.features), z.label))
    return IcpContext(model, metric, tuple(scores), tuple(_class_labels(pool)))


def icp_p_value(ctx: IcpContext, features: Sequence[float] | float, label: str) -> float:
    """Rank value of one candidate labeling against the stored scores."""
    point = LabeledPoint(features, label)
    score = ctx.metric(ctx.model(point.features), point.label)
    below = bisect_right(ctx.calibration_scores, score)
    return (1 + below) / (len(ctx.calibration_scores) + 1)


def icp_predict(
    ctx: IcpContext, features: Sequence[float] | float, confidence_level: float
) -> set[str]:
    """Prediction set from a calibrated context.

    Runs the model once on the input, then ranks each candidate label's
    metric score against the stored calibration scores.
    """
    point = LabeledPoint(features, "")
    output = ctx.model(point.features)
    n = len(ctx.calibration_scores)
    result = set()
    for label in ctx.labels:
        score = ctx.metric(output, label)
        cp = (1 + bisect_right(ctx.calibration_scores, score)) / (n + 1)
        if cp < confidence_level:
            result.add(label)
    return result


__all__ = [
    "LabeledPoint",
    "Measure",
    "nn_blind",
    "nn_ratio",
    "conformal_cp",
    "conformal_prediction_set",
    "ConformalResult",
    "conformal_point",
    "IcpContext",
    "icp_calibrate",
    "icp_p_value",
    "icp_predict",
]
