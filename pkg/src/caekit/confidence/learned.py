"""Learned-confidence training arithmetic and thresholding.

A model that emits its own confidence c alongside class probabilities
can hedge: the adjusted output pulls the probabilities toward the true
answer in proportion to 1 - c, and a penalty on c (weighted by k)
stops it from hedging always. These helpers implement that loss
arithmetic, the budget-driven update of k, and threshold selection
against a remaining-error-rate target.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence

from ..metrics.binary import ConfidenceRecord, rer_rar

PROBABILITY_TOLERANCE = 1e-9
BUDGET_STEP = 1.01


def adjusted_probabilities(
    probabilities: Sequence[float], truth: Sequence[float], confidence: float
) -> tuple[float, ...]:
    """Blend of the predicted distribution with the truth: each
    component is c * p + (1 - c) * y, a point on the segment from y
    to p."""
    if len(probabilities) != len(truth):
        raise ValueError("probability and truth vectors differ in length")
    if abs(sum(probabilities) - 1.0) > PROBABILITY_TOLERANCE:
        raise ValueError("probabilities must sum to 1")
    if not 0.0 <= confidence <= 1.0:
        raise ValueError("confidence must lie in [0, 1]")
    return tuple(
        confidence * p + (1.0 - confidence) * y
        for p, y in zip(probabilities, truth)
    )


def confidence_weighted_loss(
    probabilities: Sequence[float],
    truth: Sequence[float],
    confidence: float,
    weight: float,
    task_loss: Callable[[Sequence[float], Sequence[float]], float],
    confidence_loss: Callable[[float], float],
    apply_adjustment: bool,
) -> float:
    """Training loss: task loss on the (optionally adjusted) output
    plus the weighted confidence penalty.

    Adjustment should be applied on only a deterministic half of the
    training instances (see alternate_instances) so the model cannot
    rely on the hint always being there.
    """
    if weight < 0:
        raise ValueError("penalty weight must be non-negative")
    adjusted = adjusted_probabilities(probabilities, truth, confidence)
    task_input = adjusted if apply_adjustment else tuple(probabilities)
    return task_loss(task_input, truth) + weight * confidence_loss(confidence)


def alternate_instances(index: int) -> bool:
    """Deterministic half-instances schedule: adjust even indices."""
    return index % 2 == 0


def budget_update(weight: float, confidence_loss_total: float, budget: float) -> float:
    """Nudge the penalty weight by 1% toward the confidence budget:
    up when the accumulated confidence loss exceeds it, down when
    under, unchanged at equality."""
    if weight <= 0:
        raise ValueError("penalty weight must be positive")
    if confidence_loss_total > budget:
        return weight * BUDGET_STEP
    if confidence_loss_total < budget:
        return weight / BUDGET_STEP
    return weight


def detection_confidence(p_object: float, iou: float) -> float:
    """Confidence in one detection: probability the box holds an object
    at all, times how accurate the box is if it does."""
    if not 0.0 <= p_object <= 1.0:
        raise ValueError("object probability must lie in [0, 1]")
    if not 0.0 <= iou <= 1.0:
        raise ValueError("iou must lie in [0, 1]")
    return p_object * iou


def threshold_for_target_rer(
    predictions: Sequence[ConfidenceRecord], max_rer: float
) -> float | None:
    """Smallest certainty threshold keeping the remaining error rate
    within the target.

    Candidates are zero, every observed confidence, and one value just
    above the highest (where nothing counts as certain). Returns None
    only if no candidate qualifies.
    """
    if not predictions:
        raise ValueError("no predictions")
    observed = sorted({c for _, c in predictions})
    candidates = sorted({0.0, *observed})
    candidates.append(math.nextafter(observed[-1], math.inf))
    for threshold in candidates:
        rer, _ = rer_rar(predictions, threshold)
        if rer <= max_rer:
            return threshold
    return None


__all__ = [
    "PROBABILITY_TOLERANCE",
    "BUDGET_STEP",
    "adjusted_probabilities",
    "confidence_weighted_loss",
    "alternate_instances",
    "budget_update",
    "detection_confidence",
    "threshold_for_target_rer",
]
