"""Binary classifier and retrieval metrics.

Inputs are either raw confusion counts or scored records: (score, truth)
pairs where truth marks the positive class. Ranking metrics order by
descending score and keep input order between tied scores. Ratios with
a zero denominator come back as None rather than raising.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class ConfusionMetrics:
    accuracy: float | None
    recall: float | None
    false_positive_rate: float | None
    precision: float | None
    f1: float | None


def _ratio(num: float, den: float) -> float | None:
    return num / den if den else None


def confusion_metrics(tp: int, fp: int, tn: int, fn: int) -> ConfusionMetrics:
    """Scalar metrics from the four confusion counts."""
    if min(tp, fp, tn, fn) < 0:
        raise ValueError("confusion counts must be non-negative")
    precision = _ratio(tp, tp + fp)
    recall = _ratio(tp, tp + fn)
    if precision is None or recall is None:
        f1 = None
    elif precision + recall == 0:
        f1 = 0.0
    else:
        f1 = 2 * precision * recall / (precision + recall)
    return ConfusionMetrics(
        accuracy=_ratio(tp + tn, tp + fp + tn + fn),
        recall=recall,
        false_positive_rate=_ratio(fp, fp + tn),
        precision=precision,
        f1=f1,
    )


def precision_recall_from_counts(
    false_positives: int, false_negatives: int, total_ground_truth: int
) -> tuple[float | None, float | None]:
    """Precision and recall when only FP, FN and the ground-truth total
    are reported; true positives are recovered as the remainder."""
    if false_negatives > total_ground_truth:
        raise ValueError(
            f"false negatives ({false_negatives}) exceed ground truth "
            f"({total_ground_truth})"
        )
    if min(false_positives, false_negatives, total_ground_truth) < 0:
        raise ValueError("counts must be non-negative")
    tp = total_ground_truth - false_negatives
    return _ratio(tp, tp + false_positives), _ratio(tp, total_ground_truth)


ScoredRecord = tuple[float, bool]


def _ranked(scored: Sequence[ScoredRecord]) -> list[ScoredRecord]:
    ## stable sort keeps input order between equal scores
    return sorted(scored, key=lambda st: -st[0])


def roc_points(scored: Iterable[ScoredRecord]) -> list[tuple[float, float]]:
    """ROC curve as (false positive rate, true positive rate) pairs.

    One point per distinct score threshold, sweeping from predicting
    nothing down to predicting everything; a score at or above the
    threshold predicts positive. Needs both classes present.
    """
    records = _ranked(list(scored))
    pos = sum(1 for _, t in records if t)
    neg = len(records) - pos
    if pos == 0 or neg == 0:
        raise ValueError("ROC needs at least one positive and one negative")
    points = [(0.0, 0.0)]
    tp = fp = 0
    i = 0
    while i < len(records):
        threshold = records[i][0]
        while i < len(records) and records[i][0] == threshold:
            if records[i][1]:
                tp += 1
            else:
                fp += 1
            i += 1
        points.append((fp / neg, tp / pos))
    return points


def roc_auc(scored: Iterable[ScoredRecord]) -> float:
    """Area under the ROC curve by the trapezoid rule."""
    points = roc_points(scored)
    area = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        area += (x1 - x0) * (y0 + y1) / 2.0
    return area


def pr_points(scored: Iterable[ScoredRecord]) -> list[tuple[float, float]]:
    """Precision-recall curve as (recall, precision) pairs, one per
    distinct score threshold."""
    records = _ranked(list(scored))
    total_pos = sum(1 for _, t in records if t)
    if total_pos == 0:
        raise ValueError("no positives in the scored records")
    points = []
    tp = 0
    i = 0
    while i < len(records):
        threshold = records[i][0]
        while i < len(records) and records[i][0] == threshold:
            if records[i][1]:
                tp += 1
            i += 1
        points.append((tp / total_pos, tp / i))
    return points


def _envelope_area(points: Sequence[tuple[float, float]]) -> float:
    ## exact area under r -> max{precision at recall >= r}
    best_after: list[tuple[float, float]] = []
    best = 0.0
    for recall, precision in sorted(points, key=lambda rp: -rp[0]):
        best = max(best, precision)
        best_after.append((recall, best))
    best_after.reverse()
    area = 0.0
    prev_recall = 0.0
    for recall, precision in best_after:
        if recall > prev_recall:
            area += (recall - prev_recall) * precision
            prev_recall = recall
    return area


def average_precision(scored: Iterable[ScoredRecord]) -> float:
    """Average precision: the exact area under the interpolated
    precision envelope, where precision at recall r is the best
    precision achieved at any recall level at or beyond r.

    The envelope is built from every rank prefix of the scored records.
    """
    records = _ranked(list(scored))
    total_pos = sum(1 for _, t in records if t)
    if total_pos == 0:
        raise ValueError("no positives in the scored records")
    points = []
    tp = 0
    for i, (_, truth) in enumerate(records, start=1):
        if truth:
            tp += 1
        points.append((tp / total_pos, tp / i))
    return _envelope_area(points)


def r_precision(scored: Iterable[ScoredRecord]) -> float:
    """Precision within the top K results, with K the number of
    positives in the data. Ties keep input order."""
    records = _ranked(list(scored))
    k = sum(1 for _, t in records if t)
    if k == 0:
        raise ValueError("no positives in the scored records")
    return sum(1 for _, t in records[:k] if t) / k


def estimated_pr_curve(r_precision_value: float):
    """Model of a precision-recall curve from its R-precision alone.

    Uses the hyperbola p(r) = (1 - r) / (1 + a r) with the single shape
    parameter a chosen so that the curve passes through (R, R). Returns
    the function p(recall).
    """
    big_r = r_precision_value
    if not 0.0 < big_r < 1.0:
        raise ValueError("R-precision must lie strictly between 0 and 1")
    alpha = (1.0 / big_r - 1.0) ** 2 - 1.0

    def precision_at(recall: float) -> float:
        if not 0.0 <= recall <= 1.0:
            raise ValueError("recall must lie in [0, 1]")
        return (1.0 - recall) / (1.0 + alpha * recall)

    return precision_at


def f_beta(precision: float, recall: float, beta: float = 1.0) -> float:
    """F-score weighting recall beta times as much as precision.

    Defined as 0 when both precision and recall are 0.
    """
    if beta < 0:
        raise ValueError("beta must be non-negative")
    if precision == 0.0 and recall == 0.0:
        return 0.0
    b2 = beta * beta
    return (1 + b2) * precision * recall / (b2 * precision + recall)


ConfidenceRecord = tuple[bool, float]  # (prediction correct?, confidence)


def rer_rar(records: Sequence[ConfidenceRecord], threshold: float) -> tuple[float, float]:
    """Remaining error rate and remaining accuracy rate at a threshold.

    Both divide by the total record count: RER is the fraction that are
    wrong yet confident, RAR the fraction that are right and confident.
    At threshold 0 the two sum to 1.
    """
    if not records:
        raise ValueError("no confidence records")
    n = len(records)
    rer = sum(1 for ok, c in records if not ok and c >= threshold) / n
    rar = sum(1 for ok, c in records if ok and c >= threshold) / n
    return rer, rar


def rer_rar_sweep(
    records: Sequence[ConfidenceRecord],
) -> list[tuple[float, float, float]]:
    """(threshold, RER, RAR) at 0 and at every distinct confidence."""
    thresholds = sorted({0.0} | {c for _, c in records})
    return [(t, *rer_rar(records, t)) for t in thresholds]


def normalized_precision(
    recall: float, total_ground_truth: int, false_positives: int
) -> float | None:
    """Precision recomputed from recall against the full ground truth.

    Useful when the detector was evaluated on capped ranked lists:
    recall times the ground-truth total recovers the true positive
    count, which is then set against the false positives.
    """
    if total_ground_truth < 0 or false_positives < 0:
        raise ValueError("counts must be non-negative")
    tp = recall * total_ground_truth
    return _ratio(tp, tp + false_positives)


def max_f1_on_curve(precision_at, samples: int = 100_001) -> float:
    """Largest F1 along a precision(recall) curve, by dense sampling."""
    best = 0.0
    for i in range(samples):
        r = i / (samples - 1)
        best = max(best, f_beta(precision_at(r), r))
    return best


__all__ = [
    "ConfusionMetrics",
    "confusion_metrics",
    "precision_recall_from_counts",
    "roc_points",
    "roc_auc",
    "pr_points",
    "average_precision",
    "r_precision",
    "estimated_pr_curve",
    "f_beta",
    "rer_rar",
    "rer_rar_sweep",
    "normalized_precision",
    "max_f1_on_curve",
]
