"""Object-detection evaluation: box overlap, greedy matching, AP over
an IoU grid, capped recall, and the false-positive error taxonomy.

Detections carry a confidence used for ranking; matching pairs each
detection with at most one ground-truth object of the same class in the
same image. All orderings are deterministic: confidence descending,
input order between ties.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .binary import _envelope_area

## IoU thresholds used by the COCO-style sweep: 0.50, 0.55, ... 0.95
IOU_GRID = tuple((50 + 5 * i) / 100 for i in range(10))

_TAXONOMY_FLOOR = 0.1  # overlap below this never explains an error


@dataclass(frozen=True, slots=True)
class Box:
    """Axis-aligned box anchored at its minimum corner."""

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self) -> None:
        if self.w <= 0 or self.h <= 0:
            raise ValueError("box width and height must be positive")

    @property
    def area(self) -> float:
        return self.w * self.h


def iou(a: Box, b: Box) -> float:
    """Intersection area over union area; 0 for disjoint boxes."""
    overlap_w = min(a.x + a.w, b.x + b.w) - max(a.x, b.x)
    overlap_h = min(a.y + a.h, b.y + b.h) - max(a.y, b.y)
    if overlap_w <= 0 or overlap_h <= 0:
        return 0.0
    inter = overlap_w * overlap_h
    return inter / (a.area + b.area - inter)


@dataclass(frozen=True, slots=True)
class Detection:
    image_id: str
    class_label: str
    confidence: float
    box: Box


@dataclass(frozen=True, slots=True)
class GroundTruthObject:
    image_id: str
    class_label: str
    box: Box
    frame: int | None = None
    track_id: str | None = None


@dataclass(frozen=True, slots=True)
class MatchedPair:
    detection_index: int
    ground_truth_index: int
    iou: float


@dataclass(frozen=True, slots=True)
class MatchResult:
    """Outcome of greedy matching: matched pairs plus the indices of
    unmatched detections (false positives) and unmatched ground-truth
    objects (false negatives)."""

    matches: tuple[MatchedPair, ...]
    false_positive_indices: tuple[int, ...]
    false_negative_indices: tuple[int, ...]


def match_detections(
    detections: Sequence[Detection],
    ground_truths: Sequence[GroundTruthObject],
    iou_threshold: float,
) -> MatchResult:
    """Greedy one-to-one matching.

    Detections are taken in confidence order (descending, stable) and
    each claims the still-unmatched ground truth of its image and class
    with the highest IoU, provided that IoU reaches the threshold.
    Equal IoU candidates resolve to the earliest ground truth in input
    order.
    """
    order = sorted(range(len(detections)), key=lambda i: -detections[i].confidence)
    taken = [False] * len(ground_truths)
    matches = []
    false_positives = []
    for di in order:
        det = detections[di]
        best_gi = -1
        best_iou = -1.0
        for gi, gt in enumerate(ground_truths):
            if taken[gi]:
                continue
            if gt.image_id != det.image_id or gt.class_label != det.class_label:
                continue
            overlap = iou(det.box, gt.box)
            if overlap >= iou_threshold and overlap > best_iou:
                best_gi = gi
                best_iou = overlap
        if best_gi >= 0:
            taken[best_gi] = True
            matches.append(MatchedPair(di, best_gi, best_iou))
        else:
            false_positives.append(di)
    false_negatives = [gi for gi, t in enumerate(taken) if not t]
    return MatchResult(tuple(matches), tuple(false_positives), tuple(false_negatives))


def ap_at_iou(
    detections: Sequence[Detection],
    ground_truths: Sequence[GroundTruthObject],
    iou_threshold: float,
) -> float:
    """Average precision at one IoU threshold.

    Matching labels each detection true or false positive; the ranked
    list (all classes pooled, confidence descending) then yields a
    precision envelope whose exact area is returned. Recall is against
    the full ground-truth count, so unmatched objects pull it down.
    """
    if not ground_truths:
        raise ValueError("no ground-truth objects")
    if not detections:
        return 0.0
    result = match_detections(detections, ground_truths, iou_threshold)
    matched = {m.detection_index for m in result.matches}
    order = sorted(range(len(detections)), key=lambda i: -detections[i].confidence)
    points = []
    tp = 0
    for rank, di in enumerate(order, start=1):
        if di in matched:
            tp += 1
        points.append((tp / len(ground_truths), tp / rank))
    return _envelope_area(points)


def coco_map(
    detections: Sequence[Detection], ground_truths: Sequence[GroundTruthObject]
) -> float:
    """Mean of ap_at_iou over the ten-threshold IoU grid."""
    return sum(ap_at_iou(detections, ground_truths, k) for k in IOU_GRID) / len(IOU_GRID)


def _cap_per_image(
    detections: Sequence[Detection], limit: int
) -> list[Detection]:
    ## keep each image's `limit` most confident detections, input order on ties
    by_image: dict[str, list[int]] = {}
    for i, det in enumerate(detections):
        by_image.setdefault(det.image_id, []).append(i)
    kept: list[int] = []
    for indices in by_image.values():
        ranked = sorted(indices, key=lambda i: -detections[i].confidence)
        kept.extend(ranked[:limit])
    return [detections[i] for i in sorted(kept)]


def average_recall(
    detections: Sequence[Detection],
    ground_truths: Sequence[GroundTruthObject],
    max_detections: int,
) -> float:
    """Recall when each image may keep only its most confident
    detections, averaged over the IoU grid and over classes."""
    if not ground_truths:
        raise ValueError("no ground-truth objects")
    if max_detections < 0:
        raise ValueError("detection cap must be non-negative")
    capped = _cap_per_image(detections, max_detections)
    gt_per_class: dict[str, int] = {}
    for gt in ground_truths:
        gt_per_class[gt.class_label] = gt_per_class.get(gt.class_label, 0) + 1
    total = 0.0
    for threshold in IOU_GRID:
        result = match_detections(capped, ground_truths, threshold)
        matched_per_class: dict[str, int] = {}
        for m in result.matches:
            label = ground_truths[m.ground_truth_index].class_label
            matched_per_class[label] = matched_per_class.get(label, 0) + 1
        for label, count in gt_per_class.items():
            total += matched_per_class.get(label, 0) / count
    return total / (len(IOU_GRID) * len(gt_per_class))


@dataclass(frozen=True, slots=True)
class ErrorTaxonomy:
    """False positives broken down by what went wrong, with the
    category of each analyzed detection index alongside the counts."""

    localisation: int
    similar: int
    dissimilar: int
    background: int
    by_detection: tuple[tuple[int, str], ...]


def classify_fp_errors(
    detections: Sequence[Detection],
    ground_truths: Sequence[GroundTruthObject],
    similar: Iterable[tuple[str, str]],
    iou_threshold: float,
) -> ErrorTaxonomy:
    """Assign each false-positive detection an error category.

    Considered in order: a localisation error when the detection
    overlaps some same-class ground truth in its image at IoU 0.1 or
    better (this covers both poorly placed boxes and duplicates of an
    already-claimed object); otherwise classification against the
    best-overlapping ground truth of any class, similar or dissimilar
    per the given symmetric class relation; background when nothing
    overlaps at 0.1.
    """
    similar_pairs = set()
    for a, b in similar:
        similar_pairs.add((a, b))
        similar_pairs.add((b, a))
    result = match_detections(detections, ground_truths, iou_threshold)
    counts = {"localisation": 0, "similar": 0, "dissimilar": 0, "background": 0}
    labelled = []
    for di in result.false_positive_indices:
        det = detections[di]
        best_gt = None
        best_overlap = 0.0
        same_class_hit = False
        for gt in ground_truths:
            if gt.image_id != det.image_id:
                continue
            overlap = iou(det.box, gt.box)
            if overlap < _TAXONOMY_FLOOR:
                continue
            if gt.class_label == det.class_label:
                same_class_hit = True
            if overlap > best_overlap:
                best_overlap = overlap
                best_gt = gt
        if same_class_hit:
            category = "localisation"
        elif best_gt is not None:
            pair = (det.class_label, best_gt.class_label)
            category = "similar" if pair in similar_pairs else "dissimilar"
        else:
            category = "background"
        counts[category] += 1
        labelled.append((di, category))
    return ErrorTaxonomy(
        localisation=counts["localisation"],
        similar=counts["similar"],
        dissimilar=counts["dissimilar"],
        background=counts["background"],
        by_detection=tuple(labelled),
    )


__all__ = [
    "IOU_GRID",
    "Box",
    "iou",
    "Detection",
    "GroundTruthObject",
    "MatchedPair",
    "MatchResult",
    "match_detections",
    "ap_at_iou",
    "coco_map",
    "average_recall",
    "ErrorTaxonomy",
    "classify_fp_errors",
]
