"""Evaluation metrics for classifier, detection and tracking evidence."""

from .binary import (
    ConfusionMetrics,
    average_precision,
    confusion_metrics,
    estimated_pr_curve,
    f_beta,
    max_f1_on_curve,
    normalized_precision,
    pr_points,
    precision_recall_from_counts,
    r_precision,
    rer_rar,
    rer_rar_sweep,
    roc_auc,
    roc_points,
)
from .detection import (
    IOU_GRID,
    Box,
    Detection,
    ErrorTaxonomy,
    GroundTruthObject,
    MatchedPair,
    MatchResult,
    ap_at_iou,
    average_recall,
    classify_fp_errors,
    coco_map,
    iou,
    match_detections,
)
from .tracking import Assignment, TrackFrame, TrackingSummary, tracking_metrics

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
    "Assignment",
    "TrackFrame",
    "TrackingSummary",
    "tracking_metrics",
]
