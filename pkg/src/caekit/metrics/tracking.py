"""CLEAR-MOT style multi-object tracking metrics.

The input is one TrackFrame per video frame, listing every visible
ground-truth track with either the predicted track assigned to it or
None for a miss, plus how many spurious predictions the frame had.
The dissimilarity of each assignment feeds MOTP; callers who start
from boxes typically supply 1 - IoU.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class Assignment:
    gt_track: str
    pred_track: str | None
    dissimilarity: float = 0.0


@dataclass(frozen=True, slots=True)
class TrackFrame:
    frame: int
    assignments: tuple[Assignment, ...]
    false_positive_count: int = 0

    def __post_init__(self) -> None:
        if self.false_positive_count < 0:
            raise ValueError("false positive count must be non-negative")


@dataclass(frozen=True, slots=True)
class TrackingSummary:
    mota: float
    motp: float | None
    mostly_tracked_fraction: float
    mostly_lost_fraction: float
    false_positives: int
    misses: int
    id_switches: int
    fragmentations: int
    total_ground_truth: int


def tracking_metrics(frames: Sequence[TrackFrame]) -> TrackingSummary:
    """Accuracy and precision of a tracker against per-frame truth.

    MOTA charges misses, false positives and identity switches against
    the total number of ground-truth appearances; MOTP is one minus
    the mean dissimilarity of the matched assignments (None when
    nothing matched). A ground-truth track counts as mostly tracked
    when matched in over 80% of its frames, mostly lost under 20%.
    Fragmentations are interruptions: runs of misses with a match on
    both sides.
    """
    if not frames:
        raise ValueError("no frames")
    ordered = sorted(frames, key=lambda f: f.frame)
    seen_frames = set()
    for f in ordered:
        if f.frame in seen_frames:
            raise ValueError(f"duplicate frame index {f.frame}")
        seen_frames.add(f.frame)

    total_gt = 0
    misses = 0
    false_positives = 0
    id_switches = 0
    dissimilarities: list[float] = []
    ## per gt track: match flags in frame order, and last non-None prediction
    history: dict[str, list[bool]] = {}
    last_pred: dict[str, str] = {}
    for f in ordered:
        false_positives += f.false_positive_count
        for a in f.assignments:
            total_gt += 1
            trail = history.setdefault(a.gt_track, [])
            if a.pred_track is None:
                misses += 1
                trail.append(False)
                continue
            trail.append(True)
            dissimilarities.append(a.dissimilarity)
            previous = last_pred.get(a.gt_track)
            if previous is not None and previous != a.pred_track:
                id_switches += 1
            last_pred[a.gt_track] = a.pred_track

    if total_gt == 0:
        raise ValueError("no ground-truth objects in any frame")

    fragmentations = 0
    tracked = 0
    lost = 0
    for trail in history.values():
        matched = sum(trail)
        ratio = matched / len(trail)
        if ratio > 0.8:
            tracked += 1
        if ratio < 0.2:
            lost += 1
        ## count miss-runs strictly inside the matched span
        in_gap = False
        seen_match = False
        for hit in trail:
            if hit:
                if in_gap:
                    fragmentations += 1
                in_gap = False
                seen_match = True
            elif seen_match:
                in_gap = True

    motp = None
    if dissimilarities:
        motp = 1.0 - sum(dissimilarities) / len(dissimilarities)
    return TrackingSummary(
        mota=1.0 - (misses + false_positives + id_switches) / total_gt,
        motp=motp,
        mostly_tracked_fraction=tracked / len(history),
        mostly_lost_fraction=lost / len(history),
        false_positives=false_positives,
        misses=misses,
        id_switches=id_switches,
        fragmentations=fragmentations,
        total_ground_truth=total_gt,
    )


__all__ = ["Assignment", "TrackFrame", "TrackingSummary", "tracking_metrics"]
