"""File ingestion for the CLI and tests: small CSV formats for scored
records, detections, ground truth, tracking assignments and priors,
plus a JSON document for linear models.

Every CSV format requires a header row naming its columns. Problems
are reported as ValueError carrying the file name and line number.
"""

from __future__ import annotations

import csv
import json
from collections.abc import Iterator, Sequence
from pathlib import Path

import numpy as np

from .confidence.attribution import LinearModel
from .confidence.conformal import LabeledPoint
from .metrics.detection import Box, Detection, GroundTruthObject
from .metrics.tracking import Assignment, TrackFrame
from .reliability import DiscretePrior

_TRUTHY = {"true", "1", "yes"}
_FALSY = {"false", "0", "no"}


def _parse_bool(text: str, where: str) -> bool:
    lowered = text.strip().lower()
    if lowered in _TRUTHY:
        return True
    if lowered in _FALSY:
        return False
    raise ValueError(f"{where}: expected a boolean, found {text!r}")


def _parse_float(text: str, where: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"{where}: expected a number, found {text!r}") from None


def _parse_int(text: str, where: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ValueError(f"{where}: expected an integer, found {text!r}") from None


def _rows(path: str | Path, expected: Sequence[str] | None) -> Iterator[tuple[int, list[str]]]:
    """Yield (line number, cells) for each data row, checking the
    header against `expected` when given."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected a header row") from None
        header = [cell.strip().lower() for cell in header]
        if expected is not None and header != list(expected):
            raise ValueError(
                f"{path}: header {','.join(header)!r} does not match "
                f"expected {','.join(expected)!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            yield lineno, [cell.strip() for cell in row]


def _expect_width(path: Path, lineno: int, row: list[str], width: int) -> None:
    if len(row) != width:
        raise ValueError(
            f"{path}: line {lineno}: expected {width} fields, found {len(row)}"
        )


def read_scored_records(path: str | Path) -> list[tuple[float, bool]]:
    """`score,truth` rows as (score, truth) pairs."""
    path = Path(path)
    records = []
    for lineno, row in _rows(path, ["score", "truth"]):
        _expect_width(path, lineno, row, 2)
        where = f"{path}: line {lineno}"
        records.append((_parse_float(row[0], where), _parse_bool(row[1], where)))
    return records


def read_confidence_records(path: str | Path) -> list[tuple[bool, float]]:
    """`correct,confidence` rows for certainty metrics."""
    path = Path(path)
    records = []
    for lineno, row in _rows(path, ["correct", "confidence"]):
        _expect_width(path, lineno, row, 2)
        where = f"{path}: line {lineno}"
        records.append((_parse_bool(row[0], where), _parse_float(row[1], where)))
    return records


def _parse_box(row: Sequence[str], where: str) -> Box:
    x, y, w, h = (_parse_float(cell, where) for cell in row)
    try:
        return Box(x, y, w, h)
    except ValueError as exc:
        raise ValueError(f"{where}: {exc}") from None


def read_detections(path: str | Path) -> list[Detection]:
    """`image_id,class,confidence,x,y,w,h` rows."""
    path = Path(path)
    detections = []
    for lineno, row in _rows(path, ["image_id", "class", "confidence", "x", "y", "w", "h"]):
        _expect_width(path, lineno, row, 7)
        where = f"{path}: line {lineno}"
        detections.append(
            Detection(row[0], row[1], _parse_float(row[2], where), _parse_box(row[3:7], where))
        )
    return detections


def read_ground_truth(path: str | Path) -> list[GroundTruthObject]:
    """`image_id,class,x,y,w,h` rows, optionally extended with
    `frame,track_id` columns."""
    path = Path(path)
    base = ["image_id", "class", "x", "y", "w", "h"]
    objects: list[GroundTruthObject] = []
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = [cell.strip().lower() for cell in next(reader)]
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected a header row") from None
        if header == base:
            extended = False
        elif header == base + ["frame", "track_id"]:
            extended = True
        else:
            raise ValueError(
                f"{path}: header {','.join(header)!r} matches neither the "
                "plain nor the tracking ground-truth format"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            row = [cell.strip() for cell in row]
            _expect_width(path, lineno, row, 8 if extended else 6)
            where = f"{path}: line {lineno}"
            frame = _parse_int(row[6], where) if extended else None
            track = row[7] if extended else None
            objects.append(
                GroundTruthObject(row[0], row[1], _parse_box(row[2:6], where), frame, track)
            )
    return objects


def read_track_frames(
    assignments_path: str | Path, sidecar_path: str | Path | None = None
) -> list[TrackFrame]:
    """Tracking input: `frame,gt_track,pred_track,dissimilarity` rows
    (empty pred_track means a miss), with false-positive counts from
    an optional `frame,false_positives` sidecar."""
    path = Path(assignments_path)
    per_frame: dict[int, list[Assignment]] = {}
    for lineno, row in _rows(path, ["frame", "gt_track", "pred_track", "dissimilarity"]):
        _expect_width(path, lineno, row, 4)
        where = f"{path}: line {lineno}"
        frame = _parse_int(row[0], where)
        pred = row[2] or None
        dissim = _parse_float(row[3], where) if row[3] else 0.0
        per_frame.setdefault(frame, []).append(Assignment(row[1], pred, dissim))
    fp_counts: dict[int, int] = {}
    if sidecar_path is not None:
        side = Path(sidecar_path)
        for lineno, row in _rows(side, ["frame", "false_positives"]):
            _expect_width(side, lineno, row, 2)
            where = f"{side}: line {lineno}"
            fp_counts[_parse_int(row[0], where)] = _parse_int(row[1], where)
    frames = []
    for frame in sorted(per_frame.keys() | fp_counts.keys()):
        frames.append(
            TrackFrame(frame, tuple(per_frame.get(frame, ())), fp_counts.get(frame, 0))
        )
    return frames


def read_prior(path: str | Path) -> DiscretePrior:
    """`pfm,mass` rows as a discrete prior."""
    path = Path(path)
    atoms = []
    masses = []
    for lineno, row in _rows(path, ["pfm", "mass"]):
        _expect_width(path, lineno, row, 2)
        where = f"{path}: line {lineno}"
        atoms.append(_parse_float(row[0], where))
        masses.append(_parse_float(row[1], where))
    try:
        return DiscretePrior(tuple(atoms), tuple(masses))
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def read_labeled_points(path: str | Path) -> list[LabeledPoint]:
    """`label,f1,...,fn` rows as labeled feature vectors."""
    path = Path(path)
    points = []
    width: int | None = None
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = [cell.strip().lower() for cell in next(reader)]
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected a header row") from None
        if len(header) < 2 or header[0] != "label":
            raise ValueError(
                f"{path}: expected a `label,f1,...` header, found {','.join(header)!r}"
            )
        width = len(header)
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            row = [cell.strip() for cell in row]
            _expect_width(path, lineno, row, width)
            where = f"{path}: line {lineno}"
            features = tuple(_parse_float(cell, where) for cell in row[1:])
            points.append(LabeledPoint(features, row[0]))
    return points


def read_linear_model(path: str | Path) -> tuple[LinearModel, np.ndarray]:
    """Linear model document {classes, weights, biases, baseline}."""
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ValueError(f"{path}: expected a JSON object")
    missing = {"classes", "weights", "biases", "baseline"} - obj.keys()
    if missing:
        raise ValueError(f"{path}: missing keys: {', '.join(sorted(missing))}")
    try:
        model = LinearModel(tuple(obj["classes"]), obj["weights"], obj["biases"])
        baseline = np.asarray(obj["baseline"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{path}: {exc}") from None
    if baseline.ndim != 1 or baseline.shape[0] != model.weights.shape[1]:
        raise ValueError(f"{path}: baseline length does not match feature count")
    return model, baseline


__all__ = [
    "read_scored_records",
    "read_confidence_records",
    "read_detections",
    "read_ground_truth",
    "read_track_frames",
    "read_prior",
    "read_labeled_points",
    "read_linear_model",
]
