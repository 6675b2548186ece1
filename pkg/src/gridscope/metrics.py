"""Detector quality metrics: IoU matching, PR, interpolated AP, fitness.

Single-class evaluation.  Predictions are ranked by descending confidence
(ties keep input order) and each one greedily claims the unmatched
ground-truth box in its own frame with the highest IoU at or above the
threshold (IoU ties go to the earliest ground-truth row).  Average
precision interpolates the precision/recall staircase at the 101 recall
points 0.00, 0.01, ..., 1.00, taking at each point the maximum precision
among ranks whose recall reaches it.  The mean over the ten thresholds
0.50, 0.55, ..., 0.95 gives the stricter mAP, and the scalar used for
model selection weights the two as

    fitness = 0.1 * mAP@.5 + 0.9 * mAP@.5:95

with zero weight on raw precision and recall.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Sequence

from .detections import Detection, parse_detections_file
from .errors import CsvError, NoGroundTruth, UndefinedMetric

GT_HEADER = ("frame_id", "u_min", "v_min", "u_max", "v_max")

# i/100 keeps thresholds exact so boxes engineered to a rational IoU
# compare predictably
MAP_THRESHOLDS = tuple(i / 100.0 for i in range(50, 100, 5))

RECALL_POINTS = tuple(i / 100.0 for i in range(101))


@dataclass(frozen=True)
class GroundTruthBox:
    frame_id: str
    u_min: float
    v_min: float
    u_max: float
    v_max: float

    def __post_init__(self):
        if not self.u_min < self.u_max or not self.v_min < self.v_max:
            raise ValueError(
                f"degenerate ground-truth box "
                f"({self.u_min}, {self.v_min}, {self.u_max}, {self.v_max})"
            )


def iou(box_a, box_b) -> float:
    """Intersection over union of two (u_min, v_min, u_max, v_max) boxes."""
    ax0, ay0, ax1, ay1 = box_a
    bx0, by0, bx1, by1 = box_b
    iw = min(ax1, bx1) - max(ax0, bx0)
    ih = min(ay1, by1) - max(ay0, by0)
    if iw <= 0.0 or ih <= 0.0:
        return 0.0
    inter = iw * ih
    union = (ax1 - ax0) * (ay1 - ay0) + (bx1 - bx0) * (by1 - by0) - inter
    return inter / union


def _ranked(predictions: Sequence[Detection]) -> list[Detection]:
    # stable sort: equal confidences keep their input order
    return sorted(predictions, key=lambda d: -d.confidence)


def _match_flags(
    predictions: Sequence[Detection],
    ground_truth: Sequence[GroundTruthBox],
    iou_threshold: float,
) -> list[bool]:
    """True-positive flag per ranked prediction."""
    gt_by_frame: dict[str, list[tuple[int, GroundTruthBox]]] = {}
    for idx, gt in enumerate(ground_truth):
        gt_by_frame.setdefault(gt.frame_id, []).append((idx, gt))
    claimed: set[int] = set()
    flags: list[bool] = []
    for pred in _ranked(predictions):
        best_idx = None
        best_iou = 0.0
        for idx, gt in gt_by_frame.get(pred.frame_index, ()):
            if idx in claimed:
                continue
            overlap = iou(pred.bbox, (gt.u_min, gt.v_min, gt.u_max, gt.v_max))
            if overlap >= iou_threshold and overlap > best_iou:
                best_idx, best_iou = idx, overlap
        if best_idx is not None:
            claimed.add(best_idx)
            flags.append(True)
        else:
            flags.append(False)
    return flags


@dataclass(frozen=True)
class MatchOutcome:
    """Counts from matching one prediction set at one IoU threshold."""

    tp: int
    fp: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn) < 0:
            raise ValueError("match counts cannot be negative")


def match_greedy(
    predictions: Sequence[Detection],
    ground_truth: Sequence[GroundTruthBox],
    iou_threshold: float = 0.5,
) -> MatchOutcome:
    """Greedy confidence-ordered matching at one IoU threshold.

    Counts are conserved: tp + fn equals the number of ground-truth boxes
    and tp + fp the number of predictions.
    """
    flags = _match_flags(predictions, ground_truth, iou_threshold)
    tp = sum(flags)
    return MatchOutcome(tp=tp, fp=len(flags) - tp, fn=len(ground_truth) - tp)


def precision_recall(outcome: MatchOutcome) -> tuple[float, float]:
    """Precision and recall from match counts.

    Raises:
        UndefinedMetric: the relevant denominator is zero; the message
            names it.
    """
    if outcome.tp + outcome.fp == 0:
        raise UndefinedMetric("precision undefined: tp + fp is zero")
    if outcome.tp + outcome.fn == 0:
        raise UndefinedMetric("recall undefined: tp + fn is zero")
    return (
        outcome.tp / (outcome.tp + outcome.fp),
        outcome.tp / (outcome.tp + outcome.fn),
    )


def average_precision(
    predictions: Sequence[Detection],
    ground_truth: Sequence[GroundTruthBox],
    iou_threshold: float = 0.5,
) -> float:
    """101-point interpolated average precision at one IoU threshold.

    Raises:
        NoGroundTruth: there are no ground-truth boxes to recall.
    """
    if not ground_truth:
        raise NoGroundTruth("average precision needs ground-truth boxes")
    if not predictions:
        return 0.0
    flags = _match_flags(predictions, ground_truth, iou_threshold)
    n_gt = len(ground_truth)
    precisions: list[float] = []
    recalls: list[float] = []
    tp = 0
    for rank, flag in enumerate(flags, start=1):
        if flag:
            tp += 1
        precisions.append(tp / rank)
        recalls.append(tp / n_gt)
    total = 0.0
    for r in RECALL_POINTS:
        best = 0.0
        for p, rec in zip(precisions, recalls):
            if rec >= r and p > best:
                best = p
        total += best
    return total / len(RECALL_POINTS)


def map_range(
    predictions: Sequence[Detection],
    ground_truth: Sequence[GroundTruthBox],
) -> tuple[float, float]:
    """(mAP at 0.50, mean AP over 0.50:0.05:0.95)."""
    aps = [
        average_precision(predictions, ground_truth, t) for t in MAP_THRESHOLDS
    ]
    return aps[0], sum(aps) / len(aps)


def fitness(precision: float, recall: float, map50: float, map5095: float) -> float:
    """Model-selection scalar; precision and recall carry zero weight."""
    return 0.0 * precision + 0.0 * recall + 0.1 * map50 + 0.9 * map5095


# --- file I/O ---------------------------------------------------------------


def read_ground_truth(path) -> list[GroundTruthBox]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != GT_HEADER:
            raise CsvError(1, "", f"expected header {','.join(GT_HEADER)}")
        boxes: list[GroundTruthBox] = []
        for row_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(GT_HEADER):
                raise CsvError(
                    row_no, "", f"expected {len(GT_HEADER)} fields, got {len(row)}"
                )
            try:
                boxes.append(
                    GroundTruthBox(
                        frame_id=row[0].strip(),
                        u_min=float(row[1]),
                        v_min=float(row[2]),
                        u_max=float(row[3]),
                        v_max=float(row[4]),
                    )
                )
            except ValueError as exc:
                raise CsvError(row_no, "", str(exc)) from exc
        return boxes


def read_predictions(path, strict: bool = True) -> list[Detection]:
    """Predictions use the detection CSV layout; frame_index keys frames."""
    return parse_detections_file(path, strict=strict).detections


@dataclass(frozen=True)
class MetricsReport:
    precision: float
    recall: float
    map50: float
    map5095: float
    fitness: float
    per_threshold: tuple[tuple[float, float], ...]  # (threshold, AP)

    def as_doc(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "map50": self.map50,
            "map50_95": self.map5095,
            "fitness": self.fitness,
            "average_precision": [
                {"iou_threshold": t, "ap": ap} for t, ap in self.per_threshold
            ],
        }

    def human_table(self) -> str:
        lines = [f"{'IoU threshold':>14} {'AP':>10}"]
        for t, ap in self.per_threshold:
            lines.append(f"{t:>14.2f} {ap:>10.4f}")
        lines.append("")
        lines.append(f"precision (IoU 0.50): {self.precision:.4f}")
        lines.append(f"recall    (IoU 0.50): {self.recall:.4f}")
        lines.append(f"mAP@.5:       {self.map50:.4f}")
        lines.append(f"mAP@.5:.95:   {self.map5095:.4f}")
        lines.append(f"fitness:      {self.fitness:.4f}")
        return "\n".join(lines) + "\n"


def evaluate_detections(
    predictions: Sequence[Detection],
    ground_truth: Sequence[GroundTruthBox],
) -> MetricsReport:
    outcome = match_greedy(predictions, ground_truth, 0.5)
    precision, recall = precision_recall(outcome)
    per_threshold = tuple(
        (t, average_precision(predictions, ground_truth, t)) for t in MAP_THRESHOLDS
    )
    map50 = per_threshold[0][1]
    map5095 = sum(ap for _, ap in per_threshold) / len(per_threshold)
    return MetricsReport(
        precision=precision,
        recall=recall,
        map50=map50,
        map5095=map5095,
        fitness=fitness(precision, recall, map50, map5095),
        per_threshold=per_threshold,
    )
