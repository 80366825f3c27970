"""Precision-recall evaluation and per-image probability response maps.

precision = TP / (TP + FP), recall = TP / (TP + FN). When a denominator is
zero the convention is: no positive predictions -> precision 1, no positive
samples -> recall 1; both cases are flagged as degenerate rather than raised.
A prediction is positive when score >= threshold (inclusive).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import SchemaError
from .features import extract_descriptor
from .image import LabelMask


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise ValueError("confusion counts must be nonnegative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class PrecisionRecall:
    precision: float
    recall: float
    precision_degenerate: bool = False
    recall_degenerate: bool = False


def precision_recall(counts: ConfusionCounts) -> PrecisionRecall:
    pred_pos = counts.tp + counts.fp
    actual_pos = counts.tp + counts.fn
    if pred_pos == 0:
        precision, p_deg = 1.0, True
    else:
        precision, p_deg = counts.tp / pred_pos, False
    if actual_pos == 0:
        recall, r_deg = 1.0, True
    else:
        recall, r_deg = counts.tp / actual_pos, False
    return PrecisionRecall(precision, recall, p_deg, r_deg)


@dataclass(frozen=True)
class PRCurve:
    """One point per distinct score, ordered by descending threshold.

    auc integrates precision over recall by the trapezoid rule, anchored at
    (recall 0, precision of the strictest point).
    """

    thresholds: np.ndarray
    precisions: np.ndarray
    recalls: np.ndarray
    auc: float

    def __post_init__(self):
        k = len(self.thresholds)
        if len(self.precisions) != k or len(self.recalls) != k:
            raise ValueError("curve arrays must be the same length")

    @property
    def points(self) -> list[tuple[float, float, float]]:
        return list(zip(self.thresholds.tolist(), self.precisions.tolist(), self.recalls.tolist()))


def pr_curve(scores, labels) -> PRCurve:
    """Full precision-recall sweep via one descending sort with cumulative
    counts; thresholds are the distinct score values."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise ValueError("scores and labels must be 1D and the same length")
    n_pos = int(np.sum(labels == 1))
    if n_pos == 0:
        raise ValueError("PR curve needs at least one positive sample")

    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_pos = (labels[order] == 1).astype(np.int64)
    cum_tp = np.cumsum(sorted_pos)
    idx = np.arange(1, len(scores) + 1)

    # last index of each distinct-score group = the inclusive >= threshold sweep
    is_group_end = np.empty(len(scores), dtype=bool)
    is_group_end[:-1] = sorted_scores[:-1] != sorted_scores[1:]
    is_group_end[-1] = True
    ends = np.flatnonzero(is_group_end)

    thresholds = sorted_scores[ends]
    tp = cum_tp[ends]
    predicted = idx[ends]
    precisions = tp / predicted
    recalls = tp / n_pos

    anchor_r = np.concatenate([[0.0], recalls])
    anchor_p = np.concatenate([[precisions[0]], precisions])
    auc = float(np.trapezoid(anchor_p, anchor_r))
    return PRCurve(
        thresholds=thresholds, precisions=precisions, recalls=recalls, auc=auc
    )


def response_map(model, image) -> np.ndarray:
    """Per-pixel track probability, shaped like the image."""
    pixels = image.pixels if hasattr(image, "pixels") else np.asarray(image)
    fm = extract_descriptor(pixels)
    scores = model.predict_proba(fm.values)
    return scores.reshape(pixels.shape)


def threshold_mask(prob_map: np.ndarray, threshold: float) -> LabelMask:
    """Binary mask: track where probability >= threshold."""
    prob_map = np.asarray(prob_map, dtype=np.float64)
    return LabelMask((prob_map >= threshold).astype(np.uint8))


def save_pr_curve(curve: PRCurve, path) -> None:
    """CSV rows threshold,precision,recall plus a trailing auc comment."""
    with open(Path(path), "w", newline="") as f:
        f.write("threshold,precision,recall\n")
        for t, p, r in zip(curve.thresholds, curve.precisions, curve.recalls):
            f.write(f"{float(t)!r},{float(p)!r},{float(r)!r}\n")
        f.write(f"# auc={float(curve.auc)!r}\n")


def load_pr_curve(path) -> PRCurve:
    thresholds, precisions, recalls = [], [], []
    auc = None
    with open(Path(path)) as f:
        header = f.readline().strip()
        if header != "threshold,precision,recall":
            raise SchemaError(f"{path}: unexpected header {header!r}")
        for line in f:
            line = line.strip()
            if line.startswith("# auc="):
                auc = float(line[len("# auc=") :])
            elif line:
                t, p, r = line.split(",")
                thresholds.append(float(t))
                precisions.append(float(p))
                recalls.append(float(r))
    if auc is None:
        raise SchemaError(f"{path}: missing auc line")
    return PRCurve(
        thresholds=np.asarray(thresholds),
        precisions=np.asarray(precisions),
        recalls=np.asarray(recalls),
        auc=auc,
    )
