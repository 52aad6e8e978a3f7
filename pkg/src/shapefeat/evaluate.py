"""Bag-level MIL scoring, summary metrics, ROC sweeps, and the
leave-one-out 1NN machinery used by the motivating experiments.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .core import (
    AllZeroError,
    BadParamsError,
    ClassifierConfig,
    ClassModel,
    ConfusionMatrix,
    LabelTrack,
    LengthMismatchError,
    TimeSeries,
    TooFewError,
)
from .model import PredictionTrack, classify
from .profiles import znormalize

#: Whole-instance metrics for the leave-one-out 1NN classifier.
ZNORM_ED = "znorm_ed"
COMPLEXITY_DIFF = "complexity_diff"


@dataclass(frozen=True)
class RocPoint:
    """One operating point of a per-class threshold-weight sweep."""

    threshold_weight: float
    precision: float
    recall: float
    tp: int
    fp: int
    fn: int
    tn: int


def mil_confusion(predictions: PredictionTrack, bags: LabelTrack, class_id: str) -> ConfusionMatrix:
    """Bag-level counts: one hit inside a bag decides the whole bag.

    A detection lies inside a bag when its window start index falls in
    [bag.start, bag.end). Bags of the class score tp/fn; bags of any other
    class score fp/tn; detections in unlabeled gaps are ignored.
    """
    if predictions.series_length != bags.series_length:
        raise LengthMismatchError(
            f"predictions cover a series of length {predictions.series_length}, "
            f"labels one of length {bags.series_length}"
        )
    length = len(predictions)
    try:
        code = predictions.class_ids.index(class_id)
    except ValueError:
        code = -2  # class never predicted
    hits = np.flatnonzero(predictions.label_codes == code)
    tp = fp = fn = tn = 0
    for bag in bags.regions:
        lo = np.searchsorted(hits, bag.start, side="left")
        hi = np.searchsorted(hits, min(bag.end, length), side="left")
        hit = hi > lo
        if bag.class_id == class_id:
            if hit:
                tp += 1
            else:
                fn += 1
        else:
            if hit:
                fp += 1
            else:
                tn += 1
    return ConfusionMatrix(tp=tp, fp=fp, fn=fn, tn=tn)


def metrics(cm: ConfusionMatrix) -> Tuple[float, float, float]:
    """(precision, recall, accuracy) with 0/0 ratios defined as 1."""
    if cm.total == 0:
        raise AllZeroError("confusion matrix holds no bags")
    precision = 1.0 if cm.tp + cm.fp == 0 else cm.tp / (cm.tp + cm.fp)
    recall = 1.0 if cm.tp + cm.fn == 0 else cm.tp / (cm.tp + cm.fn)
    accuracy = (cm.tp + cm.tn) / cm.total
    return precision, recall, accuracy


def roc_sweep(
    models: Sequence[ClassModel],
    test: TimeSeries,
    bags: LabelTrack,
    cfg: ClassifierConfig,
    class_id: str,
    weights: Sequence[float],
) -> List[RocPoint]:
    """Classify once per threshold weight for `class_id`, score with MIL."""
    if not weights:
        raise BadParamsError("need at least one weight")
    prev = None
    for w in weights:
        if not w > 0:
            raise BadParamsError(f"weights must be positive, got {w}")
        if prev is not None and w < prev:
            raise BadParamsError("weights must be sorted ascending")
        prev = w
    points = []
    for w in weights:
        track = classify(models, test, cfg.replace_threshold(class_id, float(w)))
        cm = mil_confusion(track, bags, class_id)
        precision, recall, _ = metrics(cm)
        points.append(
            RocPoint(
                threshold_weight=float(w),
                precision=precision,
                recall=recall,
                tp=cm.tp,
                fp=cm.fp,
                fn=cm.fn,
                tn=cm.tn,
            )
        )
    return points


@dataclass(frozen=True, eq=False)
class InstanceConfusion:
    """K x K instance-level confusion matrix (rows actual, columns predicted)."""

    classes: tuple
    counts: np.ndarray

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64, copy=True)
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    def cell(self, actual: str, predicted: str) -> int:
        return int(self.counts[self.classes.index(actual), self.classes.index(predicted)])

    def row(self, actual: str) -> np.ndarray:
        return self.counts[self.classes.index(actual)]

    def error_rate(self) -> float:
        total = int(self.counts.sum())
        return 1.0 - int(np.trace(self.counts)) / total

    def __eq__(self, other) -> bool:
        if not isinstance(other, InstanceConfusion):
            return NotImplemented
        return self.classes == other.classes and np.array_equal(self.counts, other.counts)


def _complexity_of(z: np.ndarray) -> float:
    return float(np.sqrt((np.diff(z) ** 2).sum()))


def nearest_neighbor_predictions(
    instances: Sequence[Tuple[np.ndarray, str]],
    metric: str = ZNORM_ED,
) -> List[str]:
    """Leave-one-out 1NN predictions, ties to the lower original index."""
    if len(instances) < 2:
        raise TooFewError("need at least two instances")
    length = np.asarray(instances[0][0]).size
    for values, _ in instances:
        if np.asarray(values).size != length:
            raise LengthMismatchError("instances must share one length")
    z = np.stack([znormalize(np.asarray(values, dtype=np.float64)) for values, _ in instances])
    if metric == ZNORM_ED:
        sq = (z * z).sum(axis=1)
        d2 = sq[:, None] + sq[None, :] - 2.0 * (z @ z.T)
        d = np.sqrt(np.maximum(d2, 0.0))
    elif metric == COMPLEXITY_DIFF:
        ce = np.array([_complexity_of(row) for row in z])
        d = np.abs(ce[:, None] - ce[None, :])
    else:
        raise BadParamsError(f"unknown metric {metric!r}")
    np.fill_diagonal(d, np.inf)
    nn = np.argmin(d, axis=1)  # first minimum = lowest index on ties
    return [instances[int(j)][1] for j in nn]


def loocv_1nn(
    instances: Sequence[Tuple[np.ndarray, str]],
    metric: str = ZNORM_ED,
) -> InstanceConfusion:
    """Classic leave-one-out 1NN over whole instances.

    znorm_ed compares z-normalized instances by Euclidean distance;
    complexity_diff compares |CE(a) - CE(b)| of the z-normalized instances.
    Counts instances, not bags.
    """
    preds = nearest_neighbor_predictions(instances, metric)
    classes: List[str] = []
    for _, cls in instances:
        if cls not in classes:
            classes.append(cls)
    for cls in preds:
        if cls not in classes:  # pragma: no cover - predictions come from instances
            classes.append(cls)
    index = {c: i for i, c in enumerate(classes)}
    counts = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for (_, actual), predicted in zip(instances, preds):
        counts[index[actual], index[predicted]] += 1
    return InstanceConfusion(classes=tuple(classes), counts=counts)


def oracle_confusion(
    pred_a: Sequence[str], pred_b: Sequence[str], truth: Sequence[str]
) -> float:
    """Error rate of the oracle combiner: wrong only when both inputs are wrong."""
    if len(pred_a) != len(truth) or len(pred_b) != len(truth):
        raise LengthMismatchError("prediction and truth lengths differ")
    if not truth:
        raise TooFewError("need at least one instance")
    wrong = sum(1 for a, b, t in zip(pred_a, pred_b, truth) if a != t and b != t)
    return wrong / len(truth)


def detection_frequency(
    predictions: PredictionTrack,
    class_id: str,
    window: int,
    step: int,
) -> List[Tuple[int, int]]:
    """Count of class detections per sliding window of `window` samples."""
    if window < 1 or step < 1:
        raise BadParamsError("window and step must be >= 1")
    try:
        code = predictions.class_ids.index(class_id)
    except ValueError:
        code = -2
    hits = np.flatnonzero(predictions.label_codes == code)
    length = len(predictions)
    out = []
    for start in range(0, length, step):
        lo = np.searchsorted(hits, start, side="left")
        hi = np.searchsorted(hits, min(start + window, length), side="left")
        out.append((start, int(hi - lo)))
    return out
