"""Domain types shared by all modules.

Everything here is an immutable value object plus the error hierarchy.
Indices are 0-based throughout; label regions are half-open [start, end).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

#: Reserved pseudo-class for unlabeled / suppressed positions. Never trainable.
OTHER_CLASS = "Other"

# Feature kinds understood by the profile generators.
SHAPE = "shape"
COMPLEXITY = "complexity"
SLIDING_MEAN = "sliding_mean"
SLIDING_STD = "sliding_std"
FEATURE_KINDS = (SHAPE, COMPLEXITY, SLIDING_MEAN, SLIDING_STD)

# Naive-Bayes denominator modes.
NB_STANDARD = "standard"
NB_PAPER_LITERAL = "paper-literal"

# Histogram floor ("small value") policies: range width used in the floor
# density is either the union of both histograms' ranges or each histogram's
# own range.
FLOOR_UNION = "union"
FLOOR_OWN = "own"


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class ShapefeatError(Exception):
    """Base class for all library errors."""


class DataError(ShapefeatError):
    """Invalid input data, file contents, or parameters."""


class ModelError(ShapefeatError):
    """Training or classification failure."""


class EmptyInputError(DataError):
    pass


class NonFiniteError(DataError):
    def __init__(self, index: int, message: str = ""):
        self.index = index
        super().__init__(message or f"non-finite value at index {index}")


class TooShortError(DataError):
    pass


class WindowTooLongError(DataError):
    pass


class ParseError(DataError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class OverlapError(DataError):
    def __init__(self, line: int, message: str = ""):
        self.line = line
        super().__init__(message or f"line {line}: region overlaps the previous one")


class OutOfBoundsError(DataError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class IoError(DataError):
    pass


class FileFormatError(DataError):
    """Corrupt or truncated file."""


class UnsupportedVersionError(DataError):
    pass


class BadParamsError(DataError):
    pass


class InsufficientInstancesError(DataError):
    pass


class LengthMismatchError(DataError):
    pass


class AllZeroError(DataError):
    pass


class TooFewError(DataError):
    pass


class NoInstancesError(ModelError):
    pass


class ModelMismatchError(ModelError):
    pass


class UnknownFeatureError(ModelError):
    pass


class EmptyLocalsError(ModelError):
    pass


class UnsatisfiableError(ModelError):
    pass


# ---------------------------------------------------------------------------
# Value objects
# ---------------------------------------------------------------------------

def _frozen_array(values, dtype=np.float64) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """A 1-D real-valued sequence, optionally with a physical sample rate."""

    values: np.ndarray
    sample_rate_hz: Optional[float] = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values))
        if self.sample_rate_hz is not None and not self.sample_rate_hz > 0:
            raise BadParamsError(f"sample_rate_hz must be positive, got {self.sample_rate_hz}")

    def __len__(self) -> int:
        return int(self.values.shape[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return (
            np.array_equal(self.values, other.values)
            and self.sample_rate_hz == other.sample_rate_hz
            and self.name == other.name
        )


def validate_series(ts: TimeSeries) -> None:
    """Raise EmptyInputError / NonFiniteError unless all invariants hold."""
    if len(ts) < 1:
        raise EmptyInputError("time series is empty")
    bad = np.flatnonzero(~np.isfinite(ts.values))
    if bad.size:
        raise NonFiniteError(int(bad[0]))


@dataclass(frozen=True)
class SubsequenceSpec:
    """A window of `length` samples starting at index `start`."""

    start: int
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise BadParamsError(f"subsequence length must be >= 1, got {self.length}")
        if self.start < 0:
            raise BadParamsError(f"subsequence start must be >= 0, got {self.start}")

    def check_within(self, n: int) -> None:
        if self.length > n:
            raise WindowTooLongError(f"length {self.length} exceeds series length {n}")
        if self.start > n - self.length:
            raise OutOfBoundsError(0, f"start {self.start} exceeds {n - self.length}")

    def extract(self, ts: TimeSeries) -> np.ndarray:
        self.check_within(len(ts))
        return ts.values[self.start:self.start + self.length]


@dataclass(frozen=True)
class Region:
    """One weakly labeled region (bag): [start, end) of a single class."""

    start: int
    end: int
    class_id: str


@dataclass(frozen=True, eq=False)
class LabelTrack:
    """Ordered, non-overlapping weak labels over a series of known length.

    Gaps between regions implicitly belong to OTHER_CLASS; no region may
    carry it explicitly.
    """

    series_length: int
    regions: tuple
    classes: tuple = ()

    def __post_init__(self):
        regions = tuple(self.regions)
        object.__setattr__(self, "regions", regions)
        if self.series_length < 0:
            raise BadParamsError("series_length must be >= 0")
        prev_end = None
        prev_start = -1
        for r in regions:
            if r.class_id == OTHER_CLASS:
                raise BadParamsError(f"region [{r.start},{r.end}) carries reserved class {OTHER_CLASS}")
            if not (0 <= r.start < r.end <= self.series_length):
                raise OutOfBoundsError(0, f"region [{r.start},{r.end}) outside [0,{self.series_length})")
            if r.start < prev_start:
                raise BadParamsError(f"region [{r.start},{r.end}) is out of order")
            if prev_end is not None and r.start < prev_end:
                raise OverlapError(0, f"region [{r.start},{r.end}) overlaps previous end {prev_end}")
            prev_end = r.end
            prev_start = r.start
        vocab = list(dict.fromkeys(self.classes))
        for r in regions:
            if r.class_id not in vocab:
                vocab.append(r.class_id)
        if OTHER_CLASS not in vocab:
            vocab.append(OTHER_CLASS)
        object.__setattr__(self, "classes", tuple(vocab))

    def class_regions(self, class_id: str) -> tuple:
        return tuple(r for r in self.regions if r.class_id == class_id)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabelTrack):
            return NotImplemented
        return (
            self.series_length == other.series_length
            and self.regions == other.regions
            and self.classes == other.classes
        )


@dataclass(frozen=True, eq=False)
class FeatureSpec:
    """One feature a local model evaluates per subsequence.

    ``query`` is only meaningful for kind=shape; it may be left None at
    configuration time, in which case training selects a prototype.
    """

    kind: str
    id: str = ""
    query: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in FEATURE_KINDS:
            raise UnknownFeatureError(f"unknown feature kind {self.kind!r}")
        if not self.id:
            object.__setattr__(self, "id", self.kind)
        if self.query is not None:
            if self.kind != SHAPE:
                raise BadParamsError(f"feature kind {self.kind!r} takes no query")
            q = _frozen_array(self.query)
            if not np.all(np.isfinite(q)):
                raise NonFiniteError(int(np.flatnonzero(~np.isfinite(q))[0]))
            object.__setattr__(self, "query", q)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FeatureSpec):
            return NotImplemented
        if self.kind != other.kind or self.id != other.id:
            return False
        if (self.query is None) != (other.query is None):
            return False
        return self.query is None or np.array_equal(self.query, other.query)


@dataclass(frozen=True, eq=False)
class Profile:
    """One scalar per subsequence start position for a single feature."""

    values: np.ndarray
    feature_id: str
    m: int

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values))

    def __len__(self) -> int:
        return int(self.values.shape[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Profile):
            return NotImplemented
        return (
            self.feature_id == other.feature_id
            and self.m == other.m
            and np.array_equal(self.values, other.values)
        )


@dataclass(frozen=True, eq=False)
class Histogram:
    """Equal-width histogram: len(counts) bins bounded by len(counts)+1 edges."""

    edges: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        edges = _frozen_array(self.edges)
        counts = _frozen_array(self.counts, dtype=np.int64)
        if edges.ndim != 1 or counts.ndim != 1 or edges.size != counts.size + 1:
            raise BadParamsError("histogram needs len(edges) == len(counts) + 1")
        if counts.size < 1:
            raise BadParamsError("histogram needs at least one bin")
        if np.any(np.diff(edges) <= 0):
            raise BadParamsError("histogram edges must be strictly increasing")
        if np.any(counts < 0):
            raise BadParamsError("histogram counts must be non-negative")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def range_width(self) -> float:
        return float(self.edges[-1] - self.edges[0])

    def bin_of(self, value: float) -> int:
        """Bin index containing `value`, or -1 outside the range.

        The final bin is closed on the right, matching numpy.histogram.
        """
        if value < self.edges[0] or value > self.edges[-1]:
            return -1
        idx = int(np.searchsorted(self.edges, value, side="right")) - 1
        return min(idx, self.counts.size - 1)

    def density(self, bin_index: int) -> float:
        width = float(self.edges[bin_index + 1] - self.edges[bin_index])
        return float(self.counts[bin_index]) / (self.total * width)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Histogram):
            return NotImplemented
        return np.array_equal(self.edges, other.edges) and np.array_equal(self.counts, other.counts)


@dataclass(frozen=True, eq=False)
class ClassModel:
    """Per-class local model: one (pos, neg) histogram pair per feature."""

    class_id: str
    m: int
    exclusion_zone: int
    features: tuple  # of (FeatureSpec, pos_hist, neg_hist)
    prior: float

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))
        if not self.features:
            raise BadParamsError(f"class {self.class_id!r} has no features")
        if self.exclusion_zone < 0:
            raise BadParamsError("exclusion_zone must be >= 0")
        if not (0.0 < self.prior < 1.0):
            raise BadParamsError(f"prior must be in (0,1), got {self.prior}")
        for spec, pos_hist, neg_hist in self.features:
            if pos_hist.total < 1 or neg_hist.total < 1:
                raise BadParamsError(f"feature {spec.id!r} has an empty histogram")
            if spec.kind == SHAPE and (spec.query is None or spec.query.size != self.m):
                raise BadParamsError(f"shape feature {spec.id!r} needs a length-{self.m} query")

    def feature_kinds(self) -> tuple:
        return tuple(spec.kind for spec, _, _ in self.features)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClassModel):
            return NotImplemented
        return (
            self.class_id == other.class_id
            and self.m == other.m
            and self.exclusion_zone == other.exclusion_zone
            and self.prior == other.prior
            and self.features == other.features
        )


@dataclass(frozen=True)
class ClassifierConfig:
    """Classification-time knobs.

    ``thresholds`` holds per-class multiplicative weights (default 1.0 for
    classes not listed); the detection cutoff itself is ``decision_floor``.
    """

    thresholds: Mapping[str, float] = field(default_factory=dict)
    decision_floor: float = 0.5
    stride: int = 1
    nb_denominator: str = NB_STANDARD
    small_value_mode: str = FLOOR_UNION

    def __post_init__(self):
        object.__setattr__(self, "thresholds", dict(self.thresholds))
        for cls, thr in self.thresholds.items():
            if not thr > 0:
                raise BadParamsError(f"threshold for {cls!r} must be > 0, got {thr}")
        if not (0.0 <= self.decision_floor <= 1.0):
            raise BadParamsError(f"decision_floor must be in [0,1], got {self.decision_floor}")
        if self.stride < 1:
            raise BadParamsError(f"stride must be >= 1, got {self.stride}")
        if self.nb_denominator not in (NB_STANDARD, NB_PAPER_LITERAL):
            raise BadParamsError(f"unknown nb_denominator {self.nb_denominator!r}")
        if self.small_value_mode not in (FLOOR_UNION, FLOOR_OWN):
            raise BadParamsError(f"unknown small_value_mode {self.small_value_mode!r}")

    def threshold_for(self, class_id: str) -> float:
        return float(self.thresholds.get(class_id, 1.0))

    def replace_threshold(self, class_id: str, weight: float) -> "ClassifierConfig":
        thr = dict(self.thresholds)
        thr[class_id] = weight
        return ClassifierConfig(
            thresholds=thr,
            decision_floor=self.decision_floor,
            stride=self.stride,
            nb_denominator=self.nb_denominator,
            small_value_mode=self.small_value_mode,
        )


@dataclass(frozen=True)
class ConfusionMatrix:
    """Bag-level 2x2 counts for one class under the MIL protocol."""

    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def __post_init__(self):
        for name in ("tp", "fp", "fn", "tn"):
            if getattr(self, name) < 0:
                raise BadParamsError(f"{name} must be >= 0")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn
