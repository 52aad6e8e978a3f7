"""Per-class local models: training, probability profiles, and classification.

Training turns each feature profile into a pair of value histograms (class /
non-class); classification turns test profiles into per-position
probabilities, combines them per class with a Naive Bayes product, weights
by per-class thresholds, and sweeps left to right with exclusion-zone
suppression.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import (
    FLOOR_UNION,
    NB_PAPER_LITERAL,
    NB_STANDARD,
    OTHER_CLASS,
    SHAPE,
    BadParamsError,
    ClassModel,
    ClassifierConfig,
    EmptyInputError,
    EmptyLocalsError,
    FeatureSpec,
    Histogram,
    LabelTrack,
    ModelMismatchError,
    NoInstancesError,
    Profile,
    TimeSeries,
)
from .profiles import generate_profile, znormalize

#: Probability floor applied to local models before multiplying.
EPS_PROB = 1e-12


@dataclass(frozen=True, eq=False)
class ProbabilityProfile:
    """Per-position probability of one class under one feature (or combined)."""

    values: np.ndarray
    class_id: str = ""
    feature_id: str = ""

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, copy=True)
        if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
            raise BadParamsError("probability values must lie in [0, 1]")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return int(self.values.shape[0])


@dataclass(frozen=True)
class PredictionTrack:
    """Predicted label per subsequence start position.

    Labels are stored as indices into `class_ids`; -1 means OTHER_CLASS
    (either rejected, suppressed, or skipped by the stride).
    """

    class_ids: tuple
    label_codes: np.ndarray
    scores: np.ndarray
    m: int
    series_length: int
    stride: int = 1
    sample_rate_hz: Optional[float] = None

    def __len__(self) -> int:
        return int(self.label_codes.shape[0])

    def label_at(self, position: int) -> str:
        code = int(self.label_codes[position])
        return OTHER_CLASS if code < 0 else self.class_ids[code]

    def labels_list(self) -> list:
        return [self.label_at(i) for i in range(len(self))]

    def detections(self) -> list:
        """(position, class_id, score) for every non-Other position."""
        hits = np.flatnonzero(self.label_codes >= 0)
        return [
            (int(p), self.class_ids[int(self.label_codes[p])], float(self.scores[p]))
            for p in hits
        ]


def histogram_build(values) -> Histogram:
    """Equal-width histogram with clamp(ceil(sqrt(len)), 10, 256) bins.

    An all-identical sample produces a single bin of nominal width
    1e-8 * max(1, |value|) centered on the value.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise EmptyInputError("cannot build a histogram from no values")
    if not np.all(np.isfinite(v)):
        raise BadParamsError("histogram values must be finite")
    lo = float(v.min())
    hi = float(v.max())
    if hi == lo:
        eps = 1e-8 * max(1.0, abs(lo))
        edges = np.array([lo - eps / 2.0, lo + eps / 2.0])
        counts = np.array([v.size], dtype=np.int64)
        return Histogram(edges=edges, counts=counts)
    bins = int(min(max(np.ceil(np.sqrt(v.size)), 10), 256))
    counts, edges = np.histogram(v, bins=bins, range=(lo, hi))
    return Histogram(edges=edges, counts=counts.astype(np.int64))


def _floor_density(hist: Histogram, union_width: float, mode: str) -> float:
    width = union_width if mode == FLOOR_UNION else hist.range_width
    width = max(width, 1e-12)
    return 1.0 / ((hist.total + 1) * width)


def _density_lookup(hist: Histogram, values: np.ndarray, floor: float) -> np.ndarray:
    edges = hist.edges
    counts = hist.counts.astype(np.float64)
    nbins = counts.size
    idx = np.searchsorted(edges, values, side="right") - 1
    # Values equal to the last edge belong to the last bin.
    np.clip(idx, 0, nbins - 1, out=idx)
    inside = (values >= edges[0]) & (values <= edges[-1])
    widths = np.diff(edges)
    dens = counts[idx] / (hist.total * widths[idx])
    dens[~inside] = floor
    dens[inside & (dens == 0.0)] = floor
    return dens


def compute_probability(
    pos_hist: Histogram,
    neg_hist: Histogram,
    profile: Profile,
    small_value_mode: str = FLOOR_UNION,
) -> ProbabilityProfile:
    """Per-position P(class) = dens_pos / (dens_pos + dens_neg).

    A value outside a histogram's range, or in an empty bin, takes that
    histogram's floor density 1 / ((total + 1) * full_range_width); with the
    default policy the full range spans both histograms, so floors stay small
    even for narrowly concentrated class histograms.
    """
    v = profile.values
    union_width = float(
        max(pos_hist.edges[-1], neg_hist.edges[-1])
        - min(pos_hist.edges[0], neg_hist.edges[0])
    )
    dp = _density_lookup(pos_hist, v, _floor_density(pos_hist, union_width, small_value_mode))
    dn = _density_lookup(neg_hist, v, _floor_density(neg_hist, union_width, small_value_mode))
    return ProbabilityProfile(values=dp / (dp + dn), feature_id=profile.feature_id)


def combine_naive_bayes(
    locals_: Sequence[ProbabilityProfile],
    prior: float,
    mode: str = NB_STANDARD,
) -> ProbabilityProfile:
    """Multiply local probabilities and divide by the class prior.

    standard: divide by prior^(k-1) for k locals (exact Bayes form; the
    identity for k=1). paper-literal: divide by the prior exactly once
    regardless of k. Locals are floored at 1e-12 before multiplying and the
    result is clamped to [0, 1].
    """
    if not locals_:
        raise EmptyLocalsError("need at least one local probability profile")
    if not (0.0 < prior < 1.0):
        raise BadParamsError(f"prior must be in (0,1), got {prior}")
    length = len(locals_[0])
    for loc in locals_[1:]:
        if len(loc) != length:
            raise BadParamsError("local profiles must share one length")
    prod = np.ones(length)
    for loc in locals_:
        prod *= np.maximum(loc.values, EPS_PROB)
    k = len(locals_)
    denom = prior ** (k - 1) if mode == NB_STANDARD else prior
    if mode not in (NB_STANDARD, NB_PAPER_LITERAL):
        raise BadParamsError(f"unknown nb_denominator {mode!r}")
    combined = np.clip(prod / denom, 0.0, 1.0)
    return ProbabilityProfile(
        values=combined, class_id=locals_[0].class_id, feature_id="combined"
    )


def select_prototype(train: TimeSeries, labels: LabelTrack, class_id: str, m: int) -> np.ndarray:
    """Medoid subsequence among the class's labeled regions.

    Candidates are length-m windows fully inside a region of the class,
    sampled every max(1, m // 2) positions; the winner minimizes the summed
    z-normalized Euclidean distance to the other candidates, ties going to
    the earliest start.
    """
    x = train.values
    step = max(1, m // 2)
    starts: List[int] = []
    for r in labels.class_regions(class_id):
        if r.end - r.start >= m:
            starts.extend(range(r.start, r.end - m + 1, step))
    if not starts:
        raise NoInstancesError(
            f"no labeled region of class {class_id!r} holds a length-{m} subsequence"
        )
    if len(starts) == 1:
        return x[starts[0] : starts[0] + m].copy()
    z = np.stack([znormalize(x[s : s + m]) for s in starts])
    # Pairwise distances; candidate sets stay small (one per m/2 samples).
    diff = z[:, None, :] - z[None, :, :]
    d = np.sqrt((diff * diff).sum(axis=2))
    best = int(np.argmin(d.sum(axis=1)))
    s = starts[best]
    return x[s : s + m].copy()


def _touch_bounds(region, exclusion_zone: int, limit: int) -> Tuple[int, int]:
    """Half-open range of positions whose span [i, i+e) intersects the region."""
    lo = max(0, region.start - exclusion_zone + 1)
    hi = min(limit, region.end)
    return lo, hi


def compute_distributions(
    train: TimeSeries,
    labels: LabelTrack,
    class_id: str,
    features: Sequence[FeatureSpec],
    m: int,
    exclusion_zone: int,
) -> List[Tuple[Histogram, Histogram]]:
    """Class / non-class value histograms for every feature.

    Per feature, positions are visited in ascending profile value. A
    position whose lookahead span [i, i + exclusion_zone) intersects a
    not-yet-claimed region of the class contributes its value to the class
    list and claims that region; positions touching only claimed regions are
    skipped; all remaining positions feed the non-class list. Each region is
    therefore claimed at most once per feature.
    """
    n = len(train)
    if m > n:
        raise BadParamsError(f"subsequence length {m} exceeds series length {n}")
    length = n - m + 1
    regions = labels.class_regions(class_id)
    if not regions:
        raise NoInstancesError(f"no labeled regions of class {class_id!r}")
    touch = np.zeros(length, dtype=bool)
    if exclusion_zone > 0:
        for r in regions:
            lo, hi = _touch_bounds(r, exclusion_zone, length)
            if lo < hi:
                touch[lo:hi] = True
    touching = np.flatnonzero(touch)
    out: List[Tuple[Histogram, Histogram]] = []
    for feature in features:
        prof = generate_profile(train, feature, m)
        v = prof.values
        order = touching[np.argsort(v[touching], kind="stable")]
        claimed = [False] * len(regions)
        p_list: List[float] = []
        for i in order:
            for ridx, r in enumerate(regions):
                if claimed[ridx]:
                    continue
                lo, hi = _touch_bounds(r, exclusion_zone, length)
                if lo <= i < hi:
                    claimed[ridx] = True
                    p_list.append(float(v[i]))
                    break
        if not p_list:
            raise NoInstancesError(
                f"no snippet claims a region of class {class_id!r} "
                f"(exclusion_zone={exclusion_zone})"
            )
        n_values = v[~touch]
        if n_values.size == 0:
            raise NoInstancesError(
                f"class {class_id!r} labels leave no non-class snippets"
            )
        out.append((histogram_build(np.asarray(p_list)), histogram_build(n_values)))
    return out


@dataclass(frozen=True)
class ClassSpec:
    """Training request for one class."""

    class_id: str
    m: int
    exclusion_zone: int
    features: tuple
    prior: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))
        if self.class_id == OTHER_CLASS:
            raise BadParamsError(f"{OTHER_CLASS} is reserved and cannot be trained")
        if not self.features:
            raise BadParamsError(f"class {self.class_id!r} requests no features")
        if self.prior is not None and not (0.0 < self.prior < 1.0):
            raise BadParamsError(f"prior must be in (0,1), got {self.prior}")


def train(
    train_series: TimeSeries,
    labels: LabelTrack,
    class_specs: Sequence[ClassSpec],
) -> List[ClassModel]:
    """Fit one ClassModel per spec.

    Shape features without an explicit query get the medoid prototype of
    their class. The prior defaults to the empirical fraction of snippet
    positions that claimed a region; pass ClassSpec.prior to override.
    """
    n = len(train_series)
    models: List[ClassModel] = []
    for spec in class_specs:
        resolved: List[FeatureSpec] = []
        for f in spec.features:
            if f.kind == SHAPE and f.query is None:
                query = select_prototype(train_series, labels, spec.class_id, spec.m)
                f = FeatureSpec(kind=SHAPE, id=f.id, query=query)
            resolved.append(f)
        try:
            dists = compute_distributions(
                train_series, labels, spec.class_id, resolved, spec.m, spec.exclusion_zone
            )
        except NoInstancesError as exc:
            raise NoInstancesError(f"class {spec.class_id!r}: {exc}") from exc
        length = n - spec.m + 1
        if spec.prior is not None:
            prior = spec.prior
        else:
            prior = dists[0][0].total / length
        features = tuple(
            (f, pos_h, neg_h) for f, (pos_h, neg_h) in zip(resolved, dists)
        )
        models.append(
            ClassModel(
                class_id=spec.class_id,
                m=spec.m,
                exclusion_zone=spec.exclusion_zone,
                features=features,
                prior=prior,
            )
        )
    return models


def _check_models(models: Sequence[ClassModel]) -> int:
    if not models:
        raise ModelMismatchError("no models given")
    m = models[0].m
    for mo in models[1:]:
        if mo.m != m:
            raise ModelMismatchError(
                f"all models must share one subsequence length; got {m} and {mo.m}"
            )
    seen = set()
    for mo in models:
        if mo.class_id in seen:
            raise ModelMismatchError(f"duplicate model for class {mo.class_id!r}")
        seen.add(mo.class_id)
    return m


def class_probabilities(
    models: Sequence[ClassModel],
    test: TimeSeries,
    cfg: ClassifierConfig,
    weighted: bool = True,
) -> Tuple[tuple, np.ndarray]:
    """Stacked per-class combined probabilities over the test series.

    Returns (class_ids, matrix of shape [n_classes, n - m + 1]); rows are
    multiplied by the per-class threshold weights when `weighted`.
    """
    m = _check_models(models)
    if len(test) < m:
        raise ModelMismatchError(
            f"test series of length {len(test)} is shorter than m={m}"
        )
    rows = []
    ids = []
    for mo in models:
        locals_ = []
        for spec, pos_h, neg_h in mo.features:
            prof = generate_profile(test, spec, mo.m)
            locals_.append(compute_probability(pos_h, neg_h, prof, cfg.small_value_mode))
        combined = combine_naive_bayes(locals_, mo.prior, cfg.nb_denominator)
        row = combined.values
        if weighted:
            row = row * cfg.threshold_for(mo.class_id)
        rows.append(row)
        ids.append(mo.class_id)
    return tuple(ids), np.vstack(rows)


def _suppression_sweep(
    class_ids: tuple,
    weighted: np.ndarray,
    exclusion_zones: Sequence[int],
    cfg: ClassifierConfig,
    m: int,
    series_length: int,
    sample_rate_hz: Optional[float],
) -> PredictionTrack:
    length = weighted.shape[1]
    winners = np.argmax(weighted, axis=0).astype(np.int32)
    win_p = weighted[winners, np.arange(length)]
    labels = np.full(length, -1, dtype=np.int32)
    scores = np.zeros(length)
    excl = [int(e) for e in exclusion_zones]
    floor = cfg.decision_floor
    if cfg.stride == 1:
        scores[:] = win_p
        pos = 0
        for c in np.flatnonzero(win_p >= floor):
            if c < pos:
                continue
            w = int(winners[c])
            labels[c] = w
            nxt = c + excl[w] + 1
            scores[c + 1 : min(length, nxt)] = 0.0
            pos = nxt
    else:
        pos = 0
        while pos < length:
            p = float(win_p[pos])
            scores[pos] = p
            if p >= floor:
                w = int(winners[pos])
                labels[pos] = w
                pos += max(cfg.stride, excl[w] + 1)
            else:
                pos += cfg.stride
    return PredictionTrack(
        class_ids=class_ids,
        label_codes=labels,
        scores=scores,
        m=m,
        series_length=series_length,
        stride=cfg.stride,
        sample_rate_hz=sample_rate_hz,
    )


def classify(
    models: Sequence[ClassModel],
    test: TimeSeries,
    cfg: ClassifierConfig,
) -> PredictionTrack:
    """Single left-to-right pass over the weighted combined probabilities.

    At each unsuppressed position the argmax class (ties to the lower model
    index) is emitted when its weighted probability reaches the decision
    floor; a detection suppresses the next exclusion_zone positions of every
    class. All other positions carry OTHER_CLASS.
    """
    ids, weighted = class_probabilities(models, test, cfg, weighted=True)
    return _suppression_sweep(
        ids,
        weighted,
        [mo.exclusion_zone for mo in models],
        cfg,
        models[0].m,
        len(test),
        test.sample_rate_hz,
    )
