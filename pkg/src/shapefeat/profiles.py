"""Distance and feature profiles over sliding windows.

The distance kernel is the Euclidean distance between z-normalized
subsequences. Two implementations are provided: a brute-force reference
(`distance_profile_naive`) and an FFT-accelerated one
(`distance_profile_mass`) built on one sliding dot product, in the style of
the MASS similarity-search algorithm.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    COMPLEXITY,
    SHAPE,
    SLIDING_MEAN,
    SLIDING_STD,
    BadParamsError,
    FeatureSpec,
    Profile,
    TimeSeries,
    TooShortError,
    UnknownFeatureError,
    WindowTooLongError,
)


def _as_values(x) -> np.ndarray:
    if isinstance(x, TimeSeries):
        return x.values
    return np.asarray(x, dtype=np.float64)


def _flat_eps(mean) -> np.ndarray:
    """Threshold below which a window's std counts as flat."""
    return 1e-8 * np.maximum(1.0, np.abs(mean))


@dataclass(frozen=True)
class SlidingStats:
    """Per-window mean and population standard deviation."""

    means: np.ndarray
    stds: np.ndarray


def znormalize(x) -> np.ndarray:
    """Shift to mean 0 and scale to population std 1.

    A flat input (std below 1e-8 * max(1, |mean|)) maps to the all-zero
    vector instead of dividing by ~0.
    """
    x = _as_values(x)
    if x.size < 2:
        raise TooShortError(f"need at least 2 samples to z-normalize, got {x.size}")
    mu = float(x.mean())
    sd = float(x.std())
    if sd < _flat_eps(mu):
        return np.zeros_like(x)
    return (x - mu) / sd


def sliding_stats(ts, m: int) -> SlidingStats:
    """Mean/std of every length-m window in O(n).

    Running sums are taken after subtracting the global mean, which keeps
    the variance computation well conditioned for offset data. Windows whose
    values are all identical are detected exactly (integer change counts)
    and forced to std 0, so cumsum cancellation noise can never push a
    truly constant window past the flat threshold.
    """
    x = _as_values(ts)
    n = x.size
    if m > n:
        raise WindowTooLongError(f"window {m} exceeds series length {n}")
    if m < 1:
        raise BadParamsError(f"window must be >= 1, got {m}")
    if m == 1:
        return SlidingStats(means=x.copy(), stds=np.zeros(n))
    shift = float(x.mean())
    xc = x - shift
    c1 = np.empty(n + 1)
    c1[0] = 0.0
    np.cumsum(xc, out=c1[1:])
    c2 = np.empty(n + 1)
    c2[0] = 0.0
    np.cumsum(xc * xc, out=c2[1:])
    s1 = c1[m:] - c1[:-m]
    s2 = c2[m:] - c2[:-m]
    means = s1 / m + shift
    var = s2 / m - (s1 / m) ** 2
    np.maximum(var, 0.0, out=var)
    stds = np.sqrt(var)
    changes = (x[1:] != x[:-1]).astype(np.int64)
    cc = np.concatenate(([0], np.cumsum(changes)))
    constant = (cc[m - 1 :] - cc[: -(m - 1)]) == 0
    if constant.any():
        stds[constant] = 0.0
        means[constant] = x[: n - m + 1][constant]
    return SlidingStats(means=means, stds=stds)


def _check_query(x: np.ndarray, query) -> np.ndarray:
    q = _as_values(query)
    if q.size < 2:
        raise TooShortError(f"query must have at least 2 samples, got {q.size}")
    if q.size > x.size:
        raise WindowTooLongError(f"query length {q.size} exceeds series length {x.size}")
    if not np.all(np.isfinite(q)):
        raise BadParamsError("query contains non-finite values")
    return q


def distance_profile_naive(ts, query) -> Profile:
    """Reference O(n*m) distance profile; the oracle for the FFT version.

    Each window and the query are z-normalized independently (flat rule
    included) before taking the Euclidean distance.
    """
    x = _as_values(ts)
    q = _check_query(x, query)
    m = q.size
    zq = znormalize(q)
    windows = np.lib.stride_tricks.sliding_window_view(x, m)
    mu = windows.mean(axis=1)
    sd = windows.std(axis=1)
    flat = sd < _flat_eps(mu)
    denom = np.where(flat, 1.0, sd)
    zw = (windows - mu[:, None]) / denom[:, None]
    zw[flat] = 0.0
    d = np.sqrt(((zw - zq) ** 2).sum(axis=1))
    return Profile(values=d, feature_id=SHAPE, m=m)


def _sliding_dot_product(x: np.ndarray, q: np.ndarray) -> np.ndarray:
    """dot(q, x[i:i+m]) for every i, via one FFT of the next power-of-two size."""
    n = x.size
    m = q.size
    size = 1 << max(0, int(n - 1).bit_length())
    fx = np.fft.rfft(x, size)
    fq = np.fft.rfft(q[::-1], size)
    prod = np.fft.irfft(fx * fq, size)
    return prod[m - 1 : n]


def distance_profile_mass(ts, query) -> Profile:
    """FFT-accelerated distance profile, identical contract to the naive one.

    d[i] = sqrt(2m * (1 - corr_i)) where corr_i is the Pearson correlation
    of the query with window i. The dot product runs against the
    mean-centered query (the centering makes the m * mean_i * mean_q
    correction vanish analytically, removing its cancellation error), corr
    is clamped to [-1, 1], and near-zero distances are recomputed directly:
    at d ~ 0 the sqrt amplifies FFT roundoff beyond the 1e-6 contract.
    """
    x = _as_values(ts)
    q = _check_query(x, query)
    m = q.size
    stats = sliding_stats(x, m)
    flat_w = stats.stds < _flat_eps(stats.means)
    mu_q = float(q.mean())
    sd_q = float(q.std())
    if sd_q < 1e-8 * max(1.0, abs(mu_q)):
        # Flat query: distance is 0 to flat windows, sqrt(m) otherwise.
        d = np.where(flat_w, 0.0, np.sqrt(m))
        return Profile(values=d, feature_id=SHAPE, m=m)
    qt = _sliding_dot_product(x, q - mu_q)
    denom = np.where(flat_w, 1.0, stats.stds) * (m * sd_q)
    corr = qt / denom
    d = np.sqrt(2.0 * m * np.clip(1.0 - corr, 0.0, 2.0))
    d[flat_w] = np.sqrt(m)
    suspects = np.flatnonzero((d < 0.05 * np.sqrt(m)) & ~flat_w)
    if suspects.size:
        zq = znormalize(q)
        offsets = np.arange(m)
        for start in range(0, suspects.size, 4096):
            idx = suspects[start : start + 4096]
            w = x[idx[:, None] + offsets]
            mu = w.mean(axis=1)
            sd = w.std(axis=1)
            ok = sd >= _flat_eps(mu)
            zw = (w - mu[:, None]) / np.where(ok, sd, 1.0)[:, None]
            zw[~ok] = 0.0
            d[idx] = np.sqrt(((zw - zq) ** 2).sum(axis=1))
    return Profile(values=d, feature_id=SHAPE, m=m)


def complexity_profile(ts, m: int) -> Profile:
    """Complexity of each z-normalized window: sqrt(sum of squared diffs).

    Because diffs cancel the window mean, this reduces to the sliding sum
    of squared first differences divided by the window std; flat windows
    score 0.
    """
    x = _as_values(ts)
    if m < 2:
        raise TooShortError(f"complexity needs window >= 2, got {m}")
    stats = sliding_stats(x, m)
    d2 = np.diff(x) ** 2
    c = np.empty(d2.size + 1)
    c[0] = 0.0
    np.cumsum(d2, out=c[1:])
    sums = c[m - 1 :] - c[: -(m - 1)]
    np.maximum(sums, 0.0, out=sums)
    flat = stats.stds < _flat_eps(stats.means)
    denom = np.where(flat, 1.0, stats.stds)
    values = np.where(flat, 0.0, np.sqrt(sums) / denom)
    return Profile(values=values, feature_id=COMPLEXITY, m=m)


def sliding_feature_profile(ts, m: int, stat: str) -> Profile:
    """Raw (non-normalized) mean or std per window.

    These capture the amplitude/offset signal that z-normalization
    deliberately removes.
    """
    stats = sliding_stats(ts, m)
    if stat == SLIDING_MEAN:
        return Profile(values=stats.means, feature_id=SLIDING_MEAN, m=m)
    if stat == SLIDING_STD:
        return Profile(values=stats.stds, feature_id=SLIDING_STD, m=m)
    raise UnknownFeatureError(f"unknown sliding statistic {stat!r}")


def generate_profile(ts, feature: FeatureSpec, m: int) -> Profile:
    """Dispatch to the kernel for `feature.kind`; output tagged with feature.id."""
    if feature.kind == SHAPE:
        if feature.query is None:
            raise BadParamsError(f"shape feature {feature.id!r} has no query")
        if feature.query.size != m:
            raise BadParamsError(
                f"shape feature {feature.id!r} query length {feature.query.size} != m={m}"
            )
        prof = distance_profile_mass(ts, feature.query)
    elif feature.kind == COMPLEXITY:
        prof = complexity_profile(ts, m)
    elif feature.kind in (SLIDING_MEAN, SLIDING_STD):
        prof = sliding_feature_profile(ts, m, feature.kind)
    else:
        raise UnknownFeatureError(f"unknown feature kind {feature.kind!r}")
    return Profile(values=prof.values, feature_id=feature.id, m=m)
