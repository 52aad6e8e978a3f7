"""Data generation and file I/O.

All generators run on a portable counter-based random stream so that a
(params, seed) pair yields bit-identical output on any platform:

* uniform stream: splitmix64 applied to the counter sequence
  seed + i * 0x9E3779B97F4A7C15 (i = 1, 2, ...), mapped to [0, 1) via the
  top 53 bits;
* normal variates: Box-Muller on consecutive uniform pairs (u1, u2), with
  u1 floored at 2**-53; pairs are consumed in order and the trailing
  variate of the final pair is dropped for odd counts.

File formats:

* series: UTF-8 text, one value per line, optional ``# key: value`` header
  comments (name, sample_rate_hz);
* labels: CSV lines ``start,end,class`` with end exclusive, 0-based;
* models: 4-byte magic ``SFCM`` + 1 version byte + JSON payload;
* predictions: header comments + CSV rows ``position,class,score`` for
  detections only.
"""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import (
    OTHER_CLASS,
    BadParamsError,
    ClassModel,
    EmptyInputError,
    FeatureSpec,
    FileFormatError,
    Histogram,
    InsufficientInstancesError,
    IoError,
    LabelTrack,
    NonFiniteError,
    OutOfBoundsError,
    OverlapError,
    ParseError,
    Region,
    TimeSeries,
    UnsupportedVersionError,
    validate_series,
)
from .model import PredictionTrack

# splitmix64 constants (Steele, Lea & Flood's mix; widely published).
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
# Odd constant for deriving independent sub-streams from one seed.
_STREAM = np.uint64(0xD1B54A32D192ED03)

MODEL_MAGIC = b"SFCM"
MODEL_VERSION = 1


def _mix64(z: np.ndarray) -> np.ndarray:
    z = z.copy()
    z ^= z >> np.uint64(30)
    z *= _MIX1
    z ^= z >> np.uint64(27)
    z *= _MIX2
    z ^= z >> np.uint64(31)
    return z


def uniforms(seed: int, count: int) -> np.ndarray:
    """`count` deterministic uniforms in [0, 1)."""
    idx = np.arange(1, count + 1, dtype=np.uint64)
    z = _mix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + idx * _GAMMA)
    return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53


def normals(seed: int, count: int) -> np.ndarray:
    """`count` deterministic standard normal variates (Box-Muller)."""
    pairs = (count + 1) // 2
    u = uniforms(seed, 2 * pairs)
    u1 = np.maximum(u[0::2], 2.0**-53)
    u2 = u[1::2]
    r = np.sqrt(-2.0 * np.log(u1))
    theta = 2.0 * np.pi * u2
    z = np.empty(2 * pairs)
    z[0::2] = r * np.cos(theta)
    z[1::2] = r * np.sin(theta)
    return z[:count]


def derive_seed(seed: int, stream: int) -> int:
    """Independent sub-seed for stream `stream` of a master seed."""
    counter = (seed + stream * int(_STREAM)) & 0xFFFFFFFFFFFFFFFF
    return int(_mix64(np.asarray([counter], dtype=np.uint64))[0])


def _shuffled(items: list, seed: int) -> list:
    """Fisher-Yates shuffle driven by the portable uniform stream."""
    out = list(items)
    n = len(out)
    if n < 2:
        return out
    u = uniforms(seed, n - 1)
    for i in range(n - 1, 0, -1):
        j = int(u[n - 1 - i] * (i + 1))
        out[i], out[j] = out[j], out[i]
    return out


# ---------------------------------------------------------------------------
# Synthetic generators
# ---------------------------------------------------------------------------

def gen_random_noise(n: int, seed: int) -> TimeSeries:
    """iid standard normal draws."""
    if n < 1:
        raise BadParamsError(f"n must be >= 1, got {n}")
    return TimeSeries(values=normals(seed, n), name=f"random-noise(seed={seed})")


def gen_random_walk(n: int, seed: int) -> TimeSeries:
    """Cumulative sum of the noise stream for the same seed."""
    if n < 1:
        raise BadParamsError(f"n must be >= 1, got {n}")
    return TimeSeries(values=np.cumsum(normals(seed, n)), name=f"random-walk(seed={seed})")


@dataclass(frozen=True)
class DatasetBundle:
    """A generated or loaded (series, labels) pair with provenance."""

    series: TimeSeries
    labels: LabelTrack
    provenance: str


@dataclass(frozen=True)
class TwoModalityParams:
    """Knobs for the planted two-modality fixture.

    Four region types are planted in a band-limited high-frequency carrier
    (the unlabeled filler, scaled to `gap_std`):

    * ``sine`` (the shape class): sine bursts, aligned phase, per-region
      amplitude jitter, relative noise `noise_level`;
    * ``flat`` (the feature class): exactly constant stretches;
    * ``surge``: sine bursts scaled by `surge_amp`, label-only confusers
      that are shape-identical to the sine class after z-normalization but
      amplitude-distinct (they defeat a shape-only run);
    * ``hum``: labeled stretches of the carrier scaled to the sine bursts'
      window deviation (they defeat a feature-only run).

    Lengths are in units of m. Labels stop m samples before each material
    block ends so every labeled position's window lies inside its material.
    """

    m: int = 64
    n_sine: int = 24
    n_flat: int = 24
    n_surge: int = 12
    n_hum: int = 12
    region_len: Tuple[float, float] = (2.0, 3.0)
    gap_len: Tuple[float, float] = (1.5, 2.5)
    noise_level: float = 0.05
    sine_cycles: float = 2.0
    sine_amp: float = 1.0
    amp_jitter: float = 0.08
    flat_level: float = 1.0
    flat_level_jitter: float = 0.5
    surge_amp: float = 3.0
    gap_std: float = 2.0
    hum_std: Optional[float] = None  # default: sine_amp / sqrt(2)
    hum_band: Tuple[float, float] = (0.2, 0.35)
    align: int = 1  # quantize block lengths to this many samples
    sample_rate_hz: Optional[float] = 100.0

    def __post_init__(self):
        if self.m < 4:
            raise BadParamsError("m must be >= 4")
        if min(self.n_sine, self.n_flat) < 1:
            raise BadParamsError("need at least one sine and one flat region")
        if min(self.n_surge, self.n_hum) < 0:
            raise BadParamsError("region counts must be >= 0")
        if self.region_len[0] < 1.5:
            raise BadParamsError("regions must be at least 1.5 windows long")
        if self.gap_len[0] < 1.0:
            raise BadParamsError("gaps must be at least one window long")
        if not (0.0 <= self.noise_level < 1.0):
            raise BadParamsError("noise_level must be in [0, 1)")
        if not (0.0 < self.hum_band[0] < self.hum_band[1] <= 0.5):
            raise BadParamsError("hum_band must satisfy 0 < lo < hi <= 0.5")
        if not self.gap_std > 0:
            raise BadParamsError("gap_std must be positive")
        if self.align < 1:
            raise BadParamsError("align must be >= 1")


SINE_CLASS = "sine"
FLAT_CLASS = "flat"
SURGE_CLASS = "surge"
HUM_CLASS = "hum"


def _span_samples(bounds: Tuple[float, float], m: int, u: float, align: int) -> int:
    lo, hi = bounds
    span = int(round((lo + (hi - lo) * u) * m))
    return max(align, (span // align) * align)


def gen_two_modality_dataset(params: TwoModalityParams, seed: int) -> DatasetBundle:
    """Planted fixture with a shape-friendly and a feature-friendly class.

    Ground truth is exact: every labeled position's window lies fully
    inside its region's material.
    """
    p = params
    m = p.m
    kinds = (
        [SINE_CLASS] * p.n_sine
        + [FLAT_CLASS] * p.n_flat
        + [SURGE_CLASS] * p.n_surge
        + [HUM_CLASS] * p.n_hum
    )
    kinds = _shuffled(kinds, derive_seed(seed, 0))
    n_blocks = len(kinds)
    u_len = uniforms(derive_seed(seed, 1), n_blocks)
    u_gap = uniforms(derive_seed(seed, 2), n_blocks + 1)
    u_amp = uniforms(derive_seed(seed, 3), n_blocks)

    lens = [_span_samples(p.region_len, m, u, p.align) for u in u_len]
    gaps = [_span_samples(p.gap_len, m, u, p.align) for u in u_gap]
    n = sum(lens) + sum(gaps)

    carrier = normals(derive_seed(seed, 4), n)
    spectrum = np.fft.rfft(carrier)
    freq = np.fft.rfftfreq(n)
    keep = (freq >= p.hum_band[0]) & (freq <= p.hum_band[1])
    spectrum[~keep] = 0.0
    carrier = np.fft.irfft(spectrum, n)
    carrier_std = float(carrier.std())
    if carrier_std > 0:
        carrier /= carrier_std
    hum_std = p.hum_std if p.hum_std is not None else p.sine_amp / np.sqrt(2.0)
    x = carrier * p.gap_std

    noise = normals(derive_seed(seed, 5), n)
    regions: List[Region] = []
    pos = 0
    for b, kind in enumerate(kinds):
        pos += gaps[b]
        length = lens[b]
        t = np.arange(length, dtype=np.float64)
        jitter = 1.0 + p.amp_jitter * (2.0 * u_amp[b] - 1.0)
        if kind == SINE_CLASS or kind == SURGE_CLASS:
            amp = p.sine_amp * jitter if kind == SINE_CLASS else p.surge_amp * jitter
            x[pos : pos + length] = amp * (
                np.sin(2.0 * np.pi * p.sine_cycles * t / m)
                + p.noise_level * noise[pos : pos + length]
            )
        elif kind == FLAT_CLASS:
            level = p.flat_level + p.flat_level_jitter * (2.0 * u_amp[b] - 1.0)
            x[pos : pos + length] = level
        else:  # HUM_CLASS: the carrier again, but at the bursts' deviation
            x[pos : pos + length] = carrier[pos : pos + length] * hum_std
        regions.append(Region(start=pos, end=pos + length - m, class_id=kind))
        pos += length

    labels = LabelTrack(
        series_length=n,
        regions=tuple(regions),
        classes=(SINE_CLASS, FLAT_CLASS, SURGE_CLASS, HUM_CLASS),
    )
    series = TimeSeries(
        values=x, sample_rate_hz=p.sample_rate_hz, name=f"two-modality(seed={seed})"
    )
    return DatasetBundle(
        series=series,
        labels=labels,
        provenance=f"gen_two_modality_dataset(seed={seed}, m={m}, blocks={n_blocks})",
    )


GUN_CLASS = "Gun"
NOGUN_CLASS = "NoGun"
NOISE_CLASS = "RandomNoise"
WALK_CLASS = "RandomWalk"


def noise_walk_instances(
    n_per_class: int = 20, length: int = 150, seed: int = 0
) -> List[Tuple[np.ndarray, str]]:
    """Noise instances plus walks whose steps reuse the same noise rows."""
    noise = normals(derive_seed(seed, 12), n_per_class * length).reshape(n_per_class, length)
    out: List[Tuple[np.ndarray, str]] = [(row.copy(), NOISE_CLASS) for row in noise]
    out.extend((row.copy(), WALK_CLASS) for row in np.cumsum(noise, axis=1))
    return out


def build_gun_experiment(
    gun_instances: Sequence[np.ndarray],
    nogun_instances: Sequence[np.ndarray],
    n_per_class: int = 20,
    length: int = 150,
    seed: int = 0,
) -> List[Tuple[np.ndarray, str]]:
    """The 4-class instance set: subsampled Gun/NoGun plus noise and walks."""
    out: List[Tuple[np.ndarray, str]] = []
    for name, pool in ((GUN_CLASS, gun_instances), (NOGUN_CLASS, nogun_instances)):
        if len(pool) < n_per_class:
            raise InsufficientInstancesError(
                f"need {n_per_class} {name} instances, got {len(pool)}"
            )
        arrs = []
        for inst in pool:
            a = np.asarray(inst, dtype=np.float64)
            if a.size < length:
                raise InsufficientInstancesError(
                    f"{name} instance of length {a.size} is shorter than {length}"
                )
            arrs.append(a[:length])
        order = _shuffled(list(range(len(arrs))), derive_seed(seed, 10 if name == GUN_CLASS else 11))
        for idx in order[:n_per_class]:
            out.append((arrs[idx], name))
    # Walk steps reuse the noise instances, mirroring the generator identity
    # (a walk's first differences are the noise stream for the same seed).
    out.extend(noise_walk_instances(n_per_class, length, seed))
    return out


# ---------------------------------------------------------------------------
# File I/O
# ---------------------------------------------------------------------------

def atomic_write_text(path: str, text: str) -> None:
    _atomic_write(path, payload=text.encode("utf-8"))


def _atomic_write(path: str, payload: bytes = None, line_chunks=None) -> None:
    """Write to a temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
        try:
            with os.fdopen(fd, "wb") as fh:
                if payload is not None:
                    fh.write(payload)
                else:
                    for chunk in line_chunks:
                        fh.write(chunk)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def save_series(ts: TimeSeries, path: str) -> None:
    def chunks():
        header = []
        if ts.name:
            header.append(f"# name: {ts.name}")
        if ts.sample_rate_hz is not None:
            header.append(f"# sample_rate_hz: {ts.sample_rate_hz!r}")
        if header:
            yield ("\n".join(header) + "\n").encode("utf-8")
        values = ts.values
        # Chunked join keeps memory flat for multi-million-point series.
        step = 1 << 16
        for start in range(0, values.size, step):
            block = values[start : start + step]
            yield ("\n".join(map(repr, block.tolist())) + "\n").encode("utf-8")

    _atomic_write(path, line_chunks=chunks())


def load_series(path: str) -> TimeSeries:
    """Parse the one-value-per-line series format; errors carry line numbers."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    name = ""
    rate: Optional[float] = None
    rows: List[str] = []
    row_lines: Optional[List[int]] = None
    for lineno, line in enumerate(raw.splitlines(), start=1):
        text = line.strip()
        if not text:
            continue
        if text.startswith("#"):
            body = text[1:].strip()
            if ":" in body:
                key, _, value = body.partition(":")
                key = key.strip()
                value = value.strip()
                if key == "name":
                    name = value
                elif key == "sample_rate_hz":
                    try:
                        rate = float(value)
                    except ValueError as exc:
                        raise ParseError(lineno, f"bad sample_rate_hz {value!r}") from exc
            continue
        rows.append(text)
    if not rows:
        raise EmptyInputError(f"{path} holds no values")
    try:
        values = np.asarray(rows, dtype=np.float64)
    except ValueError:
        values = None
    if values is None:
        # Slow path only to report the offending line.
        data_index = 0
        for lineno, line in enumerate(raw.splitlines(), start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                float(text)
            except ValueError as exc:
                raise ParseError(lineno, f"not a number: {text!r}") from exc
            data_index += 1
        raise ParseError(0, "unparseable series")  # pragma: no cover
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        target = int(bad[0])
        data_index = 0
        for lineno, line in enumerate(raw.splitlines(), start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            if data_index == target:
                raise NonFiniteError(target, f"line {lineno}: non-finite value {text!r}")
            data_index += 1
    ts = TimeSeries(values=values, sample_rate_hz=rate, name=name)
    validate_series(ts)
    return ts


def save_labels(track: LabelTrack, path: str) -> None:
    lines = [f"# series_length: {track.series_length}"]
    lines.extend(f"{r.start},{r.end},{r.class_id}" for r in track.regions)
    atomic_write_text(path, "\n".join(lines) + "\n")


def load_labels(path: str, series_len: int) -> LabelTrack:
    """Parse CSV region lines, validating order, overlap, and bounds."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    regions: List[Region] = []
    prev_end = None
    prev_start = -1
    for lineno, line in enumerate(raw.splitlines(), start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ParseError(lineno, f"expected start,end,class, got {text!r}")
        try:
            start = int(parts[0])
            end = int(parts[1])
        except ValueError as exc:
            raise ParseError(lineno, f"bad region bounds in {text!r}") from exc
        class_id = parts[2]
        if not class_id:
            raise ParseError(lineno, "empty class name")
        if class_id == OTHER_CLASS:
            raise ParseError(lineno, f"{OTHER_CLASS} is reserved for gaps")
        if start < 0 or end > series_len or start >= end:
            raise OutOfBoundsError(lineno, f"region [{start},{end}) outside [0,{series_len})")
        if start < prev_start:
            raise ParseError(lineno, f"region [{start},{end}) is out of order")
        if prev_end is not None and start < prev_end:
            raise OverlapError(lineno)
        regions.append(Region(start=start, end=end, class_id=class_id))
        prev_end = end
        prev_start = start
    return LabelTrack(series_length=series_len, regions=tuple(regions))


def _hist_to_json(h: Histogram) -> dict:
    return {"edges": [float(e) for e in h.edges], "counts": [int(c) for c in h.counts]}


def _hist_from_json(obj: dict) -> Histogram:
    return Histogram(edges=np.asarray(obj["edges"]), counts=np.asarray(obj["counts"]))


def save_model(models: Sequence[ClassModel], path: str) -> None:
    """Versioned model container: magic + version byte + JSON."""
    payload = {
        "models": [
            {
                "class_id": mo.class_id,
                "m": mo.m,
                "exclusion_zone": mo.exclusion_zone,
                "prior": float(mo.prior),
                "features": [
                    {
                        "kind": spec.kind,
                        "id": spec.id,
                        "query": None if spec.query is None else [float(v) for v in spec.query],
                        "pos": _hist_to_json(pos_h),
                        "neg": _hist_to_json(neg_h),
                    }
                    for spec, pos_h, neg_h in mo.features
                ],
            }
            for mo in models
        ]
    }
    body = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")
    _atomic_write(path, MODEL_MAGIC + bytes([MODEL_VERSION]) + body)


def load_model(path: str) -> List[ClassModel]:
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if len(blob) < len(MODEL_MAGIC) + 1 or blob[: len(MODEL_MAGIC)] != MODEL_MAGIC:
        raise FileFormatError(f"{path} is not a model file")
    version = blob[len(MODEL_MAGIC)]
    if version != MODEL_VERSION:
        raise UnsupportedVersionError(f"{path} has unsupported version {version}")
    try:
        payload = json.loads(blob[len(MODEL_MAGIC) + 1 :].decode("utf-8"))
        models = []
        for obj in payload["models"]:
            features = tuple(
                (
                    FeatureSpec(
                        kind=f["kind"],
                        id=f["id"],
                        query=None if f["query"] is None else np.asarray(f["query"]),
                    ),
                    _hist_from_json(f["pos"]),
                    _hist_from_json(f["neg"]),
                )
                for f in obj["features"]
            )
            models.append(
                ClassModel(
                    class_id=obj["class_id"],
                    m=int(obj["m"]),
                    exclusion_zone=int(obj["exclusion_zone"]),
                    features=features,
                    prior=float(obj["prior"]),
                )
            )
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"{path} is corrupt: {exc}") from exc
    return models


def save_predictions(track: PredictionTrack, path: str) -> None:
    lines = [
        f"# series_length: {track.series_length}",
        f"# m: {track.m}",
        f"# stride: {track.stride}",
        f"# classes: {','.join(track.class_ids)}",
    ]
    if track.sample_rate_hz is not None:
        lines.append(f"# sample_rate_hz: {track.sample_rate_hz!r}")
    lines.append("position,class,score")
    for pos, cls, score in track.detections():
        lines.append(f"{pos},{cls},{score!r}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def load_predictions(path: str) -> PredictionTrack:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    meta = {}
    rows: List[Tuple[int, str, float]] = []
    saw_header = False
    for lineno, line in enumerate(raw.splitlines(), start=1):
        text = line.strip()
        if not text:
            continue
        if text.startswith("#"):
            body = text[1:].strip()
            key, _, value = body.partition(":")
            meta[key.strip()] = value.strip()
            continue
        if not saw_header:
            if text != "position,class,score":
                raise ParseError(lineno, f"expected prediction header, got {text!r}")
            saw_header = True
            continue
        parts = text.split(",")
        if len(parts) != 3:
            raise ParseError(lineno, f"expected position,class,score, got {text!r}")
        try:
            rows.append((int(parts[0]), parts[1], float(parts[2])))
        except ValueError as exc:
            raise ParseError(lineno, f"bad prediction row {text!r}") from exc
    try:
        series_length = int(meta["series_length"])
        m = int(meta["m"])
        stride = int(meta["stride"])
        class_ids = tuple(c for c in meta["classes"].split(",") if c)
    except (KeyError, ValueError) as exc:
        raise FileFormatError(f"{path} is missing prediction metadata: {exc}") from exc
    rate = float(meta["sample_rate_hz"]) if "sample_rate_hz" in meta else None
    length = series_length - m + 1
    codes = np.full(length, -1, dtype=np.int32)
    scores = np.zeros(length)
    index = {c: i for i, c in enumerate(class_ids)}
    for pos, cls, score in rows:
        if not (0 <= pos < length):
            raise FileFormatError(f"{path}: position {pos} outside [0,{length})")
        if cls not in index:
            raise FileFormatError(f"{path}: unknown class {cls!r}")
        codes[pos] = index[cls]
        scores[pos] = score
    return PredictionTrack(
        class_ids=class_ids,
        label_codes=codes,
        scores=scores,
        m=m,
        series_length=series_length,
        stride=stride,
        sample_rate_hz=rate,
    )


def load_ucr_instances(path: str) -> List[Tuple[str, np.ndarray]]:
    """Parse UCR-style instance files: label then values, CSV/TSV/whitespace."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    out: List[Tuple[str, np.ndarray]] = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "," in text:
            parts = [p for p in text.split(",") if p.strip()]
        else:
            parts = text.split()
        if len(parts) < 2:
            raise ParseError(lineno, f"expected label and values, got {text!r}")
        label = parts[0].strip()
        try:
            label_f = float(label)
            label = str(int(label_f)) if label_f == int(label_f) else label
        except ValueError:
            pass
        try:
            values = np.asarray(parts[1:], dtype=np.float64)
        except ValueError as exc:
            raise ParseError(lineno, f"bad value in instance: {exc}") from exc
        if not np.all(np.isfinite(values)):
            raise NonFiniteError(lineno, f"line {lineno}: non-finite instance value")
        out.append((label, values))
    if not out:
        raise EmptyInputError(f"{path} holds no instances")
    return out


def save_instances(instances: Sequence[Tuple[np.ndarray, str]], path: str) -> None:
    """Instance bundle: one CSV line per instance, class label first."""
    lines = []
    for values, class_id in instances:
        lines.append(class_id + "," + ",".join(repr(float(v)) for v in values))
    atomic_write_text(path, "\n".join(lines) + "\n")


def load_instances(path: str) -> List[Tuple[np.ndarray, str]]:
    return [(values, label) for label, values in load_ucr_instances(path)]
