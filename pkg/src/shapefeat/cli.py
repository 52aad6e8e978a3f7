"""Command-line surface: synth, train, classify, eval, compare, roc, freq.

Exit codes: 0 success, 1 usage, 2 data error, 3 model error. Reports are
headered CSV; every output file is written atomically.
"""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional, Sequence, Tuple

import numpy as np
import yaml

from . import data as dataio
from .core import (
    FLOOR_UNION,
    NB_PAPER_LITERAL,
    NB_STANDARD,
    SHAPE,
    BadParamsError,
    ClassModel,
    ClassifierConfig,
    DataError,
    FeatureSpec,
    LabelTrack,
    ModelError,
    ShapefeatError,
    TimeSeries,
    UnsatisfiableError,
)
from .evaluate import detection_frequency, metrics, mil_confusion, roc_sweep
from .model import ClassSpec, PredictionTrack, classify, train


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


# ---------------------------------------------------------------------------
# Config document
# ---------------------------------------------------------------------------

_TOP_KEYS = {
    "seed",
    "stride",
    "decision_floor",
    "nb_denominator",
    "small_value_mode",
    "thresholds",
    "classes",
}
_CLASS_KEYS = {"name", "m", "exclusion_zone", "prior", "features"}
_FEATURE_KEYS = {"kind", "id", "prototype"}


def _parse_samples(value, sample_rate_hz: Optional[float], what: str) -> int:
    """Accept plain sample counts or time suffixes (s, ms, min, h)."""
    if isinstance(value, int):
        return value
    text = str(value).strip()
    try:
        return int(text)
    except ValueError:
        pass
    units = (("ms", 1e-3), ("min", 60.0), ("h", 3600.0), ("s", 1.0))
    for suffix, seconds in units:
        if text.endswith(suffix):
            try:
                quantity = float(text[: -len(suffix)])
            except ValueError:
                raise BadParamsError(f"cannot parse {what} {text!r}")
            if sample_rate_hz is None:
                raise BadParamsError(
                    f"{what} {text!r} needs a series with sample_rate_hz; "
                    "use a plain sample count instead"
                )
            return int(round(quantity * seconds * sample_rate_hz))
    raise BadParamsError(f"cannot parse {what} {text!r}")


def _check_keys(obj: dict, allowed: set, where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise BadParamsError(f"unknown {where} keys: {', '.join(sorted(unknown))}")


def _parse_feature(obj, m: int) -> FeatureSpec:
    if isinstance(obj, str):
        return FeatureSpec(kind=obj)
    if not isinstance(obj, dict):
        raise BadParamsError(f"feature entries must be a kind or a mapping, got {obj!r}")
    _check_keys(obj, _FEATURE_KEYS, "feature")
    kind = obj.get("kind")
    if not kind:
        raise BadParamsError("feature mapping needs a kind")
    query = None
    if "prototype" in obj and obj["prototype"] is not None:
        if kind != SHAPE:
            raise BadParamsError(f"feature kind {kind!r} takes no prototype")
        proto = dataio.load_series(str(obj["prototype"]))
        if len(proto) != m:
            raise BadParamsError(
                f"prototype {obj['prototype']!r} has length {len(proto)}, expected m={m}"
            )
        query = proto.values
    return FeatureSpec(kind=kind, id=obj.get("id", "") or "", query=query)


def load_run_config(path: str, sample_rate_hz: Optional[float] = None):
    """Parse the YAML run config into (ClassifierConfig, [ClassSpec], seed)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise dataio.IoError(f"cannot read {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise BadParamsError(f"bad config {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise BadParamsError(f"config {path} must be a mapping")
    _check_keys(doc, _TOP_KEYS, "config")
    thresholds = doc.get("thresholds") or {}
    if not isinstance(thresholds, dict):
        raise BadParamsError("thresholds must map class names to weights")
    cfg = ClassifierConfig(
        thresholds={str(k): float(v) for k, v in thresholds.items()},
        decision_floor=float(doc.get("decision_floor", 0.5)),
        stride=int(doc.get("stride", 1)),
        nb_denominator=str(doc.get("nb_denominator", NB_STANDARD)),
        small_value_mode=str(doc.get("small_value_mode", FLOOR_UNION)),
    )
    specs: List[ClassSpec] = []
    for entry in doc.get("classes") or []:
        if not isinstance(entry, dict):
            raise BadParamsError("each class entry must be a mapping")
        _check_keys(entry, _CLASS_KEYS, "class")
        for key in ("name", "m", "exclusion_zone", "features"):
            if key not in entry:
                raise BadParamsError(f"class entry is missing {key!r}")
        m = int(entry["m"])
        specs.append(
            ClassSpec(
                class_id=str(entry["name"]),
                m=m,
                exclusion_zone=_parse_samples(
                    entry["exclusion_zone"], sample_rate_hz, "exclusion_zone"
                ),
                features=tuple(_parse_feature(f, m) for f in entry["features"]),
                prior=None if entry.get("prior") is None else float(entry["prior"]),
            )
        )
    seed = doc.get("seed")
    return cfg, specs, (None if seed is None else int(seed))


def _apply_overrides(cfg: ClassifierConfig, args) -> ClassifierConfig:
    thresholds = dict(cfg.thresholds)
    for item in getattr(args, "threshold", None) or []:
        name, _, value = item.partition("=")
        if not name or not value:
            raise BadParamsError(f"--threshold expects class=weight, got {item!r}")
        thresholds[name] = float(value)
    return ClassifierConfig(
        thresholds=thresholds,
        decision_floor=(
            cfg.decision_floor if args.decision_floor is None else args.decision_floor
        ),
        stride=cfg.stride if args.stride is None else args.stride,
        nb_denominator=(
            cfg.nb_denominator if args.nb_denominator is None else args.nb_denominator
        ),
        small_value_mode=cfg.small_value_mode,
    )


def _classifier_config(args, sample_rate_hz: Optional[float] = None) -> ClassifierConfig:
    if getattr(args, "config", None):
        cfg, _, _ = load_run_config(args.config, sample_rate_hz)
    else:
        cfg = ClassifierConfig()
    return _apply_overrides(cfg, args)


def _write_csv(path: str, header: str, rows: Sequence[str]) -> None:
    dataio.atomic_write_text(path, "\n".join([header, *rows]) + "\n")


def _fmt(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_synth(args) -> int:
    if args.kind == "noise" or args.kind == "walk":
        gen = dataio.gen_random_noise if args.kind == "noise" else dataio.gen_random_walk
        ts = gen(args.n, args.seed)
        if args.sample_rate is not None:
            ts = TimeSeries(values=ts.values, sample_rate_hz=args.sample_rate, name=ts.name)
        dataio.save_series(ts, args.out)
        print(f"wrote {args.out} ({ts.name}, n={len(ts)})")
        return 0
    if args.kind == "two-modality":
        params = dataio.TwoModalityParams(
            m=args.m,
            n_sine=args.sine_bags,
            n_flat=args.flat_bags,
            n_surge=args.surge_bags,
            n_hum=args.hum_bags,
            noise_level=args.noise_level,
            sample_rate_hz=args.sample_rate,
        )
        bundle = dataio.gen_two_modality_dataset(params, args.seed)
        dataio.save_series(bundle.series, args.out_series)
        dataio.save_labels(bundle.labels, args.out_labels)
        print(
            f"wrote {args.out_series} and {args.out_labels} "
            f"({bundle.provenance}, n={len(bundle.series)}, bags={len(bundle.labels.regions)})"
        )
        return 0
    if args.kind == "gun-experiment":
        instances = dataio.load_ucr_instances(args.source)
        gun = [v for label, v in instances if label == args.gun_label]
        nogun = [v for label, v in instances if label == args.nogun_label]
        bundle = dataio.build_gun_experiment(
            gun, nogun, n_per_class=args.n_per_class, length=args.length, seed=args.seed
        )
        dataio.save_instances(bundle, args.out)
        print(
            f"wrote {args.out} (gun-experiment seed={args.seed}, "
            f"{len(bundle)} instances of length {args.length})"
        )
        return 0
    raise BadParamsError(f"unknown synth kind {args.kind!r}")  # pragma: no cover


def cmd_train(args) -> int:
    series = dataio.load_series(args.series)
    labels = dataio.load_labels(args.labels, len(series))
    _, specs, _ = load_run_config(args.config, series.sample_rate_hz)
    if not specs:
        raise BadParamsError(f"config {args.config} defines no classes")
    models = train(series, labels, specs)
    dataio.save_model(models, args.out)
    for spec, model in zip(specs, models):
        parts = []
        for fspec, pos_h, neg_h in model.features:
            origin = ""
            if fspec.kind == SHAPE:
                explicit = any(
                    f.kind == SHAPE and f.id == fspec.id and f.query is not None
                    for f in spec.features
                )
                origin = " (explicit prototype)" if explicit else " (medoid prototype)"
            parts.append(
                f"{fspec.id}: pos {pos_h.total}/{pos_h.counts.size} bins, "
                f"neg {neg_h.total}/{neg_h.counts.size} bins{origin}"
            )
        print(f"class {model.class_id}: prior={model.prior!r}; " + "; ".join(parts))
    print(f"wrote {args.out} ({len(models)} classes)")
    return 0


def cmd_classify(args) -> int:
    models = dataio.load_model(args.model)
    series = dataio.load_series(args.series)
    cfg = _classifier_config(args, series.sample_rate_hz)
    track = classify(models, series, cfg)
    dataio.save_predictions(track, args.out)
    print(
        f"wrote {args.out} ({len(track.detections())} detections over "
        f"{len(track)} positions, stride={cfg.stride})"
    )
    return 0


def cmd_eval(args) -> int:
    track = dataio.load_predictions(args.predictions)
    bags = dataio.load_labels(args.labels, track.series_length)
    rows = []
    for class_id in args.class_id:
        cm = mil_confusion(track, bags, class_id)
        precision, recall, accuracy = metrics(cm)
        rows.append(
            f"{class_id},{cm.tp},{cm.fp},{cm.fn},{cm.tn},"
            f"{_fmt(precision)},{_fmt(recall)},{_fmt(accuracy)}"
        )
        print(
            f"{class_id}: tp={cm.tp} fp={cm.fp} fn={cm.fn} tn={cm.tn} "
            f"precision={precision:.4g} recall={recall:.4g} accuracy={accuracy:.4g}"
        )
    _write_csv(args.out, "class,tp,fp,fn,tn,precision,recall,accuracy", rows)
    print(f"wrote {args.out}")
    return 0


def _variant_models(models: Sequence[ClassModel], keep_shape: bool) -> List[ClassModel]:
    out = []
    for mo in models:
        feats = tuple(
            (spec, pos_h, neg_h)
            for spec, pos_h, neg_h in mo.features
            if (spec.kind == SHAPE) == keep_shape
        )
        if feats:
            out.append(
                ClassModel(
                    class_id=mo.class_id,
                    m=mo.m,
                    exclusion_zone=mo.exclusion_zone,
                    features=feats,
                    prior=mo.prior,
                )
            )
    return out


def compare_variants(
    models: Sequence[ClassModel],
    test: TimeSeries,
    bags: LabelTrack,
    cfg: ClassifierConfig,
) -> List[Tuple[str, str, object, float, float, float]]:
    """(variant, class, confusion, precision, recall, accuracy) rows.

    shape-only and feature-only runs keep only features of that kind; a
    class with no feature of the kind drops out of that run (and scores
    recall 0 on its own bags). A run left with no classes at all predicts
    nothing, so a single-modality model degenerates to that modality's run.
    """
    if not models:
        raise UnsatisfiableError("no models to compare")
    variants = [
        ("shape", _variant_models(models, keep_shape=True)),
        ("feature", _variant_models(models, keep_shape=False)),
        ("combined", list(models)),
    ]
    rows = []
    for name, variant in variants:
        if variant:
            track = classify(variant, test, cfg)
        else:
            length = len(test) - models[0].m + 1
            track = PredictionTrack(
                class_ids=tuple(mo.class_id for mo in models),
                label_codes=np.full(length, -1, dtype=np.int32),
                scores=np.zeros(length),
                m=models[0].m,
                series_length=len(test),
                stride=cfg.stride,
                sample_rate_hz=test.sample_rate_hz,
            )
        for mo in models:
            cm = mil_confusion(track, bags, mo.class_id)
            precision, recall, accuracy = metrics(cm)
            rows.append((name, mo.class_id, cm, precision, recall, accuracy))
    return rows


def cmd_compare(args) -> int:
    models = dataio.load_model(args.model)
    series = dataio.load_series(args.series)
    bags = dataio.load_labels(args.labels, len(series))
    cfg = _classifier_config(args, series.sample_rate_hz)
    rows = compare_variants(models, series, bags, cfg)
    lines = []
    for name, class_id, cm, precision, recall, accuracy in rows:
        lines.append(
            f"{name},{class_id},{cm.tp},{cm.fp},{cm.fn},{cm.tn},"
            f"{_fmt(precision)},{_fmt(recall)},{_fmt(accuracy)}"
        )
        print(
            f"{name:>8} {class_id}: precision={precision:.4g} "
            f"recall={recall:.4g} accuracy={accuracy:.4g}"
        )
    _write_csv(args.out, "variant,class,tp,fp,fn,tn,precision,recall,accuracy", lines)
    print(f"wrote {args.out}")
    return 0


def cmd_roc(args) -> int:
    models = dataio.load_model(args.model)
    series = dataio.load_series(args.series)
    bags = dataio.load_labels(args.labels, len(series))
    cfg = _classifier_config(args, series.sample_rate_hz)
    weights = [float(w) for w in args.weights.split(",") if w.strip()]
    if len(weights) < 2:
        raise BadParamsError("need at least two weights")
    points = roc_sweep(models, series, bags, cfg, args.class_id, weights)
    rows = [
        f"{_fmt(pt.threshold_weight)},{_fmt(pt.precision)},{_fmt(pt.recall)},"
        f"{pt.tp},{pt.fp},{pt.fn},{pt.tn}"
        for pt in points
    ]
    _write_csv(args.out, "weight,precision,recall,tp,fp,fn,tn", rows)
    print(f"wrote {args.out} ({len(points)} operating points for {args.class_id})")
    return 0


def cmd_freq(args) -> int:
    track = dataio.load_predictions(args.predictions)
    window = _parse_samples(args.window, track.sample_rate_hz, "window")
    step = _parse_samples(args.step, track.sample_rate_hz, "step")
    series = detection_frequency(track, args.class_id, window, step)
    rows = [f"{start},{count}" for start, count in series]
    _write_csv(args.out, "window_start,count", rows)
    print(
        f"wrote {args.out} ({len(series)} windows of {window} samples, step {step})"
    )
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="YAML run config")
    p.add_argument("--stride", type=int, default=None, help="snippet step override")
    p.add_argument(
        "--decision-floor", type=float, default=None, dest="decision_floor",
        help="minimum weighted probability for a detection",
    )
    p.add_argument(
        "--threshold", action="append", metavar="CLASS=WEIGHT",
        help="per-class threshold weight override (repeatable)",
    )
    p.add_argument(
        "--nb-denominator", choices=[NB_STANDARD, NB_PAPER_LITERAL],
        default=None, dest="nb_denominator",
        help="Naive-Bayes prior denominator mode",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="shapefeat", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate synthetic datasets")
    synth_sub = p.add_subparsers(dest="kind", required=True)

    ps = synth_sub.add_parser("noise", help="iid standard normal series")
    ps.add_argument("--n", type=int, required=True)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--sample-rate", type=float, default=None, dest="sample_rate")
    ps.add_argument("--out", required=True)
    ps.set_defaults(func=cmd_synth)

    ps = synth_sub.add_parser("walk", help="random walk series")
    ps.add_argument("--n", type=int, required=True)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--sample-rate", type=float, default=None, dest="sample_rate")
    ps.add_argument("--out", required=True)
    ps.set_defaults(func=cmd_synth)

    ps = synth_sub.add_parser(
        "two-modality", help="planted shape-class / feature-class fixture"
    )
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--m", type=int, default=64)
    ps.add_argument("--sine-bags", type=int, default=12, dest="sine_bags")
    ps.add_argument("--flat-bags", type=int, default=12, dest="flat_bags")
    ps.add_argument("--surge-bags", type=int, default=8, dest="surge_bags")
    ps.add_argument("--hum-bags", type=int, default=8, dest="hum_bags")
    ps.add_argument("--noise-level", type=float, default=0.05, dest="noise_level")
    ps.add_argument("--sample-rate", type=float, default=100.0, dest="sample_rate")
    ps.add_argument("--out-series", required=True, dest="out_series")
    ps.add_argument("--out-labels", required=True, dest="out_labels")
    ps.set_defaults(func=cmd_synth)

    ps = synth_sub.add_parser(
        "gun-experiment", help="4-class instance bundle from a UCR-style file"
    )
    ps.add_argument("--source", required=True, help="UCR-style labeled instance file")
    ps.add_argument("--gun-label", default="1", dest="gun_label")
    ps.add_argument("--nogun-label", default="2", dest="nogun_label")
    ps.add_argument("--n-per-class", type=int, default=20, dest="n_per_class")
    ps.add_argument("--length", type=int, default=150)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--out", required=True)
    ps.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="fit per-class models")
    p.add_argument("--config", required=True)
    p.add_argument("--series", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="label a series with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--series", required=True)
    p.add_argument("--out", required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("eval", help="bag-level confusion matrix and metrics")
    p.add_argument("--predictions", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument(
        "--class", action="append", required=True, dest="class_id", metavar="CLASS"
    )
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser(
        "compare", help="shape-only / feature-only / combined metrics grid"
    )
    p.add_argument("--model", required=True)
    p.add_argument("--series", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("roc", help="threshold-weight sweep for one class")
    p.add_argument("--model", required=True)
    p.add_argument("--series", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--class", required=True, dest="class_id", metavar="CLASS")
    p.add_argument(
        "--weights", required=True, help="comma-separated ascending positive weights"
    )
    p.add_argument("--out", required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_roc)

    p = sub.add_parser("freq", help="detection counts per sliding window")
    p.add_argument("--predictions", required=True)
    p.add_argument("--class", required=True, dest="class_id", metavar="CLASS")
    p.add_argument("--window", required=True, help="samples, or e.g. 15min / 0.25s")
    p.add_argument("--step", required=True, help="samples, or e.g. 15min / 0.25s")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_freq)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ShapefeatError as exc:  # pragma: no cover - defensive
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
