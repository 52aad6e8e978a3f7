import numpy as np
import pytest

from shapefeat.core import (
    AllZeroError,
    BadParamsError,
    ClassifierConfig,
    ConfusionMatrix,
    FeatureSpec,
    LabelTrack,
    LengthMismatchError,
    Region,
    TooFewError,
)
from shapefeat.data import (
    TwoModalityParams,
    gen_random_noise,
    gen_two_modality_dataset,
    normals,
    uniforms,
)
from shapefeat.evaluate import (
    COMPLEXITY_DIFF,
    ZNORM_ED,
    detection_frequency,
    loocv_1nn,
    metrics,
    mil_confusion,
    oracle_confusion,
    roc_sweep,
)
from shapefeat.model import ClassSpec, PredictionTrack, classify, train


def track_from(labels_by_position, class_ids, m=4):
    codes = np.full(len(labels_by_position), -1, dtype=np.int32)
    for i, cls in enumerate(labels_by_position):
        if cls is not None:
            codes[i] = class_ids.index(cls)
    return PredictionTrack(
        class_ids=tuple(class_ids),
        label_codes=codes,
        scores=np.zeros(len(codes)),
        m=m,
        series_length=len(codes) + m - 1,
    )


def bags_from(regions, length):
    return LabelTrack(series_length=length, regions=tuple(regions))


class TestMilConfusion:
    def test_multiple_hits_count_once(self):
        track = track_from([None, "a", "a", "a", None, None, None], ["a"])
        bags = bags_from([Region(0, 6, "a")], track.series_length)
        cm = mil_confusion(track, bags, "a")
        assert (cm.tp, cm.fp, cm.fn, cm.tn) == (1, 0, 0, 0)

    def test_empty_bag_is_false_negative(self):
        track = track_from([None] * 7, ["a"])
        bags = bags_from([Region(0, 6, "a")], track.series_length)
        cm = mil_confusion(track, bags, "a")
        assert (cm.tp, cm.fp, cm.fn, cm.tn) == (0, 0, 1, 0)

    def test_stray_hit_in_other_bag(self):
        track = track_from([None, None, "a", None, None, None, None], ["a"])
        bags = bags_from([Region(0, 6, "b")], track.series_length)
        assert mil_confusion(track, bags, "a").fp == 1
        clean = track_from([None] * 7, ["a"])
        assert mil_confusion(clean, bags, "a").tn == 1

    def test_gap_detections_ignored(self):
        track = track_from(["a", None, None, "a", None, None, None], ["a"])
        bags = bags_from([Region(1, 3, "b")], track.series_length)
        cm = mil_confusion(track, bags, "a")
        assert (cm.tp, cm.fp, cm.fn, cm.tn) == (0, 0, 0, 1)

    def test_length_mismatch(self):
        track = track_from([None] * 7, ["a"])
        bags = bags_from([Region(0, 6, "a")], 999)
        with pytest.raises(LengthMismatchError):
            mil_confusion(track, bags, "a")

    def test_matches_brute_force_on_random_fixtures(self):
        for trial in range(300):
            u = uniforms(trial + 1, 40)
            length = 10 + int(u[0] * 40)
            m = 3
            n_classes = 2
            class_ids = ["a", "b"]
            codes = np.full(length, -1, dtype=np.int32)
            for i in range(length):
                r = u[(i % 30) + 5]
                if r < 0.25:
                    codes[i] = 0
                elif r < 0.4:
                    codes[i] = 1
            track = PredictionTrack(
                class_ids=tuple(class_ids),
                label_codes=codes,
                scores=np.zeros(length),
                m=m,
                series_length=length + m - 1,
            )
            regions = []
            pos = 0
            bag_idx = 0
            while pos < length + m - 1 and bag_idx < 10:
                width = 1 + int(u[bag_idx] * 8)
                end = min(pos + width, length + m - 1)
                if end <= pos:
                    break
                cls = class_ids[int(u[bag_idx + 10] * 2) % 2]
                regions.append(Region(pos, end, cls))
                pos = end + 1 + int(u[bag_idx + 20] * 4)
                bag_idx += 1
            bags = bags_from(regions, length + m - 1)
            for cls in class_ids:
                cm = mil_confusion(track, bags, cls)
                # Brute-force oracle: scan every bag and every position.
                tp = fp = fn = tn = 0
                for r in regions:
                    hit = any(
                        0 <= p < length and track.label_at(p) == cls
                        for p in range(r.start, r.end)
                    )
                    if r.class_id == cls:
                        tp, fn = tp + hit, fn + (not hit)
                    else:
                        fp, tn = fp + hit, tn + (not hit)
                assert (cm.tp, cm.fp, cm.fn, cm.tn) == (tp, fp, fn, tn)


class TestMetrics:
    def test_walking_row(self):
        precision, recall, accuracy = metrics(ConfusionMatrix(tp=2, fp=1, fn=0, tn=2))
        assert precision == pytest.approx(2 / 3)
        assert recall == 1.0
        assert accuracy == pytest.approx(0.8)

    def test_perfect_row(self):
        assert metrics(ConfusionMatrix(tp=3, fp=0, fn=0, tn=73)) == (1.0, 1.0, 1.0)

    def test_zero_over_zero_conventions(self):
        precision, recall, accuracy = metrics(ConfusionMatrix(tp=0, fp=0, fn=5, tn=0))
        assert precision == 1.0
        assert recall == 0.0
        assert accuracy == 0.0

    def test_all_zero_rejected(self):
        with pytest.raises(AllZeroError):
            metrics(ConfusionMatrix())


class TestRocSweep:
    def setup_models(self):
        bundle = gen_two_modality_dataset(
            TwoModalityParams(n_sine=6, n_flat=6, n_surge=3, n_hum=3), 2
        )
        models = train(
            bundle.series,
            bundle.labels,
            [
                ClassSpec("sine", 64, 64,
                          (FeatureSpec(kind="shape"), FeatureSpec(kind="sliding_std")),
                          prior=0.5),
                ClassSpec("flat", 64, 64,
                          (FeatureSpec(kind="shape"), FeatureSpec(kind="sliding_std")),
                          prior=0.5),
            ],
        )
        return bundle, models

    def test_single_weight_matches_direct_call(self):
        bundle, models = self.setup_models()
        cfg = ClassifierConfig()
        (point,) = roc_sweep(models, bundle.series, bundle.labels, cfg, "sine", [1.0])
        track = classify(models, bundle.series, cfg.replace_threshold("sine", 1.0))
        cm = mil_confusion(track, bundle.labels, "sine")
        assert (point.tp, point.fp, point.fn, point.tn) == (cm.tp, cm.fp, cm.fn, cm.tn)

    def test_one_point_per_weight(self):
        bundle, models = self.setup_models()
        weights = [0.25, 0.5, 1.0, 2.0, 4.0]
        points = roc_sweep(
            models, bundle.series, bundle.labels, ClassifierConfig(), "sine", weights
        )
        assert [p.threshold_weight for p in points] == weights

    def test_weights_validated(self):
        bundle, models = self.setup_models()
        with pytest.raises(BadParamsError):
            roc_sweep(models, bundle.series, bundle.labels, ClassifierConfig(), "sine", [2.0, 1.0])
        with pytest.raises(BadParamsError):
            roc_sweep(models, bundle.series, bundle.labels, ClassifierConfig(), "sine", [-1.0])

    def test_sweep_extremes_and_best_f1(self):
        from shapefeat.data import TwoModalityParams, gen_two_modality_dataset
        from shapefeat.model import ClassSpec, train as fit

        params = TwoModalityParams(n_sine=8, n_flat=8, n_surge=4, n_hum=4)
        train_b = gen_two_modality_dataset(params, 8)
        test_b = gen_two_modality_dataset(params, 10_008)
        specs = [
            ClassSpec("sine", 64, 64,
                      (FeatureSpec(kind="shape"), FeatureSpec(kind="sliding_std")),
                      prior=0.5),
            ClassSpec("flat", 64, 64,
                      (FeatureSpec(kind="shape"), FeatureSpec(kind="sliding_std")),
                      prior=0.5),
        ]
        models = fit(train_b.series, train_b.labels, specs)
        points = roc_sweep(
            models, test_b.series, test_b.labels, ClassifierConfig(), "sine",
            [0.05, 0.25, 0.5, 1.0, 2.0, 4.0],
        )
        # Vanishing weight pushes every score under the decision floor.
        assert points[0].tp == 0
        f1 = [
            (2 * p.precision * p.recall / (p.precision + p.recall)
             if p.precision + p.recall else 0.0)
            for p in points
        ]
        best = points[int(np.argmax(f1))]
        assert best.recall == 1.0


class TestLoocv:
    def test_separated_blobs_in_complexity(self):
        instances = []
        for i in range(20):
            instances.append((gen_random_noise(150, i).values, "noisy"))
        for i in range(20):
            smooth = np.sin(np.linspace(0, 4 * np.pi, 150)) + 0.05 * normals(i + 900, 150)
            instances.append((smooth, "smooth"))
        cm = loocv_1nn(instances, COMPLEXITY_DIFF)
        assert cm.cell("noisy", "noisy") == 20
        assert cm.cell("smooth", "smooth") == 20
        assert cm.error_rate() == 0.0

    def test_permutation_invariance(self):
        instances = [
            (normals(i + 1, 80), "a" if i % 2 else "b") for i in range(30)
        ]
        cm = loocv_1nn(instances, ZNORM_ED)
        shuffled = [instances[(i * 7) % 30] for i in range(30)]
        cm2 = loocv_1nn(shuffled, ZNORM_ED)
        for actual in ("a", "b"):
            for predicted in ("a", "b"):
                assert cm.cell(actual, predicted) == cm2.cell(actual, predicted)

    def test_too_few(self):
        with pytest.raises(TooFewError):
            loocv_1nn([(np.ones(10), "a")])

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            loocv_1nn([(np.ones(10), "a"), (np.ones(12), "b")])


class TestOracle:
    def test_perfect_first_predictor(self):
        truth = ["a", "b", "a"]
        assert oracle_confusion(truth, ["b", "a", "b"], truth) == 0.0

    def test_complementary_errors(self):
        truth = ["a", "b"]
        pred_a = ["a", "x"]
        pred_b = ["x", "b"]
        assert oracle_confusion(pred_a, pred_b, truth) == 0.0

    def test_counts_joint_errors_only(self):
        truth = ["a", "b", "c", "d"]
        pred_a = ["x", "b", "x", "x"]
        pred_b = ["x", "x", "c", "x"]
        assert oracle_confusion(pred_a, pred_b, truth) == pytest.approx(0.5)

    def test_never_worse_than_either(self):
        for seed in range(20):
            u = uniforms(seed, 120)
            truth = ["a" if v < 0.5 else "b" for v in u[:40]]
            pa = ["a" if v < 0.5 else "b" for v in u[40:80]]
            pb = ["a" if v < 0.5 else "b" for v in u[80:]]
            err_a = sum(x != t for x, t in zip(pa, truth)) / 40
            err_b = sum(x != t for x, t in zip(pb, truth)) / 40
            assert oracle_confusion(pa, pb, truth) <= min(err_a, err_b)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            oracle_confusion(["a"], ["a", "b"], ["a", "b"])


class TestDetectionFrequency:
    def test_no_detections(self):
        track = track_from([None] * 20, ["a"])
        series = detection_frequency(track, "a", window=5, step=5)
        assert all(count == 0 for _, count in series)

    def test_single_detection_covered_windows(self):
        positions = [None] * 20
        positions[7] = "a"
        track = track_from(positions, ["a"])
        series = detection_frequency(track, "a", window=5, step=1)
        for start, count in series:
            assert count == (1 if start <= 7 < start + 5 else 0)

    def test_partition_sums_to_total(self):
        positions = [None] * 50
        for p in (3, 9, 22, 22 + 1, 41):
            positions[p] = "a"
        track = track_from(positions, ["a"])
        series = detection_frequency(track, "a", window=7, step=7)
        assert sum(count for _, count in series) == 5

    def test_bad_params(self):
        track = track_from([None] * 5, ["a"])
        with pytest.raises(BadParamsError):
            detection_frequency(track, "a", window=0, step=1)
