import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from shapefeat.data import load_predictions, load_series

CONFIG = """\
stride: 1
decision_floor: 0.5
nb_denominator: standard
thresholds:
  sine: 1.0
  flat: 1.0
classes:
  - name: sine
    m: 64
    exclusion_zone: 64
    prior: 0.5
    features: [shape, sliding_std]
  - name: flat
    m: 64
    exclusion_zone: 64
    prior: 0.5
    features: [shape, sliding_std]
"""

SHAPE_ONLY_CONFIG = """\
thresholds:
  sine: 1.0
classes:
  - name: sine
    m: 64
    exclusion_zone: 64
    prior: 0.5
    features: [shape]
"""

SYNTH_ARGS = ["--m", "64", "--sine-bags", "8", "--flat-bags", "8",
              "--surge-bags", "4", "--hum-bags", "4"]


def run_cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "shapefeat", *args],
        capture_output=True,
        text=True,
    )
    return proc.returncode, proc.stdout, proc.stderr


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """Synth fixture (seed 8 train, seed 10008 test) plus a trained model."""
    root = tmp_path_factory.mktemp("cli")
    config = root / "config.yaml"
    config.write_text(CONFIG)
    code, _, err = run_cli(
        "synth", "two-modality", "--seed", "8", *SYNTH_ARGS,
        "--out-series", str(root / "train.txt"),
        "--out-labels", str(root / "train-labels.csv"),
    )
    assert code == 0, err
    code, _, err = run_cli(
        "synth", "two-modality", "--seed", "10008", *SYNTH_ARGS,
        "--out-series", str(root / "test.txt"),
        "--out-labels", str(root / "test-labels.csv"),
    )
    assert code == 0, err
    code, out, err = run_cli(
        "train", "--config", str(config),
        "--series", str(root / "train.txt"),
        "--labels", str(root / "train-labels.csv"),
        "--out", str(root / "model.sfcm"),
    )
    assert code == 0, err
    assert "prior" in out and "medoid prototype" in out
    return root


class TestHelp:
    @pytest.mark.parametrize(
        "args",
        [
            ["--help"],
            ["synth", "--help"],
            ["synth", "two-modality", "--help"],
            ["train", "--help"],
            ["classify", "--help"],
            ["eval", "--help"],
            ["compare", "--help"],
            ["roc", "--help"],
            ["freq", "--help"],
        ],
    )
    def test_help_exits_zero(self, args):
        code, out, _ = run_cli(*args)
        assert code == 0
        assert "usage" in out.lower()


class TestSynth:
    def test_noise_deterministic(self, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        assert run_cli("synth", "noise", "--n", "500", "--seed", "7", "--out", str(a))[0] == 0
        assert run_cli("synth", "noise", "--n", "500", "--seed", "7", "--out", str(b))[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_walk_matches_library(self, tmp_path):
        out = tmp_path / "walk.txt"
        assert run_cli("synth", "walk", "--n", "200", "--seed", "3", "--out", str(out))[0] == 0
        from shapefeat.data import gen_random_walk

        assert np.allclose(load_series(str(out)).values, gen_random_walk(200, 3).values)

    def test_gun_experiment_bundle(self, tmp_path):
        from shapefeat.data import normals

        source = tmp_path / "source.tsv"
        lines = []
        for i in range(25):
            lines.append("1\t" + "\t".join(repr(float(v)) for v in normals(i + 1, 150)))
            lines.append("2\t" + "\t".join(repr(float(v)) for v in normals(i + 500, 150)))
        source.write_text("\n".join(lines) + "\n")
        outs = []
        for tag in ("a", "b"):
            out = tmp_path / f"{tag}.csv"
            code, stdout, err = run_cli(
                "synth", "gun-experiment", "--source", str(source),
                "--seed", "7", "--out", str(out),
            )
            assert code == 0, err
            assert "80 instances" in stdout
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
        rows = (tmp_path / "a.csv").read_text().splitlines()
        assert len(rows) == 80
        assert all(len(r.split(",")) == 151 for r in rows)

    def test_two_modality_deterministic(self, tmp_path):
        files = []
        for tag in ("x", "y"):
            s, l = tmp_path / f"{tag}.txt", tmp_path / f"{tag}.csv"
            code, out, _ = run_cli(
                "synth", "two-modality", "--seed", "1",
                "--out-series", str(s), "--out-labels", str(l),
            )
            assert code == 0
            assert "gen_two_modality_dataset(seed=1" in out
            files.append((s.read_bytes(), l.read_bytes()))
        assert files[0] == files[1]


class TestTrain:
    def test_retrain_is_byte_identical(self, workspace, tmp_path):
        out = tmp_path / "model2.sfcm"
        code, _, _ = run_cli(
            "train", "--config", str(workspace / "config.yaml"),
            "--series", str(workspace / "train.txt"),
            "--labels", str(workspace / "train-labels.csv"),
            "--out", str(out),
        )
        assert code == 0
        assert out.read_bytes() == (workspace / "model.sfcm").read_bytes()

    def test_empty_labels_name_the_class(self, workspace, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("")
        code, _, err = run_cli(
            "train", "--config", str(workspace / "config.yaml"),
            "--series", str(workspace / "train.txt"),
            "--labels", str(empty),
            "--out", str(tmp_path / "model.sfcm"),
        )
        assert code == 3
        assert "sine" in err


class TestClassify:
    def classify(self, workspace, out, *extra):
        return run_cli(
            "classify", "--model", str(workspace / "model.sfcm"),
            "--series", str(workspace / "test.txt"),
            "--config", str(workspace / "config.yaml"),
            "--out", str(out), *extra,
        )

    def test_detections_inside_every_planted_bag(self, workspace, tmp_path):
        out = tmp_path / "pred.csv"
        code, _, err = self.classify(workspace, out)
        assert code == 0, err
        track = load_predictions(str(out))
        from shapefeat.data import load_labels

        bags = load_labels(str(workspace / "test-labels.csv"), track.series_length)
        hits = {}
        for pos, cls, _ in track.detections():
            for r in bags.regions:
                if r.start <= pos < r.end:
                    hits.setdefault((r.start, r.class_id), set()).add(cls)
        for r in bags.regions:
            got = hits.get((r.start, r.class_id), set())
            if r.class_id in ("sine", "flat"):
                assert r.class_id in got, f"missed {r.class_id} bag at {r.start}"
                assert got == {r.class_id}, f"cross-class hit in {r.class_id} bag"
            else:
                assert got == set(), f"detections inside confuser bag at {r.start}"

    def test_zero_threshold_rejected(self, workspace, tmp_path):
        code, _, err = self.classify(
            workspace, tmp_path / "pred.csv", "--threshold", "sine=0"
        )
        assert code == 2
        assert "must be > 0" in err

    def test_deterministic(self, workspace, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert self.classify(workspace, a)[0] == 0
        assert self.classify(workspace, b)[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_short_series_is_model_error(self, workspace, tmp_path):
        short = tmp_path / "short.txt"
        short.write_text("\n".join(str(float(i)) for i in range(10)) + "\n")
        code, _, err = run_cli(
            "classify", "--model", str(workspace / "model.sfcm"),
            "--series", str(short), "--out", str(tmp_path / "pred.csv"),
        )
        assert code == 3
        assert not (tmp_path / "pred.csv").exists()


class TestEval:
    def test_hand_built_fixture(self, tmp_path):
        pred = tmp_path / "pred.csv"
        pred.write_text(
            "# series_length: 103\n# m: 4\n# stride: 1\n# classes: a,b\n"
            "position,class,score\n"
            "5,a,0.9\n"          # inside first a-bag
            "30,a,0.8\n"         # stray inside the b-bag
            "31,a,0.7\n"         # second stray in the same bag counts once
            "95,b,0.6\n"         # gap detection, ignored
        )
        labels = tmp_path / "bags.csv"
        labels.write_text("0,10,a\n20,40,b\n50,60,a\n70,80,b\n")
        out = tmp_path / "report.csv"
        code, stdout, _ = run_cli(
            "eval", "--predictions", str(pred), "--labels", str(labels),
            "--class", "a", "--out", str(out),
        )
        assert code == 0
        # Hand count: a-bags -> tp=1 (pos 5), fn=1 (bag 50); b-bags -> fp=1, tn=1.
        lines = out.read_text().splitlines()
        assert lines[0] == "class,tp,fp,fn,tn,precision,recall,accuracy"
        assert lines[1].startswith("a,1,1,1,1,")
        assert "tp=1 fp=1 fn=1 tn=1" in stdout

    def test_empty_predictions_all_false_negatives(self, tmp_path):
        pred = tmp_path / "pred.csv"
        pred.write_text(
            "# series_length: 103\n# m: 4\n# stride: 1\n# classes: a\n"
            "position,class,score\n"
        )
        labels = tmp_path / "bags.csv"
        labels.write_text("0,10,a\n20,30,a\n40,50,a\n")
        out = tmp_path / "report.csv"
        code, _, _ = run_cli(
            "eval", "--predictions", str(pred), "--labels", str(labels),
            "--class", "a", "--out", str(out),
        )
        assert code == 0
        assert out.read_text().splitlines()[1].startswith("a,0,0,3,0,")

    def test_rerun_identical_bytes(self, tmp_path):
        pred = tmp_path / "pred.csv"
        pred.write_text(
            "# series_length: 53\n# m: 4\n# stride: 1\n# classes: a\n"
            "position,class,score\n10,a,0.75\n"
        )
        labels = tmp_path / "bags.csv"
        labels.write_text("5,15,a\n")
        outs = []
        for tag in ("r1", "r2"):
            out = tmp_path / f"{tag}.csv"
            assert run_cli(
                "eval", "--predictions", str(pred), "--labels", str(labels),
                "--class", "a", "--out", str(out),
            )[0] == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_failure_leaves_no_output(self, tmp_path):
        pred = tmp_path / "pred.csv"
        pred.write_text(
            "# series_length: 53\n# m: 4\n# stride: 1\n# classes: a\n"
            "position,class,score\n"
        )
        bad = tmp_path / "bags.csv"
        bad.write_text("0,20,a\n10,30,b\n")  # overlap
        out = tmp_path / "report.csv"
        code, _, _ = run_cli(
            "eval", "--predictions", str(pred), "--labels", str(bad),
            "--class", "a", "--out", str(out),
        )
        assert code == 2
        assert not out.exists()


class TestCompare:
    def test_grid_shape_and_dominance(self, workspace, tmp_path):
        out = tmp_path / "grid.csv"
        code, _, err = run_cli(
            "compare", "--model", str(workspace / "model.sfcm"),
            "--series", str(workspace / "test.txt"),
            "--labels", str(workspace / "test-labels.csv"),
            "--config", str(workspace / "config.yaml"),
            "--out", str(out),
        )
        assert code == 0, err
        lines = out.read_text().splitlines()
        assert lines[0] == "variant,class,tp,fp,fn,tn,precision,recall,accuracy"
        rows = [line.split(",") for line in lines[1:]]
        assert len(rows) == 6  # 3 variants x 2 classes
        acc = {(r[0], r[1]): float(r[8]) for r in rows}
        for cls in ("sine", "flat"):
            assert acc[("combined", cls)] >= max(acc[("shape", cls)], acc[("feature", cls)])

    def test_shape_only_model_degenerates(self, workspace, tmp_path):
        config = tmp_path / "shape-only.yaml"
        config.write_text(SHAPE_ONLY_CONFIG)
        model = tmp_path / "model.sfcm"
        code, _, err = run_cli(
            "train", "--config", str(config),
            "--series", str(workspace / "train.txt"),
            "--labels", str(workspace / "train-labels.csv"),
            "--out", str(model),
        )
        assert code == 0, err
        out = tmp_path / "grid.csv"
        code, _, err = run_cli(
            "compare", "--model", str(model),
            "--series", str(workspace / "test.txt"),
            "--labels", str(workspace / "test-labels.csv"),
            "--config", str(config), "--out", str(out),
        )
        assert code == 0, err
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        by_variant = {r[0]: r[2:] for r in rows if r[1] == "sine"}
        assert by_variant["shape"] == by_variant["combined"]


class TestRoc:
    def test_rows_and_columns(self, workspace, tmp_path):
        out = tmp_path / "roc.csv"
        weights = ",".join(str(w) for w in (0.1, 0.2, 0.4, 0.6, 0.8, 1.0, 1.5, 2.0, 3.0, 4.0))
        code, _, err = run_cli(
            "roc", "--model", str(workspace / "model.sfcm"),
            "--series", str(workspace / "test.txt"),
            "--labels", str(workspace / "test-labels.csv"),
            "--class", "sine", "--weights", weights,
            "--config", str(workspace / "config.yaml"),
            "--out", str(out),
        )
        assert code == 0, err
        lines = out.read_text().splitlines()
        assert lines[0] == "weight,precision,recall,tp,fp,fn,tn"
        assert len(lines) == 11

    def test_needs_two_weights(self, workspace, tmp_path):
        code, _, _ = run_cli(
            "roc", "--model", str(workspace / "model.sfcm"),
            "--series", str(workspace / "test.txt"),
            "--labels", str(workspace / "test-labels.csv"),
            "--class", "sine", "--weights", "1.0",
            "--out", str(tmp_path / "roc.csv"),
        )
        assert code == 2


class TestFreq:
    def write_predictions(self, path, positions, rate=None):
        lines = ["# series_length: 1003", "# m: 4", "# stride: 1", "# classes: a"]
        if rate is not None:
            lines.append(f"# sample_rate_hz: {rate}")
        lines.append("position,class,score")
        lines.extend(f"{p},a,0.9" for p in positions)
        Path(path).write_text("\n".join(lines) + "\n")

    def test_partition_sums(self, tmp_path):
        pred = tmp_path / "pred.csv"
        self.write_predictions(pred, [5, 100, 101, 700])
        out = tmp_path / "freq.csv"
        code, _, _ = run_cli(
            "freq", "--predictions", str(pred), "--class", "a",
            "--window", "100", "--step", "100", "--out", str(out),
        )
        assert code == 0
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        assert sum(int(c) for _, c in rows) == 4

    def test_time_units_resolve_with_sample_rate(self, tmp_path):
        pred = tmp_path / "pred.csv"
        self.write_predictions(pred, [10], rate=100.0)
        out = tmp_path / "freq.csv"
        code, stdout, _ = run_cli(
            "freq", "--predictions", str(pred), "--class", "a",
            "--window", "15min", "--step", "15min", "--out", str(out),
        )
        assert code == 0
        assert "windows of 90000 samples" in stdout
        rows = out.read_text().splitlines()[1:]
        assert rows == ["0,1"]

    def test_time_units_without_rate_rejected(self, tmp_path):
        pred = tmp_path / "pred.csv"
        self.write_predictions(pred, [10])
        code, _, err = run_cli(
            "freq", "--predictions", str(pred), "--class", "a",
            "--window", "15min", "--step", "15min",
            "--out", str(tmp_path / "freq.csv"),
        )
        assert code == 2
        assert "sample_rate_hz" in err


class TestErrorPaths:
    def test_unknown_flag_is_usage_error(self):
        code, _, _ = run_cli("classify", "--bogus")
        assert code == 1

    def test_missing_subcommand_is_usage_error(self):
        code, _, _ = run_cli()
        assert code == 1

    def test_missing_file_is_data_error(self, workspace, tmp_path):
        code, _, err = run_cli(
            "classify", "--model", str(workspace / "model.sfcm"),
            "--series", str(tmp_path / "absent.txt"),
            "--out", str(tmp_path / "pred.csv"),
        )
        assert code == 2
        assert "error:" in err

    def test_unknown_config_key_rejected(self, workspace, tmp_path):
        config = tmp_path / "bad.yaml"
        config.write_text("classes: []\nbogus_key: 1\n")
        code, _, err = run_cli(
            "train", "--config", str(config),
            "--series", str(workspace / "train.txt"),
            "--labels", str(workspace / "train-labels.csv"),
            "--out", str(tmp_path / "m.sfcm"),
        )
        assert code == 2
        assert "bogus_key" in err
