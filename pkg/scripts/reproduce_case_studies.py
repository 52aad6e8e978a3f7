#!/usr/bin/env python3
"""Emit the SHAPE / FEATURE / COMBINED metrics grid for an external dataset.

The published activity-recognition and poultry-behavior excerpts behind the
reference results are not fully redistributable, so this script is
data-gated: you supply the recordings yourself, converted to the package's
series/label formats, plus a run config describing the classes. Given

  --train-series / --train-labels   training recording + weak labels
  --test-series  / --test-labels    evaluation recording + weak labels
  --config                          YAML run config (classes, m,
                                    exclusion_zone, features, thresholds)

it trains the per-class models, runs the three classification variants, and
writes the comparison grid for manual inspection against the reference
numbers. Exit codes follow the CLI: 0 success, 2 missing/invalid data.

Example (quarter-second exclusion zone at 100 Hz):

  python scripts/reproduce_case_studies.py \
      --train-series chicken_train.txt --train-labels chicken_train.csv \
      --test-series chicken_test.txt --test-labels chicken_test.csv \
      --config chicken.yaml --out chicken_grid.csv
"""
import argparse
import os
import sys

from shapefeat import cli as shapefeat_cli


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    parser.add_argument("--train-series", required=True)
    parser.add_argument("--train-labels", required=True)
    parser.add_argument("--test-series", required=True)
    parser.add_argument("--test-labels", required=True)
    parser.add_argument("--config", required=True)
    parser.add_argument("--out", required=True)
    parser.add_argument(
        "--model-out", default=None, help="optionally keep the trained model file"
    )
    args = parser.parse_args(argv)

    missing = [
        path
        for path in (
            args.train_series,
            args.train_labels,
            args.test_series,
            args.test_labels,
            args.config,
        )
        if not os.path.exists(path)
    ]
    if missing:
        print(
            "error: missing dataset files (this reproduction is data-gated; "
            "supply the recordings in the documented formats): "
            + ", ".join(missing),
            file=sys.stderr,
        )
        return 2

    model_path = args.model_out or args.out + ".model"
    code = shapefeat_cli.main(
        [
            "train",
            "--config", args.config,
            "--series", args.train_series,
            "--labels", args.train_labels,
            "--out", model_path,
        ]
    )
    if code != 0:
        return code
    code = shapefeat_cli.main(
        [
            "compare",
            "--model", model_path,
            "--series", args.test_series,
            "--labels", args.test_labels,
            "--config", args.config,
            "--out", args.out,
        ]
    )
    if code == 0 and args.model_out is None:
        os.unlink(model_path)
    return code


if __name__ == "__main__":
    sys.exit(main())
