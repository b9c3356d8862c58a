#!/usr/bin/env python3
"""Reproduction run against the official shared-task data.

The corpus is not redistributable, so paths come from the same environment
variables the acceptance suite uses:

    MISOTWEET_OFFICIAL_TRAIN  labeled training TSV (4000 tweets)
    MISOTWEET_OFFICIAL_TEST   labeled test TSV (1000 tweets)
    MISOTWEET_GLOVE           300-d word embedding text file
    MISOTWEET_SENT            exported 512-d sentence embeddings covering
                              every train+test tweet id (see frontend/)

Runs the binary task with the LR preset (accuracy target bracket
[0.65, 0.75] around the reported 0.704) and the two-stage task with the
boosted preset (average macro-F1 bracket [0.30, 0.45] around 0.37), then
prints both reports. Expect the boosted run to take tens of minutes; pass
--max-features/--threads to trade fidelity for speed.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from misotweet import pipeline  # noqa: E402
from misotweet.evaluation import report_table  # noqa: E402
from misotweet.models import GBDTConfig  # noqa: E402

ENV_VARS = ("MISOTWEET_OFFICIAL_TRAIN", "MISOTWEET_OFFICIAL_TEST",
            "MISOTWEET_GLOVE", "MISOTWEET_SENT")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="official_out")
    parser.add_argument("--threads", type=int, default=4)
    parser.add_argument("--max-features", type=int, default=2000,
                        help="TF-IDF vocabulary cutoff for the boosted run (0 = none)")
    parser.add_argument("--skip-boosted", action="store_true",
                        help="only run the LR binary task")
    args = parser.parse_args()

    missing = [v for v in ENV_VARS if not os.environ.get(v)]
    if missing:
        print(f"missing environment variable(s): {', '.join(missing)}", file=sys.stderr)
        return 1

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    common = dict(
        train_path=os.environ["MISOTWEET_OFFICIAL_TRAIN"],
        test_path=os.environ["MISOTWEET_OFFICIAL_TEST"],
        word_embeddings_path=os.environ["MISOTWEET_GLOVE"],
        sentence_embeddings_paths=(os.environ["MISOTWEET_SENT"],),
        threads=args.threads,
        strict=False,
    )

    t0 = time.perf_counter()
    result_a = pipeline.run_task_a(pipeline.RunConfig(
        engine="lr", task="A", run_file=str(out / "run_a.tsv"),
        model_dir=str(out / "models_a"), **common))
    print(f"=== binary task, LR preset ({time.perf_counter() - t0:.0f}s) ===")
    print(report_table(result_a.report))
    in_bracket = 0.65 <= result_a.report.accuracy <= 0.75
    print(f"accuracy bracket [0.65, 0.75]: {'PASS' if in_bracket else 'MISS'}\n")

    if args.skip_boosted:
        return 0

    t0 = time.perf_counter()
    result_b = pipeline.run_task_b(pipeline.RunConfig(
        engine="gbdt",
        gbdt_config=GBDTConfig(),
        task="B",
        tfidf_max_features=args.max_features or None,
        run_file=str(out / "run_b.tsv"),
        model_dir=str(out / "models_b"),
        **common))
    print(f"=== two-stage task, boosted preset ({time.perf_counter() - t0:.0f}s) ===")
    print(report_table(result_b.report))
    in_bracket = 0.30 <= result_b.report.task_b_average <= 0.45
    print(f"average macro-F1 bracket [0.30, 0.45]: {'PASS' if in_bracket else 'MISS'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
