#!/usr/bin/env python3
"""End-to-end demo on the bundled synthetic fixtures.

Trains the binary gate and the two-stage category/target models with both
engines, prints the score reports, and leaves run files, model bundles, and
probability dumps under ./demo_out/. Everything is deterministic, so two
invocations produce byte-identical artifacts.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from misotweet import pipeline  # noqa: E402
from misotweet.evaluation import report_table  # noqa: E402
from misotweet.models import GBDTConfig  # noqa: E402

FIXTURES = ROOT / "tests" / "fixtures"


def main() -> None:
    out_root = Path("demo_out")
    for engine in ("lr", "gbdt"):
        out = out_root / engine
        out.mkdir(parents=True, exist_ok=True)
        cfg = pipeline.RunConfig(
            train_path=str(FIXTURES / "synthetic_train.tsv"),
            test_path=str(FIXTURES / "synthetic_test.tsv"),
            word_embeddings_path=str(FIXTURES / "glove_fixture.txt"),
            sentence_embeddings_paths=(str(FIXTURES / "sent_fixture.tsv"),),
            engine=engine,
            gbdt_config=GBDTConfig(n_trees=20, max_depth=3, min_child_hessian=0.2),
            task="B",
            run_file=str(out / "run.tsv"),
            model_dir=str(out / "models"),
        )
        result = pipeline.run_task_b(cfg)
        pipeline.write_probabilities(out / "probabilities.tsv", result.predictions)
        print(f"=== engine {engine} (two-stage task, all feature blocks) ===")
        print(report_table(result.report))


if __name__ == "__main__":
    main()
