"""Command-line surface.

Subcommands: ``stats``, ``featurize``, ``train``, ``predict``, ``evaluate``,
``run``. A JSON config file given with ``--config`` overrides built-in
defaults; flags given explicitly on the command line win over the config.
Exit codes: 0 success, 1 usage/config error, 2 data or model error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus, evaluation, features, models, pipeline
from .errors import ConfigError, DataError, MisotweetError


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage problems; the CLI contract says 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _build_parser() -> _Parser:
    parser = _Parser(prog="misotweet", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="command")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override it")
    common.add_argument("--lenient", action="store_true", default=None,
                        help="skip malformed rows instead of aborting")

    feats = argparse.ArgumentParser(add_help=False)
    feats.add_argument("--blocks", help="comma list of feature blocks "
                       "(tfidf,bowv,sentence)")
    feats.add_argument("--word-embeddings", help="GloVe-style text file for the bowv block")
    feats.add_argument("--sentence-embeddings", action="append",
                       help="sentence-embedding TSV (repeatable)")
    feats.add_argument("--tfidf-min-df", type=int)
    feats.add_argument("--tfidf-max-features", type=int)

    engine = argparse.ArgumentParser(add_help=False)
    engine.add_argument("--engine", choices=("lr", "gbdt"))
    engine.add_argument("--gbdt-preset", choices=tuple(models.PRESETS))
    engine.add_argument("--lr-c", type=float, help="inverse regularization strength")
    engine.add_argument("--gbdt-trees", type=int)
    engine.add_argument("--gbdt-depth", type=int)
    engine.add_argument("--threads", type=int)
    engine.add_argument("--seed", type=int)

    p = sub.add_parser("stats", parents=[common],
                       help="label distribution of a dataset file")
    p.add_argument("--data", required=True)
    p.add_argument("--unlabeled", action="store_true")

    p = sub.add_parser("featurize", parents=[common, feats],
                       help="dump feature vectors (or preprocessed tokens)")
    p.add_argument("--train", required=True, help="training file the space is fit on")
    p.add_argument("--data", help="file to transform (defaults to the training file)")
    p.add_argument("--unlabeled", action="store_true")
    p.add_argument("--emit", choices=("vectors", "tokens"), default="vectors")
    p.add_argument("--out", help="output TSV (defaults to stdout)")

    p = sub.add_parser("train", parents=[common, feats, engine],
                       help="train models and save a bundle")
    p.add_argument("--task", choices=("A", "B"))
    p.add_argument("--train", required=True)
    p.add_argument("--model-dir", required=True)

    p = sub.add_parser("predict", parents=[common, feats],
                       help="predict with a trained bundle")
    p.add_argument("--model-dir", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--unlabeled", action="store_true")
    p.add_argument("--run-file", required=True)
    p.add_argument("--proba-file")

    p = sub.add_parser("evaluate", parents=[common],
                       help="score a run file against gold labels")
    p.add_argument("--gold", required=True)
    p.add_argument("--run", required=True)
    p.add_argument("--task", choices=("A", "B"), help="default: B when the run "
                   "file carries category labels")
    p.add_argument("--include-none", action="store_true", default=None)
    p.add_argument("--tsv", help="also write the report as TSV")

    p = sub.add_parser("run", parents=[common, feats, engine],
                       help="end to end: train, predict, score")
    p.add_argument("--task", choices=("A", "B"))
    p.add_argument("--train")
    p.add_argument("--test")
    p.add_argument("--unlabeled", action="store_true",
                   help="test file has no labels (no report)")
    p.add_argument("--include-none", action="store_true", default=None)
    p.add_argument("--run-file")
    p.add_argument("--model-dir")
    p.add_argument("--proba-file")
    p.add_argument("--report", help="write the score report as TSV")
    return parser


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    try:
        loaded = json.loads(p.read_text("utf-8"))
    except json.JSONDecodeError as err:
        raise ConfigError(f"config file {p} is not valid JSON: {err}") from None
    if not isinstance(loaded, dict):
        raise ConfigError(f"config file {p} must hold a JSON object")
    return loaded


def _pick(args, conf: dict, flag: str, key: str, default):
    value = getattr(args, flag, None)
    if value is not None:
        return value
    return conf.get(key, default)


def _engine_configs(args, conf: dict) -> tuple[models.LRConfig, models.GBDTConfig]:
    lr_kwargs = dict(conf.get("lr", {}))
    if getattr(args, "lr_c", None) is not None:
        lr_kwargs["C"] = args.lr_c
    preset = _pick(args, conf, "gbdt_preset", "gbdt_preset", None)
    gbdt_kwargs = dict(conf.get("gbdt", {}))
    if getattr(args, "gbdt_trees", None) is not None:
        gbdt_kwargs["n_trees"] = args.gbdt_trees
    if getattr(args, "gbdt_depth", None) is not None:
        gbdt_kwargs["max_depth"] = args.gbdt_depth
    try:
        base = models.PRESETS[preset]() if preset else models.GBDTConfig()
        gbdt_cfg = models.GBDTConfig(**{**vars(base), **gbdt_kwargs})
        lr_cfg = models.LRConfig(**lr_kwargs)
    except TypeError as err:
        raise ConfigError(f"bad engine config: {err}") from None
    return lr_cfg, gbdt_cfg


def _blocks(args, conf: dict) -> tuple[str, ...]:
    raw = _pick(args, conf, "blocks", "blocks", None)
    if raw is None:
        return features.BLOCK_ORDER
    if isinstance(raw, str):
        raw = [b.strip() for b in raw.split(",") if b.strip()]
    return tuple(raw)


def _run_config(args, conf: dict, task_default: str = "A") -> pipeline.RunConfig:
    lr_cfg, gbdt_cfg = _engine_configs(args, conf)
    sent = getattr(args, "sentence_embeddings", None)
    if sent is None:
        sent = conf.get("sentence_embeddings", [])
    if isinstance(sent, str):
        sent = [sent]
    lenient = getattr(args, "lenient", None)
    if lenient is None:
        lenient = bool(conf.get("lenient", False))
    return pipeline.RunConfig(
        train_path=_pick(args, conf, "train", "train", None),
        test_path=_pick(args, conf, "test", "test", None) or _pick(args, conf, "data", "data", None),
        word_embeddings_path=_pick(args, conf, "word_embeddings", "word_embeddings", None),
        sentence_embeddings_paths=tuple(sent),
        blocks=_blocks(args, conf),
        engine=_pick(args, conf, "engine", "engine", pipeline.ENGINE_LR),
        lr_config=lr_cfg,
        gbdt_config=gbdt_cfg,
        task=_pick(args, conf, "task", "task", task_default),
        test_labeled=not bool(getattr(args, "unlabeled", False) or conf.get("unlabeled", False)),
        tfidf_min_df=_pick(args, conf, "tfidf_min_df", "tfidf_min_df", 1),
        tfidf_max_features=_pick(args, conf, "tfidf_max_features", "tfidf_max_features", None),
        include_none_in_task_b=bool(
            _pick(args, conf, "include_none", "include_none", False)
        ),
        seed=_pick(args, conf, "seed", "seed", 7),
        threads=_pick(args, conf, "threads", "threads", 1),
        strict=not lenient,
        model_dir=_pick(args, conf, "model_dir", "model_dir", None),
        run_file=_pick(args, conf, "run_file", "run_file", None),
    )


def _cmd_stats(args, conf: dict) -> int:
    labeled = not (args.unlabeled or conf.get("unlabeled", False))
    strict = not (args.lenient or conf.get("lenient", False))
    dataset = corpus.load_dataset(args.data, labeled=labeled, strict=strict)
    if not labeled:
        print(f"total\t{len(dataset)}")
        print("(unlabeled dataset: no label distribution)")
        return 0
    print(corpus.format_distribution(corpus.label_distribution(dataset)))
    return 0


def _cmd_featurize(args, conf: dict) -> int:
    cfg = _run_config(args, conf)
    train = corpus.load_dataset(cfg.train_path, labeled=True, strict=cfg.strict)
    data_path = args.data or args.train
    data_labeled = not args.unlabeled if args.data else True
    data = (
        train
        if data_path == cfg.train_path and data_labeled
        else corpus.load_dataset(data_path, labeled=data_labeled, strict=cfg.strict)
    )
    tokens = pipeline.preprocess_dataset(data)
    out = open(args.out, "w", encoding="utf-8", newline="\n") if args.out else sys.stdout
    try:
        if args.emit == "tokens":
            out.write(corpus.UNLABELED_HEADER + "\n")
            for seq in tokens:
                out.write(f"{seq.source_id}\t{' '.join(seq.tokens)}\n")
            return 0
        train_tokens = pipeline.preprocess_dataset(train)
        sources = pipeline.build_sources(cfg, train_tokens)
        vecs = pipeline.featurize_dataset(data, tokens, sources)
        layout = "|".join(
            f"{b.name}:{b.offset}:{b.length}" for b in (vecs[0].layout if vecs else ())
        )
        out.write(f"# layout\t{layout}\n")
        for vec in vecs:
            dense = vec.to_dense()
            out.write(vec.source_id + "\t" + " ".join(repr(v) for v in dense.tolist()) + "\n")
        return 0
    finally:
        if args.out:
            out.close()


def _cmd_train(args, conf: dict) -> int:
    cfg = _run_config(args, conf)
    pipeline.train_task(cfg)
    names = [pipeline.GATE_MODEL]
    if cfg.task == "B":
        names += [pipeline.CATEGORY_MODEL, pipeline.TARGET_MODEL]
    print(f"saved {', '.join(names)} and {pipeline.FEATURE_SPACE_FILE} to {cfg.model_dir}")
    return 0


def _cmd_predict(args, conf: dict) -> int:
    cfg = _run_config(args, conf)
    result = pipeline.predict_task(cfg)
    if args.proba_file:
        pipeline.write_probabilities(args.proba_file, result.predictions)
    print(f"wrote {len(result.predictions)} predictions to {cfg.run_file}")
    if result.report is not None:
        print(evaluation.report_table(result.report), end="")
    return 0


def _cmd_evaluate(args, conf: dict) -> int:
    strict = not (args.lenient or conf.get("lenient", False))
    gold = corpus.load_dataset(args.gold, labeled=True, strict=strict)
    predictions = corpus.load_run_file(args.run)
    task = args.task or conf.get("task")
    if task is None:
        task = "B" if any(cat is not corpus.Category.NONE for _, _, cat, _ in predictions) else "A"
    include_none = bool(args.include_none or conf.get("include_none", False))
    if task == "B":
        report = pipeline.score_task_b(gold, predictions, include_none=include_none)
    else:
        by_id = {tid: mis for tid, mis, _, _ in predictions}
        missing = [t.id for t in gold if t.id not in by_id]
        if missing:
            raise DataError(
                f"predictions missing for {len(missing)} tweet(s), first: {missing[0]!r}"
            )
        gold_mis = [t.misogynous for t in gold]
        pred_mis = [by_id[t.id] for t in gold]
        report = evaluation.ScoreReport(
            accuracy=evaluation.accuracy(gold_mis, pred_mis),
            per_class=evaluation.per_class_report(gold_mis, pred_mis, (0, 1)),
            macro_f1=evaluation.macro_f1(gold_mis, pred_mis, (0, 1)),
        )
    print(evaluation.report_table(report), end="")
    if args.tsv:
        Path(args.tsv).write_text(evaluation.report_tsv(report), "utf-8")
    return 0


def _cmd_run(args, conf: dict) -> int:
    cfg = _run_config(args, conf)
    result = pipeline.run_task(cfg)
    if getattr(args, "proba_file", None):
        pipeline.write_probabilities(args.proba_file, result.predictions)
    if result.report is not None:
        print(evaluation.report_table(result.report), end="")
        report_path = _pick(args, conf, "report", "report", None)
        if report_path:
            Path(report_path).write_text(evaluation.report_tsv(result.report), "utf-8")
    if cfg.run_file:
        print(f"run file: {cfg.run_file}")
    return 0


_COMMANDS = {
    "stats": _cmd_stats,
    "featurize": _cmd_featurize,
    "train": _cmd_train,
    "predict": _cmd_predict,
    "evaluate": _cmd_evaluate,
    "run": _cmd_run,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(sys.stderr)
            return 1
        conf = _load_config_file(getattr(args, "config", None))
        return _COMMANDS[args.command](args, conf)
    except _UsageError as err:
        print(f"misotweet: error: {err}", file=sys.stderr)
        return 1
    except ConfigError as err:
        print(f"misotweet: config error: {err}", file=sys.stderr)
        return 1
    except MisotweetError as err:
        print(f"misotweet: error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
