"""End-to-end orchestration of the misogyny task and the category/target task.

Both tasks share one feature space: TF-IDF is fit on the training tokens
only, and every enabled block uses the same preprocessed tokens. The
category/target task is two-stage: the binary gate runs first, tweets it
lets through get category and target labels from one-vs-rest models trained
on the gold-misogynous slice of the training data, and everything else is
emitted as (0, 0, 0). Identical config and inputs give byte-identical run
and model files.

A trained "bundle" is a directory holding ``features.tsv`` (the persisted
feature space) plus ``gate.model`` and, for the two-stage task,
``category.model`` and ``target.model`` — enough to predict later without
the training data.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import corpus, evaluation, features, models, preprocess
from .corpus import Category, Dataset, Target
from .errors import ConfigError, DataError

log = logging.getLogger(__name__)

ENGINE_LR = "lr"
ENGINE_GBDT = "gbdt"

FEATURE_SPACE_FILE = "features.tsv"
GATE_MODEL = "gate.model"
CATEGORY_MODEL = "category.model"
TARGET_MODEL = "target.model"
_MODEL_FILES = {"gate": GATE_MODEL, "category": CATEGORY_MODEL, "target": TARGET_MODEL}


@dataclass(frozen=True)
class RunConfig:
    train_path: str | None = None
    test_path: str | None = None
    word_embeddings_path: str | None = None
    sentence_embeddings_paths: tuple[str, ...] = ()
    blocks: tuple[str, ...] = features.BLOCK_ORDER
    engine: str = ENGINE_LR
    lr_config: models.LRConfig = field(default_factory=models.LRConfig)
    gbdt_config: models.GBDTConfig = field(default_factory=models.GBDTConfig)
    task: str = "A"
    test_labeled: bool = True
    tfidf_min_df: int = 1
    tfidf_max_features: int | None = None
    include_none_in_task_b: bool = False
    holdout_fraction: float = 0.8
    seed: int = 7
    threads: int = 1
    strict: bool = True
    model_dir: str | None = None
    run_file: str | None = None

    def __post_init__(self):
        if self.engine not in (ENGINE_LR, ENGINE_GBDT):
            raise ConfigError(f"unknown engine {self.engine!r}")
        if self.task not in ("A", "B"):
            raise ConfigError(f"task must be 'A' or 'B', got {self.task!r}")
        if not self.blocks:
            raise ConfigError("at least one feature block must be enabled")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")


@dataclass(frozen=True)
class PredictionRecord:
    id: str
    misogynous: int
    category: Category
    target: Target
    gate_probability: float
    category_probabilities: dict[str, float] | None = None
    target_probabilities: dict[str, float] | None = None

    def __post_init__(self):
        # A non-misogynous verdict can never carry category/target labels.
        # (The reverse direction is guaranteed by the two-stage task, whose
        # stage-2 models always produce a real class; a binary-only run
        # legitimately emits misogynous=1 with both columns rendered as 0.)
        if self.misogynous == 0 and (
            self.category is not Category.NONE or self.target is not Target.NONE
        ):
            raise DataError(
                f"inconsistent prediction for id {self.id!r}: "
                f"(0, {self.category.value}, {self.target.value})"
            )

    def as_tuple(self) -> corpus.PredictionTuple:
        return (self.id, self.misogynous, self.category, self.target)


@dataclass
class TaskResult:
    predictions: list[PredictionRecord]
    report: evaluation.ScoreReport | None
    models: dict[str, object]
    vocab: features.TfidfVocabulary | None


@dataclass
class FeatureSources:
    vocab: features.TfidfVocabulary | None
    word_table: features.WordEmbeddingTable | None
    sent_store: features.SentenceEmbeddingStore | None
    blocks: tuple[str, ...]


def preprocess_dataset(
    dataset: Dataset, pre_cfg: preprocess.PreprocessConfig | None = None
) -> list[preprocess.TokenSequence]:
    cfg = pre_cfg or preprocess.default_config()
    return [preprocess.preprocess(t.text, cfg, source_id=t.id) for t in dataset]


def _check_blocks(blocks: Sequence[str]) -> tuple[str, ...]:
    unknown = set(blocks) - set(features.BLOCK_ORDER)
    if unknown:
        raise ConfigError(f"unknown feature block(s): {sorted(unknown)}")
    return tuple(b for b in features.BLOCK_ORDER if b in blocks)


def _load_embedding_sources(cfg: RunConfig, blocks: tuple[str, ...]):
    word_table = None
    if "bowv" in blocks:
        if not cfg.word_embeddings_path:
            raise ConfigError("bowv block enabled but no word embedding path configured")
        word_table = features.load_word_embeddings(cfg.word_embeddings_path, strict=cfg.strict)
    sent_store = None
    if "sentence" in blocks:
        if not cfg.sentence_embeddings_paths:
            raise ConfigError("sentence block enabled but no embedding paths configured")
        sent_store = features.merge_sentence_stores(
            features.load_sentence_embeddings(p) for p in cfg.sentence_embeddings_paths
        )
    return word_table, sent_store


def build_sources(
    cfg: RunConfig, train_tokens: Sequence[preprocess.TokenSequence]
) -> FeatureSources:
    """Fit/load everything featurization needs, from training data only."""
    blocks = _check_blocks(cfg.blocks)
    vocab = None
    if "tfidf" in blocks:
        vocab = features.fit_tfidf(
            list(train_tokens), min_df=cfg.tfidf_min_df, max_features=cfg.tfidf_max_features
        )
    word_table, sent_store = _load_embedding_sources(cfg, blocks)
    return FeatureSources(vocab=vocab, word_table=word_table, sent_store=sent_store, blocks=blocks)


def featurize_dataset(
    dataset: Dataset,
    tokens: Sequence[preprocess.TokenSequence],
    sources: FeatureSources,
) -> list[features.FeatureVector]:
    return [
        features.featurize(
            tok,
            tweet.id,
            vocab=sources.vocab,
            word_table=sources.word_table,
            sent_store=sources.sent_store,
            enabled_blocks=sources.blocks,
        )
        for tweet, tok in zip(dataset, tokens)
    ]


def _train_binary(cfg: RunConfig, X, y) -> object:
    if cfg.engine == ENGINE_LR:
        return models.train_logreg(X, y, cfg.lr_config)
    return models.train_gbdt(X, y, cfg.gbdt_config, n_threads=cfg.threads)


def _predict_binary(model, X) -> np.ndarray:
    if isinstance(model, models.LinearModel):
        return models.predict_logreg_batch(model, X)
    return models.predict_gbdt_batch(model, X)


def _train_stage2(cfg: RunConfig, train: Dataset, train_vecs) -> tuple[object, object]:
    """Category and target one-vs-rest models, trained on gold-misogynous rows."""
    mis_idx = [i for i, t in enumerate(train) if t.misogynous == 1]
    if not mis_idx:
        raise DataError("no misogynous tweets in the training data")
    mis_vecs = [train_vecs[i] for i in mis_idx]
    cat_labels = [train.tweets[i].category.value for i in mis_idx]
    targ_labels = [train.tweets[i].target.value for i in mis_idx]
    engine = models.ENGINE_LOGREG if cfg.engine == ENGINE_LR else models.ENGINE_GBDT
    engine_cfg = cfg.lr_config if cfg.engine == ENGINE_LR else cfg.gbdt_config
    category_model = models.train_multiclass(
        mis_vecs, cat_labels, [c.value for c in corpus.REAL_CATEGORIES],
        engine, engine_cfg, n_threads=cfg.threads,
    )
    target_model = models.train_multiclass(
        mis_vecs, targ_labels, [t.value for t in corpus.REAL_TARGETS],
        engine, engine_cfg, n_threads=cfg.threads,
    )
    return category_model, target_model


def _predict_records(
    test: Dataset,
    test_vecs,
    gate,
    category_model=None,
    target_model=None,
) -> list[PredictionRecord]:
    gate_probs = _predict_binary(gate, test_vecs)
    records: list[PredictionRecord] = []
    for tweet, vec, p in zip(test, test_vecs, gate_probs):
        if p < 0.5:
            records.append(
                PredictionRecord(
                    id=tweet.id, misogynous=0, category=Category.NONE,
                    target=Target.NONE, gate_probability=float(p),
                )
            )
        elif category_model is None:
            records.append(
                PredictionRecord(
                    id=tweet.id, misogynous=1, category=Category.NONE,
                    target=Target.NONE, gate_probability=float(p),
                )
            )
        else:
            cat_probs = models.predict_multiclass_proba(category_model, vec)
            targ_probs = models.predict_multiclass_proba(target_model, vec)
            records.append(
                PredictionRecord(
                    id=tweet.id,
                    misogynous=1,
                    category=Category(category_model.classes[int(np.argmax(cat_probs))]),
                    target=Target(target_model.classes[int(np.argmax(targ_probs))]),
                    gate_probability=float(p),
                    category_probabilities=dict(
                        zip(category_model.classes, cat_probs.tolist())
                    ),
                    target_probabilities=dict(
                        zip(target_model.classes, targ_probs.tolist())
                    ),
                )
            )
    return records


def _score(cfg: RunConfig, test: Dataset, records: list[PredictionRecord]):
    if not test.has_labels:
        return None
    if cfg.task == "A":
        gold = [t.misogynous for t in test]
        pred = [r.misogynous for r in records]
        return evaluation.ScoreReport(
            accuracy=evaluation.accuracy(gold, pred),
            per_class=evaluation.per_class_report(gold, pred, (0, 1)),
            macro_f1=evaluation.macro_f1(gold, pred, (0, 1)),
        )
    return score_task_b(
        test, [r.as_tuple() for r in records], include_none=cfg.include_none_in_task_b
    )


def _load_datasets(cfg: RunConfig) -> tuple[Dataset, Dataset]:
    if not cfg.train_path:
        raise ConfigError("no training data path configured")
    train = corpus.load_dataset(cfg.train_path, labeled=True, strict=cfg.strict)
    if cfg.test_path:
        test = corpus.load_dataset(cfg.test_path, labeled=cfg.test_labeled, strict=cfg.strict)
        return train, test
    log.info("no test file; using a stratified %.0f%% holdout (seed %d)",
             100 * cfg.holdout_fraction, cfg.seed)
    return corpus.split(train, cfg.holdout_fraction, cfg.seed)


def run_task(cfg: RunConfig) -> TaskResult:
    """Train on the train split, predict the test split, score, and emit files."""
    train, test = _load_datasets(cfg)
    train_tokens = preprocess_dataset(train)
    test_tokens = preprocess_dataset(test)
    sources = build_sources(cfg, train_tokens)
    train_vecs = featurize_dataset(train, train_tokens, sources)
    test_vecs = featurize_dataset(test, test_tokens, sources)

    y = np.array([t.misogynous for t in train])
    gate = _train_binary(cfg, train_vecs, y)
    out_models: dict[str, object] = {"gate": gate}
    category_model = target_model = None
    if cfg.task == "B":
        category_model, target_model = _train_stage2(cfg, train, train_vecs)
        out_models["category"] = category_model
        out_models["target"] = target_model

    records = _predict_records(test, test_vecs, gate, category_model, target_model)
    report = _score(cfg, test, records)
    if cfg.run_file:
        corpus.write_run_file(cfg.run_file, [r.as_tuple() for r in records])
    if cfg.model_dir:
        save_bundle(cfg.model_dir, sources, out_models)
    return TaskResult(predictions=records, report=report, models=out_models,
                      vocab=sources.vocab)


def run_task_a(cfg: RunConfig) -> TaskResult:
    return run_task(replace(cfg, task="A"))


def run_task_b(cfg: RunConfig) -> TaskResult:
    return run_task(replace(cfg, task="B"))


def train_task(cfg: RunConfig) -> tuple[dict[str, object], FeatureSources]:
    """Train on the full training file and (optionally) persist the bundle."""
    if not cfg.train_path:
        raise ConfigError("no training data path configured")
    train = corpus.load_dataset(cfg.train_path, labeled=True, strict=cfg.strict)
    train_tokens = preprocess_dataset(train)
    sources = build_sources(cfg, train_tokens)
    train_vecs = featurize_dataset(train, train_tokens, sources)
    y = np.array([t.misogynous for t in train])
    out_models: dict[str, object] = {"gate": _train_binary(cfg, train_vecs, y)}
    if cfg.task == "B":
        category_model, target_model = _train_stage2(cfg, train, train_vecs)
        out_models["category"] = category_model
        out_models["target"] = target_model
    if cfg.model_dir:
        save_bundle(cfg.model_dir, sources, out_models)
    return out_models, sources


def save_bundle(model_dir: str | Path, sources: FeatureSources, out_models: dict) -> None:
    model_dir = Path(model_dir)
    model_dir.mkdir(parents=True, exist_ok=True)
    features.save_feature_space(
        model_dir / FEATURE_SPACE_FILE,
        sources.blocks,
        vocab=sources.vocab,
        bowv_dim=sources.word_table.dim if sources.word_table else None,
        sentence_dim=sources.sent_store.dim if sources.sent_store else None,
    )
    for role, model in out_models.items():
        models.save_model(model, model_dir / _MODEL_FILES[role])


def predict_task(cfg: RunConfig) -> TaskResult:
    """Predict with a previously trained bundle; scores when labels exist."""
    if not cfg.model_dir:
        raise ConfigError("predict needs a model directory")
    if not cfg.test_path:
        raise ConfigError("predict needs a data file")
    model_dir = Path(cfg.model_dir)
    blocks, vocab, bowv_dim, sentence_dim = features.load_feature_space(
        model_dir / FEATURE_SPACE_FILE
    )
    word_table, sent_store = _load_embedding_sources(replace(cfg, blocks=blocks), blocks)
    if word_table is not None and bowv_dim is not None and word_table.dim != bowv_dim:
        raise DataError(f"bundle expects {bowv_dim}-d word embeddings, got {word_table.dim}")
    if sent_store is not None and sentence_dim is not None and sent_store.dim != sentence_dim:
        raise DataError(
            f"bundle expects {sentence_dim}-d sentence embeddings, got {sent_store.dim}"
        )
    sources = FeatureSources(vocab=vocab, word_table=word_table,
                             sent_store=sent_store, blocks=blocks)

    gate = models.load_model(model_dir / GATE_MODEL)
    category_model = target_model = None
    task = "A"
    if (model_dir / CATEGORY_MODEL).is_file():
        category_model = models.load_multiclass_model(model_dir / CATEGORY_MODEL)
        target_model = models.load_multiclass_model(model_dir / TARGET_MODEL)
        task = "B"

    test = corpus.load_dataset(cfg.test_path, labeled=cfg.test_labeled, strict=cfg.strict)
    test_tokens = preprocess_dataset(test)
    test_vecs = featurize_dataset(test, test_tokens, sources)
    records = _predict_records(test, test_vecs, gate, category_model, target_model)
    report = _score(replace(cfg, task=task), test, records)
    if cfg.run_file:
        corpus.write_run_file(cfg.run_file, [r.as_tuple() for r in records])
    return TaskResult(predictions=records, report=report,
                      models={"gate": gate}, vocab=vocab)


def score_task_b(
    test: Dataset,
    predictions: Sequence[corpus.PredictionTuple],
    include_none: bool = False,
) -> evaluation.ScoreReport:
    """Score predictions against a labeled test set.

    Default restricts category/target scoring to gold-misogynous tweets;
    ``include_none`` scores all rows with NONE as an extra class. The gate
    accuracy over all rows is reported either way.
    """
    by_id = {tid: (mis, cat, targ) for tid, mis, cat, targ in predictions}
    missing = [t.id for t in test if t.id not in by_id]
    if missing:
        raise DataError(f"predictions missing for {len(missing)} tweet(s), first: {missing[0]!r}")
    gold_mis = [t.misogynous for t in test]
    pred_mis = [by_id[t.id][0] for t in test]
    rows = list(test) if include_none else [t for t in test if t.misogynous == 1]
    if not rows:
        raise DataError("no gold-misogynous tweets to score the category/target task on")
    gold_pairs = [(t.category, t.target) for t in rows]
    pred_pairs = [(by_id[t.id][1], by_id[t.id][2]) for t in rows]
    pair_report = evaluation.task_b_score(gold_pairs, pred_pairs, include_none=include_none)
    return replace(pair_report, accuracy=evaluation.accuracy(gold_mis, pred_mis))


def write_probabilities(path: str | Path, predictions: Sequence[PredictionRecord]) -> None:
    """Diagnostic dump: gate probability plus per-class stage-2 probabilities."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("id\tp_misogynous\tcategory_probs\ttarget_probs\n")
        for r in predictions:
            cat = (
                ";".join(f"{c}={p!r}" for c, p in r.category_probabilities.items())
                if r.category_probabilities
                else "-"
            )
            targ = (
                ";".join(f"{t}={p!r}" for t, p in r.target_probabilities.items())
                if r.target_probabilities
                else "-"
            )
            fh.write(f"{r.id}\t{r.gate_probability!r}\t{cat}\t{targ}\n")
