#!/usr/bin/env python3
"""Regenerate the checked-in test fixtures deterministically.

Produces, under tests/fixtures/:

* tiny_train.tsv / tiny_test.tsv / tiny_unlabeled.tsv -- 8/4/4 hand-written
  tweets exercising URLs, contractions, emoji, mentions, and digits
* synthetic_train.tsv / synthetic_test.tsv -- 60/20 template tweets with
  exact engineered label counts (asserted below)
* glove_fixture.txt -- 300-d word vectors over the fixtures' stemmed vocab
* sent_fixture.tsv -- 512-d sentence embeddings for every fixture tweet id
* secondary_input_100.tsv -- 100 preprocessed tweets for the embedding
  exporter's round-trip test

Texts are literal; the embedding noise comes from a fixed-seed generator, so
reruns are byte-identical. Run from the repo root: python scripts/make_fixtures.py
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from misotweet import corpus, preprocess  # noqa: E402
from misotweet.corpus import Category, Dataset, LabeledTweet, Target  # noqa: E402

FIXTURES = ROOT / "tests" / "fixtures"

TINY_TRAIN = [
    ("t1", "@Jenny22 you are a stupid woman, totally worthless https://t.co/abc \U0001F644",
     1, Category.DISCREDIT, Target.ACTIVE),
    ("t2", "Women belong in the kitchen, they can't do real work #feminism",
     1, Category.STEREOTYPE, Target.PASSIVE),
    ("t3", "you're such a dumb girl, shut up", 1, Category.DISCREDIT, Target.ACTIVE),
    ("t4", "I'll find you and you won't like it, send me pics now",
     1, Category.SEXUAL_HARASSMENT, Target.ACTIVE),
    ("t5", "What a sunny day, loving the weather ☀ https://t.co/xyz",
     0, Category.NONE, Target.NONE),
    ("t6", "Just finished a great book about space exploration #reading",
     0, Category.NONE, Target.NONE),
    ("t7", "The kitchen in our new flat is huge, can't wait to cook dinner",
     0, Category.NONE, Target.NONE),
    ("t8", "Match day! 3-0 what a result for the team \U0001F64C",
     0, Category.NONE, Target.NONE),
]

TINY_TEST = [
    ("x1", "you are a worthless and stupid woman", 1, Category.DISCREDIT, Target.ACTIVE),
    ("x2", "a woman's place is the kitchen, no real work there",
     1, Category.STEREOTYPE, Target.PASSIVE),
    ("x3", "lovely weather today and a good book to finish", 0, Category.NONE, Target.NONE),
    ("x4", "great match for the team, what a result", 0, Category.NONE, Target.NONE),
]

TINY_UNLABELED = [
    ("u1", "you are a worthless and stupid woman"),
    ("u2", "a woman's place is the kitchen, no real work there"),
    ("u3", "lovely weather today and a good book to finish"),
    ("u4", "great match for the team, what a result"),
]

# one template per category; {i} varies the padding vocabulary a little
CATEGORY_TEMPLATES = {
    Category.DISCREDIT: "what a stupid worthless woman, total idiot {pad}",
    Category.STEREOTYPE: "women belong in the kitchen cooking dinner {pad}",
    Category.DOMINANCE: "men are superior and women must obey {pad}",
    Category.DERAILING: "she was asking for it, stop blaming men {pad}",
    Category.SEXUAL_HARASSMENT: "send me pics or I will find you tonight {pad}",
}
ACTIVE_PREFIX = "@user{i} you are exactly this:"
PASSIVE_PREFIX = "honestly all of them,"

NEUTRAL_TEMPLATES = [
    "lovely weather and a sunny afternoon {pad}",
    "finished a great book on history {pad}",
    "the team played a great match today {pad}",
    "cooking a new pasta recipe tonight {pad}",
    "commuting early, coffee helps a lot {pad}",
    "new phone update looks really nice {pad}",
]
PADS = ["indeed", "frankly", "truly", "certainly", "surely", "obviously",
        "clearly", "really", "honestly", "absolutely"]

# (category, target) pattern for the 24 misogynous training tweets:
# discredit 10, derailing 2, dominance 4, sexual_harassment 5, stereotype 3;
# active 14, passive 10
SYNTH_TRAIN_MIS = (
    [(Category.DISCREDIT, Target.ACTIVE)] * 6
    + [(Category.DISCREDIT, Target.PASSIVE)] * 4
    + [(Category.DERAILING, Target.PASSIVE)] * 2
    + [(Category.DOMINANCE, Target.ACTIVE)] * 2
    + [(Category.DOMINANCE, Target.PASSIVE)] * 2
    + [(Category.SEXUAL_HARASSMENT, Target.ACTIVE)] * 4
    + [(Category.SEXUAL_HARASSMENT, Target.PASSIVE)] * 1
    + [(Category.STEREOTYPE, Target.ACTIVE)] * 2
    + [(Category.STEREOTYPE, Target.PASSIVE)] * 1
)
SYNTH_TRAIN_COUNTS = {
    "misogynous": 24,
    "non_misogynous": 36,
    Category.DISCREDIT: 10,
    Category.DERAILING: 2,
    Category.DOMINANCE: 4,
    Category.SEXUAL_HARASSMENT: 5,
    Category.STEREOTYPE: 3,
    Target.ACTIVE: 14,
    Target.PASSIVE: 10,
}

SYNTH_TEST_MIS = (
    [(Category.DISCREDIT, Target.ACTIVE)] * 3
    + [(Category.DERAILING, Target.PASSIVE)] * 1
    + [(Category.DOMINANCE, Target.ACTIVE)] * 1
    + [(Category.SEXUAL_HARASSMENT, Target.ACTIVE)] * 2
    + [(Category.STEREOTYPE, Target.PASSIVE)] * 2
)


def _mk_tweet(idx: int, prefix: str, cat: Category, targ: Target) -> LabeledTweet:
    pad = PADS[idx % len(PADS)]
    head = (ACTIVE_PREFIX if targ is Target.ACTIVE else PASSIVE_PREFIX).format(i=idx)
    text = f"{head} {CATEGORY_TEMPLATES[cat].format(pad=pad)}"
    return LabeledTweet(id=f"{prefix}{idx:03d}", text=text, misogynous=1,
                        category=cat, target=targ)


def _mk_neutral(idx: int, prefix: str) -> LabeledTweet:
    pad = PADS[idx % len(PADS)]
    text = NEUTRAL_TEMPLATES[idx % len(NEUTRAL_TEMPLATES)].format(pad=pad)
    return LabeledTweet(id=f"{prefix}{idx:03d}", text=text)


def build_synthetic(prefix: str, mis_pattern, n_neutral: int) -> Dataset:
    tweets = [_mk_tweet(i, prefix, cat, targ) for i, (cat, targ) in enumerate(mis_pattern)]
    tweets += [_mk_neutral(len(mis_pattern) + j, prefix) for j in range(n_neutral)]
    return Dataset(tweets=tuple(tweets), has_labels=True)


def all_datasets() -> dict[str, Dataset]:
    tiny_train = Dataset(
        tuple(LabeledTweet(i, t, m, c, g) for i, t, m, c, g in TINY_TRAIN), True
    )
    tiny_test = Dataset(
        tuple(LabeledTweet(i, t, m, c, g) for i, t, m, c, g in TINY_TEST), True
    )
    tiny_unlabeled = Dataset(
        tuple(LabeledTweet(i, t) for i, t in TINY_UNLABELED), False
    )
    return {
        "tiny_train": tiny_train,
        "tiny_test": tiny_test,
        "tiny_unlabeled": tiny_unlabeled,
        "synthetic_train": build_synthetic("s", SYNTH_TRAIN_MIS, 36),
        "synthetic_test": build_synthetic("v", SYNTH_TEST_MIS, 11),
    }


CAT_DIM = {c: i for i, c in enumerate(corpus.REAL_CATEGORIES)}


def sentence_vector(tweet: LabeledTweet, rng: np.random.Generator) -> np.ndarray:
    vec = rng.normal(0.0, 0.25, size=512)
    signal = 0.8 if tweet.misogynous else -0.8
    vec[0:8] += signal
    if tweet.category is not Category.NONE:
        vec[8 + CAT_DIM[tweet.category]] += 0.9
    if tweet.target is not Target.NONE:
        vec[13] += 0.9 if tweet.target is Target.ACTIVE else -0.9
    return vec


def write_sentence_embeddings(path: Path, datasets: list[Dataset]) -> int:
    rng = np.random.default_rng(20180918)
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("dim\t512\n")
        for ds in datasets:
            for tweet in ds:
                vec = sentence_vector(tweet, rng)
                fh.write(tweet.id + "\t" + " ".join(f"{v:.6f}" for v in vec) + "\n")
                n += 1
    return n


def write_glove(path: Path, datasets: list[Dataset]) -> int:
    cfg = preprocess.default_config()
    mis_stems: set[str] = set()
    all_stems: set[str] = set()
    for ds in datasets:
        for tweet in ds:
            stems = set(preprocess.preprocess(tweet.text, cfg).tokens)
            all_stems |= stems
            if tweet.misogynous:
                mis_stems |= stems
    rng = np.random.default_rng(20181105)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for stem in sorted(all_stems):
            vec = rng.normal(0.0, 0.3, size=300)
            if stem in mis_stems:
                vec[0:4] += 0.6
            fh.write(stem + " " + " ".join(f"{v:.5f}" for v in vec) + "\n")
    return len(all_stems)


def write_secondary_input(path: Path, datasets: list[Dataset]) -> int:
    cfg = preprocess.default_config()
    rows = []
    for ds in datasets:
        for tweet in ds:
            rows.append((f"e{len(rows):03d}", " ".join(preprocess.preprocess(tweet.text, cfg).tokens)))
    i = 0
    while len(rows) < 100:  # pad with template variants to reach 100
        rows.append((f"e{len(rows):03d}", f"extra tweet number {i} about {PADS[i % len(PADS)]} things"))
        i += 1
    rows = rows[:100]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("id\ttext\n")
        for tid, text in rows:
            fh.write(f"{tid}\t{text}\n")
    return len(rows)


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    datasets = all_datasets()
    for name, ds in datasets.items():
        corpus.write_dataset(FIXTURES / f"{name}.tsv", ds)

    report = corpus.label_distribution(datasets["synthetic_train"])
    assert report.misogynous == SYNTH_TRAIN_COUNTS["misogynous"]
    assert report.non_misogynous == SYNTH_TRAIN_COUNTS["non_misogynous"]
    for cat in corpus.REAL_CATEGORIES:
        assert report.category[cat] == SYNTH_TRAIN_COUNTS[cat], cat
    for targ in corpus.REAL_TARGETS:
        assert report.target[targ] == SYNTH_TRAIN_COUNTS[targ], targ

    labeled = [datasets[k] for k in
               ("tiny_train", "tiny_test", "synthetic_train", "synthetic_test")]
    n_sent = write_sentence_embeddings(FIXTURES / "sent_fixture.tsv", labeled)
    n_glove = write_glove(FIXTURES / "glove_fixture.txt", labeled)
    n_sec = write_secondary_input(FIXTURES / "secondary_input_100.tsv", labeled)
    print(f"fixtures written: {len(datasets)} datasets, {n_sent} sentence embeddings, "
          f"{n_glove} glove words, {n_sec} secondary input rows")


if __name__ == "__main__":
    main()
