"""Dataset parsing, label bookkeeping, and run-file emission.

File formats (all UTF-8, LF line endings):

* labeled dataset  -- TSV with header ``id\ttext\tmisogynous\tmisogyny_category\ttarget``
* unlabeled dataset -- TSV with header ``id\ttext``
* run file         -- TSV lines ``id\tmisogynous\tcategory\ttarget`` without a
  header; absent category/target are rendered as ``0``

The run-file layout is a repo convention: the shared task never published a
normative submission schema, so we freeze one here and round-trip it with
:func:`load_run_file`.
"""

from __future__ import annotations

import enum
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import DataError

log = logging.getLogger(__name__)

LABELED_HEADER = "id\ttext\tmisogynous\tmisogyny_category\ttarget"
UNLABELED_HEADER = "id\ttext"


class Category(enum.Enum):
    """Misogynistic behaviour taxonomy; declaration order is the tie-break order."""

    NONE = "0"
    STEREOTYPE = "stereotype"
    DOMINANCE = "dominance"
    DERAILING = "derailing"
    SEXUAL_HARASSMENT = "sexual_harassment"
    DISCREDIT = "discredit"


class Target(enum.Enum):
    NONE = "0"
    ACTIVE = "active"
    PASSIVE = "passive"


#: The five real behaviour classes, in declaration order.
REAL_CATEGORIES = tuple(c for c in Category if c is not Category.NONE)
#: The two real target classes, in declaration order.
REAL_TARGETS = (Target.ACTIVE, Target.PASSIVE)

_CATEGORY_BY_VALUE = {c.value: c for c in Category}
_TARGET_BY_VALUE = {t.value: t for t in Target}


@dataclass(frozen=True)
class LabeledTweet:
    id: str
    text: str
    misogynous: int = 0
    category: Category = Category.NONE
    target: Target = Target.NONE

    def consistent(self) -> bool:
        """Label consistency: a misogynous tweet carries a category and a
        target, a non-misogynous one carries neither."""
        if self.misogynous == 0:
            return self.category is Category.NONE and self.target is Target.NONE
        return self.category is not Category.NONE and self.target is not Target.NONE


@dataclass(frozen=True)
class Dataset:
    tweets: tuple[LabeledTweet, ...]
    has_labels: bool

    def __len__(self) -> int:
        return len(self.tweets)

    def __iter__(self) -> Iterator[LabeledTweet]:
        return iter(self.tweets)

    def ids(self) -> tuple[str, ...]:
        return tuple(t.id for t in self.tweets)


@dataclass(frozen=True)
class DistributionReport:
    """Counts per label level for one dataset."""

    size: int
    misogynous: int
    non_misogynous: int
    category: dict[Category, int] = field(default_factory=dict)
    target: dict[Target, int] = field(default_factory=dict)


def _parse_misogynous(tok: str, line: int) -> int:
    if tok not in ("0", "1"):
        raise DataError(f"misogynous must be 0 or 1, got {tok!r}", line)
    return int(tok)


def _parse_category(tok: str, line: int) -> Category:
    try:
        return _CATEGORY_BY_VALUE[tok]
    except KeyError:
        raise DataError(f"unknown category {tok!r}", line) from None


def _parse_target(tok: str, line: int) -> Target:
    try:
        return _TARGET_BY_VALUE[tok]
    except KeyError:
        raise DataError(f"unknown target {tok!r}", line) from None


def load_dataset(path: str | Path, labeled: bool = True, strict: bool = True) -> Dataset:
    """Parse a dataset TSV.

    In strict mode any malformed row, duplicate id, or label-consistency
    violation aborts with a :class:`DataError` naming the line. In lenient
    mode malformed rows are skipped, while consistency violations are kept
    as-is; both are logged with their line number.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"dataset file not found: {path}")
    expected_header = LABELED_HEADER if labeled else UNLABELED_HEADER
    n_fields = 5 if labeled else 2

    tweets: list[LabeledTweet] = []
    seen: set[str] = set()
    skipped = 0
    with open(path, encoding="utf-8", newline="") as fh:
        header = fh.readline().rstrip("\r\n")
        if header != expected_header:
            raise DataError(f"expected header {expected_header!r}, got {header!r}", 1)
        for lineno, raw in enumerate(fh, start=2):
            row = raw.rstrip("\n").rstrip("\r")
            if row == "":
                continue
            fields = row.split("\t")
            try:
                if len(fields) != n_fields:
                    raise DataError(
                        f"expected {n_fields} tab-separated fields, got {len(fields)}", lineno
                    )
                if labeled:
                    tid, text, mis_tok, cat_tok, targ_tok = fields
                    tweet = LabeledTweet(
                        id=tid,
                        text=text,
                        misogynous=_parse_misogynous(mis_tok, lineno),
                        category=_parse_category(cat_tok, lineno),
                        target=_parse_target(targ_tok, lineno),
                    )
                else:
                    tid, text = fields
                    tweet = LabeledTweet(id=tid, text=text)
                if tweet.id in seen:
                    raise DataError(f"duplicate id {tweet.id!r}", lineno)
            except DataError as err:
                if strict:
                    raise
                log.warning("%s: skipping row (%s)", path, err)
                skipped += 1
                continue
            if labeled and not tweet.consistent():
                msg = (
                    f"label consistency violation for id {tweet.id!r}: misogynous="
                    f"{tweet.misogynous}, category={tweet.category.value}, "
                    f"target={tweet.target.value}"
                )
                if strict:
                    raise DataError(msg, lineno)
                log.warning("%s: line %d: %s (row kept)", path, lineno, msg)
                skipped += 1
            seen.add(tweet.id)
            tweets.append(tweet)
    if skipped:
        log.warning("%s: %d row(s) with problems", path, skipped)
    if not tweets:
        raise DataError(f"dataset is empty: {path}")
    return Dataset(tweets=tuple(tweets), has_labels=labeled)


def _clean_text(text: str) -> str:
    # TSV cannot carry tabs or newlines inside a field.
    for ch in ("\t", "\n", "\r"):
        if ch in text:
            text = text.replace(ch, " ")
    return text


def write_dataset(path: str | Path, dataset: Dataset) -> None:
    """Serialize ``dataset`` in the TSV format accepted by :func:`load_dataset`."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if dataset.has_labels:
            fh.write(LABELED_HEADER + "\n")
            for t in dataset:
                fh.write(
                    f"{t.id}\t{_clean_text(t.text)}\t{t.misogynous}"
                    f"\t{t.category.value}\t{t.target.value}\n"
                )
        else:
            fh.write(UNLABELED_HEADER + "\n")
            for t in dataset:
                fh.write(f"{t.id}\t{_clean_text(t.text)}\n")


def label_distribution(dataset: Dataset) -> DistributionReport:
    """Exact counts per label value. Requires a labeled dataset."""
    if not dataset.has_labels:
        raise DataError("cannot compute a label distribution for an unlabeled dataset")
    mis = sum(t.misogynous for t in dataset)
    category = {c: 0 for c in REAL_CATEGORIES}
    target = {t: 0 for t in REAL_TARGETS}
    for t in dataset:
        if t.category is not Category.NONE:
            category[t.category] += 1
        if t.target is not Target.NONE:
            target[t.target] += 1
    return DistributionReport(
        size=len(dataset),
        misogynous=mis,
        non_misogynous=len(dataset) - mis,
        category=category,
        target=target,
    )


def format_distribution(report: DistributionReport) -> str:
    """Human-readable distribution table (one row per label value)."""
    rows = [
        ("Misogyny", "misogyny", report.misogynous),
        ("Misogyny", "non-misogyny", report.non_misogynous),
    ]
    rows += [("Category", c.value, report.category[c]) for c in REAL_CATEGORIES]
    rows += [("Target", t.value, report.target[t]) for t in REAL_TARGETS]
    width = max(len(r[1]) for r in rows)
    lines = [f"total\t{report.size}"]
    for level, label, count in rows:
        lines.append(f"{level}\t{label.ljust(width)}\t{count}")
    return "\n".join(lines)


def split(dataset: Dataset, train_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Deterministic stratified split on the misogyny label.

    Both sides preserve the source ordering of the tweets they receive, and
    together they form an exact partition of the input.
    """
    if not dataset.has_labels:
        raise DataError("cannot stratify an unlabeled dataset")
    if not 0.0 < train_fraction < 1.0:
        raise DataError(f"train_fraction must be in (0, 1), got {train_fraction}")
    rng = random.Random(seed)
    strata = {
        label: [i for i, t in enumerate(dataset) if t.misogynous == label]
        for label in (0, 1)
    }
    # largest-remainder allocation: per-stratum floor(fraction * size), with
    # the leftover toward round(fraction * total) going to the biggest
    # fractional parts, so tiny strata still land within one tweet of quota
    quotas = {label: train_fraction * len(s) for label, s in strata.items()}
    takes = {label: int(quotas[label]) for label in strata}
    extras = round(train_fraction * len(dataset)) - sum(takes.values())
    for label in sorted(strata, key=lambda l: (-(quotas[l] - takes[l]), l)):
        if extras <= 0:
            break
        if quotas[label] > takes[label]:
            takes[label] += 1
            extras -= 1
    train_idx: set[int] = set()
    for label, stratum in strata.items():
        rng.shuffle(stratum)
        train_idx.update(stratum[: takes[label]])
    left = tuple(t for i, t in enumerate(dataset) if i in train_idx)
    right = tuple(t for i, t in enumerate(dataset) if i not in train_idx)
    if not left or not right:
        raise DataError(
            f"train_fraction {train_fraction} leaves one side of the split empty"
        )
    return (
        Dataset(tweets=left, has_labels=True),
        Dataset(tweets=right, has_labels=True),
    )


PredictionTuple = tuple[str, int, Category, Target]


def write_run_file(path: str | Path, predictions: Iterable[PredictionTuple]) -> None:
    """Emit predictions as ``id\tmisogynous\tcategory\ttarget`` lines.

    Byte-reproducible for identical input; ends with a trailing newline.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for tid, mis, cat, targ in predictions:
            fh.write(f"{tid}\t{mis}\t{cat.value}\t{targ.value}\n")


def load_run_file(path: str | Path) -> list[PredictionTuple]:
    """Parse a run file written by :func:`write_run_file`."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"run file not found: {path}")
    records: list[PredictionTuple] = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, raw in enumerate(fh, start=1):
            row = raw.rstrip("\n").rstrip("\r")
            if row == "":
                continue
            fields = row.split("\t")
            if len(fields) != 4:
                raise DataError(f"expected 4 fields, got {len(fields)}", lineno)
            tid, mis_tok, cat_tok, targ_tok = fields
            records.append(
                (
                    tid,
                    _parse_misogynous(mis_tok, lineno),
                    _parse_category(cat_tok, lineno),
                    _parse_target(targ_tok, lineno),
                )
            )
    return records


def gold_predictions(dataset: Dataset) -> list[PredictionTuple]:
    """View a labeled dataset as prediction tuples (for scoring helpers)."""
    return [(t.id, t.misogynous, t.category, t.target) for t in dataset]
