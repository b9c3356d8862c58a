"""Task metrics: accuracy for misogyny identification, macro-F1 for the
category/target task, and per-class diagnostics for imbalance analysis.

Zero-division convention: a class with no true positives and nothing
predicted (P + R = 0) contributes F1 = 0 to the macro average.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Sequence

from .corpus import REAL_CATEGORIES, REAL_TARGETS, Category, Target
from .errors import DataError

Label = Hashable


@dataclass(frozen=True)
class ClassScores:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class ConfusionMatrix:
    labels: tuple[Label, ...]
    counts: dict[Label, dict[Label, int]]  # counts[gold][pred]

    @classmethod
    def from_pairs(
        cls, gold: Sequence[Label], pred: Sequence[Label], labels: Sequence[Label]
    ) -> "ConfusionMatrix":
        labels = tuple(labels)
        known = set(labels)
        counts: dict[Label, dict[Label, int]] = {g: {p: 0 for p in labels} for g in labels}
        for g, p in zip(gold, pred):
            if g in known and p in known:
                counts[g][p] += 1
        return cls(labels=labels, counts=counts)

    def total(self) -> int:
        return sum(sum(row.values()) for row in self.counts.values())


@dataclass(frozen=True)
class ScoreReport:
    accuracy: float | None = None
    per_class: dict[Label, ClassScores] = field(default_factory=dict)
    macro_f1: float | None = None
    category_macro_f1: float | None = None
    target_macro_f1: float | None = None
    task_b_average: float | None = None


def accuracy(gold: Sequence[Label], pred: Sequence[Label]) -> float:
    """Fraction of exact matches."""
    if len(gold) != len(pred):
        raise DataError(f"length mismatch: {len(gold)} gold vs {len(pred)} predictions")
    if not gold:
        raise DataError("cannot score an empty prediction list")
    return sum(g == p for g, p in zip(gold, pred)) / len(gold)


def class_scores(
    gold: Sequence[Label], pred: Sequence[Label], cls: Label
) -> ClassScores:
    tp = sum(1 for g, p in zip(gold, pred) if g == cls and p == cls)
    fp = sum(1 for g, p in zip(gold, pred) if g != cls and p == cls)
    fn = sum(1 for g, p in zip(gold, pred) if g == cls and p != cls)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return ClassScores(precision=precision, recall=recall, f1=f1, support=tp + fn)


def macro_f1(gold: Sequence[Label], pred: Sequence[Label], class_set: Sequence[Label]) -> float:
    """Unweighted mean of per-class F1 over the declared class set."""
    if len(gold) != len(pred):
        raise DataError(f"length mismatch: {len(gold)} gold vs {len(pred)} predictions")
    classes = tuple(class_set)
    if not classes:
        raise DataError("empty class set")
    return sum(class_scores(gold, pred, c).f1 for c in classes) / len(classes)


def per_class_report(
    gold: Sequence[Label], pred: Sequence[Label], classes: Sequence[Label]
) -> dict[Label, ClassScores]:
    return {c: class_scores(gold, pred, c) for c in classes}


def task_b_score(
    gold: Sequence[tuple[Category, Target]],
    pred: Sequence[tuple[Category, Target]],
    include_none: bool = False,
) -> ScoreReport:
    """Category macro-F1 and target macro-F1, averaged.

    By default both metrics are computed over the five behaviour classes and
    the two target classes on the rows given (callers pass gold-misogynous
    rows only). With ``include_none`` the NONE value joins both class sets,
    for scoring full test sets where non-misogynous rows carry (NONE, NONE).
    """
    if len(gold) != len(pred):
        raise DataError(f"length mismatch: {len(gold)} gold vs {len(pred)} predictions")
    if not gold:
        raise DataError("cannot score an empty prediction list")
    cat_classes: tuple[Category, ...] = REAL_CATEGORIES
    targ_classes: tuple[Target, ...] = REAL_TARGETS
    if include_none:
        cat_classes = (Category.NONE,) + cat_classes
        targ_classes = (Target.NONE,) + targ_classes
    gold_cat = [c for c, _ in gold]
    pred_cat = [c for c, _ in pred]
    gold_targ = [t for _, t in gold]
    pred_targ = [t for _, t in pred]
    cat_f1 = macro_f1(gold_cat, pred_cat, cat_classes)
    targ_f1 = macro_f1(gold_targ, pred_targ, targ_classes)
    per_class: dict[Label, ClassScores] = {}
    per_class.update(per_class_report(gold_cat, pred_cat, cat_classes))
    per_class.update(per_class_report(gold_targ, pred_targ, targ_classes))
    return ScoreReport(
        per_class=per_class,
        category_macro_f1=cat_f1,
        target_macro_f1=targ_f1,
        task_b_average=(cat_f1 + targ_f1) / 2.0,
    )


def _label_str(label: Label) -> str:
    return label.value if isinstance(label, (Category, Target)) else str(label)


def report_tsv(report: ScoreReport) -> str:
    """Machine-readable report: one metric or class row per line."""
    lines = ["metric\tclass\tprecision\trecall\tf1\tsupport"]
    if report.accuracy is not None:
        lines.append(f"accuracy\t-\t-\t-\t{report.accuracy!r}\t-")
    for label, s in report.per_class.items():
        lines.append(
            f"class\t{_label_str(label)}\t{s.precision!r}\t{s.recall!r}\t{s.f1!r}\t{s.support}"
        )
    for name, value in (
        ("macro_f1", report.macro_f1),
        ("category_macro_f1", report.category_macro_f1),
        ("target_macro_f1", report.target_macro_f1),
        ("task_b_average", report.task_b_average),
    ):
        if value is not None:
            lines.append(f"{name}\t-\t-\t-\t{value!r}\t-")
    return "\n".join(lines) + "\n"


def report_table(report: ScoreReport) -> str:
    """Aligned human-readable report for terminal output."""
    rows: list[tuple[str, str, str, str, str]] = []
    for label, s in report.per_class.items():
        rows.append(
            (
                _label_str(label),
                f"{s.precision:.4f}",
                f"{s.recall:.4f}",
                f"{s.f1:.4f}",
                str(s.support),
            )
        )
    header = ("class", "precision", "recall", "f1", "support")
    widths = [
        max(len(header[i]), *(len(r[i]) for r in rows)) if rows else len(header[i])
        for i in range(5)
    ]
    lines = []
    if report.accuracy is not None:
        lines.append(f"accuracy: {report.accuracy:.4f}")
    if rows:
        lines.append("  ".join(h.ljust(widths[i]) for i, h in enumerate(header)))
        for r in rows:
            lines.append("  ".join(r[i].ljust(widths[i]) for i in range(5)))
    for name, value in (
        ("macro F1", report.macro_f1),
        ("category macro F1", report.category_macro_f1),
        ("target macro F1", report.target_macro_f1),
        ("task B average", report.task_b_average),
    ):
        if value is not None:
            lines.append(f"{name}: {value:.4f}")
    return "\n".join(lines) + "\n"
