import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from misotweet import evaluation as ev
from misotweet.corpus import Category, Target
from misotweet.errors import DataError


def brute_force_scores(gold, pred, classes):
    """Independent TP/FP/FN enumeration used as the metric oracle."""
    per_class = {}
    for c in classes:
        tp = fp = fn = 0
        for g, p in zip(gold, pred):
            if p == c and g == c:
                tp += 1
            elif p == c:
                fp += 1
            elif g == c:
                fn += 1
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[c] = (precision, recall, f1)
    macro = sum(v[2] for v in per_class.values()) / len(classes)
    acc = sum(g == p for g, p in zip(gold, pred)) / len(gold)
    return acc, macro, per_class


def test_accuracy_examples():
    assert ev.accuracy([1, 0, 1], [1, 0, 1]) == 1.0
    assert ev.accuracy([1, 1, 0, 0], [1, 0, 0, 0]) == 0.75


def test_accuracy_errors():
    with pytest.raises(DataError):
        ev.accuracy([1], [1, 0])
    with pytest.raises(DataError):
        ev.accuracy([], [])


def test_macro_f1_worked_example():
    gold = ["A", "A", "B", "B"]
    pred = ["A", "B", "B", "B"]
    # F1(A) = 2/3, F1(B) = 0.8 by hand
    value = ev.macro_f1(gold, pred, ("A", "B"))
    assert value == pytest.approx(0.733333, abs=1e-6)
    assert value == pytest.approx((2 / 3 + 0.8) / 2, abs=1e-12)


def test_macro_f1_perfect():
    assert ev.macro_f1(["A", "B"], ["A", "B"], ("A", "B")) == 1.0


def test_macro_f1_absent_class_contributes_zero():
    gold = ["A", "A", "B", "B"]
    pred = ["A", "A", "B", "B"]
    with_ghost = ev.macro_f1(gold, pred, ("A", "B", "C"))
    assert with_ghost == pytest.approx(2 / 3, abs=1e-12)


def test_macro_f1_single_class_equals_class_f1():
    gold = ["A", "A", "B"]
    pred = ["A", "B", "B"]
    single = ev.macro_f1(gold, pred, ("A",))
    assert single == ev.class_scores(gold, pred, "A").f1


def test_metrics_match_brute_force_on_randomized_fixtures():
    rng = random.Random(123)
    classes = ["a", "b", "c", "d"]
    for _ in range(20):
        n = rng.randint(1, 40)
        gold = [rng.choice(classes) for _ in range(n)]
        pred = [rng.choice(classes) for _ in range(n)]
        acc, macro, per_class = brute_force_scores(gold, pred, classes)
        assert ev.accuracy(gold, pred) == acc
        assert ev.macro_f1(gold, pred, classes) == macro
        for c, (p, r, f1) in per_class.items():
            s = ev.class_scores(gold, pred, c)
            assert (s.precision, s.recall, s.f1) == (p, r, f1)


@given(st.lists(st.tuples(st.sampled_from("ab"), st.sampled_from("ab")), min_size=1))
@settings(max_examples=60)
def test_metrics_permutation_invariant(pairs):
    gold = [g for g, _ in pairs]
    pred = [p for _, p in pairs]
    rng = random.Random(0)
    order = list(range(len(pairs)))
    rng.shuffle(order)
    gold2 = [gold[i] for i in order]
    pred2 = [pred[i] for i in order]
    assert ev.accuracy(gold, pred) == ev.accuracy(gold2, pred2)
    assert ev.macro_f1(gold, pred, ("a", "b")) == ev.macro_f1(gold2, pred2, ("a", "b"))


def test_per_class_report_support_sums():
    gold = ["a", "a", "b", "c"]
    pred = ["a", "b", "b", "b"]
    report = ev.per_class_report(gold, pred, ("a", "b", "c"))
    assert sum(s.support for s in report.values()) == len(gold)
    assert report["c"].recall == 0.0


def test_per_class_report_minority_never_predicted():
    gold = ["maj"] * 9 + ["min"]
    pred = ["maj"] * 10
    report = ev.per_class_report(gold, pred, ("maj", "min"))
    assert report["min"].recall == 0.0
    assert report["min"].f1 == 0.0
    assert report["maj"].recall == 1.0


def test_confusion_matrix_totals():
    gold = ["a", "b", "a"]
    pred = ["a", "a", "b"]
    cm = ev.ConfusionMatrix.from_pairs(gold, pred, ("a", "b"))
    assert cm.total() == 3
    assert cm.counts["a"]["a"] == 1
    assert cm.counts["b"]["a"] == 1
    assert cm.counts["a"]["b"] == 1


def _pair(cat, targ):
    return (Category(cat), Target(targ))


def test_task_b_perfect():
    gold = [_pair("discredit", "active"), _pair("stereotype", "passive")]
    report = ev.task_b_score(gold, list(gold))
    assert report.category_macro_f1 == pytest.approx(2 / 5, abs=1e-12)  # 3 absent classes
    assert report.target_macro_f1 == 1.0
    assert report.task_b_average == pytest.approx((2 / 5 + 1.0) / 2, abs=1e-12)


def test_task_b_hand_computed_ten_tweets():
    gold = [
        _pair("discredit", "active"),
        _pair("discredit", "active"),
        _pair("discredit", "passive"),
        _pair("stereotype", "passive"),
        _pair("stereotype", "active"),
        _pair("dominance", "active"),
        _pair("dominance", "passive"),
        _pair("derailing", "passive"),
        _pair("sexual_harassment", "active"),
        _pair("sexual_harassment", "active"),
    ]
    pred = [
        _pair("discredit", "active"),
        _pair("stereotype", "active"),
        _pair("discredit", "active"),
        _pair("stereotype", "passive"),
        _pair("discredit", "active"),
        _pair("dominance", "passive"),
        _pair("discredit", "passive"),
        _pair("derailing", "passive"),
        _pair("sexual_harassment", "active"),
        _pair("dominance", "active"),
    ]
    # categories by hand:
    #   discredit: TP=2 FP=2 FN=1 -> P=1/2 R=2/3 F1=4/7
    #   stereotype: TP=1 FP=1 FN=1 -> P=1/2 R=1/2 F1=1/2
    #   dominance: TP=1 FP=1 FN=1 -> F1=1/2
    #   derailing: TP=1 FP=0 FN=0 -> F1=1
    #   sexual_harassment: TP=1 FP=0 FN=1 -> P=1 R=1/2 F1=2/3
    cat_macro = (4 / 7 + 0.5 + 0.5 + 1.0 + 2 / 3) / 5
    # targets by hand:
    #   active: TP=5 (rows 1,2,5,9,10) FP=1 (row 3) FN=1 (row 6) -> F1=5/6
    #   passive: TP=3 (rows 4,7,8) FP=1 (row 6) FN=1 (row 3) -> F1=3/4
    targ_macro = (5 / 6 + 3 / 4) / 2
    report = ev.task_b_score(gold, pred)
    assert report.category_macro_f1 == pytest.approx(cat_macro, abs=1e-12)
    assert report.target_macro_f1 == pytest.approx(targ_macro, abs=1e-12)
    assert report.task_b_average == pytest.approx((cat_macro + targ_macro) / 2, abs=1e-12)


def test_task_b_include_none():
    gold = [_pair("0", "0"), _pair("discredit", "active")]
    pred = [_pair("0", "0"), _pair("discredit", "active")]
    report = ev.task_b_score(gold, pred, include_none=True)
    # NONE joins both class sets: 2 of 6 categories present and perfect
    assert report.category_macro_f1 == pytest.approx(2 / 6, abs=1e-12)
    assert report.target_macro_f1 == pytest.approx(2 / 3, abs=1e-12)


def test_report_formats():
    gold = [1, 0, 1, 1]
    pred = [1, 0, 0, 1]
    report = ev.ScoreReport(
        accuracy=ev.accuracy(gold, pred),
        per_class=ev.per_class_report(gold, pred, (0, 1)),
        macro_f1=ev.macro_f1(gold, pred, (0, 1)),
    )
    tsv = ev.report_tsv(report)
    assert tsv.startswith("metric\tclass\t")
    assert "accuracy" in tsv and "macro_f1" in tsv
    table = ev.report_table(report)
    assert "accuracy: 0.7500" in table
    assert "support" in table
