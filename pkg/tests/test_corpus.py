import logging

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from misotweet import corpus
from misotweet.corpus import Category, Dataset, LabeledTweet, Target
from misotweet.errors import DataError

LABELED_HEADER = corpus.LABELED_HEADER


def _write(tmp_path, name, lines):
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_load_tiny_train(tiny_train):
    assert len(tiny_train) == 8
    assert tiny_train.has_labels
    t1 = tiny_train.tweets[0]
    assert t1.id == "t1"
    assert "\U0001F644" in t1.text
    assert t1.misogynous == 1
    assert t1.category is Category.DISCREDIT
    assert t1.target is Target.ACTIVE
    assert sum(t.misogynous for t in tiny_train) == 4


def test_load_unlabeled_single_row(tmp_path):
    path = _write(tmp_path, "u.tsv", ["id\ttext", "42\thello world"])
    ds = corpus.load_dataset(path, labeled=False)
    assert len(ds) == 1
    assert not ds.has_labels
    assert ds.tweets[0] == LabeledTweet(id="42", text="hello world")


def test_consistency_violation_strict(tmp_path):
    path = _write(tmp_path, "bad.tsv", [LABELED_HEADER, "1\tfoo\t0\tdiscredit\t0"])
    with pytest.raises(DataError, match="line 2"):
        corpus.load_dataset(path)


def test_consistency_violation_lenient_keeps_row(tmp_path, caplog):
    path = _write(
        tmp_path, "bad.tsv",
        [LABELED_HEADER, "1\tfoo\t0\tdiscredit\t0", "2\tbar\t0\t0\t0"],
    )
    with caplog.at_level(logging.WARNING):
        ds = corpus.load_dataset(path, strict=False)
    assert len(ds) == 2  # kept as-is
    assert ds.tweets[0].category is Category.DISCREDIT
    assert any("consistency" in r.message for r in caplog.records)


def test_misogynous_one_requires_labels(tmp_path):
    path = _write(tmp_path, "bad.tsv", [LABELED_HEADER, "1\tfoo\t1\t0\t0"])
    with pytest.raises(DataError, match="line 2"):
        corpus.load_dataset(path)


@pytest.mark.parametrize(
    "row, message",
    [
        ("1\tfoo\t1\tdiscredit", "fields"),
        ("1\tfoo\t1\tbogus\tactive", "category"),
        ("1\tfoo\t1\tdiscredit\tbogus", "target"),
        ("1\tfoo\t2\tdiscredit\tactive", "misogynous"),
    ],
)
def test_malformed_rows_strict(tmp_path, row, message):
    path = _write(tmp_path, "bad.tsv", [LABELED_HEADER, row])
    with pytest.raises(DataError, match=message) as err:
        corpus.load_dataset(path)
    assert "line 2" in str(err.value)


def test_malformed_rows_lenient_skips(tmp_path, caplog):
    path = _write(
        tmp_path, "bad.tsv",
        [LABELED_HEADER, "1\tfoo\t1\tbogus\tactive", "2\tok\t0\t0\t0"],
    )
    with caplog.at_level(logging.WARNING):
        ds = corpus.load_dataset(path, strict=False)
    assert ds.ids() == ("2",)


def test_duplicate_id(tmp_path):
    path = _write(
        tmp_path, "dup.tsv",
        [LABELED_HEADER, "1\tfoo\t0\t0\t0", "1\tbar\t0\t0\t0"],
    )
    with pytest.raises(DataError, match="duplicate id"):
        corpus.load_dataset(path)


def test_missing_file(tmp_path):
    with pytest.raises(DataError, match="not found"):
        corpus.load_dataset(tmp_path / "nope.tsv")


def test_wrong_header(tmp_path):
    path = _write(tmp_path, "h.tsv", ["id\ttweet", "1\tfoo"])
    with pytest.raises(DataError, match="header"):
        corpus.load_dataset(path, labeled=False)


def test_empty_dataset_error(tmp_path):
    path = _write(tmp_path, "e.tsv", [LABELED_HEADER])
    with pytest.raises(DataError, match="empty"):
        corpus.load_dataset(path)


_text = st.text(
    alphabet=st.characters(blacklist_characters="\t\n\r", blacklist_categories=("Cs",)),
    max_size=40,
)


@st.composite
def datasets(draw):
    n = draw(st.integers(min_value=1, max_value=12))
    labeled = draw(st.booleans())
    tweets = []
    for i in range(n):
        if not labeled:
            tweets.append(LabeledTweet(id=str(i), text=draw(_text)))
            continue
        mis = draw(st.integers(0, 1))
        if mis:
            cat = draw(st.sampled_from(corpus.REAL_CATEGORIES))
            targ = draw(st.sampled_from(corpus.REAL_TARGETS))
        else:
            cat, targ = Category.NONE, Target.NONE
        tweets.append(
            LabeledTweet(id=str(i), text=draw(_text), misogynous=mis, category=cat, target=targ)
        )
    return Dataset(tweets=tuple(tweets), has_labels=labeled)


@given(datasets())
@settings(max_examples=50)
def test_write_load_round_trip(tmp_path_factory, ds):
    path = tmp_path_factory.mktemp("rt") / "ds.tsv"
    corpus.write_dataset(path, ds)
    loaded = corpus.load_dataset(path, labeled=ds.has_labels)
    assert loaded == ds


def test_label_distribution_counts(tiny_train):
    report = corpus.label_distribution(tiny_train)
    assert report.size == 8
    assert report.misogynous == 4
    assert report.non_misogynous == 4
    assert report.category[Category.DISCREDIT] == 2
    assert report.category[Category.STEREOTYPE] == 1
    assert report.category[Category.SEXUAL_HARASSMENT] == 1
    assert report.category[Category.DERAILING] == 0
    assert report.target[Target.ACTIVE] == 3
    assert report.target[Target.PASSIVE] == 1
    assert sum(report.category.values()) == report.misogynous
    assert sum(report.target.values()) == report.misogynous


def test_label_distribution_all_negative():
    ds = Dataset(
        tuple(LabeledTweet(id=str(i), text="x") for i in range(3)), has_labels=True
    )
    report = corpus.label_distribution(ds)
    assert report.misogynous == 0
    assert all(v == 0 for v in report.category.values())


def test_label_distribution_two_tweets():
    ds = Dataset(
        (
            LabeledTweet("a", "x", 1, Category.DISCREDIT, Target.ACTIVE),
            LabeledTweet("b", "y"),
        ),
        has_labels=True,
    )
    report = corpus.label_distribution(ds)
    assert report.misogynous == 1
    assert report.category[Category.DISCREDIT] == 1
    assert report.target[Target.ACTIVE] == 1


def test_label_distribution_unlabeled():
    ds = Dataset((LabeledTweet("a", "x"),), has_labels=False)
    with pytest.raises(DataError):
        corpus.label_distribution(ds)


def _big_dataset(n_mis=1785, n_non=2215) -> Dataset:
    tweets = [
        LabeledTweet(f"m{i}", "bad tweet", 1, Category.DISCREDIT, Target.ACTIVE)
        for i in range(n_mis)
    ]
    tweets += [LabeledTweet(f"n{i}", "fine tweet") for i in range(n_non)]
    return Dataset(tuple(tweets), has_labels=True)


def test_split_sizes_and_stratification():
    ds = _big_dataset()
    left, right = corpus.split(ds, 0.8, seed=7)
    assert len(left) == 3200
    assert len(right) == 800
    left_mis = sum(t.misogynous for t in left)
    assert abs(left_mis - 0.8 * 1785) <= 1
    assert abs((len(left) - left_mis) - 0.8 * 2215) <= 1


def test_split_deterministic():
    ds = _big_dataset(100, 100)
    a = corpus.split(ds, 0.7, seed=13)
    b = corpus.split(ds, 0.7, seed=13)
    assert a[0].ids() == b[0].ids()
    assert a[1].ids() == b[1].ids()
    c = corpus.split(ds, 0.7, seed=14)
    assert c[0].ids() != a[0].ids()


@given(
    n_mis=st.integers(1, 30),
    n_non=st.integers(1, 30),
    fraction=st.floats(0.2, 0.8),
    seed=st.integers(0, 2**31),
)
@settings(max_examples=60)
def test_split_is_partition(n_mis, n_non, fraction, seed):
    ds = _big_dataset(n_mis, n_non)
    try:
        left, right = corpus.split(ds, fraction, seed)
    except DataError:
        return  # degenerate fraction for this size; contract allows the error
    assert sorted(left.ids() + right.ids()) == sorted(ds.ids())
    assert set(left.ids()).isdisjoint(right.ids())


def test_split_balanced_two_tweets():
    ds = Dataset(
        (
            LabeledTweet("a", "x", 1, Category.DISCREDIT, Target.ACTIVE),
            LabeledTweet("b", "y"),
        ),
        has_labels=True,
    )
    left, right = corpus.split(ds, 0.5, seed=1)
    assert len(left) == 1 and len(right) == 1
    assert sum(t.misogynous for t in left) + sum(t.misogynous for t in right) == 1


def test_split_empty_side():
    ds = _big_dataset(1, 1)
    with pytest.raises(DataError, match="empty"):
        corpus.split(ds, 0.1, seed=0)


def test_split_bad_fraction():
    with pytest.raises(DataError):
        corpus.split(_big_dataset(2, 2), 1.0, seed=0)


def test_split_unlabeled():
    ds = Dataset((LabeledTweet("a", "x"), LabeledTweet("b", "y")), has_labels=False)
    with pytest.raises(DataError):
        corpus.split(ds, 0.5, seed=0)


def test_run_file_format(tmp_path):
    path = tmp_path / "run.tsv"
    corpus.write_run_file(
        path,
        [
            ("42", 1, Category.DISCREDIT, Target.ACTIVE),
            ("7", 0, Category.NONE, Target.NONE),
        ],
    )
    data = path.read_bytes()
    assert data == b"42\t1\tdiscredit\tactive\n7\t0\t0\t0\n"


def test_run_file_byte_reproducible(tmp_path):
    preds = [("1", 1, Category.SEXUAL_HARASSMENT, Target.PASSIVE)]
    a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
    corpus.write_run_file(a, preds)
    corpus.write_run_file(b, preds)
    assert a.read_bytes() == b.read_bytes()


def test_run_file_round_trip(tmp_path):
    preds = [
        ("42", 1, Category.DISCREDIT, Target.ACTIVE),
        ("7", 0, Category.NONE, Target.NONE),
        ("9", 1, Category.SEXUAL_HARASSMENT, Target.PASSIVE),
    ]
    path = tmp_path / "run.tsv"
    corpus.write_run_file(path, preds)
    assert corpus.load_run_file(path) == preds


def test_format_distribution_mentions_counts(synthetic_train):
    text = corpus.format_distribution(corpus.label_distribution(synthetic_train))
    for token in ("misogyny", "discredit", "24", "36", "10"):
        assert token in text
