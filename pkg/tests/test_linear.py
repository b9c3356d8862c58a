import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from misotweet.errors import ConfigError, DataError, LayoutMismatchError
from misotweet.features import fit_tfidf, featurize
from misotweet.models import LinearModel, LRConfig, predict_logreg, train_logreg
from misotweet.models.linear import logreg_objective_grad, predict_logreg_batch
from misotweet.preprocess import TokenSequence


def oracle_objective(theta, X, t, C, fit_intercept=True):
    """Independent plain-Python objective for finite differencing."""
    if fit_intercept:
        w, b = theta[:-1], theta[-1]
    else:
        w, b = theta, 0.0
    total = 0.5 * float(np.dot(w, w))
    for xi, ti in zip(X, t):
        u = -ti * (float(np.dot(w, xi)) + b)
        if u > 0:
            total += C * (u + math.log1p(math.exp(-u)))
        else:
            total += C * math.log1p(math.exp(u))
    return total


def test_symmetric_fixture_exact():
    X = np.array([[-1.0], [1.0]])
    model = train_logreg(X, [0, 1], LRConfig())
    assert model.bias == 0.0
    assert predict_logreg(model, np.array([0.0])) == 0.5


def _separable():
    rng = np.random.default_rng(11)
    neg = rng.normal((-2.0, -2.0), 0.4, size=(12, 2))
    pos = rng.normal((2.0, 2.0), 0.4, size=(12, 2))
    X = np.vstack([neg, pos])
    y = np.array([0] * 12 + [1] * 12)
    return X, y


def test_separable_training_accuracy():
    X, y = _separable()
    model = train_logreg(X, y, LRConfig())
    preds = (predict_logreg_batch(model, X) >= 0.5).astype(int)
    assert np.array_equal(preds, y)


def test_gradient_matches_central_differences():
    rng = np.random.default_rng(42)
    X = rng.normal(size=(30, 20))
    t = np.where(rng.random(30) < 0.5, -1.0, 1.0)
    C = 1.0
    h = 1e-6
    for _ in range(10):
        theta = rng.normal(scale=0.5, size=21)
        _, grad = logreg_objective_grad(theta, X, t, C, True)
        fd = np.empty_like(theta)
        for i in range(theta.size):
            up = theta.copy()
            up[i] += h
            down = theta.copy()
            down[i] -= h
            fd[i] = (
                oracle_objective(up, X, t, C)
                - oracle_objective(down, X, t, C)
            ) / (2 * h)
        rel = np.linalg.norm(fd - grad) / max(1.0, np.linalg.norm(grad))
        assert rel < 1e-5


def test_objective_monotone_nonincreasing():
    X, y = _separable()
    model = train_logreg(X, y, LRConfig(max_iterations=200))
    hist = model.objective_history
    assert len(hist) >= 2
    for prev, cur in zip(hist, hist[1:]):
        assert cur <= prev + 1e-12


def test_converges_below_tolerance():
    X, y = _separable()
    cfg = LRConfig(tolerance=1e-6, max_iterations=500)
    model = train_logreg(X, y, cfg)
    t = 2.0 * np.asarray(y, dtype=float) - 1.0
    theta = np.concatenate([model.weights, [model.bias]])
    _, grad = logreg_objective_grad(theta, X, t, cfg.C, True)
    assert np.linalg.norm(grad) < cfg.tolerance


def test_predict_zero_model_is_half():
    model = LinearModel(np.zeros(3), 0.0, "", LRConfig())
    assert predict_logreg(model, np.array([5.0, -3.0, 2.0])) == 0.5


@given(st.floats(-20, 20), st.floats(-20, 20))
def test_predict_monotone_in_margin(a, b):
    model = LinearModel(np.array([1.0]), 0.0, "", LRConfig())
    pa = predict_logreg(model, np.array([a]))
    pb = predict_logreg(model, np.array([b]))
    if a < b:
        assert pa <= pb
    assert 0.0 < pa < 1.0


def test_training_deterministic():
    X, y = _separable()
    m1 = train_logreg(X, y)
    m2 = train_logreg(X, y)
    assert np.array_equal(m1.weights, m2.weights)
    assert m1.bias == m2.bias


def _toy_vectors(extra_doc=False):
    docs = [
        TokenSequence(("bad", "woman"), "1"),
        TokenSequence(("good", "day"), "2"),
        TokenSequence(("bad", "day"), "3"),
        TokenSequence(("good", "woman"), "4"),
    ]
    if extra_doc:
        docs.append(TokenSequence(("novel",), "5"))
    vocab = fit_tfidf(docs)
    return [featurize(d, d.source_id, vocab, enabled_blocks=("tfidf",)) for d in docs]


def test_fingerprint_mismatch_raises():
    vecs = _toy_vectors()
    model = train_logreg(vecs, [1, 0, 1, 0])
    other = _toy_vectors(extra_doc=True)[0]
    with pytest.raises(LayoutMismatchError):
        predict_logreg(model, other)


def test_feature_vector_path_round_trip():
    vecs = _toy_vectors()
    model = train_logreg(vecs, [1, 0, 1, 0])
    p = predict_logreg(model, vecs[0])
    assert p == predict_logreg(model, vecs[0].to_dense())


def test_dim_mismatch_raises():
    model = LinearModel(np.zeros(3), 0.0, "", LRConfig())
    with pytest.raises(LayoutMismatchError):
        predict_logreg(model, np.array([1.0, 2.0]))


def test_single_class_rejected():
    X = np.zeros((3, 2))
    with pytest.raises(DataError, match="single class"):
        train_logreg(X, [1, 1, 1])


def test_non_finite_rejected():
    X = np.array([[1.0], [np.nan]])
    with pytest.raises(DataError, match="non-finite"):
        train_logreg(X, [0, 1])


def test_bad_config():
    with pytest.raises(ConfigError):
        LRConfig(C=0.0)
    with pytest.raises(ConfigError):
        LRConfig(tolerance=-1.0)
