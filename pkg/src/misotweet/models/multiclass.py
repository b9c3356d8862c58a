"""One-vs-rest wrapper turning either binary engine into a K-way classifier."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import DataError
from ..features import FeatureVector
from .gbdt import GBDTConfig, GBDTModel, predict_gbdt, predict_gbdt_batch, train_gbdt
from .linear import LinearModel, LRConfig, predict_logreg, predict_logreg_batch, train_logreg

ENGINE_LOGREG = "logreg"
ENGINE_GBDT = "gbdt"


@dataclass
class MulticlassModel:
    """Class labels in declared order plus one binary submodel per class.

    Prediction is the argmax of submodel probabilities; exact ties go to the
    earliest label in the declared order.
    """

    classes: tuple[str, ...]
    submodels: tuple[LinearModel | GBDTModel, ...]
    engine: str
    fingerprint: str


def train_multiclass(
    X: Sequence[FeatureVector] | np.ndarray,
    y: Sequence[str],
    classes: Sequence[str],
    engine: str,
    cfg: LRConfig | GBDTConfig | None = None,
    n_threads: int = 1,
) -> MulticlassModel:
    classes = tuple(classes)
    if len(classes) < 2:
        raise DataError("one-vs-rest needs at least 2 classes")
    if len(set(classes)) != len(classes):
        raise DataError("duplicate class labels")
    stray = set(y) - set(classes)
    if stray:
        raise DataError(f"labels outside the declared class set: {sorted(stray)}")
    labels = np.asarray(y)
    submodels = []
    for cls in classes:
        binary = (labels == cls).astype(np.int64)
        if binary.sum() == 0:
            raise DataError(f"class {cls!r} has no training samples")
        if engine == ENGINE_LOGREG:
            submodels.append(train_logreg(X, binary, cfg))
        elif engine == ENGINE_GBDT:
            submodels.append(train_gbdt(X, binary, cfg, n_threads=n_threads))
        else:
            raise DataError(f"unknown engine {engine!r}")
    fingerprint = submodels[0].fingerprint
    return MulticlassModel(
        classes=classes, submodels=tuple(submodels), engine=engine, fingerprint=fingerprint
    )


def predict_multiclass_proba(
    model: MulticlassModel, x: FeatureVector | np.ndarray
) -> np.ndarray:
    """Per-class probabilities in class order (one-vs-rest scores, not
    normalized to sum to one)."""
    predict = predict_logreg if model.engine == ENGINE_LOGREG else predict_gbdt
    return np.array([predict(sub, x) for sub in model.submodels])


def predict_multiclass(model: MulticlassModel, x: FeatureVector | np.ndarray) -> str:
    probs = predict_multiclass_proba(model, x)
    return model.classes[int(np.argmax(probs))]


def predict_multiclass_batch(
    model: MulticlassModel, X: Sequence[FeatureVector] | np.ndarray
) -> list[str]:
    batch = predict_logreg_batch if model.engine == ENGINE_LOGREG else predict_gbdt_batch
    probs = np.stack([batch(sub, X) for sub in model.submodels], axis=1)
    return [model.classes[i] for i in np.argmax(probs, axis=1)]
