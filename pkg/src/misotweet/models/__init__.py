"""Training engines: logistic regression, boosted trees, one-vs-rest, persistence."""

from .gbdt import (
    GBDTConfig,
    GBDTModel,
    PRESETS,
    cb_like,
    predict_gbdt,
    predict_gbdt_batch,
    train_gbdt,
    xgb_like,
)
from .linear import (
    LinearModel,
    LRConfig,
    predict_logreg,
    predict_logreg_batch,
    train_logreg,
)
from .multiclass import (
    ENGINE_GBDT,
    ENGINE_LOGREG,
    MulticlassModel,
    predict_multiclass,
    predict_multiclass_batch,
    predict_multiclass_proba,
    train_multiclass,
)
from .store import (
    load_gbdt_model,
    load_linear_model,
    load_model,
    load_multiclass_model,
    save_model,
)

__all__ = [
    "GBDTConfig",
    "GBDTModel",
    "PRESETS",
    "cb_like",
    "predict_gbdt",
    "predict_gbdt_batch",
    "train_gbdt",
    "xgb_like",
    "LinearModel",
    "LRConfig",
    "predict_logreg",
    "predict_logreg_batch",
    "train_logreg",
    "ENGINE_GBDT",
    "ENGINE_LOGREG",
    "MulticlassModel",
    "predict_multiclass",
    "predict_multiclass_batch",
    "predict_multiclass_proba",
    "train_multiclass",
    "load_gbdt_model",
    "load_linear_model",
    "load_model",
    "load_multiclass_model",
    "save_model",
]
