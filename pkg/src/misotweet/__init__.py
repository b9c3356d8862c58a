"""Misogyny detection for English tweets.

Preprocess tweets into stemmed tokens, build concatenated TF-IDF, averaged
word-embedding, and sentence-embedding features, train from-scratch logistic
regression or gradient-boosted-tree classifiers, and evaluate the binary
misogyny task and the category/target task.
"""

__version__ = "0.1.0"

from . import corpus, evaluation, features, models, pipeline, preprocess, stemmer
from .errors import (
    ConfigError,
    DataError,
    EngineTypeError,
    LayoutMismatchError,
    MisotweetError,
    ModelFormatError,
)

__all__ = [
    "__version__",
    "corpus",
    "evaluation",
    "features",
    "models",
    "pipeline",
    "preprocess",
    "stemmer",
    "ConfigError",
    "DataError",
    "EngineTypeError",
    "LayoutMismatchError",
    "MisotweetError",
    "ModelFormatError",
]
