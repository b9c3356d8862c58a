import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).resolve().parent
sys.path.insert(0, str(TESTS_DIR))  # for the oracles package

from misotweet import corpus, preprocess  # noqa: E402

FIXTURES = TESTS_DIR / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def pre_config() -> preprocess.PreprocessConfig:
    return preprocess.default_config()


@pytest.fixture(scope="session")
def tiny_train() -> corpus.Dataset:
    return corpus.load_dataset(FIXTURES / "tiny_train.tsv")


@pytest.fixture(scope="session")
def tiny_test() -> corpus.Dataset:
    return corpus.load_dataset(FIXTURES / "tiny_test.tsv")


@pytest.fixture(scope="session")
def synthetic_train() -> corpus.Dataset:
    return corpus.load_dataset(FIXTURES / "synthetic_train.tsv")


@pytest.fixture(scope="session")
def synthetic_test() -> corpus.Dataset:
    return corpus.load_dataset(FIXTURES / "synthetic_test.tsv")
