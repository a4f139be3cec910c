from pathlib import Path

import pytest

from mirstat.corpus import ingest_corpus
from mirstat.index import build_index

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_corpus_dir() -> Path:
    return FIXTURES / "corpus"


@pytest.fixture(scope="session")
def fixture_corpus(fixture_corpus_dir):
    return ingest_corpus(fixture_corpus_dir)


@pytest.fixture(scope="session")
def fixture_index(fixture_corpus):
    return build_index(fixture_corpus)
