"""Shared fixtures built from the bundled mini corpus.

The corpus under tests/fixtures/corpus is committed output of
tests/fixtures/gen_corpus.py; gold.jsonl is committed output of
tests/fixtures/gen_gold.py. Both are mined/loaded once per session.
"""

from pathlib import Path

import pytest

from snipdoc import schemas
from snipdoc.extractor import MineConfig, mine_corpus

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return FIXTURES / "corpus"


@pytest.fixture(scope="session")
def gold_path() -> Path:
    return FIXTURES / "gold.jsonl"


@pytest.fixture(scope="session")
def manifest(corpus_dir):
    return mine_corpus(corpus_dir, MineConfig())


@pytest.fixture(scope="session")
def gold_records(gold_path):
    return schemas.read_jsonl(gold_path, schemas.GOLD)


@pytest.fixture(scope="session")
def gold_by_comment(gold_records):
    return {rec["comment_id"]: rec for rec in gold_records}
