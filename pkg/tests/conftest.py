import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles/corpusgen importable

from corpusgen import make_raw_rows, write_jsonl  # noqa: E402

from abuselens import NormalizationRules, RawPost, ingest, normalize, write_corpus  # noqa: E402


@pytest.fixture
def raw_input(tmp_path):
    return write_jsonl(tmp_path / "posts.jsonl", make_raw_rows(60))


@pytest.fixture
def normalized_corpus(tmp_path):
    """A small normalized corpus on disk, ready for classification."""
    rules = NormalizationRules.default()
    records = []
    for row in make_raw_rows(40):
        post = normalize(RawPost(**row), rules)
        records.append(post.to_record())
    return write_corpus(tmp_path / "store", "normalized", records)


@pytest.fixture
def ingested_corpus(tmp_path):
    path = write_jsonl(tmp_path / "raw.jsonl", make_raw_rows(40))
    return ingest(path, tmp_path / "store", "raw")
