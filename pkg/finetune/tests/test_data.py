"""Dataset loaders and the whitespace tokenizer."""

import pytest

from finelens import DatasetError, Tokenizer, load_labeled_records, load_sentiment_csv

from traingen import make_separable_rows, write_jsonl


def test_load_labeled_records_roundtrip(tmp_path):
    path = write_jsonl(tmp_path / "d.jsonl", make_separable_rows(10))
    examples = load_labeled_records(path)
    assert len(examples) == 10
    assert examples[0].binary_label == "hinduphobic"
    assert examples[1].binary_label == "positive_neutral"
    assert examples[0].binary_target == 1.0
    assert examples[1].binary_target == 0.0


def test_load_labeled_records_requires_text(tmp_path):
    rows = [{"id": "x", "binary_label": "hinduphobic", "sentiment_labels": []}]
    path = write_jsonl(tmp_path / "d.jsonl", rows)
    with pytest.raises(DatasetError, match="text"):
        load_labeled_records(path)


def test_load_labeled_records_rejects_unknown_labels(tmp_path):
    rows = [{"id": "x", "text": "hi", "binary_label": "spam",
             "sentiment_labels": []}]
    path = write_jsonl(tmp_path / "d.jsonl", rows)
    with pytest.raises(DatasetError, match="binary_label"):
        load_labeled_records(path)

    rows = [{"id": "x", "text": "hi", "binary_label": "hinduphobic",
             "sentiment_labels": ["gleeful"]}]
    path = write_jsonl(tmp_path / "d2.jsonl", rows)
    with pytest.raises(DatasetError, match="sentiment"):
        load_labeled_records(path)


def test_load_labeled_records_empty_file(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("", encoding="utf-8")
    with pytest.raises(DatasetError, match="no records"):
        load_labeled_records(path)


def test_load_sentiment_csv(tmp_path):
    header = ("text,optimistic,thankful,empathetic,pessimistic,anxious,"
              "sad,annoyed,denial,official_report,joking\n")
    path = tmp_path / "s.csv"
    path.write_text(header + "feeling low,0,0,0,0,0,1,0,0,0,0\n"
                    + "great news,1,1,0,0,0,0,0,0,0,0\n", encoding="utf-8")
    examples = load_sentiment_csv(path)
    assert examples[0].sentiment_labels == ("sad",)
    assert examples[1].sentiment_labels == ("optimistic", "thankful")
    assert examples[1].sentiment_targets() == [1.0, 1.0] + [0.0] * 8


def test_load_sentiment_csv_missing_columns(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("text,optimistic\nhi,1\n", encoding="utf-8")
    with pytest.raises(DatasetError, match="missing label columns"):
        load_sentiment_csv(path)


def test_tokenizer_pads_and_truncates():
    tok = Tokenizer.fit(["alpha beta gamma", "alpha beta"], max_length=4)
    ids, mask = tok.encode("alpha beta")
    assert len(ids) == len(mask) == 4
    assert mask == [1, 1, 0, 0]
    assert ids[2:] == [Tokenizer.PAD, Tokenizer.PAD]
    ids, mask = tok.encode("alpha beta gamma alpha beta gamma")
    assert len(ids) == 4 and mask == [1, 1, 1, 1]


def test_tokenizer_unknown_tokens_map_to_unk():
    tok = Tokenizer.fit(["alpha beta"], max_length=3)
    ids, _ = tok.encode("delta")
    assert ids[0] == Tokenizer.UNK


def test_tokenizer_metadata_schema():
    tok = Tokenizer.fit(["alpha beta"], max_length=8)
    meta = tok.as_metadata()
    assert set(meta) == {"vocab", "unk_id", "pad_id", "max_length"}
    assert meta["pad_id"] == 0 and meta["unk_id"] == 1
    assert meta["max_length"] == 8


def test_tokenizer_fit_is_deterministic():
    texts = ["c b a", "b a", "a"]
    assert Tokenizer.fit(texts, 8).vocab == Tokenizer.fit(texts, 8).vocab
