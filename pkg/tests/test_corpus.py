import json

import pytest

from abuselens import Corpus, ingest, load_cases
from abuselens.corpus import CorpusError, SchemaError

from corpusgen import make_raw_rows, write_jsonl


class TestIngest:
    def test_partitioned_layout(self, tmp_path, raw_input):
        corpus = ingest(raw_input, tmp_path / "store", "c")
        assert (tmp_path / "store/c/manifest.json").exists()
        assert (tmp_path / "store/c/rejects.jsonl").exists()
        for country, month in corpus.partition_keys():
            assert (tmp_path / f"store/c/{country}/{month}.jsonl").exists()
        assert corpus.record_count() == 60

    def test_conservation(self, tmp_path, raw_input):
        corpus = ingest(raw_input, tmp_path / "store", "c")
        corpus.check_conservation()
        total = sum(1 for _ in corpus.iter_records())
        assert total == corpus.record_count()

    def test_invalid_rows_rejected_not_fatal(self, tmp_path):
        rows = make_raw_rows(5)
        rows.append({"id": "bad1", "text": "x", "timestamp": "not-a-date",
                     "country": "IN"})
        rows.append({"id": "bad2", "text": "x", "timestamp": "2020-05-01T00:00:00Z",
                     "country": "India"})
        rows.append({"id": "p0", "text": "dup id", "timestamp": "2020-05-01T00:00:00Z",
                     "country": "IN"})
        rows.append({"id": "bad3", "text": "", "timestamp": "2020-05-01T00:00:00Z",
                     "country": "IN"})
        path = write_jsonl(tmp_path / "raw.jsonl", rows)
        corpus = ingest(path, tmp_path / "store", "c")
        assert corpus.record_count() == 5
        rejects = [json.loads(l) for l in
                   (tmp_path / "store/c/rejects.jsonl").read_text().splitlines()]
        assert len(rejects) == 4
        reasons = " ".join(r["reason"] for r in rejects)
        assert "unparseable timestamp" in reasons
        assert "invalid country" in reasons
        assert "duplicate id" in reasons
        assert "missing fields" in reasons

    def test_schema_map_and_csv(self, tmp_path):
        csv_path = tmp_path / "raw.csv"
        csv_path.write_text(
            "tweet_id,content,created_at,cc\n"
            "t1,hello world,2020-06-02T10:00:00Z,IN\n"
            "t2,more text,2020-06-03T10:00:00+05:30,AU\n"
        )
        corpus = ingest(csv_path, tmp_path / "store", "c", fmt="csv",
                        schema_map={"id": "tweet_id", "text": "content",
                                    "timestamp": "created_at", "country": "cc"})
        assert corpus.record_count() == 2
        recs = list(corpus.iter_records())
        # timezone-aware timestamps normalize to UTC
        assert recs[0]["timestamp"] == "2020-06-03T04:30:00Z"
        assert recs[0]["country"] == "AU"

    def test_missing_schema_column_is_schema_error(self, tmp_path, raw_input):
        with pytest.raises(SchemaError, match="missing required column"):
            ingest(raw_input, tmp_path / "store", "c",
                   schema_map={"id": "id", "text": "text", "timestamp": "timestamp"})

    def test_missing_input_file(self, tmp_path):
        with pytest.raises(SchemaError, match="does not exist"):
            ingest(tmp_path / "nope.jsonl", tmp_path / "store", "c")

    def test_country_allowlist(self, tmp_path):
        rows = [{"id": "a", "text": "x", "timestamp": "2020-05-01T00:00:00Z",
                 "country": "FR"},
                {"id": "b", "text": "y", "timestamp": "2020-05-01T00:00:00Z",
                 "country": "IN"}]
        path = write_jsonl(tmp_path / "raw.jsonl", rows)
        corpus = ingest(path, tmp_path / "store", "c", countries=("IN", "AU"))
        assert corpus.record_count() == 1


class TestRoundTrip:
    def test_export_flattens_in_deterministic_order(self, tmp_path, ingested_corpus):
        out = tmp_path / "flat.jsonl"
        n = ingested_corpus.export(out)
        assert n == ingested_corpus.record_count()
        ids = [json.loads(l)["id"] for l in out.read_text().splitlines()]
        assert len(set(ids)) == len(ids)
        # re-exporting yields identical bytes
        out2 = tmp_path / "flat2.jsonl"
        ingested_corpus.export(out2)
        assert out.read_bytes() == out2.read_bytes()

    def test_broken_manifest_detected(self, tmp_path, ingested_corpus):
        manifest = ingested_corpus.manifest
        manifest["record_count"] += 1
        ingested_corpus.manifest_path.write_text(json.dumps(manifest))
        with pytest.raises(CorpusError, match="manifest says"):
            Corpus(ingested_corpus.root).check_conservation()


class TestCaseSeries:
    def _write(self, tmp_path, rows):
        p = tmp_path / "cases.csv"
        p.write_text("country,month,cases\n" + "\n".join(rows) + "\n")
        return p

    def test_load(self, tmp_path):
        p = self._write(tmp_path, ["IN,2020-04,100", "IN,2020-05,250",
                                   "AU,2020-04,7"])
        series = load_cases(p)
        assert series["IN"].as_dict() == {"2020-04": 100, "2020-05": 250}
        assert series["AU"].counts == [7]

    def test_gap_requires_fill_zero(self, tmp_path):
        p = self._write(tmp_path, ["IN,2020-04,100", "IN,2020-06,50"])
        with pytest.raises(CorpusError, match="gap"):
            load_cases(p)
        series = load_cases(p, fill_zero=True)
        assert series["IN"].counts == [100, 0, 50]

    def test_negative_rejected(self, tmp_path):
        p = self._write(tmp_path, ["IN,2020-04,-5"])
        with pytest.raises(CorpusError, match="negative"):
            load_cases(p)

    def test_bad_month_rejected(self, tmp_path):
        p = self._write(tmp_path, ["IN,April-2020,5"])
        with pytest.raises(CorpusError, match="bad month"):
            load_cases(p)
