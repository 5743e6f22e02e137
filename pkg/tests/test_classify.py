import json

import pytest

from abuselens import (
    KeywordBackend,
    KeywordRuleSet,
    ModelBackendDescriptor,
    NormalizationRules,
    RawPost,
    SentimentVector,
    classify_binary,
    classify_corpus,
    classify_sentiment,
    normalize,
)
from abuselens.classify import BackendError, TransportError, iter_predictions
from abuselens.labels import HINDUPHOBIC, POSITIVE_NEUTRAL, SENWAVE_LABELS

RULES = NormalizationRules.default()


def _post(text, pid="t"):
    return normalize(RawPost(id=pid, text=text,
                             timestamp="2020-05-01T00:00:00Z", country="IN"),
                     RULES)


class TestSentimentVector:
    def test_active_thresholding(self):
        scores = [0.1, 0.5, 0.49, 0.9] + [0.0] * 6
        v = SentimentVector(scores=scores, threshold=0.5)
        assert v.active == [False, True, False, True] + [False] * 6
        assert v.active_labels() == ["thankful", "pessimistic"]

    def test_wrong_arity_rejected(self):
        with pytest.raises(ValueError, match="expected 10"):
            SentimentVector(scores=[0.5] * 9)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError, match="out of range"):
            SentimentVector(scores=[1.5] + [0.0] * 9)


class TestKeywordRuleSet:
    def test_overlap_rejected(self):
        with pytest.raises(ValueError, match="both polarity"):
            KeywordRuleSet(negative={"x": 1.0}, positive={"x": 1.0})

    def test_nonpositive_weight_rejected(self):
        with pytest.raises(ValueError, match="non-positive"):
            KeywordRuleSet(negative={"x": 0.0}, positive={})

    def test_default_rules_load(self):
        rules = KeywordRuleSet.default()
        assert rules.negative and rules.positive
        assert set(rules.sentiment_cues) == set(SENWAVE_LABELS)


class TestKeywordBackend:
    def test_negative_evidence_flags(self):
        backend = KeywordBackend()
        pred = classify_binary(_post("they drink cow urine and spread disease"),
                               backend)
        assert pred.label == HINDUPHOBIC
        assert pred.confidence > 0.5

    def test_positive_evidence_clears(self):
        backend = KeywordBackend()
        pred = classify_binary(_post("namaste and thank you for the food distribution"),
                               backend)
        assert pred.label == POSITIVE_NEUTRAL

    def test_no_evidence_is_neutral_at_half_confidence(self):
        backend = KeywordBackend()
        pred = classify_binary(_post("completely unrelated gardening advice"),
                               backend)
        assert pred.label == POSITIVE_NEUTRAL
        assert pred.confidence == 0.5

    def test_tie_goes_to_positive_neutral(self):
        rules = KeywordRuleSet(negative={"badword": 1.0},
                               positive={"goodword": 1.0})
        backend = KeywordBackend(rules=rules)
        pred = classify_binary(_post("badword and goodword together"), backend)
        assert pred.label == POSITIVE_NEUTRAL
        assert pred.confidence == 0.5

    def test_confidence_formula(self):
        rules = KeywordRuleSet(negative={"veryneg": 3.0},
                               positive={"slightpos": 1.0})
        backend = KeywordBackend(rules=rules)
        pred = classify_binary(_post("veryneg but slightpos"), backend)
        # 0.5 + 0.5 * |3-1|/(3+1) = 0.75
        assert pred.confidence == pytest.approx(0.75)

    def test_phrase_matching_is_token_bounded(self):
        rules = KeywordRuleSet(negative={"cow urine": 1.0}, positive={})
        backend = KeywordBackend(rules=rules)
        assert classify_binary(_post("scow urines everywhere"), backend).label \
            == POSITIVE_NEUTRAL
        assert classify_binary(_post("drink cow urine daily"), backend).label \
            == HINDUPHOBIC

    def test_sentiment_cues(self):
        backend = KeywordBackend()
        v = classify_sentiment(_post("this is ridiculous, what a joke"), backend)
        assert "joking" in v.active_labels()


class TestDescriptor:
    def test_unknown_kind(self):
        with pytest.raises(BackendError, match="unknown backend kind"):
            ModelBackendDescriptor(kind="mystery").load()

    def test_portable_requires_path(self):
        with pytest.raises(BackendError, match="needs a path"):
            ModelBackendDescriptor(kind="portable_model_file").load()

    def test_remote_requires_endpoint(self):
        with pytest.raises(BackendError, match="needs an endpoint"):
            ModelBackendDescriptor(kind="remote_http").load()

    def test_keyword_kind_loads(self):
        backend = ModelBackendDescriptor(kind="keyword_rule").load()
        assert backend.kind == "keyword_rule"


class TestCorpusClassification:
    def test_predictions_persisted_per_partition(self, normalized_corpus):
        backend = KeywordBackend()
        summary = classify_corpus(normalized_corpus, backend)
        assert summary["records"] == normalized_corpus.record_count()
        preds = list(iter_predictions(normalized_corpus))
        assert len(preds) == summary["records"]
        rec_ids = [r["id"] for r in normalized_corpus.iter_records()]
        assert [p["id"] for p in preds] == rec_ids
        for p in preds:
            assert len(p["sentiment_scores"]) == 10

    def test_resume_skips_completed_partitions(self, normalized_corpus):
        backend = KeywordBackend()
        first = classify_corpus(normalized_corpus, backend)
        checkpoint = json.loads(
            (normalized_corpus.root / "predictions.checkpoint.json").read_text())
        assert checkpoint["completed"]

        class ExplodingBackend:
            backend_id = "boom"

            def predict_binary(self, post):
                raise AssertionError("should not recompute finished partitions")

            predict_sentiment = predict_binary

        second = classify_corpus(normalized_corpus, ExplodingBackend())
        assert second["records"] == first["records"]
        assert second["digest"] == first["digest"]

    def test_digest_deterministic(self, normalized_corpus):
        backend = KeywordBackend()
        a = classify_corpus(normalized_corpus, backend, resume=False)
        b = classify_corpus(normalized_corpus, backend, resume=False)
        assert a["digest"] == b["digest"]


@pytest.fixture(scope="module")
def portable_model(tmp_path_factory):
    torch = pytest.importorskip("torch")
    root = tmp_path_factory.mktemp("model")

    class Tiny(torch.nn.Module):
        def forward(self, ids, mask, type_ids):
            # binary logit rises with token id 3 ("cow"); sentiments fixed
            has_cue = (ids == 3).any(dim=1).float()
            binary = has_cue * 4.0 - 2.0
            sentiments = torch.zeros(ids.shape[0], 10) - 1.0
            sentiments[:, 6] = 2.0  # "annoyed" always on
            return binary, sentiments

    path = root / "tiny.pt"
    torch.jit.script(Tiny()).save(str(path))
    meta = {
        "sentiment_labels": list(SENWAVE_LABELS),
        "outputs": {"binary_logit": 1, "sentiment_logits": 10},
        "tokenizer": {"vocab": {"cow": 3, "urine": 4, "hello": 5},
                      "unk_id": 0, "pad_id": 1, "max_length": 16},
    }
    (root / "tiny.pt.meta.json").write_text(json.dumps(meta))
    return path


class TestPortableBackend:
    def test_load_and_predict(self, portable_model):
        backend = ModelBackendDescriptor(
            kind="portable_model_file", path=str(portable_model)).load()
        label, conf = backend.predict_binary(_post("cow urine everywhere"))
        assert label == HINDUPHOBIC and conf > 0.5
        label, conf = backend.predict_binary(_post("hello hello"))
        assert label == POSITIVE_NEUTRAL
        scores = backend.predict_sentiment(_post("hello"))
        assert scores[6] > 0.5 and max(scores[:6]) < 0.5

    def test_label_order_mismatch_rejected(self, portable_model, tmp_path):
        import shutil
        bad = tmp_path / "bad.pt"
        shutil.copy(portable_model, bad)
        meta = json.loads(
            (portable_model.parent / "tiny.pt.meta.json").read_text())
        meta["sentiment_labels"] = meta["sentiment_labels"][::-1]
        (tmp_path / "bad.pt.meta.json").write_text(json.dumps(meta))
        with pytest.raises(BackendError, match="label order"):
            ModelBackendDescriptor(kind="portable_model_file", path=str(bad)).load()

    def test_missing_sidecar_rejected(self, portable_model, tmp_path):
        import shutil
        orphan = tmp_path / "orphan.pt"
        shutil.copy(portable_model, orphan)
        with pytest.raises(BackendError, match="metadata sidecar"):
            ModelBackendDescriptor(kind="portable_model_file", path=str(orphan)).load()

    def test_wrong_output_arity_rejected(self, portable_model, tmp_path):
        import shutil
        bad = tmp_path / "bad.pt"
        shutil.copy(portable_model, bad)
        meta = json.loads(
            (portable_model.parent / "tiny.pt.meta.json").read_text())
        meta["outputs"]["sentiment_logits"] = 5
        (tmp_path / "bad.pt.meta.json").write_text(json.dumps(meta))
        with pytest.raises(BackendError, match="output arity"):
            ModelBackendDescriptor(kind="portable_model_file", path=str(bad)).load()


class TestRemoteBackend:
    def test_retries_then_transport_error(self, monkeypatch):
        calls = {"n": 0}

        def failing_post(*a, **k):
            calls["n"] += 1
            raise OSError("connection refused")

        monkeypatch.setattr("requests.post", failing_post)
        monkeypatch.setattr("time.sleep", lambda s: None)
        backend = ModelBackendDescriptor(
            kind="remote_http", endpoint="http://localhost:1").load()
        with pytest.raises(TransportError, match="unavailable"):
            backend.predict_binary(_post("hello"))
        assert calls["n"] == 3

    def test_successful_roundtrip(self, monkeypatch):
        class FakeResponse:
            def raise_for_status(self):
                pass

            def json(self):
                return {"results": [{"binary_logit": 2.0,
                                     "sentiment_logits": [0.0] * 10}]}

        monkeypatch.setattr("requests.post", lambda *a, **k: FakeResponse())
        backend = ModelBackendDescriptor(
            kind="remote_http", endpoint="http://localhost:1").load()
        label, conf = backend.predict_binary(_post("whatever"))
        assert label == HINDUPHOBIC
        assert conf == pytest.approx(0.8807971, abs=1e-6)  # sigmoid(2.0)
