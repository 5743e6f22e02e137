"""Acceptance gate: one test per top-level criterion, each printing a
pass/fail line (run with -s to see the lines for passing tests)."""

import json
import random
import sys
import time

import pytest

from abuselens import (
    AnnotationQueue,
    KeywordBackend,
    NormalizationRules,
    PipelineConfig,
    RawPost,
    SentimentWeights,
    bootstrap_labels,
    cooccurrence,
    custom_polarity,
    f1_multilabel,
    hamming_loss,
    jaccard_samples,
    label_count_distribution,
    lrap,
    monthly_counts,
    normalize,
    run,
)
from abuselens.aggregate import ScoredPost
from abuselens.ngrams import count_ngrams, default_stopwords, extract_ngrams, topk
from abuselens.service import create_app
from fastapi.testclient import TestClient

from corpusgen import make_raw_rows, write_jsonl
from oracles import (
    oracle_cooccurrence,
    oracle_f1_macro,
    oracle_f1_micro,
    oracle_hamming,
    oracle_jaccard,
    oracle_lrap,
)
from test_normalize import SENTENCE_FIXTURES, TOKEN_FIXTURES


def _report(name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    line = f"[{status}] {name}"
    if detail:
        line += f" ({detail})"
    print(line, file=sys.stderr, flush=True)
    assert ok, line


def _scored(pid, country, month, active):
    return ScoredPost(id=pid, country=country, month=month,
                      binary="hinduphobic", confidence=0.9,
                      scores=[1.0 if a else 0.0 for a in active],
                      active=list(active))


def test_normalizer_fidelity():
    rules = NormalizationRules.default()
    start = time.perf_counter()
    ok = True
    for raw, expected in SENTENCE_FIXTURES:
        post = RawPost(id="t", text=raw, timestamp="2021-01-01T00:00:00Z",
                       country="IN")
        ok &= normalize(post, rules).normalized_text == expected
    for original, expected in TOKEN_FIXTURES:
        ok &= rules.map_token(original) == expected
    elapsed = time.perf_counter() - start
    ok &= elapsed < 1.0
    _report("normalizer fidelity: 6 reference sentences bit-exact, "
            "18 token mappings exact", ok, f"{elapsed * 1000:.0f} ms")


def test_metrics_oracle_equivalence():
    rng = random.Random(42)
    y_true, y_pred, y_score = [], [], []
    for _ in range(200):
        t = [rng.random() < 0.3 for _ in range(10)]
        if not any(t):
            t[rng.randrange(10)] = True
        y_true.append(t)
        y_pred.append([rng.random() < 0.3 for _ in range(10)])
        y_score.append([rng.random() for _ in range(10)])
    tol = 1e-9
    ok = (
        abs(hamming_loss(y_true, y_pred) - oracle_hamming(y_true, y_pred)) < tol
        and abs(jaccard_samples(y_true, y_pred) - oracle_jaccard(y_true, y_pred)) < tol
        and abs(lrap(y_true, y_score) - oracle_lrap(y_true, y_score)) < tol
        and abs(f1_multilabel(y_true, y_pred, "macro")
                - oracle_f1_macro(y_true, y_pred)) < tol
        and abs(f1_multilabel(y_true, y_pred, "micro")
                - oracle_f1_micro(y_true, y_pred)) < tol
    )
    # trivial anchors: perfect predictions score 0/1/1/1/1 exactly
    perfect_scores = [[1.0 if v else 0.0 for v in row] for row in y_true]
    ok &= hamming_loss(y_true, y_true) == 0.0
    ok &= jaccard_samples(y_true, y_true) == 1.0
    ok &= lrap(y_true, perfect_scores) == 1.0
    ok &= f1_multilabel(y_true, y_true, "macro") == 1.0
    ok &= f1_multilabel(y_true, y_true, "micro") == 1.0
    _report("metrics: 200-instance brute-force oracle agreement within 1e-9, "
            "perfect anchors exact", ok)


def test_custom_polarity_reference_points():
    weights = SentimentWeights()
    ok = custom_polarity(["annoyed"], weights).value == -0.20
    ok &= custom_polarity([], weights).value == 0.0
    rng = random.Random(2024)
    lo = hi = 0.0
    for _ in range(10_000):
        active = [rng.random() < 0.35 for _ in range(10)]
        v = custom_polarity(active, weights).value
        lo, hi = min(lo, v), max(hi, v)
        ok &= -1.0 <= v <= 0.6
    _report("custom polarity: lone 'annoyed' = -0.20 exact, empty = 0 exact, "
            "10k random vectors within [-1, 0.6]", ok,
            f"observed range [{lo:.3f}, {hi:.3f}]")


def test_label_count_distribution_reference_fixture():
    posts = []
    for count, n_active in ((2, 0), (809, 1), (158, 2), (31, 3)):
        for i in range(count):
            posts.append(_scored(f"x{n_active}_{i}", "IN", "2020-05",
                                 [j < n_active for j in range(10)]))
    dist = label_count_distribution(posts)
    expected = {"0": 0.2, "1": 80.9, "2": 15.8, "3+": 3.1}
    ok = all(abs(dist.percentages[k] - v) <= 0.05 for k, v in expected.items())
    ok &= abs(sum(dist.percentages.values()) - 100.0) <= 0.1
    _report("label-count distribution: 0.2/80.9/15.8/3.1 within ±0.05, "
            "sums to 100 ± 0.1", ok)


def test_cooccurrence_symmetry_and_oracle():
    rng = random.Random(7)
    posts = [_scored(f"p{i}", "IN", rng.choice(["2020-05", "2021-02"]),
                     [rng.random() < 0.3 for _ in range(10)])
             for i in range(1000)]
    m = cooccurrence(posts)
    ok = True
    try:
        m.check_invariants()
    except Exception:
        ok = False
    for i in range(10):
        ok &= m.matrix[i][i] == sum(1 for p in posts if p.active[i])
    ok &= m.matrix == oracle_cooccurrence([p.active for p in posts], 10)
    _report("co-occurrence: symmetric, diagonal identity, equals brute-force "
            "oracle on 1000 random posts", ok)


def test_conservation_on_fixtures():
    ok = True
    for seed in range(3):
        rng = random.Random(seed)
        posts = [_scored(f"p{i}", rng.choice(["IN", "AU", "GB", "JP"]),
                         rng.choice(["2020-04", "2020-07", "2021-01"]),
                         [rng.random() < 0.3 for _ in range(10)])
                 for i in range(rng.randrange(50, 400))]
        series = monthly_counts(posts)
        ok &= series["ALL"].total() == len(posts)
        ok &= sum(s.total() for c, s in series.items() if c != "ALL") == len(posts)
    _report("conservation: monthly/country aggregations sum to total on "
            "every fixture", ok)


def test_pipeline_determinism_and_throughput(tmp_path):
    input_path = write_jsonl(tmp_path / "posts.jsonl", make_raw_rows(10_000))

    def one_run():
        config = PipelineConfig(input_path=str(input_path),
                                output_dir=str(tmp_path / "out"),
                                figures=False)
        start = time.perf_counter()
        manifest = run(config)
        return manifest, time.perf_counter() - start

    m1, t1 = one_run()
    m2, t2 = one_run()
    digests1 = {s: v["outputs"] for s, v in m1["stages"].items()}
    digests2 = {s: v["outputs"] for s, v in m2["stages"].items()}
    ok = digests1 == digests2 and t1 < 10.0 and t2 < 10.0
    _report("determinism & throughput: 10k-post pipeline < 10 s with "
            "byte-identical digests across two runs", ok,
            f"{t1:.2f}s / {t2:.2f}s")


def test_ngram_count_identity_and_planted_trigram():
    stopwords = default_stopwords()
    rng = random.Random(3)
    vocab = ["cow", "urine", "cure", "virus", "the", "and", "spread", "claim"]
    ok = True
    for _ in range(500):
        tokens = [rng.choice(vocab) for _ in range(rng.randrange(0, 15))]
        m = len([t for t in tokens if t not in stopwords])
        ok &= len(extract_ngrams(tokens, 2, stopwords)) == max(0, m - 1)
        ok &= len(extract_ngrams(tokens, 3, stopwords)) == max(0, m - 2)
    planted = [["cow", "urine", "cure", "claim"]] * 6 + \
              [["virus", "spread", "fast", "today"]] * 3
    table = count_ngrams(planted, 3, stopwords)
    top = topk(table, 1)
    ok &= top[0][0] == "cow urine cure"
    _report("n-grams: per-post count identity holds over 500 random token "
            "lists, planted 'cow urine cure' is the top trigram", ok)


def test_annotation_service_walkthrough(tmp_path, normalized_corpus):
    qdir = tmp_path / "queue"
    queue = bootstrap_labels(normalized_corpus, KeywordBackend(), n_manual=0,
                             out_dir=qdir)
    client = TestClient(create_app(queue))
    confirmed = 0
    decided_ids = []
    for i in range(10):
        task = client.get("/api/tasks/next", params={"client": "alice"}).json()
        if i % 3 == 2:
            flipped = ("positive_neutral"
                       if task["proposed_binary"] == "hinduphobic"
                       else "hinduphobic")
            body = {"action": "override", "binary": flipped,
                    "sentiments": [], "decided_by": "alice"}
        else:
            body = {"action": "confirm", "decided_by": "alice"}
            confirmed += 1
        resp = client.post(f"/api/tasks/{task['post_id']}/decision", json=body)
        assert resp.status_code == 200
        decided_ids.append(task["post_id"])
    stats = client.get("/api/stats").json()
    ok = stats["decided"] == 10
    ok &= stats["agreement"] == pytest.approx(confirmed / 10)
    # crash recovery: rebuild from disk, nothing acknowledged is lost
    recovered = AnnotationQueue(qdir)
    rstats = recovered.stats()
    ok &= rstats["decided"] == 10
    ok &= all(recovered.get(pid).status != "pending" for pid in decided_ids)
    _report("annotation service: 10-decision walk-through, agreement "
            "correct, crash recovery loses zero acknowledged decisions", ok,
            f"agreement={stats['agreement']:.2f}")
