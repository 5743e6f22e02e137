"""Longitudinal abuse-detection and multi-label sentiment analytics.

The package turns raw social-media post dumps into reproducible trend
analytics: ingestion into a partitioned corpus, deterministic text
normalization, pluggable binary + ten-label sentiment classification,
evaluation metrics, polarity scoring, n-gram frequency tables, longitudinal
aggregation, and a human-in-the-loop annotation service.
"""

from .labels import BINARY_LABELS, HINDUPHOBIC, POSITIVE_NEUTRAL, SENWAVE_LABELS
from .posts import NormalizedPost, RawPost, iter_months, month_key, parse_timestamp
from .normalize import NormalizationRules, SpamHeuristics, dedup, normalize, spam_filter
from .corpus import CaseSeries, Corpus, ingest, load_cases, write_corpus
from .classify import (
    BinaryPrediction,
    KeywordBackend,
    KeywordRuleSet,
    ModelBackendDescriptor,
    PortableModelBackend,
    RemoteHttpBackend,
    SentimentVector,
    classify_binary,
    classify_corpus,
    classify_sentiment,
)
from .metrics import (
    BinaryMetrics,
    MultiLabelMetrics,
    aggregate_runs,
    binary_metrics,
    f1_multilabel,
    hamming_loss,
    jaccard_samples,
    lrap,
    multilabel_metrics,
)
from .polarity import (
    DEFAULT_WEIGHTS,
    PolarityLexicon,
    PolarityScore,
    SentimentWeights,
    custom_polarity,
    lexicon_polarity,
    monthly_mean_polarity,
)
from .ngrams import NGramTable, count_ngrams, extract_ngrams, topk
from .aggregate import (
    CooccurrenceMatrix,
    LabelCountDistribution,
    MonthlySeries,
    ScoredPost,
    cooccurrence,
    cooccurrence_by_year,
    correlate_with_cases,
    filter_hinduphobic,
    join_scored_posts,
    label_count_distribution,
    monthly_counts,
    sentiment_totals,
)
from .annotation import AnnotationQueue, AnnotationTask, bootstrap_labels
from .pipeline import PipelineConfig, run

__version__ = "0.1.0"

__all__ = [
    "BINARY_LABELS",
    "HINDUPHOBIC",
    "POSITIVE_NEUTRAL",
    "SENWAVE_LABELS",
    "NormalizedPost",
    "RawPost",
    "iter_months",
    "month_key",
    "parse_timestamp",
    "NormalizationRules",
    "SpamHeuristics",
    "dedup",
    "normalize",
    "spam_filter",
    "CaseSeries",
    "Corpus",
    "ingest",
    "load_cases",
    "write_corpus",
    "BinaryPrediction",
    "KeywordBackend",
    "KeywordRuleSet",
    "ModelBackendDescriptor",
    "PortableModelBackend",
    "RemoteHttpBackend",
    "SentimentVector",
    "classify_binary",
    "classify_corpus",
    "classify_sentiment",
    "BinaryMetrics",
    "MultiLabelMetrics",
    "aggregate_runs",
    "binary_metrics",
    "f1_multilabel",
    "hamming_loss",
    "jaccard_samples",
    "lrap",
    "multilabel_metrics",
    "DEFAULT_WEIGHTS",
    "PolarityLexicon",
    "PolarityScore",
    "SentimentWeights",
    "custom_polarity",
    "lexicon_polarity",
    "monthly_mean_polarity",
    "NGramTable",
    "count_ngrams",
    "extract_ngrams",
    "topk",
    "CooccurrenceMatrix",
    "LabelCountDistribution",
    "MonthlySeries",
    "ScoredPost",
    "cooccurrence",
    "cooccurrence_by_year",
    "correlate_with_cases",
    "filter_hinduphobic",
    "join_scored_posts",
    "label_count_distribution",
    "monthly_counts",
    "sentiment_totals",
    "AnnotationQueue",
    "AnnotationTask",
    "bootstrap_labels",
    "PipelineConfig",
    "run",
]
