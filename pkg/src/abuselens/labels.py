"""Canonical label sets shared across the pipeline.

The sentiment label order is fixed everywhere: score vectors, prediction
files, weight files and the annotation UI all index labels by this order.
"""

SENWAVE_LABELS = (
    "optimistic",
    "thankful",
    "empathetic",
    "pessimistic",
    "anxious",
    "sad",
    "annoyed",
    "denial",
    "official_report",
    "joking",
)

HINDUPHOBIC = "hinduphobic"
POSITIVE_NEUTRAL = "positive_neutral"
BINARY_LABELS = (HINDUPHOBIC, POSITIVE_NEUTRAL)

LABEL_INDEX = {label: i for i, label in enumerate(SENWAVE_LABELS)}
