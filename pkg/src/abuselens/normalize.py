"""Deterministic preprocessing of raw posts into normalized token sequences.

Rule application order is fixed: mentions -> URLs -> emoji -> contractions and
slang -> hashtag unwrap -> case-fold -> punctuation strip -> whitespace
collapse. The shipped default rules live in data/rules.json.
"""

from __future__ import annotations

import json
import math
import re
import unicodedata
from collections import Counter, defaultdict
from dataclasses import dataclass
from importlib import resources

from .posts import NormalizedPost, RawPost

# private-use sentinel protecting the mention token through punctuation strip
_MENTION_SENTINEL = ""

_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_MENTION_RE = re.compile(r"@\w+")
_HASHTAG_RE = re.compile(r"#(\w+)")

_APOSTROPHES = str.maketrans({"’": "'", "‘": "'", "ʼ": "'", "`": "'", "´": "'"})
_QUOTES = str.maketrans({"“": '"', "”": '"'})


def _canon_key(key: str) -> str:
    return key.translate(_APOSTROPHES).lower()


def _word_map_regex(keys) -> re.Pattern:
    """One alternation over map keys, longest first, bounded by non-word chars."""
    parts = sorted((re.escape(k) for k in keys), key=len, reverse=True)
    return re.compile(
        r"(?<!\w)(?:" + "|".join(parts) + r")(?!\w)",
        re.IGNORECASE,
    )


class RulesError(ValueError):
    pass


class NormalizationRules:
    """Contraction/emoji/slang maps plus mention, URL and hashtag policies."""

    def __init__(self, contractions, emoji, slang, hashtags=None,
                 mention_replacement="[user mention]",
                 url_policy="drop", hashtag_policy="keep-text"):
        if url_policy not in ("drop", "keep-text"):
            raise RulesError(f"unknown url_policy: {url_policy}")
        if hashtag_policy not in ("drop", "keep-text"):
            raise RulesError(f"unknown hashtag_policy: {hashtag_policy}")
        self.contractions = {_canon_key(k): v for k, v in contractions.items()}
        self.emoji = dict(emoji)
        self.slang = {_canon_key(k): v for k, v in slang.items()}
        self.hashtags = dict(hashtags or {})
        self.mention_replacement = mention_replacement
        self.url_policy = url_policy
        self.hashtag_policy = hashtag_policy

        self._contraction_re = _word_map_regex(self.contractions) if self.contractions else None
        self._slang_re = _word_map_regex(self.slang) if self.slang else None
        # emoji replaced by plain substring scan, longest key first
        self._emoji_keys = sorted(self.emoji, key=len, reverse=True)

    @classmethod
    def from_dict(cls, data: dict) -> "NormalizationRules":
        policies = data.get("policies", {})
        return cls(
            contractions=data.get("contractions", {}),
            emoji=data.get("emoji", {}),
            slang=data.get("slang", {}),
            hashtags=data.get("hashtags", {}),
            mention_replacement=data.get("mention_replacement", "[user mention]"),
            url_policy=policies.get("url_policy", "drop"),
            hashtag_policy=policies.get("hashtag_policy", "keep-text"),
        )

    @classmethod
    def from_file(cls, path) -> "NormalizationRules":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    @classmethod
    def default(cls) -> "NormalizationRules":
        text = resources.files("abuselens.data").joinpath("rules.json").read_text("utf-8")
        return cls.from_dict(json.loads(text))

    def map_token(self, original: str) -> str:
        """Single-token mapping table lookup (reference semantics, pre case-fold).

        Checks mention, hashtag, emoji, contraction and slang maps in that
        order and returns the original token unchanged when nothing matches.
        """
        if _MENTION_RE.fullmatch(original):
            return self.mention_replacement
        if original.startswith("#"):
            if original in self.hashtags:
                return self.hashtags[original]
            return original[1:]
        if original in self.emoji:
            return self.emoji[original]
        key = _canon_key(original)
        if key in self.contractions:
            return self.contractions[key]
        if key in self.slang:
            return self.slang[key]
        return original


def default_rules_path() -> str:
    return str(resources.files("abuselens.data").joinpath("rules.json"))


def normalize(raw: RawPost, rules: NormalizationRules) -> NormalizedPost:
    """Normalize one post. Pure, deterministic and idempotent."""
    applied: list[str] = []

    text = unicodedata.normalize("NFC", raw.text)
    text = text.translate(_APOSTROPHES).translate(_QUOTES)

    # link-only detection must look at the pre-normalization text
    if text.strip() and not _URL_RE.sub(" ", text).strip():
        applied.append("link_only")

    # protect already-normalized mention tokens (idempotence)
    if rules.mention_replacement and rules.mention_replacement in text:
        text = text.replace(rules.mention_replacement, f" {_MENTION_SENTINEL} ")

    new = _MENTION_RE.sub(f" {_MENTION_SENTINEL} ", text)
    if new != text:
        applied.append("mention")
    text = new

    new = _URL_RE.sub(" ", text)
    if new != text:
        applied.append("url")
    # underscores count as word chars; normalize them to spaces up front so
    # later word-boundary maps see the same boundaries as the final strip
    text = new.replace("_", " ")

    for key in rules._emoji_keys:
        if key in text:
            text = text.replace(key, f" {rules.emoji[key]} ")
            if "emoji" not in applied:
                applied.append("emoji")

    if rules._contraction_re is not None:
        new = rules._contraction_re.sub(
            lambda m: rules.contractions[_canon_key(m.group(0))], text)
        if new != text:
            applied.append("contraction")
        text = new

    if rules._slang_re is not None:
        new = rules._slang_re.sub(
            lambda m: rules.slang[_canon_key(m.group(0))], text)
        if new != text:
            applied.append("slang")
        text = new

    repl = r"\1" if rules.hashtag_policy == "keep-text" else " "
    new = _HASHTAG_RE.sub(repl, text)
    if new != text:
        applied.append("hashtag")
    text = new

    text = text.lower()

    # strip everything but word chars, whitespace, hyphens and the sentinel
    new = re.sub(rf"[^\w\s\-{_MENTION_SENTINEL}]", " ", text)
    new = new.replace("_", " ")
    new = re.sub(r"-{2,}", " ", new)
    new = re.sub(r"(?<!\w)-|-(?!\w)", " ", new)
    if new != text:
        applied.append("punctuation")
    text = new

    tokens = [
        rules.mention_replacement if t == _MENTION_SENTINEL else t
        for t in text.split()
    ]
    return NormalizedPost(
        id=raw.id,
        tokens=tokens,
        normalized_text=" ".join(tokens),
        applied_rules=applied,
        timestamp=raw.timestamp,
        country=raw.country,
        language_hint=raw.language_hint,
    )


def dedup(posts) -> tuple[list[NormalizedPost], int]:
    """Drop posts whose normalized_text was already seen; first one wins."""
    seen = set()
    kept = []
    removed = 0
    for post in posts:
        key = " ".join(post.normalized_text.lower().split())
        if key in seen:
            removed += 1
        else:
            seen.add(key)
            kept.append(post)
    return kept, removed


@dataclass
class SpamHeuristics:
    min_tokens: int = 3
    near_duplicate_jaccard: float = 0.9
    drop_link_only: bool = True


def _jaccard(a: frozenset, b: frozenset) -> float:
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


def spam_filter(posts, heuristics: SpamHeuristics | None = None):
    """Split posts into (kept, discarded); discarded entries are (post, reason).

    Near-duplicate detection compares token-set Jaccard against already-kept
    posts. Candidate pairs come from a rare-token prefix index: any post with
    Jaccard >= t against A shares at least ceil(t*|A|) of A's tokens, so one
    of A's (|A| - ceil(t*|A|) + 1) globally rarest tokens must be in it.
    """
    h = heuristics or SpamHeuristics()
    posts = list(posts)
    t = h.near_duplicate_jaccard

    freq = Counter(tok for p in posts for tok in set(p.tokens))
    rank = {tok: (n, tok) for tok, n in freq.items()}

    kept: list[NormalizedPost] = []
    discarded: list[tuple[NormalizedPost, str]] = []
    token_index: dict[str, list[int]] = defaultdict(list)
    kept_sets: list[frozenset] = []

    for post in posts:
        if h.drop_link_only and "link_only" in post.applied_rules:
            discarded.append((post, "link_only"))
            continue
        if len(post.tokens) < h.min_tokens:
            discarded.append((post, "too_short"))
            continue
        tokset = frozenset(post.tokens)
        ordered = sorted(tokset, key=rank.__getitem__)
        prefix_len = len(ordered) - math.ceil(t * len(ordered)) + 1
        candidates = sorted({
            i for tok in ordered[:prefix_len] for i in token_index[tok]
        })
        if any(_jaccard(tokset, kept_sets[i]) >= t for i in candidates):
            discarded.append((post, "near_duplicate"))
            continue
        idx = len(kept)
        kept.append(post)
        kept_sets.append(tokset)
        for tok in tokset:
            token_index[tok].append(idx)
    return kept, discarded
