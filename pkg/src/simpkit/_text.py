"""Shared text normalization and the two tokenizers.

Two tokenizers coexist on purpose.  Annotation-side tokenization preserves
case and keeps punctuation glued to its word, so edits map back onto surface
forms exactly.  Metric tokenization lowercases and splits punctuation into
separate tokens, the usual convention for n-gram overlap scoring.
"""

import re

_WS_RE = re.compile(r"\s+")
_METRIC_TOKEN_RE = re.compile(r"\w+|[^\w\s]")


def normalize_ws(text: str) -> str:
    """Collapse whitespace runs to single spaces and trim both ends."""
    return _WS_RE.sub(" ", text).strip()


def tokenize(text: str) -> list[str]:
    """Case-preserving tokens: whitespace split of the normalized text."""
    norm = normalize_ws(text)
    return norm.split(" ") if norm else []


def metric_tokenize(text: str, lowercase: bool = True) -> list[str]:
    """Metric tokens: punctuation split off, lowercased unless disabled."""
    if lowercase:
        text = text.lower()
    return _METRIC_TOKEN_RE.findall(text)
