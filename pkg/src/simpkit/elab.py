"""Elaboration detection from coreference spans, and type classification.

Replace edits produced by the differ get upgraded to elaborations when an
external coreference link shows the simple-side mention is strictly longer
(in tokens) than the expert-side mention it refers to.  Links arrive from a
file; no coreference model runs here, so any resolver can feed this module.
"""

import json
import warnings
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from . import markup
from ._text import metric_tokenize, normalize_ws, tokenize

__all__ = [
    "CorefLink",
    "SpanOutOfBoundsError",
    "OverlapConflictWarning",
    "detect_elaborations",
    "classify_elaboration",
    "load_links",
    "stopwords",
]


class SpanOutOfBoundsError(ValueError):
    """A link span is empty or falls outside its text."""


class OverlapConflictWarning(UserWarning):
    """One edit overlapped several links; the first in text order was used."""


@dataclass(frozen=True)
class CorefLink:
    """Character half-open intervals into the normalized expert/simple texts."""

    expert_span: tuple[int, int]
    simple_span: tuple[int, int]


@lru_cache(maxsize=None)
def _default_stopwords() -> frozenset[str]:
    raw = resources.files("simpkit").joinpath("data/stopwords_en.txt").read_text("utf-8")
    words = set()
    for line in raw.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


def stopwords(path: str | None = None) -> frozenset[str]:
    """The fixed stopword list, or one loaded from ``path`` (same format)."""
    if path is None:
        return _default_stopwords()
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                words.add(line.lower())
    return frozenset(words)


def _check_span(span, text, label):
    start, end = span
    if not (0 <= start < end <= len(text)):
        raise SpanOutOfBoundsError(
            f"{label} span [{start}, {end}) out of bounds for text of length {len(text)}"
        )


def _simple_offsets(annotated):
    """Per-segment [start, end) of each simple-side contribution, None if none."""
    spans = []
    pos = 0
    for seg in annotated.segments:
        chunk = seg.text if isinstance(seg, markup.Plain) else seg.target
        if chunk:
            spans.append((pos, pos + len(chunk)))
            pos += len(chunk) + 1
        else:
            spans.append(None)
    return spans


def detect_elaborations(
    annotated: markup.AnnotatedText, links: list[CorefLink]
) -> markup.AnnotatedText:
    """Relabel replace edits as elaborations where coref links justify it.

    An edit is upgraded when its target overlaps a link whose simple-side
    span is strictly longer, in tokens, than the linked expert-side span.
    Only the edit kind changes, so extraction of either side is unaffected.
    When several links overlap one edit the first in text order wins and an
    ``OverlapConflictWarning`` is emitted.
    """
    expert_text = markup.extract(annotated, markup.Side.EXPERT)
    simple_text = markup.extract(annotated, markup.Side.SIMPLE)
    for link in links:
        _check_span(link.expert_span, expert_text, "expert")
        _check_span(link.simple_span, simple_text, "simple")
    ordered = sorted(links, key=lambda lk: (lk.simple_span, lk.expert_span))

    segments = []
    for seg, span in zip(annotated.segments, _simple_offsets(annotated)):
        if (
            isinstance(seg, markup.Edit)
            and seg.kind is markup.EditKind.REPLACE
            and span is not None
        ):
            hits = [
                lk
                for lk in ordered
                if lk.simple_span[0] < span[1] and span[0] < lk.simple_span[1]
            ]
            if len(hits) > 1:
                warnings.warn(
                    f"edit target at {span} overlaps {len(hits)} links; "
                    "using the first in text order",
                    OverlapConflictWarning,
                    stacklevel=2,
                )
            if hits:
                lk = hits[0]
                n_simple = len(tokenize(simple_text[slice(*lk.simple_span)]))
                n_expert = len(tokenize(expert_text[slice(*lk.expert_span)]))
                if n_simple > n_expert:
                    seg = markup.Edit(markup.EditKind.ELABORATE, seg.source, seg.target)
        segments.append(seg)
    return markup.AnnotatedText(tuple(segments), annotated.side)


def classify_elaboration(
    edit: markup.Edit, stopword_set: frozenset[str] | None = None
) -> markup.ElabType:
    """Type 1 if any content token of the source survives into the target.

    Content tokens are lowercased metric tokens minus stopwords and bare
    punctuation.  A source made only of stopwords has no content to
    preserve, so it classifies as type 2.
    """
    if edit.kind is not markup.EditKind.ELABORATE:
        raise ValueError(f"expected an elaborate edit, got {edit.kind.value}")
    if not normalize_ws(edit.source) or not normalize_ws(edit.target):
        raise ValueError("elaborate edits need non-empty source and target")
    stop = stopword_set if stopword_set is not None else _default_stopwords()
    content = {
        tok
        for tok in metric_tokenize(edit.source)
        if tok not in stop and any(c.isalnum() for c in tok)
    }
    target_tokens = set(metric_tokenize(edit.target))
    if content & target_tokens:
        return markup.ElabType.TYPE1
    return markup.ElabType.TYPE2


def load_links(path) -> dict[str, list[CorefLink]]:
    """Read a links file: one JSON object per line.

    Each record is ``{"pair_id": ..., "links": [{"expert": [s, e],
    "simple": [s, e]}, ...]}`` with character offsets into the normalized
    texts of that pair.
    """
    out: dict[str, list[CorefLink]] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            out[rec["pair_id"]] = [
                CorefLink(tuple(lk["expert"]), tuple(lk["simple"]))
                for lk in rec["links"]
            ]
    return out
