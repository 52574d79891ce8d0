"""Inline edit markup: parsing, serialization, and plain-text extraction.

A tagged string interleaves plain text with edit spans.  The grammar is

    annotated := (plain | edit)*
    edit      := "<" kind ">" source ("<by>" target)? "</" kind ">"
    kind      := "rep" | "elab" | "del" | "ins"

``<rep>`` and ``<elab>`` carry both a source span and, after ``<by>``, a
target span.  ``<del>`` wraps only the source span (the target is empty) and
``<ins>`` wraps only the target span (the source is empty).  A literal ``<``
inside text is written ``&lt;`` (and ``&`` as ``&amp;``).

Parsing produces a normal form: every plain run and edit payload is
whitespace-normalized, empty plain runs are dropped, and adjacent plain runs
are merged.  ``serialize`` emits segments joined by single spaces, so
``parse_annotated(serialize(a)) == a`` holds exactly for any normal-form
value, and ``serialize(parse_annotated(t)) == t`` holds up to whitespace
normalization.
"""

import enum
import re
from dataclasses import dataclass, field

from ._text import normalize_ws

__all__ = [
    "EditKind",
    "ElabType",
    "Side",
    "Plain",
    "Edit",
    "Segment",
    "AnnotatedText",
    "MarkupError",
    "UnbalancedTagError",
    "NestedTagError",
    "MissingByError",
    "UnknownTagError",
    "parse_annotated",
    "serialize",
    "extract",
    "normal_form",
    "validate",
]


class EditKind(enum.Enum):
    REPLACE = "rep"
    ELABORATE = "elab"
    DELETE = "del"
    INSERT = "ins"


class ElabType(enum.Enum):
    TYPE1 = "type1"
    TYPE2 = "type2"
    UNCLASSIFIED = "unclassified"


class Side(enum.Enum):
    """Which text a value belongs to: the expert (Ea) or simple (Sa) side."""

    EXPERT = "Ea"
    SIMPLE = "Sa"


class MarkupError(ValueError):
    """Malformed annotation markup."""


class UnbalancedTagError(MarkupError):
    """An edit tag was opened but never closed, or closed without opening."""


class NestedTagError(MarkupError):
    """An edit tag was opened inside another edit."""


class MissingByError(MarkupError):
    """A replace/elaborate edit lacks the ``<by>`` separator."""


class UnknownTagError(MarkupError):
    """A tag-shaped token that is not part of the grammar."""


@dataclass(frozen=True)
class Plain:
    text: str


@dataclass(frozen=True)
class Edit:
    kind: EditKind
    source: str = ""
    target: str = ""
    # Derived metadata, assigned by the elaboration classifier; not part of
    # the serialized form, hence excluded from structural equality.
    elab_type: ElabType = field(default=ElabType.UNCLASSIFIED, compare=False)


Segment = Plain | Edit


@dataclass(frozen=True)
class AnnotatedText:
    segments: tuple[Segment, ...]
    side: Side = Side.SIMPLE


_TAG_RE = re.compile(r"<(/?)([a-zA-Z_][a-zA-Z_0-9]*)>")
_KINDS = {k.value: k for k in EditKind}


def _unescape(text: str) -> str:
    return re.sub(r"&(lt|amp);", lambda m: "<" if m.group(1) == "lt" else "&", text)


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;")


def _clean(chunks: list[str]) -> str:
    return _unescape(normalize_ws("".join(chunks)))


def normal_form(segments) -> tuple[Segment, ...]:
    """Drop empty plain runs and merge adjacent ones."""
    out: list[Segment] = []
    for seg in segments:
        if isinstance(seg, Plain):
            if not seg.text:
                continue
            if out and isinstance(out[-1], Plain):
                out[-1] = Plain(out[-1].text + " " + seg.text)
                continue
        out.append(seg)
    return tuple(out)


def _close_edit(kind: EditKind, source_chunks, target_chunks, saw_by: bool) -> Edit:
    payload = _clean(source_chunks)
    target = _clean(target_chunks)
    if kind in (EditKind.REPLACE, EditKind.ELABORATE):
        if not saw_by:
            raise MissingByError(f"<{kind.value}> needs a '<by>' separator")
        if not payload or not target:
            raise MarkupError(f"<{kind.value}> needs non-empty source and target")
        return Edit(kind, payload, target)
    if saw_by:
        raise MarkupError(f"'<by>' is not allowed inside <{kind.value}>")
    if not payload:
        raise MarkupError(f"<{kind.value}> needs non-empty content")
    if kind is EditKind.DELETE:
        return Edit(kind, payload, "")
    return Edit(kind, "", payload)


def parse_annotated(text: str, side: Side = Side.SIMPLE) -> AnnotatedText:
    """Parse a tagged string into its normal-form segment list.

    Both sides accept the full tag inventory.  Raises a ``MarkupError``
    subclass on grammar violations; tag-shaped tokens outside the grammar
    raise ``UnknownTagError`` (a bare ``<`` that does not look like a tag is
    treated as literal text).
    """
    segments: list[Segment] = []
    plain_chunks: list[str] = []
    open_kind: EditKind | None = None
    source_chunks: list[str] = []
    target_chunks: list[str] = []
    saw_by = False
    pos = 0

    def take(chunk: str) -> None:
        if open_kind is None:
            plain_chunks.append(chunk)
        elif saw_by:
            target_chunks.append(chunk)
        else:
            source_chunks.append(chunk)

    for m in _TAG_RE.finditer(text):
        take(text[pos:m.start()])
        pos = m.end()
        closing, name = m.group(1) == "/", m.group(2)
        if name == "by":
            if closing:
                raise UnknownTagError("'</by>' is not a tag")
            if open_kind is None:
                raise MarkupError("'<by>' outside any edit")
            if saw_by:
                raise MarkupError("duplicate '<by>' inside an edit")
            saw_by = True
            continue
        kind = _KINDS.get(name)
        if kind is None:
            raise UnknownTagError(f"unknown tag <{'/' if closing else ''}{name}>")
        if closing:
            if open_kind is None:
                raise UnbalancedTagError(f"'</{name}>' without an open tag")
            if kind is not open_kind:
                raise UnbalancedTagError(
                    f"'</{name}>' closes an open <{open_kind.value}>"
                )
            segments.append(_close_edit(open_kind, source_chunks, target_chunks, saw_by))
            open_kind = None
            source_chunks, target_chunks, saw_by = [], [], False
        else:
            if open_kind is not None:
                raise NestedTagError(f"<{name}> opened inside <{open_kind.value}>")
            flushed = _clean(plain_chunks)
            if flushed:
                segments.append(Plain(flushed))
            plain_chunks = []
            open_kind = kind

    if open_kind is not None:
        raise UnbalancedTagError(f"<{open_kind.value}> was never closed")
    take(text[pos:])
    flushed = _clean(plain_chunks)
    if flushed:
        segments.append(Plain(flushed))
    return AnnotatedText(normal_form(segments), side)


def _render(seg: Segment) -> str:
    if isinstance(seg, Plain):
        return _escape(seg.text)
    k = seg.kind.value
    if seg.kind in (EditKind.REPLACE, EditKind.ELABORATE):
        return f"<{k}>{_escape(seg.source)}<by>{_escape(seg.target)}</{k}>"
    if seg.kind is EditKind.DELETE:
        return f"<{k}>{_escape(seg.source)}</{k}>"
    return f"<{k}>{_escape(seg.target)}</{k}>"


def serialize(annotated: AnnotatedText) -> str:
    """Emit the canonical tagged string (segments joined by single spaces)."""
    return " ".join(_render(seg) for seg in annotated.segments)


def extract(annotated: AnnotatedText, side: Side) -> str:
    """Recover the plain text of one side.

    The expert side concatenates plain runs and edit sources (insertions
    contribute nothing); the simple side concatenates plain runs and edit
    targets (deletions contribute nothing).  Contributions are joined by
    single spaces.
    """
    parts = []
    for seg in annotated.segments:
        chunk = seg.text if isinstance(seg, Plain) else (
            seg.source if side is Side.EXPERT else seg.target
        )
        if chunk:
            parts.append(chunk)
    return " ".join(parts)


def validate(annotated: AnnotatedText) -> None:
    """Check the normal-form invariants, raising ``MarkupError`` on failure."""
    prev_plain = False
    for seg in annotated.segments:
        if isinstance(seg, Plain):
            if prev_plain:
                raise MarkupError("adjacent plain segments")
            if not seg.text or seg.text != normalize_ws(seg.text):
                raise MarkupError(f"plain segment not normalized: {seg.text!r}")
            prev_plain = True
            continue
        prev_plain = False
        for payload in (seg.source, seg.target):
            if _TAG_RE.search(payload) and any(
                m.group(2) in _KINDS or m.group(2) == "by"
                for m in _TAG_RE.finditer(payload)
            ):
                raise MarkupError(f"edit payload contains a tag: {payload!r}")
        if seg.kind is EditKind.DELETE and (not seg.source or seg.target):
            raise MarkupError("delete edits carry only a source")
        if seg.kind is EditKind.INSERT and (not seg.target or seg.source):
            raise MarkupError("insert edits carry only a target")
        if seg.kind in (EditKind.REPLACE, EditKind.ELABORATE) and (
            not seg.source or not seg.target
        ):
            raise MarkupError(f"{seg.kind.value} edits need source and target")
