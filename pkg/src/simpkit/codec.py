"""Slot/angle serialization of multi-angle training examples.

An example is a set of slots with values; an angle names which slots are
inputs and which are requested outputs.  Encoded inputs list the requested
slot names first (no values), then each source slot as ``$name$ = value``,
all joined by ``" ; "``:

    $replace$ ; $simple$ ; $expert$ = ... ; $replace_in$ = [involved]

Outputs render every target slot the same way.  Pair-valued slots (replace,
elaborate) render as ``[pre <by> post, ...]``, span lists as bracketed
comma-separated items, and an empty slot as the reserved placeholder
``<extra_id_0>``.

The in-place annotated-expert form marks each span to edit with its opening
tag and closes it with a kind-specific sentinel: ``<extra_id_0>`` for
elaboration, ``<extra_id_1>`` for replacement.

Reserved substrings inside natural-language values ("$", ";", "<", "&", and
additionally "[", "]", "," inside list items) are escaped with HTML-style
numeric entities on encode and unescaped on decode, so round trips are exact
for values free of raw entity text.  Annotated-text values (Ea/Sa) pass
through verbatim since their tag syntax is the payload.
"""

import re
from dataclasses import dataclass, field

from . import markup
from ._text import normalize_ws, tokenize

__all__ = [
    "SLOT_IDS",
    "SURFACE_NAMES",
    "EMPTY_TOKEN",
    "ELAB_SENTINEL",
    "REPLACE_SENTINEL",
    "Angle",
    "Example",
    "Finding",
    "Decoded",
    "CodecError",
    "UnregisteredAngleError",
    "MissingSlotValueError",
    "MalformedSlotSyntaxError",
    "OverlappingSpansError",
    "SpanOutOfBoundsError",
    "parse_angle",
    "get_angle",
    "registry",
    "multi_angles",
    "multi_ip_angles",
    "fixed_angles",
    "encode_input",
    "render_output",
    "decode_output",
    "encode_ea",
    "strip_ea",
]

# Slot ids follow the uppercase abbreviations used throughout: E expert text,
# S simple text, D deletion, I insertion, R replacement, X elaboration,
# Ri/Xi the input-side "contents to edit" variants, Ea/Sa annotated texts.
SLOT_IDS = ("E", "S", "D", "I", "R", "X", "Ri", "Xi", "Ea", "Sa")

TEXT_SLOTS = frozenset({"E", "S"})
MARKUP_SLOTS = frozenset({"Ea", "Sa"})
SPAN_LIST_SLOTS = frozenset({"D", "I", "Ri", "Xi"})
PAIR_LIST_SLOTS = frozenset({"R", "X"})

SURFACE_NAMES = {
    "E": "expert",
    "S": "simple",
    "D": "delete",
    "I": "insert",
    "R": "replace",
    "X": "elaborate",
    "Ri": "replace_in",
    "Xi": "elaborate_in",
    "Ea": "annotated_expert",
    "Sa": "annotated_simple",
}

EMPTY_TOKEN = "<extra_id_0>"
ELAB_SENTINEL = "<extra_id_0>"
REPLACE_SENTINEL = "<extra_id_1>"


class CodecError(ValueError):
    pass


class UnregisteredAngleError(CodecError):
    pass


class MissingSlotValueError(CodecError):
    pass


class MalformedSlotSyntaxError(CodecError):
    pass


class OverlappingSpansError(CodecError):
    pass


class SpanOutOfBoundsError(CodecError):
    pass


@dataclass(frozen=True)
class Angle:
    sources: tuple[str, ...]
    targets: tuple[str, ...]

    @property
    def name(self) -> str:
        return "".join(self.sources) + "->" + "".join(self.targets)

    def __str__(self) -> str:
        return self.name


_SLOT_TOKEN_RE = re.compile(r"[A-Z][a-z]*")


def parse_angle(name: str) -> Angle:
    """Parse an angle name like ``"ERi->RS"`` (``→`` also accepted)."""
    arrow = "->" if "->" in name else "→"
    parts = name.split(arrow)
    if len(parts) != 2 or not parts[0] or not parts[1]:
        raise CodecError(f"malformed angle name: {name!r}")
    sides = []
    for part in parts:
        slots = _SLOT_TOKEN_RE.findall(part)
        if "".join(slots) != part or any(s not in SLOT_IDS for s in slots):
            raise CodecError(f"unknown slot in angle name: {name!r}")
        sides.append(tuple(slots))
    return Angle(sides[0], sides[1])


_MULTI_ANGLE_NAMES = (
    "E->S", "E->DIS", "ERi->DRS", "ED->IS", "EDXi->XS", "ERi->RS",
    "ERiXi->DRXS", "E->DS", "EXi->XS", "ERiXi->RXS", "EDRi->RS",
    "EDRiXi->RXS", "E->IS", "ED->S", "EXi->DXS",
)
_MULTI_IP_ANGLE_NAMES = ("E->Sa", "Ea->Sa")
_FIXED_ANGLE_NAMES = ("E->RXDIS", "E->Sa")


def multi_angles() -> tuple[Angle, ...]:
    """The 15 position-agnostic training angles."""
    return tuple(parse_angle(n) for n in _MULTI_ANGLE_NAMES)


def multi_ip_angles() -> tuple[Angle, ...]:
    """The two in-place (position-aware) training angles."""
    return tuple(parse_angle(n) for n in _MULTI_IP_ANGLE_NAMES)


def fixed_angles() -> tuple[Angle, ...]:
    """The fixed control-free formats (rendered with empty placeholders)."""
    return tuple(parse_angle(n) for n in _FIXED_ANGLE_NAMES)


def registry() -> tuple[Angle, ...]:
    """All registered angles, deduplicated, in declaration order."""
    seen: dict[Angle, None] = {}
    for angle in (*multi_angles(), *multi_ip_angles(), *fixed_angles()):
        seen.setdefault(angle)
    return tuple(seen)


def get_angle(name: str) -> Angle:
    """Resolve an angle name against the registry."""
    angle = parse_angle(name)
    if angle not in registry():
        raise UnregisteredAngleError(f"angle not registered: {angle.name}")
    return angle


@dataclass
class Example:
    """Slot values for one pair under one angle.

    ``values`` maps slot ids to: a string (E, S, Ea, Sa), a list of span
    strings (D, I, Ri, Xi), a list of (pre, post) tuples (R, X), or ``None``
    for an empty slot.
    """

    pair_id: str
    angle: Angle
    values: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Finding:
    """A tolerated deviation noticed while decoding a model output."""

    kind: str  # "missing_slot" | "extra_slot" | "duplicate_slot" | "bad_markup"
    slot: str
    message: str = ""


@dataclass(frozen=True)
class Decoded:
    example: Example
    findings: tuple[Finding, ...]


_TEXT_ESCAPES = (("&", "&amp;"), ("$", "&#36;"), (";", "&#59;"), ("<", "&#60;"))
_ITEM_ESCAPES = _TEXT_ESCAPES + ((",", "&#44;"), ("[", "&#91;"), ("]", "&#93;"))


def _escape(text: str, table) -> str:
    for lit, ent in table:
        text = text.replace(lit, ent)
    return text


def _unescape(text: str, table) -> str:
    for lit, ent in reversed(table):
        text = text.replace(ent, lit)
    return text


def _check_value(slot: str, value) -> None:
    if value is None:
        return
    if slot in TEXT_SLOTS or slot in MARKUP_SLOTS:
        if not isinstance(value, str):
            raise CodecError(f"slot {slot} takes a string, got {type(value).__name__}")
    elif slot in SPAN_LIST_SLOTS:
        if not isinstance(value, (list, tuple)) or not value or not all(
            isinstance(v, str) for v in value
        ):
            raise CodecError(f"slot {slot} takes a non-empty list of strings")
    elif slot in PAIR_LIST_SLOTS:
        ok = isinstance(value, (list, tuple)) and value and all(
            isinstance(v, (list, tuple)) and len(v) == 2
            and all(isinstance(p, str) for p in v)
            for v in value
        )
        if not ok:
            raise CodecError(f"slot {slot} takes a non-empty list of (pre, post) pairs")
    else:
        raise CodecError(f"unknown slot id: {slot}")


def _render_value(slot: str, value) -> str:
    if value is None:
        return EMPTY_TOKEN
    if slot in MARKUP_SLOTS:
        return value
    if slot in TEXT_SLOTS:
        return _escape(normalize_ws(value), _TEXT_ESCAPES)
    if slot in SPAN_LIST_SLOTS:
        items = (_escape(normalize_ws(v), _ITEM_ESCAPES) for v in value)
        return "[" + ", ".join(items) + "]"
    items = (
        _escape(normalize_ws(pre), _ITEM_ESCAPES)
        + " <by> "
        + _escape(normalize_ws(post), _ITEM_ESCAPES)
        for pre, post in value
    )
    return "[" + ", ".join(items) + "]"


def _surface(overrides) -> dict[str, str]:
    if not overrides:
        return dict(SURFACE_NAMES)
    names = dict(SURFACE_NAMES)
    for slot, name in overrides.items():
        if slot not in SLOT_IDS:
            raise CodecError(f"unknown slot id in surface-name override: {slot}")
        names[slot] = name
    return names


def _require_registered(angle: Angle) -> None:
    if angle not in registry():
        raise UnregisteredAngleError(f"angle not registered: {angle.name}")


def encode_input(example: Example, surface_names: dict | None = None) -> str:
    """Render the model input for an example.

    Target slot names come first as the task description, then each source
    slot with its value; the pieces are joined by ``" ; "``.
    """
    _require_registered(example.angle)
    names = _surface(surface_names)
    parts = [f"${names[t]}$" for t in example.angle.targets]
    for slot in example.angle.sources:
        if slot not in example.values:
            raise MissingSlotValueError(f"source slot {slot} has no value entry")
        value = example.values[slot]
        _check_value(slot, value)
        parts.append(f"${names[slot]}$ = {_render_value(slot, value)}")
    return " ; ".join(parts)


def render_output(example: Example, surface_names: dict | None = None) -> str:
    """Render the training target: every target slot with its value.

    Slots without an entry (or with ``None``) render the empty placeholder,
    which is how the fixed control-free formats mark unused slots.
    """
    _require_registered(example.angle)
    names = _surface(surface_names)
    parts = []
    for slot in example.angle.targets:
        value = example.values.get(slot)
        _check_value(slot, value)
        parts.append(f"${names[slot]}$ = {_render_value(slot, value)}")
    return " ; ".join(parts)


_HEAD_RE = re.compile(r"\$([a-z_]+)\$ = ")


def _parse_value(slot: str, raw: str):
    if raw == EMPTY_TOKEN:
        return None
    if slot in MARKUP_SLOTS:
        return raw
    if slot in TEXT_SLOTS:
        return _unescape(raw, _TEXT_ESCAPES)
    if not (raw.startswith("[") and raw.endswith("]")):
        raise MalformedSlotSyntaxError(f"slot {slot} expects a bracketed list: {raw!r}")
    items = raw[1:-1].split(", ") if raw != "[]" else []
    if not items:
        raise MalformedSlotSyntaxError(f"slot {slot} has an empty list; use {EMPTY_TOKEN}")
    if slot in SPAN_LIST_SLOTS:
        return [_unescape(item, _ITEM_ESCAPES) for item in items]
    pairs = []
    for item in items:
        halves = item.split(" <by> ")
        if len(halves) != 2:
            raise MalformedSlotSyntaxError(f"pair item lacks ' <by> ': {item!r}")
        pairs.append((
            _unescape(halves[0], _ITEM_ESCAPES),
            _unescape(halves[1], _ITEM_ESCAPES),
        ))
    return pairs


def decode_output(
    text: str,
    angle: Angle,
    pair_id: str = "",
    surface_names: dict | None = None,
) -> Decoded:
    """Parse a model output back into an example plus findings.

    Slot-set deviations (a missing target, an unrequested slot, a duplicate)
    become findings rather than errors, mirroring how model outputs are
    scored; only unparseable slot syntax raises.
    """
    _require_registered(angle)
    names = _surface(surface_names)
    to_slot = {v: k for k, v in names.items()}

    heads = list(_HEAD_RE.finditer(text))
    if not heads or heads[0].start() != 0:
        raise MalformedSlotSyntaxError("output must start with a '$name$ = ' slot")
    findings: list[Finding] = []
    values: dict = {}
    for i, head in enumerate(heads):
        end = heads[i + 1].start() if i + 1 < len(heads) else len(text)
        raw = text[head.end():end]
        if i + 1 < len(heads):
            if not raw.endswith(" ; "):
                raise MalformedSlotSyntaxError("slots must be joined by ' ; '")
            raw = raw[:-3]
        surface = head.group(1)
        slot = to_slot.get(surface)
        if slot is None:
            findings.append(Finding("extra_slot", surface, "unknown slot name"))
            continue
        if slot not in angle.targets:
            findings.append(Finding("extra_slot", slot, "slot not requested by angle"))
        if slot in values:
            findings.append(Finding("duplicate_slot", slot, "first value kept"))
            continue
        value = _parse_value(slot, raw)
        if slot == "Sa" and value is not None:
            try:
                markup.parse_annotated(value, markup.Side.SIMPLE)
            except markup.MarkupError as exc:
                findings.append(Finding("bad_markup", slot, str(exc)))
        values[slot] = value
    for slot in angle.targets:
        if slot not in values:
            findings.append(Finding("missing_slot", slot, "absent from output"))
    return Decoded(Example(pair_id, angle, values), tuple(findings))


_EA_TAGS = {
    markup.EditKind.ELABORATE: ("<elab>", ELAB_SENTINEL),
    markup.EditKind.REPLACE: ("<rep>", REPLACE_SENTINEL),
}

_EA_MARKS_RE = re.compile(r"<(?:elab|rep)>|<extra_id_[0-9]+>")


def strip_ea(text: str) -> str:
    """Remove in-place tags and sentinels, recovering the plain expert text."""
    return normalize_ws(_EA_MARKS_RE.sub(" ", text))


def encode_ea(expert: str, edits) -> str:
    """Render the in-place annotated expert text.

    ``edits`` is a list of ``(start, end, kind)`` half-open token intervals
    into the normalized expert text; ``kind`` is ``EditKind.ELABORATE`` or
    ``EditKind.REPLACE``.  Each span opens with its tag and closes with the
    kind's sentinel token.
    """
    tokens = tokenize(expert)
    if not tokens:
        raise CodecError("expert text is empty after normalization")
    spans = sorted(((int(s), int(e), kind) for s, e, kind in edits),
                   key=lambda t: (t[0], t[1]))
    prev_end = 0
    parts = []
    pos = 0
    for start, end, kind in spans:
        if kind not in _EA_TAGS:
            raise CodecError(f"in-place spans support elaborate/replace, not {kind}")
        if not (0 <= start < end <= len(tokens)):
            raise SpanOutOfBoundsError(
                f"span [{start}, {end}) out of bounds for {len(tokens)} tokens"
            )
        if start < prev_end:
            raise OverlappingSpansError(f"span [{start}, {end}) overlaps a previous span")
        prev_end = end
        if start > pos:
            parts.append(" ".join(tokens[pos:start]))
        tag, sentinel = _EA_TAGS[kind]
        parts.append(tag + " ".join(tokens[start:end]) + sentinel)
        pos = end
    if pos < len(tokens):
        parts.append(" ".join(tokens[pos:]))
    return " ".join(parts)
