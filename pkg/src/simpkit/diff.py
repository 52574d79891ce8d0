"""Token-level sequence matching and automatic edit annotation.

The matcher follows the Ratcliff/Obershelp scheme: find the longest
contiguous matching block, then recurse on the pieces to the left and right
of it.  No junk or popularity heuristic is applied, so results are
deterministic on short texts.  Ties between equally long blocks go to the
block starting earliest in ``a``, then earliest in ``b``.

Matching is case-sensitive and word-level: annotations mark word/phrase
spans, and the extracted sides must reproduce the original surface forms.
"""

from typing import NamedTuple

from . import markup
from ._text import normalize_ws, tokenize

__all__ = ["Opcode", "EmptyInputError", "tokenize", "opcodes", "auto_annotate"]


class EmptyInputError(ValueError):
    """A text was empty after whitespace normalization."""


class Opcode(NamedTuple):
    """One edit instruction over half-open token ranges.

    ``tag`` is one of ``"equal"``, ``"replace"``, ``"delete"``, ``"insert"``.
    ``a[a_start:a_end]`` should be replaced by ``b[b_start:b_end]`` (one of
    the two ranges is empty for delete/insert, both slices are identical for
    equal).
    """

    tag: str
    a_start: int
    a_end: int
    b_start: int
    b_end: int


def _find_longest_match(a, b2j, alo, ahi, blo, bhi):
    # Classic dict-based scan: j2len[j] is the length of the longest match
    # ending at a[i], b[j].  Strict ">" keeps the earliest maximal block.
    besti, bestj, bestsize = alo, blo, 0
    j2len: dict[int, int] = {}
    for i in range(alo, ahi):
        newj2len: dict[int, int] = {}
        for j in b2j.get(a[i], ()):
            if j < blo:
                continue
            if j >= bhi:
                break
            k = newj2len[j] = j2len.get(j - 1, 0) + 1
            if k > bestsize:
                besti, bestj, bestsize = i - k + 1, j - k + 1, k
        j2len = newj2len
    return besti, bestj, bestsize


def _matching_blocks(a, b):
    b2j: dict[object, list[int]] = {}
    for j, tok in enumerate(b):
        b2j.setdefault(tok, []).append(j)

    queue = [(0, len(a), 0, len(b))]
    blocks = []
    while queue:
        alo, ahi, blo, bhi = queue.pop()
        i, j, k = _find_longest_match(a, b2j, alo, ahi, blo, bhi)
        if k:
            blocks.append((i, j, k))
            if alo < i and blo < j:
                queue.append((alo, i, blo, j))
            if i + k < ahi and j + k < bhi:
                queue.append((i + k, ahi, j + k, bhi))
    blocks.sort()

    # Adjacent blocks collapse into one so no two equal opcodes touch.
    merged = []
    i1 = j1 = k1 = 0
    for i2, j2, k2 in blocks:
        if i1 + k1 == i2 and j1 + k1 == j2:
            k1 += k2
        else:
            if k1:
                merged.append((i1, j1, k1))
            i1, j1, k1 = i2, j2, k2
    if k1:
        merged.append((i1, j1, k1))
    merged.append((len(a), len(b), 0))
    return merged


def opcodes(a: list[str], b: list[str]) -> list[Opcode]:
    """Edit opcodes turning token list ``a`` into ``b``.

    The opcodes tile both lists: a-ranges cover ``[0, len(a))`` and b-ranges
    cover ``[0, len(b))`` contiguously.
    """
    out: list[Opcode] = []
    ia = jb = 0
    for i, j, k in _matching_blocks(a, b):
        if ia < i and jb < j:
            out.append(Opcode("replace", ia, i, jb, j))
        elif ia < i:
            out.append(Opcode("delete", ia, i, jb, j))
        elif jb < j:
            out.append(Opcode("insert", ia, i, jb, j))
        if k:
            out.append(Opcode("equal", i, i + k, j, j + k))
        ia, jb = i + k, j + k
    return out


_SEGMENT_FOR = {
    "equal": lambda src, tgt: markup.Plain(src),
    "replace": lambda src, tgt: markup.Edit(markup.EditKind.REPLACE, src, tgt),
    "delete": lambda src, tgt: markup.Edit(markup.EditKind.DELETE, src, ""),
    "insert": lambda src, tgt: markup.Edit(markup.EditKind.INSERT, "", tgt),
}


def auto_annotate(expert: str, simple: str) -> markup.AnnotatedText:
    """Diff an (expert, simple) pair into annotated markup.

    Equal runs become plain segments and replace/delete/insert opcodes
    become the corresponding edits, so extracting either side reproduces the
    normalized input text exactly.
    """
    if not normalize_ws(expert) or not normalize_ws(simple):
        raise EmptyInputError("both texts must be non-empty after normalization")
    a, b = tokenize(expert), tokenize(simple)
    segments = [
        _SEGMENT_FOR[op.tag](
            " ".join(a[op.a_start:op.a_end]), " ".join(b[op.b_start:op.b_end])
        )
        for op in opcodes(a, b)
    ]
    return markup.AnnotatedText(markup.normal_form(segments), markup.Side.SIMPLE)
