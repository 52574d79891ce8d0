import json
import random

import pytest

from simpkit import elab
from simpkit.elab import (
    CorefLink,
    OverlapConflictWarning,
    SpanOutOfBoundsError,
    classify_elaboration,
    detect_elaborations,
    load_links,
    stopwords,
)
from simpkit.markup import (
    AnnotatedText,
    Edit,
    EditKind,
    ElabType,
    Plain,
    Side,
    extract,
)


def lecture_annotated():
    # expert: "In his lecture Lewis said it"
    # simple: "In his lecture E.B. Lewis said it"
    return AnnotatedText((
        Plain("In his lecture"),
        Edit(EditKind.REPLACE, "Lewis", "E.B. Lewis"),
        Plain("said it"),
    ))


def span_of(haystack: str, needle: str) -> tuple[int, int]:
    start = haystack.index(needle)
    return (start, start + len(needle))


def test_detects_longer_coref_span_as_elaboration():
    annotated = lecture_annotated()
    expert = extract(annotated, Side.EXPERT)
    simple = extract(annotated, Side.SIMPLE)
    links = [CorefLink(span_of(expert, "Lewis"), span_of(simple, "E.B. Lewis"))]
    upgraded = detect_elaborations(annotated, links)
    assert upgraded.segments[1] == Edit(EditKind.ELABORATE, "Lewis", "E.B. Lewis")
    assert isinstance(upgraded.segments[0], Plain)


def test_no_links_is_identity():
    annotated = lecture_annotated()
    assert detect_elaborations(annotated, []) == annotated


def test_equal_token_length_is_not_upgraded():
    annotated = AnnotatedText((
        Plain("the"),
        Edit(EditKind.REPLACE, "lesions", "sores"),
        Plain("remain"),
    ))
    expert = extract(annotated, Side.EXPERT)
    simple = extract(annotated, Side.SIMPLE)
    links = [CorefLink(span_of(expert, "lesions"), span_of(simple, "sores"))]
    upgraded = detect_elaborations(annotated, links)
    assert upgraded.segments[1].kind is EditKind.REPLACE


def test_never_changes_extraction():
    annotated = lecture_annotated()
    expert = extract(annotated, Side.EXPERT)
    simple = extract(annotated, Side.SIMPLE)
    links = [CorefLink(span_of(expert, "Lewis"), span_of(simple, "E.B. Lewis"))]
    upgraded = detect_elaborations(annotated, links)
    assert extract(upgraded, Side.EXPERT) == expert
    assert extract(upgraded, Side.SIMPLE) == simple


def test_only_replace_edits_are_candidates():
    annotated = AnnotatedText((
        Plain("start"),
        Edit(EditKind.INSERT, "", "brand new words"),
        Plain("end"),
    ))
    simple = extract(annotated, Side.SIMPLE)
    links = [CorefLink((0, 5), span_of(simple, "brand new words"))]
    upgraded = detect_elaborations(annotated, links)
    assert upgraded.segments[1].kind is EditKind.INSERT


def test_span_out_of_bounds():
    annotated = lecture_annotated()
    with pytest.raises(SpanOutOfBoundsError):
        detect_elaborations(annotated, [CorefLink((0, 5), (0, 10_000))])
    with pytest.raises(SpanOutOfBoundsError):
        detect_elaborations(annotated, [CorefLink((5, 5), (0, 3))])


def test_overlap_conflict_warns_and_first_link_wins():
    annotated = lecture_annotated()
    expert = extract(annotated, Side.EXPERT)
    simple = extract(annotated, Side.SIMPLE)
    long_link = CorefLink(span_of(expert, "Lewis"), span_of(simple, "E.B. Lewis"))
    # Equal-length second link overlapping the same edit target.
    short_link = CorefLink(span_of(expert, "Lewis"), span_of(simple, "Lewis"))
    with pytest.warns(OverlapConflictWarning):
        upgraded = detect_elaborations(annotated, [short_link, long_link])
    # Links sort by simple-span position: "E.B. Lewis" starts earlier, wins.
    assert upgraded.segments[1].kind is EditKind.ELABORATE


def test_classify_type1_preserved_token():
    edit = Edit(EditKind.ELABORATE, "Lewis", "E.B. Lewis")
    assert classify_elaboration(edit) is ElabType.TYPE1


def test_classify_trivial_identity():
    assert classify_elaboration(Edit(EditKind.ELABORATE, "x", "x")) is ElabType.TYPE1


def test_classify_type2_no_overlap():
    edit = Edit(EditKind.ELABORATE, "tumor", "an abnormal growth")
    assert classify_elaboration(edit) is ElabType.TYPE2


def test_classify_ignores_stopwords_and_case():
    edit = Edit(EditKind.ELABORATE, "The Tumor", "the growth")
    assert classify_elaboration(edit) is ElabType.TYPE2
    edit = Edit(EditKind.ELABORATE, "The Tumor", "a TUMOR of the skin")
    assert classify_elaboration(edit) is ElabType.TYPE1


def test_classify_stopword_only_source_is_type2():
    edit = Edit(EditKind.ELABORATE, "of the", "of the liver")
    assert classify_elaboration(edit) is ElabType.TYPE2


def test_classify_whitespace_invariance():
    rng = random.Random(5)
    base = Edit(EditKind.ELABORATE, "optic nerve", "the optic nerve of the eye")
    for _ in range(20):
        pad = lambda s: " " * rng.randint(0, 3) + s + "\t" * rng.randint(0, 2)
        noisy = Edit(EditKind.ELABORATE, pad("optic  nerve"), pad("the optic nerve of the eye"))
        assert classify_elaboration(noisy) is classify_elaboration(base)


def test_classify_rejects_non_elaborate():
    with pytest.raises(ValueError):
        classify_elaboration(Edit(EditKind.REPLACE, "a", "b"))


def test_stopword_list_contents():
    words = stopwords()
    assert "the" in words and "of" in words
    assert "tumor" not in words


def test_stopwords_from_path(tmp_path):
    path = tmp_path / "stops.txt"
    path.write_text("# comment\nfoo\nBAR\n\n", encoding="utf-8")
    assert stopwords(str(path)) == frozenset({"foo", "bar"})


def test_load_links(tmp_path):
    path = tmp_path / "links.jsonl"
    rec = {
        "pair_id": "p1",
        "links": [{"expert": [0, 5], "simple": [3, 13]}],
    }
    path.write_text(json.dumps(rec) + "\n", encoding="utf-8")
    links = load_links(str(path))
    assert links == {"p1": [CorefLink((0, 5), (3, 13))]}
