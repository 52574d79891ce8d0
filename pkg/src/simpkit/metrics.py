"""Evaluation metrics for text simplification.

Implements SARI with its ADD/KEEP/DEL sub-scores, the modified deletion
score ALTDEL, Flesch-Kincaid grade level, character-level Levenshtein
similarity, compression ratio, ROUGE-L, and slot-wise scoring of decoded
examples.

All n-gram metrics run over metric tokens (lowercased, punctuation split
off) for n = 1..4.  Multiset operations use ``collections.Counter``
semantics: ``&`` is min-count intersection and ``-`` is saturating
difference.

SARI conventions
----------------
Per n-gram order each operation scores fractional-count precision/recall:
KEEP and ADD combine them as F1, DEL is precision only.  An order where an
operation has no candidate n-grams on either the system or reference side is
skipped instead of contributing zero; the operation score is the mean over
the scored orders.  When every order is skipped, KEEP and DEL score 100
(nothing proposed, nothing demanded) while ADD scores 0, keeping the
identity output from earning a perfect simplification score.

ALTDEL (for predicted deletion spans)
-------------------------------------
With I the input n-grams, O the predicted-span n-grams, and R the reference
n-grams:

    precision = |(I & O) - R| / |O|
    recall    = |(I & O) - R| / |I - R|

i.e. a predicted span counts only if it occurs in the input and not in the
reference.  Orders where O has no n-grams are skipped; recall is defined as
0 (and flagged degenerate) when |I - R| is 0.  The combined score is the F1
of the order-averaged precision and recall.
"""

import re
from collections import Counter
from dataclasses import dataclass, field

from . import codec, elab, markup
from ._text import metric_tokenize, normalize_ws

__all__ = [
    "MetricError",
    "EmptyInputError",
    "EmptyOutputError",
    "EmptyReferenceError",
    "EmptyTextError",
    "EmptyExpertError",
    "EmptySlotError",
    "AngleMismatchError",
    "SariScore",
    "AltDelScore",
    "ReadabilityReport",
    "SlotScore",
    "PairReport",
    "NGRAM_ORDERS",
    "ngram_bag",
    "sari",
    "altdel",
    "fkgl",
    "levenshtein",
    "lev_similarity",
    "compression_ratio",
    "rouge_l",
    "rouge_l_f1",
    "words_added_deleted_kept",
    "score_slots",
]

NGRAM_ORDERS = (1, 2, 3, 4)


class MetricError(ValueError):
    pass


class EmptyInputError(MetricError):
    pass


class EmptyOutputError(MetricError):
    pass


class EmptyReferenceError(MetricError):
    pass


class EmptyTextError(MetricError):
    pass


class EmptyExpertError(MetricError):
    pass


class EmptySlotError(MetricError):
    pass


class AngleMismatchError(MetricError):
    pass


@dataclass(frozen=True)
class SariScore:
    """SARI sub-scores in [0, 100]; ``sari`` is their arithmetic mean."""

    add: float
    keep: float
    delete: float

    @property
    def sari(self) -> float:
        return (self.add + self.keep + self.delete) / 3


@dataclass(frozen=True)
class AltDelScore:
    precision: float
    recall: float
    f1: float
    degenerate: bool = False


@dataclass(frozen=True)
class ReadabilityReport:
    fkgl: float
    words: int
    sentences: int
    syllables: int


def _segments(texts) -> list[str]:
    if isinstance(texts, str):
        return [texts]
    return list(texts)


def ngram_bag(texts, n: int, lowercase: bool = True) -> Counter:
    """Multiset of n-grams pooled over the given text segment(s).

    Accepts a string or a list of strings; n-grams never cross segment
    boundaries.
    """
    bag: Counter = Counter()
    for text in _segments(texts):
        toks = metric_tokenize(text, lowercase)
        bag.update(tuple(toks[i:i + n]) for i in range(len(toks) - n + 1))
    return bag


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def _mean(xs) -> float:
    return sum(xs) / len(xs)


def sari(input_text, output_text, references, lowercase: bool = True) -> SariScore:
    """SARI of a system output against its input and reference(s).

    ``input_text`` and ``output_text`` may be a string or list of string
    segments; ``references`` is a list of such.  Counts on the input and
    output side are scaled by the number of references, and reference bags
    are pooled, following the standard multi-reference formulation.
    """
    refs = [r for r in references if any(normalize_ws(t) for t in _segments(r))]
    if not refs:
        raise EmptyReferenceError("at least one non-empty reference is required")
    if not any(normalize_ws(t) for t in _segments(output_text)):
        raise EmptyOutputError("output is empty after normalization")
    if not any(normalize_ws(t) for t in _segments(input_text)):
        raise EmptyInputError("input is empty after normalization")
    numref = len(refs)

    keep_scores, del_scores, add_scores = [], [], []
    for n in NGRAM_ORDERS:
        s_bag = ngram_bag(input_text, n, lowercase)
        c_bag = ngram_bag(output_text, n, lowercase)
        r_bag: Counter = Counter()
        for ref in refs:
            r_bag.update(ngram_bag(ref, n, lowercase))
        s_rep = Counter({g: c * numref for g, c in s_bag.items()})
        c_rep = Counter({g: c * numref for g, c in c_bag.items()})

        # KEEP: F1 over per-gram fractional counts.
        keep_cand = s_rep & c_rep
        keep_all = s_rep & r_bag
        if keep_cand or keep_all:
            keep_good = keep_cand & r_bag
            p = (
                sum(keep_good[g] / keep_cand[g] for g in keep_good) / len(keep_cand)
                if keep_cand
                else 0.0
            )
            r = (
                sum(keep_good[g] / keep_all[g] for g in keep_good) / len(keep_all)
                if keep_all
                else 0.0
            )
            keep_scores.append(_f1(p, r))

        # DEL: precision only.
        del_cand = s_rep - c_rep
        del_all = s_rep - r_bag
        if del_cand or del_all:
            del_good = del_cand - r_bag
            p = (
                sum(del_good[g] / del_cand[g] for g in del_good) / len(del_cand)
                if del_cand
                else 0.0
            )
            del_scores.append(p)

        # ADD: F1 over distinct n-grams.
        add_cand = set(c_bag) - set(s_bag)
        add_all = set(r_bag) - set(s_bag)
        if add_cand or add_all:
            good = len(add_cand & set(r_bag))
            p = good / len(add_cand) if add_cand else 0.0
            r = good / len(add_all) if add_all else 0.0
            add_scores.append(_f1(p, r))

    keep = 100 * _mean(keep_scores) if keep_scores else 100.0
    delete = 100 * _mean(del_scores) if del_scores else 100.0
    add = 100 * _mean(add_scores) if add_scores else 0.0
    return SariScore(add=add, keep=keep, delete=delete)


def altdel(input_text, output_span, references, lowercase: bool = True) -> AltDelScore:
    """ALTDEL of a predicted deletion span against input and reference(s)."""
    if not any(normalize_ws(t) for t in _segments(output_span)):
        raise EmptySlotError("predicted span is empty after normalization")
    refs = [r for r in references if any(normalize_ws(t) for t in _segments(r))]
    if not refs:
        raise EmptyReferenceError("at least one non-empty reference is required")

    precisions, recalls = [], []
    degenerate = False
    for n in NGRAM_ORDERS:
        o_bag = ngram_bag(output_span, n, lowercase)
        if not o_bag:
            continue
        i_bag = ngram_bag(input_text, n, lowercase)
        r_bag: Counter = Counter()
        for ref in refs:
            r_bag.update(ngram_bag(ref, n, lowercase))
        good = (i_bag & o_bag) - r_bag
        numer = sum(good.values())
        precisions.append(numer / sum(o_bag.values()))
        denom = sum((i_bag - r_bag).values())
        if denom:
            recalls.append(numer / denom)
        else:
            recalls.append(0.0)
            degenerate = True
    precision = _mean(precisions)
    recall = _mean(recalls)
    return AltDelScore(precision, recall, _f1(precision, recall), degenerate)


_VOWEL_GROUP = re.compile(r"[aeiouy]+")
_SENTENCE_END = re.compile(r"[.!?]+(?=\s|$)")


def _count_syllables(word: str) -> int:
    """Vowel-group heuristic: groups of aeiouy, minus a silent final e, min 1."""
    letters = "".join(c for c in word.lower() if c.isalpha())
    groups = len(_VOWEL_GROUP.findall(letters))
    if letters.endswith("e"):
        groups -= 1
    return max(1, groups)


def fkgl(text: str) -> ReadabilityReport:
    """Flesch-Kincaid grade level.

    grade = 0.39 * words/sentences + 11.8 * syllables/words - 15.59

    Sentences end at ., ! or ? followed by whitespace or end of text; a
    non-empty text counts at least one sentence.  Syllables use the vowel
    group heuristic of ``_count_syllables``.
    """
    norm = normalize_ws(text)
    if not norm:
        raise EmptyTextError("cannot score an empty text")
    words = norm.split(" ")
    n_words = len(words)
    n_sentences = max(1, len(_SENTENCE_END.findall(norm)))
    n_syllables = sum(_count_syllables(w) for w in words)
    grade = 0.39 * n_words / n_sentences + 11.8 * n_syllables / n_words - 15.59
    return ReadabilityReport(grade, n_words, n_sentences, n_syllables)


def levenshtein(a: str, b: str) -> int:
    """Character-level edit distance (two-row dynamic program)."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def lev_similarity(a: str, b: str) -> float:
    """1 - distance/max(len); 1.0 when both texts are empty."""
    a, b = normalize_ws(a), normalize_ws(b)
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest


def compression_ratio(expert: str, simple: str) -> float:
    """Character length of the simple text over the expert text."""
    expert_norm, simple_norm = normalize_ws(expert), normalize_ws(simple)
    if not expert_norm:
        raise EmptyExpertError("expert text is empty after normalization")
    return len(simple_norm) / len(expert_norm)


def _lcs_len(a: list, b: list) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, 1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l(candidate: str, reference: str, lowercase: bool = True) -> float:
    """ROUGE-L recall: LCS token length over reference token length."""
    ref = metric_tokenize(reference, lowercase)
    if not ref:
        raise EmptyReferenceError("reference is empty")
    cand = metric_tokenize(candidate, lowercase)
    return _lcs_len(cand, ref) / len(ref)


def rouge_l_f1(candidate: str, reference: str, lowercase: bool = True) -> float:
    """ROUGE-L F1 from LCS precision and recall."""
    ref = metric_tokenize(reference, lowercase)
    if not ref:
        raise EmptyReferenceError("reference is empty")
    cand = metric_tokenize(candidate, lowercase)
    if not cand:
        return 0.0
    lcs = _lcs_len(cand, ref)
    return _f1(lcs / len(cand), lcs / len(ref))


def words_added_deleted_kept(expert: str, simple: str, lowercase: bool = True):
    """Token counts added to, deleted from, and kept between the two texts."""
    e_bag = Counter(metric_tokenize(expert, lowercase))
    s_bag = Counter(metric_tokenize(simple, lowercase))
    added = sum((s_bag - e_bag).values())
    deleted = sum((e_bag - s_bag).values())
    kept = sum((e_bag & s_bag).values())
    return added, deleted, kept


# ---------------------------------------------------------------------------
# Slot-wise scoring of decoded examples.


@dataclass(frozen=True)
class SlotScore:
    slot: str
    status: str  # "scored" | "skipped"
    scores: dict[str, float] = field(default_factory=dict)
    reason: str | None = None


@dataclass(frozen=True)
class PairReport:
    pair_id: str
    angle: str
    slots: tuple[SlotScore, ...]
    pair_scores: dict[str, float] = field(default_factory=dict)


def _is_empty_value(value) -> bool:
    if value is None:
        return True
    if isinstance(value, str):
        return not normalize_ws(value)
    return len(value) == 0


def _expert_text(example) -> str | None:
    val = example.values.get("E")
    if isinstance(val, str) and normalize_ws(val):
        return normalize_ws(val)
    val = example.values.get("Ea")
    if isinstance(val, str) and normalize_ws(val):
        stripped = codec.strip_ea(val)
        if stripped:
            return stripped
    val = example.values.get("Sa")
    if isinstance(val, str) and normalize_ws(val):
        try:
            return markup.extract(markup.parse_annotated(val), markup.Side.EXPERT)
        except markup.MarkupError:
            return None
    return None


def _simple_text(example) -> str | None:
    val = example.values.get("S")
    if isinstance(val, str) and normalize_ws(val):
        return normalize_ws(val)
    val = example.values.get("Sa")
    if isinstance(val, str) and normalize_ws(val):
        try:
            return markup.extract(markup.parse_annotated(val), markup.Side.SIMPLE)
        except markup.MarkupError:
            return None
    return None


def _pairs_pre_post(value):
    pres = [normalize_ws(pre) for pre, _ in value]
    posts = [normalize_ws(post) for _, post in value]
    return pres, posts


def _spans(value):
    return [normalize_ws(v) for v in value]


def score_slots(truth, pred, lowercase: bool = True, stopword_set=None) -> PairReport:
    """Score a predicted example against its ground truth, slot by slot.

    Both examples must share an angle.  A slot is scored only when it holds
    a value on both sides; otherwise it is marked skipped, never zero-filled.
    Per slot kind:

    * S / Sa  - SARI(input=expert text, output=predicted simple,
      references=[true simple]), reported with all sub-scores.
    * I       - the ADD sub-score over the predicted insertion spans against
      the true insertion spans.
    * D       - ALTDEL of the predicted deletion spans (reference = the true
      simple text), reported scaled to [0, 100] like the other slot scores.
    * R       - ADD over the predicted post-edit spans against the true
      post-edit spans, plus ALTDEL of the predicted pre-edit spans.
    * X       - elaboration score: mean of ADD and KEEP over the predicted
      post-edit spans against the true type-1 post-edit spans (skipped when
      the truth holds no type-1 elaboration).
    """
    if truth.angle != pred.angle:
        raise AngleMismatchError(
            f"angles differ: {truth.angle.name} vs {pred.angle.name}"
        )
    expert = _expert_text(truth)
    simple_truth = _simple_text(truth)
    slot_scores: list[SlotScore] = []

    for slot in truth.angle.targets:
        t_val = truth.values.get(slot)
        p_val = pred.values.get(slot)
        t_empty, p_empty = _is_empty_value(t_val), _is_empty_value(p_val)
        if t_empty or p_empty:
            reason = (
                "empty-both" if t_empty and p_empty
                else "empty-truth" if t_empty
                else "empty-pred"
            )
            slot_scores.append(SlotScore(slot, "skipped", {}, reason))
            continue
        if expert is None and slot in ("I", "D", "R", "X"):
            slot_scores.append(SlotScore(slot, "skipped", {}, "no-input"))
            continue

        if slot in ("S", "Sa"):
            pred_simple = (
                normalize_ws(p_val) if slot == "S" else _simple_text(pred)
            )
            ref_simple = (
                normalize_ws(t_val) if slot == "S" else _simple_text(truth)
            )
            if expert is None or pred_simple is None or ref_simple is None:
                slot_scores.append(SlotScore(slot, "skipped", {}, "unextractable"))
                continue
            s = sari(expert, pred_simple, [ref_simple], lowercase)
            slot_scores.append(SlotScore(slot, "scored", {
                "sari": s.sari, "add": s.add, "keep": s.keep, "delete": s.delete,
            }))
        elif slot == "I":
            s = sari(expert, _spans(p_val), [_spans(t_val)], lowercase)
            slot_scores.append(SlotScore(slot, "scored", {"add": s.add}))
        elif slot == "D":
            if simple_truth is None:
                slot_scores.append(SlotScore(slot, "skipped", {}, "no-reference"))
                continue
            a = altdel(expert, _spans(p_val), [simple_truth], lowercase)
            slot_scores.append(SlotScore(slot, "scored", {
                "altdel": 100 * a.f1, "altdel_precision": 100 * a.precision,
                "altdel_recall": 100 * a.recall,
            }))
        elif slot == "R":
            t_pre, t_post = _pairs_pre_post(t_val)
            p_pre, p_post = _pairs_pre_post(p_val)
            scores: dict[str, float] = {}
            s = sari(expert, p_post, [t_post], lowercase)
            scores["add"] = s.add
            if simple_truth is not None:
                a = altdel(expert, p_pre, [simple_truth], lowercase)
                scores.update({
                    "altdel": 100 * a.f1, "altdel_precision": 100 * a.precision,
                    "altdel_recall": 100 * a.recall,
                })
            slot_scores.append(SlotScore(slot, "scored", scores))
        elif slot == "X":
            _, t_post = _pairs_pre_post(t_val)
            _, p_post = _pairs_pre_post(p_val)
            type1_posts = [
                post
                for (pre, post) in t_val
                if classify_pair(pre, post, stopword_set) is markup.ElabType.TYPE1
            ]
            if not type1_posts:
                slot_scores.append(
                    SlotScore(slot, "skipped", {}, "no-type1-elaboration")
                )
                continue
            s = sari(expert, p_post, [type1_posts], lowercase)
            slot_scores.append(SlotScore(slot, "scored", {
                "elaboration": (s.add + s.keep) / 2, "add": s.add, "keep": s.keep,
            }))
        else:
            slot_scores.append(SlotScore(slot, "skipped", {}, "unscored-slot-kind"))

    pair_scores: dict[str, float] = {}
    pred_simple = _simple_text(pred)
    if expert is not None and simple_truth is not None and pred_simple is not None:
        pair_scores["rouge_l"] = rouge_l(pred_simple, simple_truth, lowercase)
        pair_scores["rouge_l_f1"] = rouge_l_f1(pred_simple, simple_truth, lowercase)
        pair_scores["lev_similarity"] = lev_similarity(pred_simple, simple_truth)
        pair_scores["fkgl"] = fkgl(pred_simple).fkgl
        pair_scores["compression_ratio"] = compression_ratio(expert, pred_simple)

    return PairReport(truth.pair_id, truth.angle.name, tuple(slot_scores), pair_scores)


def classify_pair(pre: str, post: str, stopword_set=None) -> markup.ElabType:
    """Classify an elaboration (pre, post) pair via the shared rule."""
    return elab.classify_elaboration(
        markup.Edit(markup.EditKind.ELABORATE, normalize_ws(pre), normalize_ws(post)),
        stopword_set,
    )
