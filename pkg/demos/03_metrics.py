"""Tour of the evaluation metrics: SARI, ALTDEL, FKGL, ROUGE-L, and friends.

Run: python demos/03_metrics.py
"""

from simpkit import codec, metrics

EXPERT = "Ankles, knees, elbows, and wrists are usually involved."
SIMPLE = "Ankles, knees, elbows, and wrists are usually affected."

print("=== SARI ===")
system = "Ankles and wrists are usually affected."
score = metrics.sari(EXPERT, system, [SIMPLE])
print(f"input:  {EXPERT}")
print(f"output: {system}")
print(f"ref:    {SIMPLE}")
print(f"SARI {score.sari:.2f} (add {score.add:.2f}, keep {score.keep:.2f}, "
      f"del {score.delete:.2f})")

print()
print("=== ALTDEL: crediting predicted deletion spans ===")
for span in ("red", "cat", "zebra"):
    a = metrics.altdel("the red cat sat", span, ["the cat sat"])
    print(f"span {span!r}: precision {a.precision:.2f} recall {a.recall:.2f} "
          f"f1 {a.f1:.2f}")

print()
print("=== Readability ===")
for text in ("The cat sat.", EXPERT):
    rep = metrics.fkgl(text)
    print(f"FKGL {rep.fkgl:6.2f}  ({rep.words} words, {rep.sentences} sentences, "
          f"{rep.syllables} syllables)  {text}")

print()
print("=== Reference-less pair metrics ===")
print(f"levenshtein similarity: {metrics.lev_similarity(EXPERT, SIMPLE):.3f}")
print(f"compression ratio:      {metrics.compression_ratio(EXPERT, SIMPLE):.3f}")
added, deleted, kept = metrics.words_added_deleted_kept(EXPERT, SIMPLE)
print(f"words added/deleted/kept: {added}/{deleted}/{kept}")

print()
print("=== ROUGE-L ===")
print(f"recall: {metrics.rouge_l(system, SIMPLE):.3f}")
print(f"f1:     {metrics.rouge_l_f1(system, SIMPLE):.3f}")

print()
print("=== Slot-wise scoring of a decoded prediction ===")
angle = codec.get_angle("ERi->RS")
truth = codec.Example("demo", angle, {
    "E": EXPERT, "Ri": ["involved"],
    "R": [("involved", "affected")], "S": SIMPLE,
})
pred = codec.Example("demo", angle, {
    "R": [("involved", "hurt")], "S": "Ankles and wrists are usually hurt.",
})
report = metrics.score_slots(truth, pred)
for slot in report.slots:
    if slot.status == "scored":
        rendered = ", ".join(f"{k} {v:.2f}" for k, v in sorted(slot.scores.items()))
        print(f"slot {slot.slot}: {rendered}")
    else:
        print(f"slot {slot.slot}: skipped ({slot.reason})")
print("pair-level:", {k: round(v, 3) for k, v in sorted(report.pair_scores.items())})
