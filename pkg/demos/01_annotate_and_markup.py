"""Walk through the edit-annotation pipeline: diff, markup, extraction.

Run: python demos/01_annotate_and_markup.py
"""

from simpkit import (
    CorefLink,
    Side,
    auto_annotate,
    classify_elaboration,
    detect_elaborations,
    extract,
    parse_annotated,
    serialize,
)
from simpkit.markup import Edit, EditKind

PAIRS = [
    ("Uterine cancer is any type of cancer that emerges from the tissue of the uterus.",
     "Uterine cancer is any type of cancer that starts from the tissue of the uterus."),
    ("Ankles, knees, elbows, and wrists are usually involved.",
     "Ankles, knees, elbows, and wrists are usually affected."),
    ("Metformin remains the first-line pharmacologic agent for glycemic management.",
     "Metformin remains the first choice drug."),
]

print("=== Automatic annotation from (expert, simple) pairs ===")
for expert, simple in PAIRS:
    annotated = auto_annotate(expert, simple)
    print()
    print("expert:   ", expert)
    print("simple:   ", simple)
    print("annotated:", serialize(annotated))

print()
print("=== Markup round trip ===")
tagged = "In his <elab>Nobel lecture<by>Nobel Prize lecture</elab>, <elab>Lewis<by>E.B. Lewis</elab> said hello."
parsed = parse_annotated(tagged)
print("tagged:     ", tagged)
print("reserialized:", serialize(parsed))
print("expert side: ", extract(parsed, Side.EXPERT))
print("simple side: ", extract(parsed, Side.SIMPLE))

print()
print("=== Elaboration detection from coreference links ===")
annotated = auto_annotate(
    "The left ventricle pumps blood. It has thick walls.",
    "The left ventricle pumps blood. This chamber of the heart has thick walls.",
)
print("before:", serialize(annotated))
expert_text = extract(annotated, Side.EXPERT)
simple_text = extract(annotated, Side.SIMPLE)
link = CorefLink(
    expert_span=(expert_text.index("It"), expert_text.index("It") + 2),
    simple_span=(
        simple_text.index("This chamber of the heart"),
        simple_text.index("This chamber of the heart") + len("This chamber of the heart"),
    ),
)
upgraded = detect_elaborations(annotated, [link])
print("after: ", serialize(upgraded))

print()
print("=== Elaboration typing ===")
for pre, post in [("Lewis", "E.B. Lewis"), ("tumor", "an abnormal growth")]:
    kind = classify_elaboration(Edit(EditKind.ELABORATE, pre, post))
    print(f"({pre!r} -> {post!r}) is {kind.value}")
