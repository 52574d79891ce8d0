"""Render and parse multi-angle model inputs and outputs.

Run: python demos/02_slot_encoding.py
"""

from simpkit import codec
from simpkit.codec import Example, encode_ea, encode_input, render_output
from simpkit.markup import EditKind

print("=== The angle registry ===")
angles = codec.registry()
print(f"{len(angles)} registered angles")
print("position-agnostic:", ", ".join(a.name for a in codec.multi_angles()))
print("in-place:         ", ", ".join(a.name for a in codec.multi_ip_angles()))
print("fixed formats:    ", ", ".join(a.name for a in codec.fixed_angles()))

print()
print("=== A position-agnostic example (ERi->RS) ===")
example = Example("demo1", codec.get_angle("ERi->RS"), {
    "E": "Ankles, knees, elbows, and wrists are usually involved.",
    "Ri": ["involved"],
    "R": [("involved", "affected")],
    "S": "Ankles, knees, elbows, and wrists are usually affected.",
})
model_input = encode_input(example)
model_target = render_output(example)
print("input: ", model_input)
print("target:", model_target)

decoded = codec.decode_output(model_target, example.angle, "demo1")
print("decoded slots:", decoded.example.values)

print()
print("=== The in-place form (Ea->Sa) ===")
expert = ("Allergic bronchopulmonary aspergillosis, a hypersensitivity reaction "
          "to Aspergillus species that occurs most commonly in people with asthma.")
ea = encode_ea(expert, [(0, 3, EditKind.ELABORATE), (3, 10, EditKind.REPLACE)])
print("annotated expert:", ea)
print("input:", encode_input(Example("demo2", codec.get_angle("Ea->Sa"), {"Ea": ea})))
print("stripped back:", codec.strip_ea(ea))

print()
print("=== Fixed-format empty slots ===")
fixed = Example("demo3", codec.get_angle("E->RXDIS"), {
    "E": "The dose is low.",
    "R": [("low", "small")],
    "S": "The dose is small.",
})
print("target:", render_output(fixed))

print()
print("=== Tolerant decoding of a messy model output ===")
messy = "$simple$ = Ankles are usually affected."
decoded = codec.decode_output(messy, codec.get_angle("ERi->RS"), "demo4")
print("output:", messy)
print("slots: ", decoded.example.values)
for finding in decoded.findings:
    print(f"finding: {finding.kind} on slot {finding.slot} ({finding.message})")
