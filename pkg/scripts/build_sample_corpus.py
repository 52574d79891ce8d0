"""Build the bundled sample corpus TSV from hand-written pairs.

Run from the repo root: python scripts/build_sample_corpus.py
"""

from simpkit import corpus, diff, elab, markup
from simpkit.markup import AnnotatedText, Edit, EditKind, ElabType

PAIRS = [
    ("S01", "SIMPWIKI",
     "Hypertension, defined as persistently elevated arterial blood pressure, is a major risk factor for cardiovascular disease.",
     "High blood pressure is a major risk factor for heart disease."),
    ("S02", "MSD",
     "Patients presenting with acute myocardial infarction frequently report substernal chest discomfort radiating to the left arm.",
     "People having a heart attack often feel chest pain that spreads to the left arm."),
    ("S03", "SIMPWIKI",
     "Administration of broad-spectrum antibiotics should commence promptly following the collection of blood cultures.",
     "Antibiotics should be started quickly after blood samples are taken."),
    ("S04", "MSD",
     "Type 2 diabetes mellitus results from progressive insulin resistance accompanied by inadequate compensatory insulin secretion.",
     "Type 2 diabetes happens when the body stops responding to insulin and cannot make enough of it."),
    ("S05", "MSD",
     "The differential diagnosis includes pulmonary embolism, pneumothorax, and acute pericarditis.",
     "Other possible causes include a blood clot in the lungs, a collapsed lung, and swelling around the heart."),
    ("S06", "SIMPWIKI",
     "Metformin remains the first-line pharmacologic agent for glycemic management in most adults.",
     "Metformin remains the first choice drug for most adults."),
    ("S07", "SIMPWIKI",
     "Aspirin irreversibly inhibits platelet aggregation, thereby reducing thrombotic risk.",
     "Aspirin stops blood cells from clumping, which lowers the risk of clots."),
    ("S08", "MSD",
     "Chronic obstructive pulmonary disease is characterized by persistent airflow limitation that is usually progressive.",
     "COPD is a lung disease that blocks airflow and usually gets worse over time."),
    ("S09", "SIMPWIKI",
     "The median nerve is compressed within the carpal tunnel, producing paresthesias in the affected digits.",
     "The nerve is squeezed inside the wrist, causing tingling in the fingers."),
    ("S10", "MSD",
     "Untreated streptococcal pharyngitis may precipitate acute rheumatic fever in susceptible individuals.",
     "Untreated strep throat may lead to rheumatic fever in some people."),
    ("S11", "SIMPWIKI",
     "Ankles, knees, elbows, and wrists are usually involved.",
     "Ankles, knees, elbows, and wrists are usually affected."),
    ("S12", "MSD",
     "Osteoporosis reduces bone mineral density and markedly increases fracture susceptibility.",
     "Osteoporosis also makes bones thinner and much more likely to break."),
    ("S13", "SIMPWIKI",
     "Immunization against seasonal influenza is recommended annually for all persons older than six months.",
     "A flu shot is now recommended every year for everyone older than six months."),
    ("S14", "MSD",
     "Hepatic cirrhosis may remain clinically silent until decompensation manifests as ascites or encephalopathy.",
     "Liver scarring may cause no symptoms until fluid builds up in the belly or confusion appears."),
    ("S15", "SIMPWIKI",
     "Anaphylaxis is a rapidly evolving, potentially fatal systemic hypersensitivity reaction.",
     "Anaphylaxis is a fast and possibly deadly allergic reaction."),
    ("S16", "MSD",
     "Corticosteroid therapy ameliorates inflammation but predisposes patients to hyperglycemia and osteopenia.",
     "Steroid medicine eases swelling but can raise blood sugar and weaken bones."),
    ("S17", "SIMPWIKI",
     "The cerebellum coordinates voluntary movement and maintains postural equilibrium.",
     "The cerebellum, the balance center of the brain, coordinates movement and keeps you steady."),
    ("S18", "MSD",
     "Gastroesophageal reflux disease arises when the lower esophageal sphincter relaxes inappropriately.",
     "Gastroesophageal reflux disease, or acid reflux, happens when the valve at the bottom of the food pipe relaxes at the wrong time."),
    ("S19", "SIMPWIKI",
     "Renal calculi typically present with excruciating colicky flank pain radiating to the groin.",
     "Kidney stones usually cause severe cramping pain in the side that moves to the groin."),
    ("S20", "MSD",
     "Bacterial meningitis constitutes a medical emergency requiring immediate antimicrobial therapy.",
     "Bacterial meningitis is an emergency that needs antibiotics right away."),
]

# Replace edits whose target clearly extends the source become elaborations;
# relabeling keeps extraction intact.
ELAB_PAIRS = {"S17", "S18"}


def annotate(pair_id, expert, simple):
    annotated = diff.auto_annotate(expert, simple)
    if pair_id in ELAB_PAIRS:
        segments = []
        for seg in annotated.segments:
            if (
                isinstance(seg, Edit)
                and seg.kind is EditKind.REPLACE
                and len(seg.target.split()) > len(seg.source.split())
                and elab.classify_elaboration(
                    Edit(EditKind.ELABORATE, seg.source, seg.target)
                ) is ElabType.TYPE1
            ):
                seg = Edit(EditKind.ELABORATE, seg.source, seg.target)
            segments.append(seg)
        annotated = AnnotatedText(tuple(segments), annotated.side)
    return markup.serialize(annotated)


def main():
    records = [
        corpus.CorpusRecord(pid, expert, simple, annotate(pid, expert, simple), source)
        for pid, source, expert, simple in PAIRS
    ]
    stats = corpus.stats(records)
    fk_e = stats.metrics["fkgl_expert"].mean
    fk_s = stats.metrics["fkgl_simple"].mean
    print(f"records: {len(records)}")
    print(f"fkgl expert mean {fk_e:.3f} vs simple mean {fk_s:.3f} (must be >)")
    assert fk_e > fk_s
    print("edit counts:", stats.edit_counts)
    corpus.save(records, "src/simpkit/data/sample_corpus.tsv", "tsv")
    reloaded = corpus.load("src/simpkit/data/sample_corpus.tsv")
    assert reloaded == records
    print("wrote src/simpkit/data/sample_corpus.tsv")


if __name__ == "__main__":
    main()
