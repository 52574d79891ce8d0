"""simpkit: non-neural machinery for controllable text simplification.

The package covers the full pipeline around a controllable simplification
model without containing any model itself:

* ``markup``    - the inline four-edit annotation format (parse, serialize,
  extract plain texts).
* ``diff``      - token-level sequence matching and automatic annotation of
  (expert, simple) pairs.
* ``elab``      - upgrading replace edits to elaborations from externally
  supplied coreference spans, and type-1/type-2 classification.
* ``metrics``   - SARI (ADD/KEEP/DEL), ALTDEL, FKGL, Levenshtein similarity,
  compression ratio, ROUGE-L, and slot-wise scoring.
* ``codec``     - multi-angle slot serialization of model inputs/outputs,
  including the in-place annotated-expert form.
* ``aggregate`` - Dawid-Skene EM over redundant annotator labels with
  confidence routing.
* ``corpus``    - corpus ingestion, quality statistics, stratified splits.
* ``cli``       - the ``simpkit`` command-line front end.
"""

from . import aggregate, codec, corpus, diff, elab, markup, metrics
from .markup import (
    AnnotatedText,
    Edit,
    EditKind,
    ElabType,
    Plain,
    Side,
    extract,
    parse_annotated,
    serialize,
)
from .diff import auto_annotate, opcodes, tokenize
from .metrics import (
    altdel,
    compression_ratio,
    fkgl,
    lev_similarity,
    rouge_l,
    sari,
    score_slots,
)
from .codec import Angle, Example, decode_output, encode_ea, encode_input, registry
from .aggregate import LabelMatrix, dawid_skene, route
from .elab import CorefLink, classify_elaboration, detect_elaborations

__version__ = "0.1.0"

__all__ = [
    "aggregate", "codec", "corpus", "diff", "elab", "markup", "metrics",
    "AnnotatedText", "Edit", "EditKind", "ElabType", "Plain", "Side",
    "extract", "parse_annotated", "serialize",
    "auto_annotate", "opcodes", "tokenize",
    "altdel", "compression_ratio", "fkgl", "lev_similarity", "rouge_l",
    "sari", "score_slots",
    "Angle", "Example", "decode_output", "encode_ea", "encode_input", "registry",
    "LabelMatrix", "dawid_skene", "route",
    "CorefLink", "classify_elaboration", "detect_elaborations",
    "__version__",
]
