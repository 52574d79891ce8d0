"""Corpus ingestion, reference-less statistics, and stratified splitting.

Records are (expert, simple) pairs with an optional annotated form and a
source corpus tag.  Two interchange formats are supported: TSV with columns
``pair_id, source, expert, simple, annotated`` (header required, annotated
may be blank) and a JSONL mirror with the same keys.

Statistics report mean and population standard deviation of the
reference-less quality metrics per pair - Levenshtein similarity,
compression ratio, FKGL of each side, and token counts added, deleted, and
kept - plus a histogram of edit kinds taken from the annotated forms.

Splitting is stratified (by default over Levenshtein-similarity buckets),
deterministic given a seed, and sizes quotas by largest remainder so the
partition is exact.
"""

import csv
import json
import math
import random
import statistics
from dataclasses import dataclass

from . import markup, metrics
from ._text import normalize_ws

__all__ = [
    "CorpusRecord",
    "CorpusStats",
    "MetricSummary",
    "SplitResult",
    "ParseError",
    "ValidationError",
    "EmptyCorpusError",
    "RatioError",
    "LEV_BUCKETS",
    "load",
    "save",
    "stats",
    "split",
    "lev_bucket",
]

KNOWN_SOURCES = ("SIMPWIKI", "MSD", "other")

EDIT_KIND_NAMES = {
    markup.EditKind.REPLACE: "replacement",
    markup.EditKind.ELABORATE: "elaboration",
    markup.EditKind.DELETE: "deletion",
    markup.EditKind.INSERT: "insertion",
}


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class ValidationError(ValueError):
    def __init__(self, message: str, pair_ids: list[str]):
        self.pair_ids = list(pair_ids)
        super().__init__(f"{message}: {', '.join(self.pair_ids)}")


class EmptyCorpusError(ValueError):
    pass


class RatioError(ValueError):
    pass


@dataclass(frozen=True)
class CorpusRecord:
    pair_id: str
    expert: str
    simple: str
    annotated: str | None = None
    source: str = "other"


@dataclass(frozen=True)
class MetricSummary:
    mean: float
    std: float


@dataclass(frozen=True)
class CorpusStats:
    n: int
    metrics: dict
    edit_counts: dict

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "metrics": {
                name: {"mean": s.mean, "std": s.std}
                for name, s in self.metrics.items()
            },
            "edit_counts": dict(self.edit_counts),
        }


@dataclass(frozen=True)
class SplitResult:
    train: tuple[CorpusRecord, ...]
    dev: tuple[CorpusRecord, ...]
    test: tuple[CorpusRecord, ...]
    manifest: dict


_TSV_COLUMNS = ("pair_id", "source", "expert", "simple", "annotated")


def _record_from_mapping(data: dict, line: int) -> CorpusRecord:
    for key in ("pair_id", "expert", "simple"):
        if data.get(key) in (None, ""):
            raise ParseError(f"missing field {key!r}", line)
    annotated = data.get("annotated") or None
    return CorpusRecord(
        pair_id=str(data["pair_id"]),
        expert=str(data["expert"]),
        simple=str(data["simple"]),
        annotated=annotated,
        source=str(data.get("source") or "other"),
    )


def _validate(records: list[CorpusRecord]) -> None:
    bad: list[str] = []
    for rec in records:
        if not normalize_ws(rec.expert) or not normalize_ws(rec.simple):
            bad.append(rec.pair_id)
            continue
        if rec.annotated is None:
            continue
        try:
            parsed = markup.parse_annotated(rec.annotated, markup.Side.SIMPLE)
        except markup.MarkupError:
            bad.append(rec.pair_id)
            continue
        if (
            markup.extract(parsed, markup.Side.EXPERT) != normalize_ws(rec.expert)
            or markup.extract(parsed, markup.Side.SIMPLE) != normalize_ws(rec.simple)
        ):
            bad.append(rec.pair_id)
    if bad:
        raise ValidationError("records failed validation", bad)


def _infer_format(path, fmt: str | None) -> str:
    if fmt is not None:
        if fmt not in ("tsv", "jsonl"):
            raise ValueError(f"format must be 'tsv' or 'jsonl', got {fmt!r}")
        return fmt
    name = str(path)
    if name.endswith(".tsv"):
        return "tsv"
    if name.endswith((".jsonl", ".json")):
        return "jsonl"
    raise ValueError(f"cannot infer format from {name!r}; pass fmt explicitly")


def load(path, fmt: str | None = None) -> list[CorpusRecord]:
    """Read and validate a corpus file.

    Raises ``ParseError`` (with a line number) on structural problems and
    ``ValidationError`` (listing pair ids) when records are inconsistent,
    e.g. an annotated form that does not extract back to its plain texts.
    """
    fmt = _infer_format(path, fmt)
    records: list[CorpusRecord] = []
    with open(path, encoding="utf-8", newline="") as fh:
        if fmt == "tsv":
            reader = csv.reader(fh, delimiter="\t")
            try:
                header = next(reader)
            except StopIteration:
                raise ParseError("empty file", 1) from None
            if tuple(header) not in (_TSV_COLUMNS, _TSV_COLUMNS[:4]):
                raise ParseError(
                    f"expected header {list(_TSV_COLUMNS)} (annotated optional)", 1
                )
            for lineno, row in enumerate(reader, 2):
                if not row:
                    continue
                if len(row) != len(header):
                    raise ParseError(f"expected {len(header)} columns, got {len(row)}", lineno)
                records.append(_record_from_mapping(dict(zip(header, row)), lineno))
        else:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    data = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(f"bad JSON: {exc.msg}", lineno) from None
                if not isinstance(data, dict):
                    raise ParseError("each line must be a JSON object", lineno)
                records.append(_record_from_mapping(data, lineno))
    _validate(records)
    return records


def save(records, path, fmt: str | None = None) -> None:
    """Write records in either format; ``load(save(...))`` is the identity."""
    fmt = _infer_format(path, fmt)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if fmt == "tsv":
            writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
            writer.writerow(_TSV_COLUMNS)
            for rec in records:
                writer.writerow([
                    rec.pair_id, rec.source, rec.expert, rec.simple,
                    rec.annotated or "",
                ])
        else:
            for rec in records:
                data = {
                    "pair_id": rec.pair_id,
                    "source": rec.source,
                    "expert": rec.expert,
                    "simple": rec.simple,
                }
                if rec.annotated is not None:
                    data["annotated"] = rec.annotated
                fh.write(json.dumps(data, ensure_ascii=False) + "\n")


def stats(records) -> CorpusStats:
    """Reference-less quality statistics over the corpus.

    FKGL is computed per text and then averaged (not pooled).  Standard
    deviations are population (ddof=0).
    """
    records = list(records)
    if not records:
        raise EmptyCorpusError("no records to score")
    series: dict[str, list[float]] = {
        "lev_similarity": [],
        "compression_ratio": [],
        "fkgl_expert": [],
        "fkgl_simple": [],
        "words_added": [],
        "words_deleted": [],
        "words_kept": [],
    }
    edit_counts: dict[str, int] = {name: 0 for name in EDIT_KIND_NAMES.values()}
    for rec in records:
        series["lev_similarity"].append(metrics.lev_similarity(rec.expert, rec.simple))
        series["compression_ratio"].append(
            metrics.compression_ratio(rec.expert, rec.simple)
        )
        series["fkgl_expert"].append(metrics.fkgl(rec.expert).fkgl)
        series["fkgl_simple"].append(metrics.fkgl(rec.simple).fkgl)
        added, deleted, kept = metrics.words_added_deleted_kept(rec.expert, rec.simple)
        series["words_added"].append(added)
        series["words_deleted"].append(deleted)
        series["words_kept"].append(kept)
        if rec.annotated is not None:
            parsed = markup.parse_annotated(rec.annotated, markup.Side.SIMPLE)
            for seg in parsed.segments:
                if isinstance(seg, markup.Edit):
                    edit_counts[EDIT_KIND_NAMES[seg.kind]] += 1
    summaries = {
        name: MetricSummary(statistics.fmean(vals), statistics.pstdev(vals))
        for name, vals in series.items()
    }
    return CorpusStats(len(records), summaries, edit_counts)


LEV_BUCKETS = ((0.0, 0.3), (0.3, 0.5), (0.5, 0.7), (0.7, 1.0))


def lev_bucket(record: CorpusRecord) -> str:
    """Stratum label from the pair's Levenshtein similarity."""
    value = metrics.lev_similarity(record.expert, record.simple)
    for lo, hi in LEV_BUCKETS[:-1]:
        if lo <= value < hi:
            return f"{lo}-{hi}"
    lo, hi = LEV_BUCKETS[-1]
    return f"{lo}-{hi}"


def _largest_remainder(total: int, ratios) -> list[int]:
    quotas = [r * total for r in ratios]
    base = [math.floor(q) for q in quotas]
    leftover = total - sum(base)
    order = sorted(range(len(ratios)), key=lambda i: (-(quotas[i] - base[i]), i))
    for i in order[:leftover]:
        base[i] += 1
    return base


def split(records, ratios, seed: int, strata_fn=None) -> SplitResult:
    """Stratified, seeded train/dev/test split.

    Within each stratum records are shuffled with the seed and allocated by
    largest-remainder quotas, so the partition is exact, disjoint, and
    reproduces bit-for-bit given the same inputs and seed.  ``strata_fn``
    maps a record to its stratum label (default: Levenshtein buckets); pass
    a custom function to stratify on e.g. a user-supplied term list.
    """
    records = list(records)
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) != 3 or any(r < 0 for r in ratios):
        raise RatioError("ratios must be three non-negative numbers")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise RatioError(f"ratios must sum to 1, got {sum(ratios)}")
    strata_fn = strata_fn or lev_bucket

    groups: dict[str, list[CorpusRecord]] = {}
    for rec in records:
        groups.setdefault(strata_fn(rec), []).append(rec)

    rng = random.Random(seed)
    buckets: tuple[list[CorpusRecord], ...] = ([], [], [])
    strata_sizes: dict[str, dict[str, int]] = {}
    for label in sorted(groups):
        group = list(groups[label])
        rng.shuffle(group)
        sizes = _largest_remainder(len(group), ratios)
        start = 0
        for part, size in zip(buckets, sizes):
            part.extend(group[start:start + size])
            start += size
        strata_sizes[label] = dict(zip(("train", "dev", "test"), sizes))

    manifest = {
        "seed": seed,
        "ratios": list(ratios),
        "sizes": {
            "train": len(buckets[0]), "dev": len(buckets[1]), "test": len(buckets[2]),
        },
        "strata": strata_sizes,
    }
    return SplitResult(tuple(buckets[0]), tuple(buckets[1]), tuple(buckets[2]), manifest)
