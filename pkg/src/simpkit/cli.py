"""Command-line front end: file-in/file-out pipelines over the library.

Subcommands: annotate, parse, extract, encode, decode, score, aggregate,
stats, split.  JSONL is the interchange default (TSV is accepted for corpus
ingestion); all outputs are deterministic given inputs, config, and seed.

Exit status: 0 on success, 1 when validation findings or data errors occur,
2 on usage errors.
"""

import argparse
import csv
import json
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor

from . import aggregate as agg
from . import codec, corpus, diff, elab, markup, metrics
from .config import Config, ConfigError, load_config

__all__ = ["build_parser", "run", "main"]

SIDES = {"Ea": markup.Side.EXPERT, "Sa": markup.Side.SIMPLE}


def _read_jsonl(path):
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise corpus.ParseError(f"bad JSON: {exc.msg}", lineno) from None
    return records


def _write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def _segment_dict(seg):
    if isinstance(seg, markup.Plain):
        return {"type": "plain", "text": seg.text}
    return {
        "type": "edit",
        "kind": seg.kind.name.lower(),
        "source": seg.source,
        "target": seg.target,
    }


def _annotate_one(rec):
    annotated = diff.auto_annotate(rec["expert"], rec["simple"])
    out = dict(rec)
    out["annotated"] = markup.serialize(annotated)
    return out


def _cmd_annotate(args, cfg):
    records = _read_jsonl(args.infile)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_annotate_one, records, chunksize=64))
    else:
        results = [_annotate_one(rec) for rec in records]
    _write_jsonl(args.outfile, results)
    return 0


def _cmd_parse(args, cfg):
    results = []
    status = 0
    for rec in _read_jsonl(args.infile):
        side = SIDES.get(rec.get("side", "Sa"))
        if side is None:
            raise corpus.ParseError(f"side must be 'Ea' or 'Sa', got {rec.get('side')!r}")
        try:
            parsed = markup.parse_annotated(rec["text"], side)
        except markup.MarkupError as exc:
            results.append(dict(rec, error=str(exc)))
            status = 1
            continue
        results.append(dict(rec, segments=[_segment_dict(s) for s in parsed.segments]))
    _write_jsonl(args.outfile, results)
    return status


def _cmd_extract(args, cfg):
    results = []
    status = 0
    for rec in _read_jsonl(args.infile):
        side = SIDES.get(rec.get("side", "Sa"), markup.Side.SIMPLE)
        try:
            parsed = markup.parse_annotated(rec["text"], side)
        except markup.MarkupError as exc:
            results.append(dict(rec, error=str(exc)))
            status = 1
            continue
        results.append(dict(
            rec,
            expert=markup.extract(parsed, markup.Side.EXPERT),
            simple=markup.extract(parsed, markup.Side.SIMPLE),
        ))
    _write_jsonl(args.outfile, results)
    return status


def _slots_to_values(slots):
    values = {}
    for slot, value in slots.items():
        if value is None:
            values[slot] = None
        elif slot in codec.PAIR_LIST_SLOTS:
            values[slot] = [tuple(pair) for pair in value]
        else:
            values[slot] = value
    return values


def _values_to_slots(values):
    out = {}
    for slot, value in values.items():
        if slot in codec.PAIR_LIST_SLOTS and value is not None:
            out[slot] = [list(pair) for pair in value]
        else:
            out[slot] = value
    return out


def _cmd_encode(args, cfg):
    results = []
    for rec in _read_jsonl(args.infile):
        angle = codec.get_angle(rec.get("angle") or args.angle)
        example = codec.Example(
            rec.get("pair_id", ""), angle, _slots_to_values(rec.get("slots", {}))
        )
        has_targets = any(
            example.values.get(slot) is not None for slot in angle.targets
        )
        results.append({
            "pair_id": example.pair_id,
            "input": codec.encode_input(example, cfg.slot_names),
            "target": codec.render_output(example, cfg.slot_names) if has_targets else None,
        })
    _write_jsonl(args.outfile, results)
    return 0


def _cmd_decode(args, cfg):
    results = []
    status = 0
    for rec in _read_jsonl(args.infile):
        angle = codec.get_angle(rec.get("angle") or args.angle)
        text = rec.get("output", rec.get("target"))
        decoded = codec.decode_output(
            text, angle, rec.get("pair_id", ""), cfg.slot_names
        )
        if decoded.findings:
            status = 1
        results.append({
            "pair_id": decoded.example.pair_id,
            "angle": angle.name,
            "slots": _values_to_slots(decoded.example.values),
            "findings": [
                {"kind": f.kind, "slot": f.slot, "message": f.message}
                for f in decoded.findings
            ],
        })
    _write_jsonl(args.outfile, results)
    return status


def _example_from_record(rec, default_angle, cfg):
    angle = codec.get_angle(rec.get("angle") or default_angle)
    return codec.Example(
        rec.get("pair_id", ""), angle, _slots_to_values(rec.get("slots", {}))
    )


def _cmd_score(args, cfg):
    truth = {rec["pair_id"]: rec for rec in _read_jsonl(args.truth)}
    pred = {rec["pair_id"]: rec for rec in _read_jsonl(args.pred)}
    stopword_set = elab.stopwords(cfg.stopwords_path) if cfg.stopwords_path else None
    reports = []
    for pair_id in truth:
        if pair_id not in pred:
            continue
        t = _example_from_record(truth[pair_id], args.angle, cfg)
        p = _example_from_record(pred[pair_id], args.angle, cfg)
        reports.append(
            metrics.score_slots(t, p, cfg.metric_lowercase, stopword_set)
        )

    with open(args.out_csv, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["pair_id", "angle", "slot", "status", "metric", "value", "reason"])
        for report in reports:
            for slot_score in report.slots:
                if slot_score.scores:
                    for metric_name, value in sorted(slot_score.scores.items()):
                        writer.writerow([
                            report.pair_id, report.angle, slot_score.slot,
                            slot_score.status, metric_name, f"{value:.6f}", "",
                        ])
                else:
                    writer.writerow([
                        report.pair_id, report.angle, slot_score.slot,
                        slot_score.status, "", "", slot_score.reason or "",
                    ])
            for metric_name, value in sorted(report.pair_scores.items()):
                writer.writerow([
                    report.pair_id, report.angle, "", "scored",
                    metric_name, f"{value:.6f}", "",
                ])

    pooled: dict[str, list[float]] = {}
    skipped: dict[str, int] = {}
    for report in reports:
        for slot_score in report.slots:
            if slot_score.status == "skipped":
                key = f"{slot_score.slot}"
                skipped[key] = skipped.get(key, 0) + 1
                continue
            for metric_name, value in slot_score.scores.items():
                pooled.setdefault(f"{slot_score.slot}.{metric_name}", []).append(value)
        for metric_name, value in report.pair_scores.items():
            pooled.setdefault(f"pair.{metric_name}", []).append(value)
    summary = {
        "n_pairs": len(reports),
        "sari_del_variant": "precision-only",
        "metrics": {
            key: {
                "mean": statistics.fmean(vals),
                "std": statistics.pstdev(vals),
                "n": len(vals),
            }
            for key, vals in sorted(pooled.items())
        },
        "skipped_slots": dict(sorted(skipped.items())),
    }
    with open(args.out_json, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    return 0


def _cmd_aggregate(args, cfg):
    triples = []
    with open(args.infile, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise corpus.ParseError("empty file", 1)
        if [h.strip() for h in header] != ["item_id", "annotator_id", "label"]:
            raise corpus.ParseError("expected header: item_id,annotator_id,label", 1)
        for row in reader:
            if row:
                triples.append(tuple(row[:3]))
    matrix = agg.LabelMatrix.from_triples(triples)
    posterior = agg.dawid_skene(
        matrix, max_iters=cfg.aggregate_max_iters, tol=cfg.aggregate_tol
    )
    threshold = args.threshold if args.threshold is not None else cfg.aggregate_threshold
    routing = agg.route(posterior, threshold)
    out = {}
    for item in posterior.items:
        label, confidence = posterior.label(item)
        out[item] = {
            "label": label,
            "confidence": confidence,
            "routed": "accepted" if item in routing.accepted else "escalated",
        }
    with open(args.outfile, "w", encoding="utf-8") as fh:
        json.dump(out, fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    return 0


def _cmd_stats(args, cfg):
    try:
        records = corpus.load(args.infile, args.format)
    except (corpus.ParseError, corpus.ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    result = corpus.stats(records)
    with open(args.outfile, "w", encoding="utf-8") as fh:
        json.dump(result.to_json_dict(), fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    return 0


def _cmd_split(args, cfg):
    try:
        records = corpus.load(args.infile, args.format)
    except (corpus.ParseError, corpus.ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    ratios = (
        tuple(float(r) for r in args.ratios.split(","))
        if args.ratios
        else cfg.split_ratios
    )
    seed = args.seed if args.seed is not None else cfg.split_seed
    if seed is None:
        print("error: split requires --seed (or split_seed in the config)",
              file=sys.stderr)
        return 2
    result = corpus.split(records, ratios, seed)
    fmt = "jsonl"
    for name, part in (("train", result.train), ("dev", result.dev), ("test", result.test)):
        corpus.save(part, f"{args.out_prefix}.{name}.{fmt}", fmt)
    with open(f"{args.out_prefix}.manifest.json", "w", encoding="utf-8") as fh:
        json.dump(result.manifest, fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simpkit",
        description="Edit annotation, slot codecs, metrics, label aggregation, "
                    "and corpus tooling for controllable text simplification.",
    )
    parser.add_argument("--config", help="path to a JSON config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("annotate", help="diff expert/simple pairs into markup")
    p.add_argument("--in", dest="infile", required=True,
                   help="JSONL with 'expert' and 'simple' per record")
    p.add_argument("--out", dest="outfile", required=True,
                   help="JSONL output; adds an 'annotated' field")
    p.add_argument("--jobs", type=int, default=1,
                   help="worker processes; output order always matches input")
    p.set_defaults(func=_cmd_annotate)

    p = sub.add_parser("parse", help="parse tagged text into segments")
    p.add_argument("--in", dest="infile", required=True,
                   help="JSONL with 'side' (Ea|Sa) and 'text'")
    p.add_argument("--out", dest="outfile", required=True,
                   help="JSONL output; adds a 'segments' field")
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("extract", help="recover plain texts from tagged text")
    p.add_argument("--in", dest="infile", required=True,
                   help="JSONL with 'side' (Ea|Sa) and 'text'")
    p.add_argument("--out", dest="outfile", required=True,
                   help="JSONL output; adds 'expert' and 'simple' fields")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("encode", help="render slot examples as model inputs/targets")
    p.add_argument("--in", dest="infile", required=True,
                   help="JSONL with 'pair_id', 'angle', 'slots'")
    p.add_argument("--out", dest="outfile", required=True,
                   help="JSONL output with 'pair_id', 'input', 'target'")
    p.add_argument("--angle", help="default angle for records without one, e.g. 'ERi->RS'")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="parse model outputs back into slots")
    p.add_argument("--in", dest="infile", required=True,
                   help="JSONL with 'pair_id' and 'output' (or 'target')")
    p.add_argument("--out", dest="outfile", required=True,
                   help="JSONL output with 'slots' and 'findings'")
    p.add_argument("--angle", help="default angle for records without one, e.g. 'ERi->RS'")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("score", help="slot-wise scoring of predictions against truth")
    p.add_argument("--truth", required=True, help="ground-truth examples (JSONL)")
    p.add_argument("--pred", required=True, help="predicted examples (JSONL)")
    p.add_argument("--out-csv", required=True, help="per-example scores (CSV)")
    p.add_argument("--out-json", required=True, help="corpus summary (JSON)")
    p.add_argument("--angle", help="default angle when records omit one")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("aggregate", help="Dawid-Skene aggregation of annotator labels")
    p.add_argument("--in", dest="infile", required=True,
                   help="CSV with header item_id,annotator_id,label")
    p.add_argument("--out", dest="outfile", required=True,
                   help="JSON mapping item_id to label/confidence/routed")
    p.add_argument("--threshold", type=float, default=None,
                   help="acceptance confidence (default 0.9 or config)")
    p.set_defaults(func=_cmd_aggregate)

    p = sub.add_parser("stats", help="corpus quality statistics")
    p.add_argument("--in", dest="infile", required=True, help="corpus TSV or JSONL")
    p.add_argument("--out", dest="outfile", required=True, help="statistics JSON")
    p.add_argument("--format", choices=("tsv", "jsonl"), default=None,
                   help="override the format inferred from the extension")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("split", help="stratified train/dev/test split")
    p.add_argument("--in", dest="infile", required=True, help="corpus TSV or JSONL")
    p.add_argument("--out-prefix", required=True,
                   help="writes <prefix>.{train,dev,test}.jsonl and a manifest")
    p.add_argument("--seed", type=int, default=None,
                   help="required for reproducibility (or split_seed in config)")
    p.add_argument("--ratios", help="comma-separated, e.g. 0.75,0.10,0.15")
    p.add_argument("--format", choices=("tsv", "jsonl"), default=None,
                   help="override the format inferred from the extension")
    p.set_defaults(func=_cmd_split)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config) if args.config else Config()
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return args.func(args, cfg)
    except (corpus.ParseError, corpus.ValidationError, codec.CodecError,
            markup.MarkupError, metrics.MetricError, agg.AggregateError,
            corpus.RatioError, diff.EmptyInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
