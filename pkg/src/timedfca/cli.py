"""Command line interface.

Every stage reads and writes the JSON interchange files, so stages can be run
one at a time or all together with ``pipeline``. Settings come from an
optional ``--config`` JSON file; explicit flags override it.

Exit codes: 0 success, 1 config error, 2 data error, 3 concept cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import annotate, corpus, lattice, metrics, peaks, summarize
from .dot import export_dot
from .errors import ConfigError, DataError, TimedFCAError
from .fixture import write_fixture
from .pipeline import (PipelineConfig, annotations_from_json, annotations_to_json, dump_json,
                       run_pipeline)

logger = logging.getLogger("timedfca")


def _read_json(path):
    try:
        return json.loads(Path(path).read_text("utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise DataError(f"{path} is not valid JSON: {exc}") from exc


def _write(path, data: bytes):
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_bytes(data)
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from exc


def _config(args, need=()) -> PipelineConfig:
    overrides = {k: v for k, v in vars(args).items()
                 if k not in ("command", "config", "func", "out", "verbose",
                              "windows", "annotations", "lattice", "summary", "seed")}
    try:
        cfg = PipelineConfig.load(args.config, overrides)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    cfg.validate(need)
    return cfg


def _stream(cfg: PipelineConfig) -> corpus.Stream:
    return corpus.parse_stream(cfg.input, cfg.bin_minutes)


def cmd_gen_fixture(args):
    paths = write_fixture(args.out, seed=args.seed)
    for name, path in paths.items():
        print(f"{name}: {path}")


def cmd_peaks(args):
    cfg = _config(args, need=("input",))
    stream = _stream(cfg)
    windows = peaks.detect_peaks(corpus.bin_counts(stream), cfg.peak_config())
    _write(args.out, dump_json([w.to_json() for w in windows]))
    print(f"{len(windows)} peak window(s) -> {args.out}")


def cmd_annotate(args):
    cfg = _config(args, need=("input", "annotator"))
    stream = _stream(cfg)
    raw = annotate.annotate_records(stream.records, cfg.annotator(),
                                    skip_errors=cfg.skip_annotator_errors)
    stats = annotate.corpus_stats(raw)
    weighted = annotate.build_relevance(raw, stats, cfg.log_base)
    _write(args.out, dump_json(annotations_to_json(weighted, stats, cfg.log_base)))
    print(f"{stats.N} record(s), {len(stats.df)} topic(s) -> {args.out}")


def cmd_lattice(args):
    cfg = _config(args, need=("input",))
    stream = _stream(cfg)
    windows = [peaks.PeakWindow.from_json(w) for w in _read_json(args.windows)]
    weighted = annotations_from_json(_read_json(args.annotations))
    ctx = lattice.build_context(weighted, peaks.assign_peaks(stream, windows), cfg.threshold)
    lat = lattice.enumerate_concepts(ctx, cap=cfg.concept_cap)
    _write(args.out, dump_json(lattice.lattice_to_json(lat)))
    print(f"{len(lat.concepts)} concept(s), {len(lat.temporal_edges)} temporal edge(s) -> {args.out}")


def cmd_summarize(args):
    cfg = _config(args, need=("input",))
    stream = _stream(cfg)
    lat = lattice.lattice_from_json(_read_json(args.lattice))
    peak_ids = [lattice.peak_of(t) for t in lat.context.time_attributes]
    summary = summarize.summarize(lat, peak_ids, cfg.shrinking, cfg.presentation)
    texts = {r.id: r.text for r in stream.records}
    _write(args.out, dump_json(summary.to_json(texts)))
    print(f"{len(summary.picks)} pick(s) at shrinking {cfg.shrinking} -> {args.out}")


def cmd_evaluate(args):
    cfg = _config(args, need=("annotator",))
    if cfg.gold is None:
        raise ConfigError("evaluate needs --gold")
    summary = _read_json(args.summary)
    texts = [p["text"] for p in summary["picks"]]
    report = metrics.evaluate(texts, metrics.load_gold(cfg.gold), cfg.annotator(),
                              corpus.load_stopwords(cfg.stopwords))
    _write(args.out, dump_json(report.to_json()))
    print(json.dumps(report.to_json(), indent=2))


def cmd_pipeline(args):
    cfg = _config(args, need=("input", "annotator"))
    manifest = run_pipeline(cfg)
    print(json.dumps(manifest.counts, indent=2))


def cmd_export_dot(args):
    lat = lattice.lattice_from_json(_read_json(args.lattice))
    export_dot(lat, args.out)
    print(f"{len(lat.concepts)} node(s) -> {args.out}")


def _add_common(p, *groups):
    p.add_argument("--config", help="JSON config file; flags override its values")
    if "input" in groups:
        p.add_argument("--input", help="JSON-Lines record stream")
        p.add_argument("--bin-minutes", dest="bin_minutes", type=int)
    if "peaks" in groups:
        p.add_argument("--tau", type=float)
        p.add_argument("--alpha", type=float)
        p.add_argument("--init-len", dest="init_len", type=int)
    if "annotator" in groups:
        p.add_argument("--gazetteer", help="TSV: surface, topic, relevance")
        p.add_argument("--endpoint", help="remote annotator URL")
        p.add_argument("--min-relevance", dest="min_relevance", type=float)
        p.add_argument("--annotator-timeout", dest="annotator_timeout", type=float)
        p.add_argument("--skip-annotator-errors", dest="skip_annotator_errors",
                       action="store_true", default=None)
    if "itf" in groups:
        p.add_argument("--log-base", dest="log_base", type=float)
    if "lattice" in groups:
        p.add_argument("--threshold", type=float)
        p.add_argument("--concept-cap", dest="concept_cap", type=int)
    if "summary" in groups:
        p.add_argument("--shrinking", type=float)
        p.add_argument("--presentation", choices=[summarize.SELECTION, summarize.CHRONOLOGICAL])
    if "eval" in groups:
        p.add_argument("--gold", help="gold summary, one sentence per line")
        p.add_argument("--stopwords", help="stopword file, one token per line")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="timedfca", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-fixture", help="write the synthetic burst fixture")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=cmd_gen_fixture)

    p = sub.add_parser("peaks", help="detect peak windows")
    _add_common(p, "input", "peaks")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_peaks)

    p = sub.add_parser("annotate", help="annotate records and weight topics")
    _add_common(p, "input", "annotator", "itf")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("lattice", help="build the timed fuzzy lattice")
    _add_common(p, "input", "lattice")
    p.add_argument("--windows", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("summarize", help="extract a summary from a lattice")
    _add_common(p, "input", "summary")
    p.add_argument("--lattice", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("evaluate", help="score a summary against a gold summary")
    _add_common(p, "annotator", "eval")
    p.add_argument("--summary", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("pipeline", help="run every stage end to end")
    _add_common(p, "input", "peaks", "annotator", "itf", "lattice", "summary", "eval")
    p.add_argument("--output-dir", dest="output_dir")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("export-dot", help="render a lattice JSON as Graphviz DOT")
    p.add_argument("--lattice", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except TimedFCAError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DataError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
