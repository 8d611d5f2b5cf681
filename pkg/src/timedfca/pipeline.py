"""End-to-end orchestration: stream -> peaks -> annotations -> lattice -> summary."""

from __future__ import annotations

import dataclasses
import json
import logging
import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

from . import annotate, corpus, lattice, metrics, peaks, summarize
from .errors import ConfigError, TimedFCAError

logger = logging.getLogger(__name__)


class StageError(TimedFCAError):
    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 2)
        super().__init__(f"stage {stage!r} failed: {cause}")


@dataclass
class PipelineConfig:
    input: Optional[str] = None
    gazetteer: Optional[str] = None
    endpoint: Optional[str] = None
    stopwords: Optional[str] = None
    gold: Optional[str] = None
    bin_minutes: int = corpus.DAY_MINUTES
    tau: float = 2.0
    alpha: float = 0.125
    init_len: int = 5
    log_base: float = math.e
    min_relevance: float = 0.0
    threshold: float = 0.6
    shrinking: float = 0.7
    presentation: str = summarize.SELECTION
    output_dir: str = "out"
    concept_cap: int = lattice.DEFAULT_CONCEPT_CAP
    annotator_timeout: float = 10.0
    skip_annotator_errors: bool = False

    @classmethod
    def load(cls, path=None, overrides: Optional[Mapping] = None) -> "PipelineConfig":
        """Read a JSON config file (optional) and apply non-``None`` overrides."""
        data: dict = {}
        if path is not None:
            try:
                data = json.loads(Path(path).read_text("utf-8"))
            except (OSError, ValueError) as exc:
                raise ConfigError(f"cannot read config {path}: {exc}") from exc
            if not isinstance(data, dict):
                raise ConfigError("config must be a JSON object")
        data.update({k: v for k, v in (overrides or {}).items() if v is not None})
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)

    def snapshot(self) -> dict:
        return dataclasses.asdict(self)

    def peak_config(self) -> peaks.PeakConfig:
        try:
            return peaks.PeakConfig(self.tau, self.alpha, self.init_len)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def annotator(self) -> annotate.AnnotatorConfig:
        if self.endpoint:
            return annotate.AnnotatorConfig(kind="remote", endpoint=self.endpoint,
                                            timeout=self.annotator_timeout,
                                            min_relevance=self.min_relevance)
        return annotate.AnnotatorConfig(kind="gazetteer", gazetteer_path=self.gazetteer,
                                        min_relevance=self.min_relevance)

    def validate(self, need=("input", "annotator")) -> None:
        def must_exist(name):
            value = getattr(self, name)
            if value is None:
                raise ConfigError(f"missing required setting {name!r}")
            if not Path(value).is_file():
                raise ConfigError(f"{name} file not found: {value}")

        if "input" in need:
            must_exist("input")
        if "annotator" in need:
            if bool(self.gazetteer) == bool(self.endpoint):
                raise ConfigError("configure exactly one of gazetteer or endpoint")
            if self.gazetteer:
                must_exist("gazetteer")
        if self.stopwords is not None:
            must_exist("stopwords")
        if self.gold is not None:
            must_exist("gold")
        if not isinstance(self.bin_minutes, int) or self.bin_minutes <= 0:
            raise ConfigError("bin_minutes must be a positive integer")
        self.peak_config()
        if not self.log_base > 0 or self.log_base == 1:
            raise ConfigError("log_base must be positive and != 1")
        for name in ("min_relevance", "threshold", "shrinking"):
            if not 0 <= getattr(self, name) <= 1:
                raise ConfigError(f"{name} must be in [0, 1]")
        if self.presentation not in (summarize.SELECTION, summarize.CHRONOLOGICAL):
            raise ConfigError(f"unknown presentation {self.presentation!r}")
        if self.concept_cap < 1:
            raise ConfigError("concept_cap must be >= 1")


@dataclass
class RunManifest:
    config: dict
    counts: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    # in-memory results, not serialized
    lattice: Optional[lattice.TimedLattice] = field(default=None, repr=False)
    summary: Optional[summarize.Summary] = field(default=None, repr=False)
    report: Optional[metrics.EvaluationReport] = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {"config": self.config, "counts": self.counts,
                "timings": self.timings, "outputs": self.outputs}


def dump_json(obj) -> bytes:
    return (json.dumps(obj, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def annotations_to_json(records: Mapping[str, list], stats: annotate.CorpusStats, log_base: float) -> dict:
    return {
        "N": stats.N,
        "log_base": log_base,
        "records": {rid: [a.to_json() for a in anns] for rid, anns in records.items()},
    }


def annotations_from_json(obj: Mapping) -> dict[str, list[annotate.TopicAnnotation]]:
    return {rid: [annotate.TopicAnnotation.from_json(a) for a in anns]
            for rid, anns in obj["records"].items()}


@contextmanager
def _stage(name: str, timings: dict):
    t0 = time.perf_counter()
    try:
        yield
    except StageError:
        raise
    except (TimedFCAError, ValueError, KeyError) as exc:
        raise StageError(name, exc) from exc
    timings[name] = round(time.perf_counter() - t0, 6)


def run_pipeline(config: PipelineConfig, write: bool = True) -> RunManifest:
    """Run every stage; artifacts are written only after all stages succeed."""
    config.validate()
    timings: dict = {}
    manifest = RunManifest(config=config.snapshot(), timings=timings)
    files: dict[str, bytes] = {}

    with _stage("corpus", timings):
        stream = corpus.parse_stream(config.input, config.bin_minutes)
        stopwords = corpus.load_stopwords(config.stopwords)
        counts = corpus.bin_counts(stream)
    with _stage("peaks", timings):
        windows = peaks.detect_peaks(counts, config.peak_config())
        assignment = peaks.assign_peaks(stream, windows)
        files["windows.json"] = dump_json([w.to_json() for w in windows])
    with _stage("annotate", timings):
        annotator = config.annotator()
        raw = annotate.annotate_records(stream.records, annotator,
                                        skip_errors=config.skip_annotator_errors)
        stats = annotate.corpus_stats(raw)
        weighted = annotate.build_relevance(raw, stats, config.log_base)
        files["annotations.json"] = dump_json(annotations_to_json(weighted, stats, config.log_base))
    with _stage("lattice", timings):
        ctx = lattice.build_context(weighted, assignment, config.threshold)
        lat = lattice.enumerate_concepts(ctx, cap=config.concept_cap)
        files["lattice.json"] = dump_json(lattice.lattice_to_json(lat))
    with _stage("summarize", timings):
        summary = summarize.summarize(lat, [w.peak_id for w in windows], config.shrinking,
                                      config.presentation)
        texts = {r.id: r.text for r in stream.records}
        files["summary.json"] = dump_json(summary.to_json(texts))
    report = None
    if config.gold:
        with _stage("evaluate", timings):
            gold = metrics.load_gold(config.gold)
            report = metrics.evaluate([texts[p.record_id] for p in summary.picks], gold,
                                      annotator, stopwords)
            files["report.json"] = dump_json(report.to_json())

    manifest.counts = {
        "records": len(stream),
        "bins": len(counts),
        "peaks": len(windows),
        "context_objects": len(ctx.objects),
        "context_fuzzy_attributes": len(ctx.fuzzy_attributes),
        "context_time_attributes": len(ctx.time_attributes),
        "concepts": len(lat.concepts),
        "hasse_edges": len(lat.hasse_edges),
        "temporal_edges": len(lat.temporal_edges),
        "summary_picks": len(summary.picks),
    }
    manifest.outputs = {name.split(".")[0]: name for name in sorted(files)}
    manifest.outputs["manifest"] = "manifest.json"
    if write:
        out = Path(config.output_dir)
        try:
            out.mkdir(parents=True, exist_ok=True)
            for name, data in files.items():
                (out / name).write_bytes(data)
            (out / "manifest.json").write_bytes(dump_json(manifest.to_json()))
        except OSError as exc:
            for name in list(files) + ["manifest.json"]:
                (out / name).unlink(missing_ok=True)
            raise ConfigError(f"cannot write outputs to {out}: {exc}") from exc
    manifest.lattice, manifest.summary, manifest.report = lat, summary, report
    return manifest
