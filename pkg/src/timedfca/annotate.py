"""Topic annotation (wikification) and inverse-tweet-frequency weighting."""

from __future__ import annotations

import csv
import json
import logging
import math
import re
import urllib.error
import urllib.request
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Optional, Sequence

from .errors import AnnotatorError, ConfigError

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"\w+")


@dataclass(frozen=True)
class TopicAnnotation:
    topic: str
    relevance: float
    f_rel: Optional[float] = None
    membership: Optional[float] = None

    def to_json(self) -> dict:
        out = {"topic": self.topic, "relevance": self.relevance}
        if self.f_rel is not None:
            out["f_rel"] = self.f_rel
        if self.membership is not None:
            out["membership"] = self.membership
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "TopicAnnotation":
        return cls(obj["topic"], float(obj["relevance"]), obj.get("f_rel"), obj.get("membership"))


@dataclass(frozen=True)
class CorpusStats:
    N: int
    df: Mapping[str, int]


class Gazetteer:
    """Surface-form dictionary matched on token boundaries, case-insensitively.

    Surfaces are compared as token sequences, so punctuation inside a surface
    form is not significant ("U.S." matches "u s").
    """

    def __init__(self, entries: Sequence[tuple[str, str, float]]):
        self._index: dict[tuple[str, ...], list[tuple[str, float]]] = {}
        for surface, topic, relevance in entries:
            if not 0 <= relevance <= 1:
                raise ConfigError(f"relevance for {surface!r} outside [0, 1]")
            if topic.startswith("@"):
                raise ConfigError(f"topic id {topic!r} may not start with '@'")
            key = tuple(_TOKEN_RE.findall(surface.lower()))
            if not key:
                raise ConfigError(f"surface form {surface!r} has no word characters")
            self._index.setdefault(key, []).append((topic, float(relevance)))
        self._max_len = max((len(k) for k in self._index), default=0)

    @classmethod
    def load(cls, path) -> "Gazetteer":
        """Read a ``surface<TAB>topic<TAB>relevance`` TSV file."""
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"gazetteer not found: {path}")
        entries = []
        with open(path, encoding="utf-8", newline="") as fh:
            for lineno, row in enumerate(csv.reader(fh, delimiter="\t"), start=1):
                if not row or not "".join(row).strip() or row[0].startswith("#"):
                    continue
                if len(row) != 3:
                    raise ConfigError(f"{path}:{lineno}: expected 3 tab-separated fields")
                try:
                    entries.append((row[0], row[1].strip(), float(row[2])))
                except ValueError as exc:
                    raise ConfigError(f"{path}:{lineno}: bad relevance {row[2]!r}") from exc
        return cls(entries)

    def __len__(self):
        return sum(len(v) for v in self._index.values())

    def match(self, text: str) -> list[TopicAnnotation]:
        toks = list(_TOKEN_RE.finditer(text.lower()))
        words = [t.group() for t in toks]
        candidates = []
        for i in range(len(words)):
            for n in range(1, min(self._max_len, len(words) - i) + 1):
                hits = self._index.get(tuple(words[i:i + n]))
                if hits:
                    span = toks[i + n - 1].end() - toks[i].start()
                    for topic, rel in hits:
                        candidates.append((-span, topic, i, i + n, rel))
        # longest span first, then smaller topic id; accepted spans may not overlap
        candidates.sort()
        taken = [False] * len(words)
        best: dict[str, float] = {}
        for _, topic, lo, hi, rel in candidates:
            if any(taken[lo:hi]):
                continue
            for k in range(lo, hi):
                taken[k] = True
            best[topic] = max(rel, best.get(topic, 0.0))
        return [TopicAnnotation(t, best[t]) for t in sorted(best)]


@dataclass
class AnnotatorConfig:
    kind: str = "gazetteer"
    gazetteer_path: Optional[str] = None
    endpoint: Optional[str] = None
    timeout: float = 10.0
    min_relevance: float = 0.0
    _gazetteer: Optional[Gazetteer] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("gazetteer", "remote"):
            raise ConfigError(f"unknown annotator kind {self.kind!r}")
        if self.kind == "gazetteer" and (self.gazetteer_path is None and self._gazetteer is None):
            raise ConfigError("gazetteer annotator needs gazetteer_path")
        if self.kind == "remote" and not self.endpoint:
            raise ConfigError("remote annotator needs an endpoint")
        if (self.gazetteer_path or self._gazetteer) and self.endpoint:
            raise ConfigError("configure exactly one annotator backend")
        if not 0 <= self.min_relevance <= 1:
            raise ConfigError("min_relevance must be in [0, 1]")

    @classmethod
    def from_gazetteer(cls, gazetteer: Gazetteer, min_relevance: float = 0.0) -> "AnnotatorConfig":
        return cls(kind="gazetteer", min_relevance=min_relevance, _gazetteer=gazetteer)

    @property
    def gazetteer(self) -> Gazetteer:
        if self._gazetteer is None:
            self._gazetteer = Gazetteer.load(self.gazetteer_path)
        return self._gazetteer


def _remote_annotate(text: str, endpoint: str, timeout: float) -> list[TopicAnnotation]:
    body = json.dumps({"text": text}).encode("utf-8")
    req = urllib.request.Request(endpoint, data=body, method="POST",
                                 headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            payload = json.loads(resp.read().decode("utf-8"))
    except (urllib.error.URLError, OSError, ValueError) as exc:
        raise AnnotatorError(endpoint, exc) from exc
    if not isinstance(payload, list):
        raise AnnotatorError(endpoint, "response is not a JSON array")
    best: dict[str, float] = {}
    for item in payload:
        try:
            topic, rel = str(item["topic"]), float(item["relevance"])
        except (KeyError, TypeError, ValueError) as exc:
            raise AnnotatorError(endpoint, f"malformed item {item!r}") from exc
        if not 0 <= rel <= 1:
            raise AnnotatorError(endpoint, f"relevance {rel} outside [0, 1]")
        best[topic] = max(rel, best.get(topic, 0.0))
    return [TopicAnnotation(t, best[t]) for t in sorted(best)]


def annotate_text(text: str, annotator: AnnotatorConfig) -> list[TopicAnnotation]:
    if annotator.kind == "gazetteer":
        anns = annotator.gazetteer.match(text)
    else:
        anns = _remote_annotate(text, annotator.endpoint, annotator.timeout)
    return [a for a in anns if a.relevance >= annotator.min_relevance]


def annotate_records(records, annotator: AnnotatorConfig, skip_errors: bool = False,
                     workers: int = 8) -> dict[str, list[TopicAnnotation]]:
    """Annotate every record; remote calls run concurrently, results keyed by record id.

    With ``skip_errors`` a failing remote call leaves that record unannotated
    instead of aborting.
    """
    def one(rec):
        try:
            return rec.id, annotate_text(rec.text, annotator)
        except AnnotatorError as exc:
            if not skip_errors:
                raise
            logger.warning("skipping record %s: %s", rec.id, exc)
            return rec.id, []

    if annotator.kind == "remote" and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, records))
    else:
        results = [one(r) for r in records]
    return {rid: anns for rid, anns in sorted(results, key=lambda x: x[0])}


def corpus_stats(annotations: Mapping[str, Sequence[TopicAnnotation]]) -> CorpusStats:
    df: Counter = Counter()
    for anns in annotations.values():
        df.update({a.topic for a in anns})
    return CorpusStats(N=len(annotations), df=dict(df))


def compute_itf(topic: str, stats: CorpusStats, log_base: float = math.e) -> float:
    df = stats.df.get(topic, 0)
    if df < 1:
        raise KeyError(f"topic {topic!r} not present in corpus")
    return math.log(stats.N / df, log_base)


def build_relevance(annotations: Mapping[str, Sequence[TopicAnnotation]], stats: CorpusStats,
                    log_base: float = math.e) -> dict[str, list[TopicAnnotation]]:
    """Attach ``f_rel = relevance * itf`` and the globally max-normalized membership."""
    itf = {t: compute_itf(t, stats, log_base) for t in stats.df}
    weighted = {rid: [replace(a, f_rel=a.relevance * itf[a.topic]) for a in anns]
                for rid, anns in annotations.items()}
    top = max((a.f_rel for anns in weighted.values() for a in anns), default=0.0)
    out = {}
    for rid, anns in weighted.items():
        if top > 0:
            out[rid] = [replace(a, membership=min(1.0, a.f_rel / top)) for a in anns]
        else:
            out[rid] = [replace(a, membership=a.relevance) for a in anns]
    return out
