"""Input stream parsing, tokenization, n-grams and time binning."""

from __future__ import annotations

import io
import json
import re
from collections import Counter
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ParseError

DAY_MINUTES = 1440

_WORD_RE = re.compile(r"\w+")


@dataclass(frozen=True)
class Record:
    id: str
    timestamp: int
    text: str


@dataclass(frozen=True)
class Stream:
    records: tuple[Record, ...]
    bin_minutes: int = DAY_MINUTES

    def __post_init__(self):
        if self.bin_minutes <= 0:
            raise ValueError("bin_minutes must be positive")

    def __len__(self):
        return len(self.records)

    @property
    def bin_seconds(self) -> int:
        return self.bin_minutes * 60

    @property
    def bin_origin(self) -> int:
        """Start of bin 0: UTC midnight for day bins, else the first timestamp."""
        first = self.records[0].timestamp
        if self.bin_minutes == DAY_MINUTES:
            return first - first % 86400
        return first

    def bin_index(self, timestamp: int) -> int:
        return (timestamp - self.bin_origin) // self.bin_seconds

    def by_id(self) -> dict[str, Record]:
        return {r.id: r for r in self.records}


def parse_timestamp(value) -> int:
    if isinstance(value, bool):
        raise ValueError("boolean is not a timestamp")
    if isinstance(value, int):
        ts = value
    elif isinstance(value, float) and value.is_integer():
        ts = int(value)
    elif isinstance(value, str):
        text = value.strip()
        if text.endswith(("Z", "z")):
            text = text[:-1] + "+00:00"
        dt = datetime.fromisoformat(text)
        if dt.tzinfo is None:
            raise ValueError(f"timestamp {value!r} has no UTC offset")
        ts = int(dt.astimezone(timezone.utc).timestamp())
    else:
        raise ValueError(f"unsupported timestamp {value!r}")
    if ts < 0:
        raise ValueError("timestamp must be >= 0")
    return ts


def _read_lines(source) -> Iterable[str]:
    if isinstance(source, (str, Path)):
        with open(source, "rb") as fh:
            data = fh.read()
    elif isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    else:
        data = source.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from exc
    # only "\n" separates JSON lines; str.splitlines would also split on U+0085 etc.
    return [ln[:-1] if ln.endswith("\r") else ln for ln in data.split("\n")]


def parse_stream(source, bin_minutes: int = DAY_MINUTES) -> Stream:
    """Parse a JSON-Lines stream into a time-sorted :class:`Stream`.

    ``source`` may be a path, raw bytes or a binary/text file object. Blank
    lines are skipped; every other line must hold an object with ``id``,
    ``timestamp`` (epoch seconds or RFC3339) and ``text``.
    """
    if not isinstance(bin_minutes, int) or bin_minutes <= 0:
        raise ValueError("bin_minutes must be a positive integer")
    records = []
    seen = set()
    for lineno, line in enumerate(_read_lines(source), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", lineno) from exc
        if not isinstance(obj, dict):
            raise ParseError("expected a JSON object", lineno)
        for key in ("id", "timestamp", "text"):
            if key not in obj:
                raise ParseError(f"missing field {key!r}", lineno)
        rid, text = obj["id"], obj["text"]
        if not isinstance(rid, str) or not rid:
            raise ParseError("id must be a non-empty string", lineno)
        if not isinstance(text, str) or not text.strip():
            raise ParseError("text must be a non-empty string", lineno)
        try:
            ts = parse_timestamp(obj["timestamp"])
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from exc
        if rid in seen:
            raise ParseError(f"duplicate id {rid!r}", lineno)
        seen.add(rid)
        records.append(Record(rid, ts, text))
    if not records:
        raise ParseError("empty stream")
    records.sort(key=lambda r: (r.timestamp, r.id))
    return Stream(tuple(records), bin_minutes)


def serialize_stream(stream: Stream) -> bytes:
    buf = io.StringIO()
    for r in stream.records:
        buf.write(json.dumps({"id": r.id, "timestamp": r.timestamp, "text": r.text},
                             ensure_ascii=False))
        buf.write("\n")
    return buf.getvalue().encode("utf-8")


def load_stopwords(path=None) -> frozenset[str]:
    """Read a one-token-per-line stopword file; ``None`` loads the bundled English list."""
    if path is None:
        text = resources.files("timedfca.data").joinpath("stopwords_en.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    return frozenset(w.strip().lower() for w in text.splitlines() if w.strip())


def tokenize(text: str, stopwords: Iterable[str] = ()) -> list[str]:
    stop = stopwords if isinstance(stopwords, (set, frozenset)) else set(stopwords)
    return [t for t in _WORD_RE.findall(text.lower()) if t not in stop]


def ngrams(tokens: Sequence[str], n: int) -> Counter:
    if n not in (1, 2, 3):
        raise ValueError("n must be 1, 2 or 3")
    return Counter(" ".join(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bin_counts(stream: Stream) -> list[int]:
    if not stream.records:
        raise ValueError("stream is empty")
    idx = [stream.bin_index(r.timestamp) for r in stream.records]
    counts = [0] * (idx[-1] - idx[0] + 1)
    for i in idx:
        counts[i - idx[0]] += 1
    return counts
