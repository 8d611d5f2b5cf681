"""Offline peak-area detection over binned record counts.

The scan follows the TwitInfo-style OPAD procedure: a running mean and mean
deviation (updated with a TCP-like exponential filter) decide when a bin rises
significantly; the window then climbs while counts increase and descends until
counts fall back to the level of the bin before the rise.

Bin indices are 0-based: the usual 1-based ``C1`` is ``counts[0]`` and the
scan ``for i = 2; i < len(C)`` becomes ``i = 1 .. len(counts) - 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .corpus import Stream
from .errors import DataError


@dataclass(frozen=True)
class PeakConfig:
    tau: float = 2.0
    alpha: float = 0.125
    init_len: int = 5

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be > 0")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must be in (0, 1)")
        if self.init_len < 1:
            raise ValueError("init_len must be >= 1")


@dataclass(frozen=True)
class PeakWindow:
    peak_id: int
    start_bin: int
    end_bin: int

    def __contains__(self, bin_index: int) -> bool:
        return self.start_bin <= bin_index <= self.end_bin

    def to_json(self) -> dict:
        return {"peak_id": self.peak_id, "start_bin": self.start_bin, "end_bin": self.end_bin}

    @classmethod
    def from_json(cls, obj: Mapping) -> "PeakWindow":
        return cls(int(obj["peak_id"]), int(obj["start_bin"]), int(obj["end_bin"]))


@dataclass(frozen=True)
class RunningStats:
    mean: float
    meandev: float


def update_stats(stats: RunningStats, value: float, alpha: float) -> RunningStats:
    diff = abs(stats.mean - value)
    return RunningStats(
        mean=alpha * value + (1 - alpha) * stats.mean,
        meandev=alpha * diff + (1 - alpha) * stats.meandev,
    )


def mean_abs_deviation(values: Sequence[float]) -> float:
    m = sum(values) / len(values)
    return sum(abs(v - m) for v in values) / len(values)


def _deviation_ratio(value: float, stats: RunningStats) -> float:
    if stats.meandev == 0:
        return 0.0 if value == stats.mean else math.inf
    return abs(value - stats.mean) / stats.meandev


def detect_peaks(counts: Sequence[float], config: PeakConfig = PeakConfig()) -> list[PeakWindow]:
    C = list(counts)
    n = len(C)
    if n < 2:
        raise DataError("series too short")
    p = min(config.init_len, n)
    stats = RunningStats(float(C[0]), mean_abs_deviation(C[:p]))

    def significant_rise(i):
        return _deviation_ratio(C[i], stats) > config.tau and C[i] > C[i - 1]

    def update(i):
        nonlocal stats
        stats = update_stats(stats, C[i], config.alpha)

    bounds: list[list[int]] = []
    i = 1
    while i < n:
        if significant_rise(i):
            start = i - 1
            while i < n and C[i] > C[i - 1]:
                update(i)
                i += 1
            # no descent bin follows: close the window at the top
            end = i - 1
            while i < n and C[i] > C[start]:
                if significant_rise(i):
                    i -= 1
                    end = i
                    break
                update(i)
                end = i
                i += 1
            if i < n and C[i] < C[start]:
                end = i
                i -= 1
            # an early break hands the trough bin to the next window
            if bounds and start <= bounds[-1][1]:
                bounds[-1][1] = start - 1
            bounds.append([start, end])
        else:
            update(i)
        i += 1
    return [PeakWindow(k, s, e) for k, (s, e) in enumerate(bounds, start=1)]


def assign_peaks(stream: Stream, windows: Sequence[PeakWindow]) -> dict[str, Optional[int]]:
    """Map every record id to the id of the window covering its bin, or ``None``."""
    out: dict[str, Optional[int]] = {}
    for rec in stream.records:
        b = stream.bin_index(rec.timestamp)
        out[rec.id] = next((w.peak_id for w in windows if b in w), None)
    return out
