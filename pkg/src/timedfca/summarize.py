"""Shrinking-controlled extractive summaries from a timed fuzzy lattice."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .lattice import FuzzyConcept, TimedFuzzyContext, TimedLattice, is_time_attribute, time_attribute

SELECTION = "selection"
CHRONOLOGICAL = "chronological"


@dataclass(frozen=True)
class Pick:
    record_id: str
    concept_id: int
    peak_id: int


@dataclass
class Summary:
    shrinking: float
    picks: list[Pick] = field(default_factory=list)
    presentation: str = SELECTION

    @property
    def record_ids(self) -> list[str]:
        return [p.record_id for p in self.picks]

    def to_json(self, texts: Optional[Mapping[str, str]] = None) -> dict:
        texts = texts or {}
        return {
            "shrinking": self.shrinking,
            "picks": [{"record_id": p.record_id, "concept_id": p.concept_id,
                       "peak_id": p.peak_id, "text": texts.get(p.record_id, "")}
                      for p in self.picks],
            "presentation": self.presentation,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Summary":
        picks = [Pick(p["record_id"], int(p["concept_id"]), int(p["peak_id"])) for p in obj["picks"]]
        return cls(float(obj["shrinking"]), picks, obj.get("presentation", SELECTION))


def shrinking(c: FuzzyConcept, ctx: TimedFuzzyContext) -> float:
    return 1.0 - len(c.extent) / len(ctx.objects)


def attribute_membership(c: FuzzyConcept, m: str, ctx: TimedFuzzyContext) -> float:
    """Strongest membership of ``m`` among the concept's objects (0 on an empty extent)."""
    if not c.extent:
        return 0.0
    if is_time_attribute(m):
        return 1.0
    return max(ctx.mu(g, m) for g in c.extent)


def concept_weight(c: FuzzyConcept, covered: Iterable[str], ctx: TimedFuzzyContext) -> float:
    if not c.intent:
        return 0.0
    covered = covered if isinstance(covered, (set, frozenset)) else set(covered)
    total = sum(attribute_membership(c, m, ctx) for m in c.intent if m not in covered)
    return total / len(c.intent)


def candidate_concepts(lattice: TimedLattice, r: float) -> list[FuzzyConcept]:
    ctx = lattice.context
    return [c for c in lattice.concepts if shrinking(c, ctx) > r]


def summarize(lattice: TimedLattice, peak_ids: Sequence[int], r: float,
              presentation: str = SELECTION) -> Summary:
    """Greedy lattice walk: per peak (most recent first) pick best tweets of best concepts.

    ``peak_ids`` are chronological window ids (larger is more recent). Within a
    peak the concept with the highest weight over still-uncovered attributes is
    chosen (ties: smaller concept id), then its highest-membership object (ties:
    earlier position in the context, i.e. earlier timestamp then smaller id).
    The peak is done once no candidate is left or the best weight is 0.
    """
    if not 0 <= r <= 1:
        raise ValueError("shrinking level must be in [0, 1]")
    if presentation not in (SELECTION, CHRONOLOGICAL):
        raise ValueError(f"unknown presentation {presentation!r}")
    ctx = lattice.context
    position = {g: i for i, g in enumerate(ctx.objects)}
    pool = candidate_concepts(lattice, r)

    covered_attrs: set[str] = set()
    covered_concepts: set[int] = set()
    picks: list[Pick] = []
    chosen: set[str] = set()
    for peak in sorted(peak_ids, reverse=True):
        attr = time_attribute(peak)
        group = [c for c in pool if attr in c.intent]
        while True:
            open_ = [c for c in group if c.id not in covered_concepts]
            if not open_:
                break
            best = max(open_, key=lambda c: (concept_weight(c, covered_attrs, ctx), -c.id))
            if concept_weight(best, covered_attrs, ctx) == 0:
                break
            tweet = max(best.extent, key=lambda g: (best.extent[g], -position[g]))
            if tweet not in chosen:
                chosen.add(tweet)
                picks.append(Pick(tweet, best.id, peak))
            covered_attrs |= best.intent
            covered_concepts.add(best.id)
    if presentation == CHRONOLOGICAL:
        picks.sort(key=lambda p: position[p.record_id])
    return Summary(r, picks, presentation)
