"""Time-aware fuzzy formal contexts and their concept lattices.

A context relates objects (records) to fuzzy attributes (topics, graded in
[0, 1]) and to binary time attributes (peak windows). Concepts are computed
on the context crisped at the confidence threshold, where a fuzzy pair counts
iff its membership is >= threshold, and the original memberships are attached
to the extents afterwards.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .errors import ConceptCapExceeded, DataError

TIME_PREFIX = "@peak:"
DEFAULT_CONCEPT_CAP = 100_000


def time_attribute(peak_id: int) -> str:
    return f"{TIME_PREFIX}{peak_id}"


def is_time_attribute(attr: str) -> bool:
    return attr.startswith(TIME_PREFIX)


def peak_of(attr: str) -> int:
    return int(attr[len(TIME_PREFIX):])


@dataclass(frozen=True, eq=False)
class TimedFuzzyContext:
    objects: tuple[str, ...]
    fuzzy_attributes: tuple[str, ...]
    time_attributes: tuple[str, ...]
    memberships: Mapping[str, Mapping[str, float]]
    time_of: Mapping[str, str]
    threshold: float = 0.6

    def __post_init__(self):
        if not 0 <= self.threshold <= 1:
            raise ValueError("threshold must be in [0, 1]")
        if set(self.fuzzy_attributes) & set(self.time_attributes):
            raise ValueError("fuzzy and time attributes overlap")
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("duplicate objects")
        for g, row in self.memberships.items():
            for m, mu in row.items():
                if not 0 <= mu <= 1:
                    raise ValueError(f"membership of ({g}, {m}) outside [0, 1]")
        times = set(self.time_attributes)
        for g, t in self.time_of.items():
            if t not in times:
                raise ValueError(f"object {g} related to unknown time attribute {t}")

    @cached_property
    def attributes(self) -> tuple[str, ...]:
        return self.fuzzy_attributes + self.time_attributes

    @cached_property
    def _obj_index(self) -> dict[str, int]:
        return {g: i for i, g in enumerate(self.objects)}

    @cached_property
    def _attr_index(self) -> dict[str, int]:
        return {m: j for j, m in enumerate(self.attributes)}

    def mu(self, g: str, m: str) -> float:
        if is_time_attribute(m):
            return 1.0 if self.time_of.get(g) == m else 0.0
        return self.memberships.get(g, {}).get(m, 0.0)

    def related(self, g: str, m: str) -> bool:
        if is_time_attribute(m):
            return self.time_of.get(g) == m
        return self.mu(g, m) >= self.threshold

    @cached_property
    def columns(self) -> tuple[int, ...]:
        """Crisp incidence as one object bitmask per attribute (bit i = objects[i])."""
        cols = []
        for m in self.attributes:
            mask = 0
            for i, g in enumerate(self.objects):
                if self.related(g, m):
                    mask |= 1 << i
            cols.append(mask)
        return tuple(cols)

    @property
    def all_objects_mask(self) -> int:
        return (1 << len(self.objects)) - 1

    @property
    def all_attributes_mask(self) -> int:
        return (1 << len(self.attributes)) - 1

    def extent_mask(self, intent_mask: int) -> int:
        ext = self.all_objects_mask
        cols = self.columns
        j = 0
        while intent_mask:
            if intent_mask & 1:
                ext &= cols[j]
            intent_mask >>= 1
            j += 1
        return ext

    def intent_mask(self, extent_mask: int) -> int:
        out = 0
        for j, col in enumerate(self.columns):
            if col & extent_mask == extent_mask:
                out |= 1 << j
        return out

    def objects_of(self, mask: int) -> list[str]:
        return [g for i, g in enumerate(self.objects) if mask >> i & 1]

    def attributes_of(self, mask: int) -> list[str]:
        return [m for j, m in enumerate(self.attributes) if mask >> j & 1]

    def object_mask(self, objs: Iterable[str]) -> int:
        return sum(1 << self._obj_index[g] for g in set(objs))

    def attribute_mask(self, attrs: Iterable[str]) -> int:
        return sum(1 << self._attr_index[m] for m in set(attrs))

    def to_json(self) -> dict:
        return {
            "objects": list(self.objects),
            "fuzzy_attributes": list(self.fuzzy_attributes),
            "time_attributes": list(self.time_attributes),
            "threshold": self.threshold,
            "memberships": {g: dict(sorted(self.memberships.get(g, {}).items()))
                            for g in self.objects},
            "time": {g: self.time_of[g] for g in self.objects if g in self.time_of},
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "TimedFuzzyContext":
        return cls(
            objects=tuple(obj["objects"]),
            fuzzy_attributes=tuple(obj["fuzzy_attributes"]),
            time_attributes=tuple(obj["time_attributes"]),
            memberships={g: dict(row) for g, row in obj["memberships"].items()},
            time_of=dict(obj["time"]),
            threshold=float(obj["threshold"]),
        )


@dataclass(frozen=True)
class FuzzyConcept:
    id: int
    extent: Mapping[str, float]
    intent: frozenset[str]

    @property
    def objects(self) -> frozenset[str]:
        return frozenset(self.extent)

    @property
    def time_attributes(self) -> list[str]:
        return sorted((m for m in self.intent if is_time_attribute(m)), key=peak_of)

    @property
    def fuzzy_intent(self) -> frozenset[str]:
        return frozenset(m for m in self.intent if not is_time_attribute(m))


@dataclass
class TimedLattice:
    context: TimedFuzzyContext
    concepts: list[FuzzyConcept]
    hasse_edges: list[tuple[int, int]] = field(default_factory=list)
    temporal_edges: list[tuple[int, int]] = field(default_factory=list)

    def __len__(self):
        return len(self.concepts)

    def __getitem__(self, cid: int) -> FuzzyConcept:
        return self.concepts[cid]


def build_context(annotations: Mapping[str, Sequence], assignment: Mapping[str, Optional[int]],
                  threshold: float = 0.6) -> TimedFuzzyContext:
    """Assemble the timed context from normalized annotations and peak assignment.

    Objects follow the iteration order of ``assignment`` (stream order when it
    comes from :func:`timedfca.peaks.assign_peaks`); records without a peak are
    left out, and topics never reaching ``threshold`` on a kept record are dropped.
    """
    objects = [rid for rid, peak in assignment.items() if peak is not None]
    if not objects:
        raise DataError("no records inside peak windows")
    memberships: dict[str, dict[str, float]] = {}
    for rid in objects:
        row = {}
        for ann in annotations.get(rid, ()):
            if ann.membership is None:
                raise ValueError(f"annotation {ann.topic} of {rid} has no membership")
            row[ann.topic] = float(ann.membership)
        memberships[rid] = row
    fuzzy = sorted({m for row in memberships.values() for m, mu in row.items() if mu >= threshold})
    keep = set(fuzzy)
    memberships = {g: {m: mu for m, mu in row.items() if m in keep} for g, row in memberships.items()}
    peaks = sorted({assignment[rid] for rid in objects})
    return TimedFuzzyContext(
        objects=tuple(objects),
        fuzzy_attributes=tuple(fuzzy),
        time_attributes=tuple(time_attribute(p) for p in peaks),
        memberships=memberships,
        time_of={rid: time_attribute(assignment[rid]) for rid in objects},
        threshold=threshold,
    )


def derive_intent(objs: Iterable[str], ctx: TimedFuzzyContext) -> frozenset[str]:
    objs = list(objs)
    return frozenset(m for m in ctx.attributes if all(ctx.related(g, m) for g in objs))


def derive_extent(attrs: Iterable[str], ctx: TimedFuzzyContext) -> frozenset[str]:
    attrs = list(attrs)
    return frozenset(g for g in ctx.objects if all(ctx.related(g, m) for m in attrs))


def object_representation(ctx: TimedFuzzyContext, g: str) -> dict[str, float]:
    if g not in ctx._obj_index:
        raise KeyError(f"unknown object {g!r}")
    rep = {m: mu for m, mu in ctx.memberships.get(g, {}).items() if mu > 0}
    if g in ctx.time_of:
        rep[ctx.time_of[g]] = 1.0
    return rep


def _object_membership(ctx: TimedFuzzyContext, g: str, intent: Iterable[str]) -> float:
    fuzzy = [ctx.mu(g, m) for m in intent if not is_time_attribute(m)]
    return min(fuzzy) if fuzzy else 1.0


def next_closure_intents(ctx: TimedFuzzyContext, cap: int = DEFAULT_CONCEPT_CAP):
    """Yield ``(extent_mask, intent_mask)`` for every concept, intents in lectic order."""
    n = len(ctx.attributes)
    closure = lambda b: ctx.intent_mask(ctx.extent_mask(b))  # noqa: E731
    A = closure(0)
    count = 0
    while A is not None:
        count += 1
        if count > cap:
            raise ConceptCapExceeded(cap)
        yield ctx.extent_mask(A), A
        nxt = None
        for i in reversed(range(n)):
            bit = 1 << i
            if A & bit:
                A &= ~bit
                continue
            B = closure(A | bit)
            if (B & ~A) & (bit - 1) == 0:
                nxt = B
                break
        A = nxt


def _lower_covers(ctx: TimedFuzzyContext, ext: int, intent: int) -> set[int]:
    cands = {ext & col for j, col in enumerate(ctx.columns) if not intent >> j & 1}
    cands.discard(ext)
    return {c for c in cands if not any(c != d and c & d == c for d in cands)}


def enumerate_concepts(ctx: TimedFuzzyContext, cap: int = DEFAULT_CONCEPT_CAP,
                       edge_rule: Optional[Callable] = None) -> TimedLattice:
    """Enumerate all concepts with Next Closure, then add cover and temporal edges.

    Concept ids follow the lectic order of intents (attributes ordered as in
    ``ctx.attributes``). ``edge_rule`` defaults to :func:`temporal_edges`.
    """
    pairs = list(next_closure_intents(ctx, cap))
    concepts = []
    for cid, (ext, intent) in enumerate(pairs):
        attrs = ctx.attributes_of(intent)
        extent = {g: _object_membership(ctx, g, attrs) for g in ctx.objects_of(ext)}
        concepts.append(FuzzyConcept(cid, extent, frozenset(attrs)))
    by_extent = {ext: cid for cid, (ext, _) in enumerate(pairs)}
    hasse = sorted((by_extent[low], cid)
                   for cid, (ext, intent) in enumerate(pairs)
                   for low in _lower_covers(ctx, ext, intent))
    lattice = TimedLattice(ctx, concepts, hasse)
    lattice.temporal_edges = (edge_rule or temporal_edges)(lattice)
    return lattice


def brute_force_concepts(ctx: TimedFuzzyContext) -> set[tuple[frozenset[str], frozenset[str]]]:
    """All closed (extent, intent) pairs by trying every attribute subset. Test oracle."""
    if len(ctx.objects) > 15 or len(ctx.attributes) > 15:
        raise ValueError("brute force limited to 15 objects and 15 attributes")
    found = set()
    attrs = ctx.attributes
    for k in range(len(attrs) + 1):
        for B in itertools.combinations(attrs, k):
            ext = derive_extent(B, ctx)
            if derive_intent(ext, ctx) == frozenset(B):
                found.add((ext, frozenset(B)))
    return found


def is_subconcept(c1: FuzzyConcept, c2: FuzzyConcept) -> bool:
    return c1.objects <= c2.objects


def concept_similarity(c1: FuzzyConcept, c2: FuzzyConcept) -> float:
    """Sigma-count Jaccard of the fuzzy extents (min t-norm, max t-conorm)."""
    keys = set(c1.extent) | set(c2.extent)
    inter = sum(min(c1.extent.get(g, 0.0), c2.extent.get(g, 0.0)) for g in keys)
    union = sum(max(c1.extent.get(g, 0.0), c2.extent.get(g, 0.0)) for g in keys)
    return inter / union if union > 0 else 0.0


def temporal_edges(lattice: TimedLattice) -> list[tuple[int, int]]:
    """Link concepts of consecutive represented peaks that share a non-time attribute.

    Only concepts with a non-empty extent and exactly one time attribute take
    part; edges point from the earlier peak to the later one.
    """
    groups: dict[str, list[FuzzyConcept]] = {}
    for c in lattice.concepts:
        times = c.time_attributes
        if c.extent and len(times) == 1:
            groups.setdefault(times[0], []).append(c)
    order = [t for t in lattice.context.time_attributes if t in groups]
    edges = []
    for early, late in zip(order, order[1:]):
        for c1 in groups[early]:
            for c2 in groups[late]:
                if c1.fuzzy_intent & c2.fuzzy_intent:
                    edges.append((c1.id, c2.id))
    return sorted(edges)


def lattice_to_json(lattice: TimedLattice) -> dict:
    ctx = lattice.context
    order = {m: j for j, m in enumerate(ctx.attributes)}
    return {
        "concepts": [
            {
                "id": c.id,
                "extent": [{"object": g, "mu": mu} for g, mu in c.extent.items()],
                "intent": sorted(c.intent, key=order.__getitem__),
            }
            for c in lattice.concepts
        ],
        "hasse": [list(e) for e in lattice.hasse_edges],
        "temporal": [list(e) for e in lattice.temporal_edges],
        "context": ctx.to_json(),
    }


def lattice_from_json(obj: Mapping) -> TimedLattice:
    ctx = TimedFuzzyContext.from_json(obj["context"])
    concepts = [
        FuzzyConcept(int(c["id"]), {e["object"]: float(e["mu"]) for e in c["extent"]},
                     frozenset(c["intent"]))
        for c in obj["concepts"]
    ]
    concepts.sort(key=lambda c: c.id)
    return TimedLattice(ctx, concepts,
                        [tuple(e) for e in obj.get("hasse", [])],
                        [tuple(e) for e in obj.get("temporal", [])])
