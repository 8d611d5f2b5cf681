import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_context
from timedfca.lattice import (FuzzyConcept, TimedFuzzyContext, TimedLattice, enumerate_concepts,
                              is_subconcept, time_attribute)
from timedfca.summarize import (CHRONOLOGICAL, Summary, candidate_concepts, concept_weight,
                                shrinking, summarize)

P1, P2, P3 = (time_attribute(i) for i in (1, 2, 3))


def C(cid, extent, intent):
    return FuzzyConcept(cid, dict(extent), frozenset(intent))


def ctx_of(rows, times, threshold=0.6):
    objects = tuple(rows)
    fuzzy = tuple(sorted({m for row in rows.values() for m in row}))
    tattrs = tuple(sorted(set(times.values())))
    return TimedFuzzyContext(objects, fuzzy, tattrs, rows, times, threshold)


def test_shrinking_examples():
    ctx = ctx_of({g: {} for g in "abcd"}, {})
    assert shrinking(C(0, {g: 1 for g in "abcd"}, ()), ctx) == 0.0
    assert shrinking(C(0, {"a": 1}, ()), ctx) == 0.75
    assert shrinking(C(0, {}, ()), ctx) == 1.0


def test_weight_examples():
    ctx = ctx_of({"a": {"m1": 0.8, "m2": 0.9}, "b": {"m1": 0.7, "m2": 0.3}}, {"a": P1, "b": P1})
    assert concept_weight(C(0, {"a": 0.8, "b": 0.7}, {"m1"}), set(), ctx) == pytest.approx(0.8)
    c = C(1, {"a": 0.8}, {"m1", "m2", P1})
    assert concept_weight(c, {"m1", "m2", P1}, ctx) == 0.0
    assert concept_weight(c, {"m1", P1}, ctx) == pytest.approx(0.9 / 3)
    assert concept_weight(C(2, {"a": 1}, ()), set(), ctx) == 0.0


def test_single_concept_single_record():
    ctx = ctx_of({"t": {"x": 0.9}, "u": {}}, {"t": P1, "u": P1})
    lat = TimedLattice(ctx, [C(0, {"t": 0.9}, {"x", P1})])
    assert summarize(lat, [1], 0.0).record_ids == ["t"]


def test_concept_covering_everything_is_never_a_candidate():
    ctx = ctx_of({"t": {"x": 0.9}}, {"t": P1})
    lat = TimedLattice(ctx, [C(0, {"t": 0.9}, {"x", P1})])
    assert summarize(lat, [1], 0.0).picks == []


def test_invalid_shrinking():
    lat = TimedLattice(ctx_of({"t": {}}, {"t": P1}), [])
    for r in (-0.1, 1.1):
        with pytest.raises(ValueError):
            summarize(lat, [1], r)


def test_empty_candidate_set_is_empty_summary():
    ctx = ctx_of({"t": {"x": 0.9}}, {"t": P1})
    lat = enumerate_concepts(ctx)
    assert summarize(lat, [1], 1.0).picks == []


def worked_example():
    """Three-peak election lattice with peak 3 the most recent.

    Weights before any selection: w(c1)=0.89, w(c2)=0.74, w(c3)=0.94. Extent
    memberships are set directly (tweet_1 at 0.97 in c3) because those numbers
    cannot all come from one consistent context.
    """
    rows = {
        "tweet_1": {"Obama": 0.80, "Party": 0.80},
        "tweet_2": {"Obama": 0.88, "Party": 0.61},
        "tweet_3": {"Obama": 0.78},
        "tweet_4": {"Obama": 0.61, "Party": 0.88},
        "tweet_5": {"Obama": 0.70},
        "tweet_6": {"Obama": 0.65, "Party": 0.65},
        "tweet_7": {"Health": 0.90, "Election": 0.90},
        "tweet_8": {"Election": 0.70},
        "tweet_9": {"Party": 0.22},
        "tweet_10": {"Party": 0.20},
        "tweet_11": {"Obama": 0.62, "Party": 0.70},
        "tweet_12": {"Health": 0.80},
    }
    times = {g: P3 for g in ("tweet_1", "tweet_2", "tweet_3", "tweet_4", "tweet_5", "tweet_6",
                             "tweet_9", "tweet_10", "tweet_11")}
    times.update({"tweet_7": P2, "tweet_8": P2, "tweet_12": P2})
    ctx = ctx_of(rows, times)
    concepts = [
        C(1, {"tweet_3": 0.78, "tweet_5": 0.70}, {"Obama", P3}),
        C(2, {"tweet_9": 0.22, "tweet_10": 0.20}, {"Party", P3, P2}),
        C(3, {"tweet_1": 0.97, "tweet_2": 0.61, "tweet_11": 0.62, "tweet_4": 0.61,
              "tweet_6": 0.65}, {"Obama", "Party", P3, P2}),
        C(4, {"tweet_7": 0.90, "tweet_12": 0.80}, {"Health", P2}),
        C(5, {"tweet_7": 0.95, "tweet_8": 0.70}, {"Election", "Obama", P2, P1}),
        C(6, {"tweet_7": 0.90, "tweet_8": 0.70}, {"Election", P1}),
    ]
    return TimedLattice(ctx, concepts)


def test_worked_example_initial_weights():
    lat = worked_example()
    w = {c.id: concept_weight(c, set(), lat.context) for c in lat.concepts[:3]}
    assert w == pytest.approx({1: 0.89, 2: 0.74, 3: 0.94})


def test_worked_example_summary():
    lat = worked_example()
    s = summarize(lat, [1, 2, 3], 0.0)
    assert s.picks[0].record_id == "tweet_1" and s.picks[0].concept_id == 3
    assert s.record_ids == ["tweet_1", "tweet_7"]
    covered = lat.concepts[2].intent
    assert concept_weight(lat.concepts[0], covered, lat.context) == 0
    assert concept_weight(lat.concepts[1], covered, lat.context) == 0


def test_chronological_presentation():
    lat = worked_example()
    s = summarize(lat, [1, 2, 3], 0.0, presentation=CHRONOLOGICAL)
    assert s.record_ids == ["tweet_1", "tweet_7"]
    assert s.presentation == CHRONOLOGICAL


def test_tie_breaks():
    ctx = ctx_of({"a": {"x": 0.9}, "b": {"x": 0.9}, "c": {}}, {"a": P1, "b": P1, "c": P1})
    lat = TimedLattice(ctx, [C(0, {"a": 0.9, "b": 0.9}, {"x", P1}),
                             C(1, {"a": 0.9, "b": 0.9}, {"x", P1})])
    s = summarize(lat, [1], 0.0)
    assert [(p.record_id, p.concept_id) for p in s.picks] == [("a", 0)]


def test_summary_json_roundtrip():
    s = summarize(worked_example(), [1, 2, 3], 0.0)
    obj = s.to_json({"tweet_1": "hello"})
    assert obj["picks"][0] == {"record_id": "tweet_1", "concept_id": 3, "peak_id": 3, "text": "hello"}
    assert Summary.from_json(obj).picks == s.picks


# -- reference greedy oracle ----------------------------------------------------

def reference_greedy(lattice, peak_ids, r):
    """Straight-line greedy walk, recomputing everything per step."""
    ctx = lattice.context
    n = len(ctx.objects)
    pos = {g: i for i, g in enumerate(ctx.objects)}

    def mu_m(c, m):
        if not c.extent:
            return 0.0
        if m.startswith("@peak:"):
            return 1.0
        return max(ctx.mu(g, m) for g in c.extent)

    CA, CC, MS = set(), set(), []
    cstar = [c for c in lattice.concepts if 1 - len(c.extent) / n > r]
    for p in sorted(peak_ids, reverse=True):
        cp = [c for c in cstar if f"@peak:{p}" in c.intent]
        while any(c.id not in CC for c in cp):
            scored = []
            for c in cp:
                if c.id in CC:
                    continue
                w = sum(mu_m(c, m) for m in c.intent if m not in CA) / len(c.intent)
                scored.append((-w, c.id, c))
            scored.sort(key=lambda x: (x[0], x[1]))
            neg_w, _, cmax = scored[0]
            if -neg_w == 0:
                break
            ranked = sorted(cmax.extent, key=lambda g: (-cmax.extent[g], pos[g]))
            tmax = ranked[0]
            if tmax not in [t for t, _, _ in MS]:
                MS.append((tmax, cmax.id, p))
            CA |= set(cmax.intent)
            CC.add(cmax.id)
    return MS


def three_peak_lattice(seed):
    rng = random.Random(seed)
    objects = tuple(f"t{i:02d}" for i in range(12))
    fuzzy = ("obama", "election", "president", "party", "health")
    rows = {g: {m: rng.choice([0.0, 0.3, 0.6, 0.7, 0.8, 0.9, 1.0]) for m in fuzzy} for g in objects}
    times = {g: time_attribute(1 + i // 4) for i, g in enumerate(objects)}
    ctx = TimedFuzzyContext(objects, fuzzy, (P1, P2, P3), rows, times, 0.6)
    return enumerate_concepts(ctx)


@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize("r", [0.0, 0.5, 0.7, 0.9])
def test_matches_reference_greedy(seed, r):
    lat = three_peak_lattice(seed)
    got = summarize(lat, [1, 2, 3], r)
    assert [(p.record_id, p.concept_id, p.peak_id) for p in got.picks] == \
        reference_greedy(lat, [1, 2, 3], r)


# -- properties ---------------------------------------------------------------

lattices = st.builds(
    lambda seed, n, m: enumerate_concepts(random_context(random.Random(seed), n, m, 0.6)),
    st.integers(0, 10 ** 9), st.integers(1, 7), st.integers(1, 6))


@given(lattices, st.floats(0, 1), st.floats(0, 1))
@settings(max_examples=80)
def test_candidates_antitone_in_r(lat, r1, r2):
    r1, r2 = sorted((r1, r2))
    small = {c.id for c in candidate_concepts(lat, r2)}
    big = {c.id for c in candidate_concepts(lat, r1)}
    assert small <= big


@given(lattices, st.floats(0, 1))
@settings(max_examples=80)
def test_summary_invariants(lat, r):
    ctx = lat.context
    peak_ids = [int(t.split(":")[1]) for t in ctx.time_attributes]
    s = summarize(lat, peak_ids, r)
    ids = s.record_ids
    assert len(ids) == len(set(ids))
    by_id = {c.id: c for c in lat.concepts}
    for p in s.picks:
        c = by_id[p.concept_id]
        assert p.record_id in c.extent
        assert time_attribute(p.peak_id) in c.intent
    peaks_seq = [p.peak_id for p in s.picks]
    assert peaks_seq == sorted(peaks_seq, reverse=True)
    assert summarize(lat, peak_ids, r).picks == s.picks
    for a in lat.concepts:
        for b in lat.concepts:
            if is_subconcept(a, b):
                assert shrinking(a, ctx) >= shrinking(b, ctx)
