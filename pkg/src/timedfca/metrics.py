"""Novelty, text coverage and concept coverage of a summary against a gold summary."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .annotate import AnnotatorConfig, annotate_text
from .corpus import ngrams, tokenize
from .errors import DataError

logger = logging.getLogger(__name__)

NGRAM_WEIGHTS = {1: 0.2, 2: 0.3, 3: 0.5}


@dataclass
class EvaluationReport:
    sequence_novelty: float
    historical_novelty: float
    text_similarity: float
    precision: float
    recall: float
    f_measure: float

    def to_json(self) -> dict:
        return asdict(self)


def load_gold(path) -> list[str]:
    lines = [ln.strip() for ln in Path(path).read_text("utf-8").splitlines()]
    return [ln for ln in lines if ln]


def _check_sequence(sets: Sequence) -> None:
    if len(sets) < 2:
        raise ValueError("need >= 2 summary items")


def sequence_novelty(sets: Sequence[Iterable[str]]) -> float:
    _check_sequence(sets)
    sets = [set(s) for s in sets]
    gain = sum(len(cur) - len(cur & prev) for prev, cur in zip(sets, sets[1:]))
    return gain / (len(sets) - 1)


def historical_novelty(sets: Sequence[Iterable[str]]) -> float:
    _check_sequence(sets)
    sets = [set(s) for s in sets]
    seen = set(sets[0])
    gain = 0
    for cur in sets[1:]:
        gain += len(cur) - len(cur & seen)
        seen |= cur
    return gain / (len(sets) - 1)


def ngram_gain(gold: Counter, gen: Counter) -> float:
    total = sum(gold.values())
    if total == 0:
        raise ValueError("empty gold summary")
    return sum(min(c, gen.get(ng, 0)) for ng, c in gold.items()) / total


def _ngram_bag(lines: Sequence[str], n: int, stopwords) -> Counter:
    # n-grams never span two lines
    bag: Counter = Counter()
    for line in lines:
        bag.update(ngrams(tokenize(line, stopwords), n))
    return bag


def text_similarity(gold: Sequence[str], generated: Sequence[str], stopwords=frozenset()) -> float:
    score = 0.0
    for n, weight in NGRAM_WEIGHTS.items():
        g_gold = _ngram_bag(gold, n, stopwords)
        if not g_gold:
            if n == 1:
                raise ValueError("empty gold summary")
            # gold lines too short for this n: nothing to cover
            logger.warning("gold summary has no %d-grams; g_%d taken as 0", n, n)
            continue
        score += weight * ngram_gain(g_gold, _ngram_bag(generated, n, stopwords))
    return score


def concept_prf(gold_concepts: Iterable[str], gen_concepts: Iterable[str]) -> tuple[float, float, float]:
    gold, gen = set(gold_concepts), set(gen_concepts)
    if not gold:
        raise ValueError("empty gold summary")
    hit = len(gold & gen)
    p = hit / len(gen) if gen else 0.0
    r = hit / len(gold)
    f = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return p, r, f


def concept_sets(texts: Sequence[str], annotator: AnnotatorConfig) -> list[set[str]]:
    return [{a.topic for a in annotate_text(t, annotator)} for t in texts]


def evaluate(generated: Sequence[str], gold: Sequence[str], annotator: AnnotatorConfig,
             stopwords=frozenset()) -> EvaluationReport:
    """Score generated record texts (in summary order) against gold sentences."""
    if not gold:
        raise DataError("empty gold summary")
    gen_sets = concept_sets(generated, annotator)
    if len(gen_sets) >= 2:
        seq, hist = sequence_novelty(gen_sets), historical_novelty(gen_sets)
    else:
        logger.warning("summary has %d item(s); novelty reported as 0", len(gen_sets))
        seq = hist = 0.0
    gold_concepts = set().union(*concept_sets(gold, annotator))
    gen_concepts = set().union(*gen_sets) if gen_sets else set()
    if gold_concepts:
        p, r, f = concept_prf(gold_concepts, gen_concepts)
    else:
        logger.warning("gold summary has no annotated concepts; P/R/F reported as 0")
        p = r = f = 0.0
    try:
        sim = text_similarity(gold, generated, stopwords)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    return EvaluationReport(seq, hist, sim, p, r, f)
