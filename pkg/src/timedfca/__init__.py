"""Timed fuzzy formal concept analysis for summarizing short-text streams."""

from .corpus import Record, Stream, bin_counts, ngrams, parse_stream, tokenize
from .lattice import (FuzzyConcept, TimedFuzzyContext, TimedLattice, brute_force_concepts,
                      build_context, enumerate_concepts)
from .peaks import PeakConfig, PeakWindow, assign_peaks, detect_peaks
from .summarize import Summary

__all__ = [
    "Record", "Stream", "bin_counts", "ngrams", "parse_stream", "tokenize",
    "FuzzyConcept", "TimedFuzzyContext", "TimedLattice", "brute_force_concepts",
    "build_context", "enumerate_concepts",
    "PeakConfig", "PeakWindow", "assign_peaks", "detect_peaks",
    "Summary",
]

__version__ = "0.1.0"
