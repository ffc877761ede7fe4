"""Benchmark harness: configurations, reference tables, comparison, output."""

from .runner import PRESETS, BenchmarkConfig, preset, run
from .tables import ReferenceTable, compare, emit, load_reference

__all__ = [
    "PRESETS",
    "BenchmarkConfig",
    "ReferenceTable",
    "compare",
    "emit",
    "load_reference",
    "preset",
    "run",
]
