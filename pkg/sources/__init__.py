"""
Spike Forecaster - Tick Sources
"""

from sources.base import BaseTickSource, DayTicks, Tick
from sources.csv_file import CsvTickSource, load_ticks, write_ticks_csv
from sources.registry import get_source
from sources.synthetic import SyntheticTickSource, generate_synthetic_ticks

__all__ = [
    "BaseTickSource",
    "CsvTickSource",
    "DayTicks",
    "SyntheticTickSource",
    "Tick",
    "generate_synthetic_ticks",
    "get_source",
    "load_ticks",
    "write_ticks_csv",
]
