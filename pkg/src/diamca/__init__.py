"""Exact experiments with one-sided cellular automata: an odometer, its
arrow product, and the stacked extension, plus sensitivity-set and
diam-mean certificates at finite scale."""

from diamca.config import Configuration, Window, parse_config, format_config
from diamca.rules import RULES, T, T1, T3, TS, RuleTable

__all__ = ["Configuration", "Window", "parse_config", "format_config", "RULES", "T", "T1", "T3", "TS", "RuleTable"]
__version__ = "0.1.0"
