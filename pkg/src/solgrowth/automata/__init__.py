from .core import (PAD, MultiTapeAutomaton, accepts, build, convolve, enumerate_language,
                   padded_universe, tuple_weight)
from .fellow import (fellow_travel, fellow_traveler_automaton, minimal_cross_section,
                     shortlex_automaton)
from .io import automaton_from_dict, automaton_to_dict, dumps, loads
from .ops import (combine, complement, compose_relations, concatenation, determinize,
                  empty_automaton, from_words, intersection, is_empty, minimize, pair,
                  permute_tapes,
                  product, project_exists, reverse, trim, union, universal_automaton)
from .series import RationalSeries, growth_series, series_coefficients

__all__ = [
    "PAD", "MultiTapeAutomaton", "accepts", "build", "convolve", "enumerate_language",
    "padded_universe", "tuple_weight", "fellow_travel", "fellow_traveler_automaton",
    "minimal_cross_section", "shortlex_automaton", "automaton_from_dict", "automaton_to_dict",
    "dumps", "loads", "combine", "complement", "compose_relations", "concatenation",
    "determinize", "empty_automaton", "from_words", "intersection", "is_empty", "minimize", "pair",
    "permute_tapes", "product", "project_exists", "reverse", "trim", "union",
    "universal_automaton", "RationalSeries", "growth_series", "series_coefficients",
]
