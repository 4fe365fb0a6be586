"""Fellow-traveler and short-lex pair automata, and the minimal cross section.

Given a weighted regular language L, a regular acceptor R for a partition
of L, a regular sublanguage L' and a fellow-traveler constant K, the cross
section keeps from L' the words with no strictly smaller K-fellow-traveling
R-partner, then breaks the remaining ties by short-lex order.  The result
is a minimal cross section whenever (L, R, L', K) has the falsification by
fellow traveler property; the construction does not check that hypothesis.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .core import PAD, MultiTapeAutomaton, build
from .ops import (_valid_labels, complement, intersection, minimize, product,
                  project_exists)

__all__ = ["fellow_traveler_automaton", "shortlex_automaton", "minimal_cross_section",
           "fellow_travel"]


def fellow_travel(w1: Sequence, w2: Sequence, weights: Mapping, K: int) -> bool:
    """Prefixes of equal length differ in weight by at most ``K`` (padding weighs 0)."""
    diff = 0
    for j in range(max(len(w1), len(w2))):
        if j < len(w1):
            diff += weights[w1[j]]
        if j < len(w2):
            diff -= weights[w2[j]]
        if abs(diff) > K:
            return False
    return True


def fellow_traveler_automaton(K: int, weights: Mapping, alphabet: Sequence) -> MultiTapeAutomaton:
    """Pairs (w1, w2) that K-fellow travel with weight(w1) > weight(w2).

    The state is the running weight difference in -K..K together with the
    set of padded slots.  Leaving the band has no transition, which plays
    the role of the failure state.
    """
    if K < 0:
        raise ValueError("K must be nonnegative")
    alphabet = tuple(alphabet)
    cache: dict = {}

    def succ(key):
        diff, mask = key
        labels = cache.get(mask)
        if labels is None:
            labels = cache[mask] = _valid_labels(2, alphabet, mask)
        for a, b in labels:
            nd = diff + (weights[a] if a != PAD else 0) - (weights[b] if b != PAD else 0)
            if abs(nd) > K:
                continue
            yield (a, b), (nd, frozenset(k for k, x in enumerate((a, b)) if x == PAD))

    return build(2, alphabet, weights, (0, frozenset()), succ, lambda key: key[0] > 0)


_LT, _EQ, _GT = -1, 0, 1


def shortlex_automaton(alphabet: Sequence, weights: Mapping) -> MultiTapeAutomaton:
    """Pairs (w1, w2) with w1 strictly before w2 in short-lex order.

    Shorter words come first; words of equal length are compared at the
    leftmost difference using the order of ``alphabet``.
    """
    alphabet = tuple(alphabet)
    rank = {a: i for i, a in enumerate(alphabet)}

    def succ(key):
        cmp, mask = key
        for a, b in _valid_labels(2, alphabet, mask):
            ncmp = cmp
            if cmp == _EQ and a != PAD and b != PAD and a != b:
                ncmp = _LT if rank[a] < rank[b] else _GT
            yield (a, b), (ncmp, frozenset(k for k, x in enumerate((a, b)) if x == PAD))

    def final(key):
        cmp, mask = key
        if mask == frozenset({0}):
            return True
        if mask == frozenset({1}):
            return False
        return cmp == _LT

    return build(2, alphabet, weights, (_EQ, frozenset()), succ, final)


def _restrict_tapes(R: MultiTapeAutomaton, A: MultiTapeAutomaton, B: MultiTapeAutomaton,
                    max_states: int | None) -> MultiTapeAutomaton:
    """``R`` intersected with ``A x B``, without building ``A x B`` first."""
    left = product(R, [0, 1], A, [0], 2, max_states)
    return minimize(product(left, [0, 1], B, [1], 2, max_states), max_states)


def minimal_cross_section(
    L: MultiTapeAutomaton,
    Lprime: MultiTapeAutomaton,
    R: MultiTapeAutomaton,
    K: int,
    max_states: int | None = None,
) -> MultiTapeAutomaton:
    """One minimal-size word per class, assuming the fellow-traveler hypotheses.

    ``L`` and ``Lprime`` are one-tape automata, ``R`` a two-tape acceptor
    over the same alphabet and weighting.  Intermediate automata are
    minimized; the small relations are intersected before the languages.
    """
    if L.tapes != 1 or Lprime.tapes != 1 or R.tapes != 2:
        raise ValueError("need one-tape L, L' and a two-tape acceptor R")
    alphabet, weights = L.alphabet, L.weights
    ft = fellow_traveler_automaton(K, weights, alphabet)
    # pairs (w1, w2) in R with w2 strictly smaller and K-fellow traveling
    LK = _restrict_tapes(intersection(R, ft, max_states), L, L, max_states)
    falsified = minimize(project_exists(LK, 1, max_states), max_states)
    L2 = minimize(intersection(Lprime, complement(falsified, max_states), max_states), max_states)
    # pairs (w1, w2) in R with w1 short-lex before w2, both surviving
    SR = _restrict_tapes(intersection(R, shortlex_automaton(alphabet, weights), max_states),
                         L2, L2, max_states)
    beaten = minimize(project_exists(SR, 0, max_states), max_states)
    return minimize(intersection(L2, complement(beaten, max_states), max_states), max_states)
