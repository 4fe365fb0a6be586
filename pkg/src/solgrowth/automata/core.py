"""Padded, weighted, synchronous multi-tape automata.

A k-tape automaton reads k words in lock step.  Shorter words are padded
on the right with :data:`PAD`; every label is a k-tuple of letters or
``PAD`` and never all ``PAD``.  Once a slot carries padding on a path it
carries padding for the rest of that path.

States are the integers ``0 .. num_states - 1`` numbered breadth first from
the start state by :func:`build`, so constructions are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from ..errors import ResourceLimitError

PAD = "$"

Label = tuple
Transition = tuple[int, Label, int]

__all__ = [
    "PAD",
    "MultiTapeAutomaton",
    "build",
    "convolve",
    "accepts",
    "enumerate_language",
    "padded_universe",
    "tuple_weight",
]


@dataclass(frozen=True, eq=False)
class MultiTapeAutomaton:
    tapes: int
    alphabet: tuple
    weights: Mapping[Hashable, int]
    num_states: int
    start: int
    finals: frozenset
    transitions: tuple = field(default=())

    def __post_init__(self):
        if self.tapes < 1:
            raise ValueError("tapes must be positive")
        if PAD in self.alphabet:
            raise ValueError(f"{PAD!r} is reserved for padding")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet has duplicate letters")
        for a in self.alphabet:
            w = self.weights.get(a)
            if not isinstance(w, int) or w <= 0:
                raise ValueError(f"letter {a!r} needs a positive integer weight")
        if not 0 <= self.start < max(self.num_states, 1):
            raise ValueError("start state out of range")
        if any(not 0 <= f < self.num_states for f in self.finals):
            raise ValueError("final state out of range")
        letters = set(self.alphabet)
        for src, label, dst in self.transitions:
            if len(label) != self.tapes:
                raise ValueError(f"label {label!r} does not have {self.tapes} slots")
            if all(x == PAD for x in label):
                raise ValueError("all-padding labels are not allowed")
            if any(x != PAD and x not in letters for x in label):
                raise ValueError(f"label {label!r} uses letters outside the alphabet")
            if not (0 <= src < self.num_states and 0 <= dst < self.num_states):
                raise ValueError("transition endpoint out of range")

    # ------------------------------------------------------------------
    @cached_property
    def letter_index(self) -> dict:
        idx = {a: i for i, a in enumerate(self.alphabet)}
        idx[PAD] = len(self.alphabet)
        return idx

    def label_key(self, label: Label) -> tuple:
        idx = self.letter_index
        return tuple(idx[x] for x in label)

    @cached_property
    def delta(self) -> list[dict[Label, tuple[int, ...]]]:
        """``delta[state][label]`` is the tuple of successor states."""
        table: list[dict[Label, list[int]]] = [dict() for _ in range(self.num_states)]
        for src, label, dst in self.transitions:
            table[src].setdefault(label, []).append(dst)
        return [{lab: tuple(ds) for lab, ds in row.items()} for row in table]

    @property
    def is_deterministic(self) -> bool:
        return all(len(ds) == 1 for row in self.delta for ds in row.values())

    def weight(self, letter) -> int:
        return 0 if letter == PAD else self.weights[letter]

    def label_weight(self, label: Label) -> int:
        return sum(self.weight(x) for x in label)

    def padding_violations(self) -> list[tuple[int, Transition]]:
        """Edges that put a letter in slot k after a path already padded slot k."""
        bad = []
        for k in range(self.tapes):
            seen = set()
            stack = [dst for _, lab, dst in self.transitions if lab[k] == PAD]
            while stack:
                s = stack.pop()
                if s in seen:
                    continue
                seen.add(s)
                for lab, dsts in self.delta[s].items():
                    if lab[k] != PAD:
                        bad.append((k, (s, lab, dsts[0])))
                    stack.extend(dsts)
        return bad

    def __repr__(self) -> str:
        return (f"MultiTapeAutomaton(tapes={self.tapes}, states={self.num_states}, "
                f"finals={len(self.finals)}, transitions={len(self.transitions)})")


def build(
    tapes: int,
    alphabet: Sequence,
    weights: Mapping,
    start_key: Hashable,
    successors: Callable[[Hashable], Iterable[tuple[Label, Hashable]]],
    is_final: Callable[[Hashable], bool],
    max_states: int | None = None,
) -> MultiTapeAutomaton:
    """Explore ``successors`` breadth first from ``start_key`` and number states.

    ``successors`` must yield in a reproducible order; edges out of each
    state are additionally sorted by label (alphabet order, ``PAD`` last).
    """
    alphabet = tuple(alphabet)
    idx = {a: i for i, a in enumerate(alphabet)}
    idx[PAD] = len(alphabet)
    key_cache: dict[Label, tuple] = {}

    def label_key(label):
        k = key_cache.get(label)
        if k is None:
            k = key_cache[label] = tuple(idx[x] for x in label)
        return k

    index: dict[Hashable, int] = {start_key: 0}
    queue = [start_key]
    finals = set()
    trans: list[Transition] = []
    i = 0
    while i < len(queue):
        key = queue[i]
        src = i
        i += 1
        if is_final(key):
            finals.add(src)
        out = list(successors(key))
        out.sort(key=lambda pair: label_key(pair[0]))
        seen_edges = set()
        for label, nkey in out:
            j = index.get(nkey)
            if j is None:
                j = len(queue)
                if max_states is not None and j >= max_states:
                    raise ResourceLimitError(
                        f"automaton construction exceeded {max_states} states",
                        estimate=j + 1, limit=max_states)
                index[nkey] = j
                queue.append(nkey)
            if (label, j) not in seen_edges:
                seen_edges.add((label, j))
                trans.append((src, label, j))
    for lab in key_cache:
        if all(x == PAD for x in lab):
            raise ValueError("all-padding labels are not allowed")
    return _trusted(tapes, alphabet, dict(weights), len(queue), 0, frozenset(finals), tuple(trans))


_FIELDS = ("tapes", "alphabet", "weights", "num_states", "start", "finals", "transitions")


def _trusted(*args) -> MultiTapeAutomaton:
    """Construct without re-validating; for results of :func:`build`."""
    m = object.__new__(MultiTapeAutomaton)
    for name, value in zip(_FIELDS, args):
        object.__setattr__(m, name, value)
    return m


def convolve(words: Sequence[Sequence]) -> list[Label]:
    """Pad a tuple of words to common length and zip them into labels."""
    m = max((len(w) for w in words), default=0)
    return [tuple(w[j] if j < len(w) else PAD for w in words) for j in range(m)]


def accepts(m: MultiTapeAutomaton, *words: Sequence) -> bool:
    """Membership of a tuple of words, one per tape."""
    if len(words) != m.tapes:
        raise ValueError(f"expected {m.tapes} words, got {len(words)}")
    letters = set(m.alphabet)
    for w in words:
        for x in w:
            if x not in letters:
                raise ValueError(f"letter {x!r} is not in the alphabet")
    current = {m.start}
    delta = m.delta
    for label in convolve(words):
        nxt = set()
        for s in current:
            nxt.update(delta[s].get(label, ()))
        if not nxt:
            return False
        current = nxt
    return bool(current & m.finals)


def tuple_weight(m: MultiTapeAutomaton, words: Sequence[Sequence]) -> int:
    return sum(m.weights[x] for w in words for x in w)


def _strip(labels: list[Label], tapes: int) -> tuple[tuple, ...]:
    return tuple(tuple(lab[k] for lab in labels if lab[k] != PAD) for k in range(tapes))


def enumerate_language(m: MultiTapeAutomaton, max_weight: int) -> set[tuple[tuple, ...]]:
    """All accepted tuples whose total letter weight is at most ``max_weight``.

    Each tuple is a tuple of words and each word a tuple of letters.
    """
    out: set[tuple[tuple, ...]] = set()
    delta = m.delta
    if m.is_deterministic:
        return _enumerate_dfa(m, max_weight)
    # frontier of (state set, label path, weight); subset tracking keeps NFAs finite
    stack: list[tuple[frozenset, list[Label], int]] = [(frozenset([m.start]), [], 0)]
    while stack:
        states, path, w = stack.pop()
        if states & m.finals:
            out.add(_strip(path, m.tapes))
        labels: dict[Label, set[int]] = {}
        for s in states:
            for lab, dsts in delta[s].items():
                labels.setdefault(lab, set()).update(dsts)
        for lab, dsts in labels.items():
            nw = w + m.label_weight(lab)
            if nw <= max_weight:
                stack.append((frozenset(dsts), path + [lab], nw))
    return out


def _enumerate_dfa(m: MultiTapeAutomaton, max_weight: int) -> set[tuple[tuple, ...]]:
    out = set()
    rows = [[(lab, ds[0], m.label_weight(lab)) for lab, ds in row.items()] for row in m.delta]
    stack = [(m.start, (), 0)]
    while stack:
        s, path, w = stack.pop()
        if s in m.finals:
            out.add(_strip(list(path), m.tapes))
        for lab, d, lw in rows[s]:
            if w + lw <= max_weight:
                stack.append((d, path + (lab,), w + lw))
    return out


def padded_universe(tapes: int, alphabet: Sequence, weights: Mapping,
                    max_weight: int) -> Iterator[tuple[tuple, ...]]:
    """Every tuple of words with total weight at most ``max_weight``."""
    alphabet = list(alphabet)

    def words_upto(budget):
        # all words of weight <= budget, paired with their weight
        result = [((), 0)]
        frontier = [((), 0)]
        while frontier:
            nxt = []
            for w, wt in frontier:
                for a in alphabet:
                    nw = wt + weights[a]
                    if nw <= budget:
                        nxt.append((w + (a,), nw))
            result.extend(nxt)
            frontier = nxt
        return result

    def rec(k, budget):
        if k == tapes:
            yield ()
            return
        for w, wt in words_upto(budget):
            for rest in rec(k + 1, budget - wt):
                yield (w,) + rest

    yield from rec(0, max_weight)
