"""Boolean and first-order operations on padded multi-tape automata."""

from __future__ import annotations

import itertools
from typing import Hashable, Sequence

from .core import PAD, Label, MultiTapeAutomaton, build

__all__ = [
    "determinize",
    "trim",
    "complement",
    "combine",
    "union",
    "intersection",
    "concatenation",
    "product",
    "project_exists",
    "pair",
    "compose_relations",
    "permute_tapes",
    "reverse",
    "empty_automaton",
    "universal_automaton",
    "from_words",
    "is_empty",
    "minimize",
]

_DONE = "done"


def _merged_alphabet(m1: MultiTapeAutomaton, m2: MultiTapeAutomaton):
    letters = list(m1.alphabet)
    weights = dict(m1.weights)
    for a in m2.alphabet:
        if a in weights:
            if weights[a] != m2.weights[a]:
                raise ValueError(f"letter {a!r} has weights {weights[a]} and {m2.weights[a]}")
        else:
            letters.append(a)
            weights[a] = m2.weights[a]
    return tuple(letters), weights


def empty_automaton(tapes: int, alphabet: Sequence, weights) -> MultiTapeAutomaton:
    return MultiTapeAutomaton(tapes, tuple(alphabet), dict(weights), 1, 0, frozenset(), ())


def universal_automaton(tapes: int, alphabet: Sequence, weights) -> MultiTapeAutomaton:
    """All validly padded tuples over ``alphabet``."""
    return complement(empty_automaton(tapes, alphabet, weights))


def from_words(words: Sequence[Sequence], alphabet: Sequence, weights) -> MultiTapeAutomaton:
    """One-tape automaton accepting exactly the given words (a trie)."""
    words = [tuple(w) for w in words]
    alphabet = tuple(alphabet)
    prefixes = {w[:i] for w in words for i in range(len(w) + 1)}
    finals = set(words)

    def succ(p):
        for a in alphabet:
            q = p + (a,)
            if q in prefixes:
                yield (a,), q

    return build(1, alphabet, weights, (), succ, lambda p: p in finals)


def determinize(m: MultiTapeAutomaton, max_states: int | None = None) -> MultiTapeAutomaton:
    """Subset construction over the labels that actually occur."""
    delta = m.delta
    finals = m.finals

    def succ(key):
        labels: dict[Label, set[int]] = {}
        for s in key:
            for lab, dsts in delta[s].items():
                labels.setdefault(lab, set()).update(dsts)
        for lab, dsts in labels.items():
            yield lab, frozenset(dsts)

    return build(m.tapes, m.alphabet, m.weights, frozenset([m.start]), succ,
                 lambda key: bool(key & finals), max_states)


def _useful_states(m: MultiTapeAutomaton) -> set[int]:
    reach = {m.start}
    stack = [m.start]
    delta = m.delta
    while stack:
        s = stack.pop()
        for dsts in delta[s].values():
            for d in dsts:
                if d not in reach:
                    reach.add(d)
                    stack.append(d)
    back: dict[int, list[int]] = {}
    for src, _, dst in m.transitions:
        back.setdefault(dst, []).append(src)
    co = set(f for f in m.finals if f in reach)
    stack = list(co)
    while stack:
        s = stack.pop()
        for p in back.get(s, ()):
            if p in reach and p not in co:
                co.add(p)
                stack.append(p)
    return co


def trim(m: MultiTapeAutomaton) -> MultiTapeAutomaton:
    """Drop states that are unreachable or cannot reach a final state."""
    useful = _useful_states(m)
    delta = m.delta

    def succ(s):
        for lab, dsts in delta[s].items():
            for d in dsts:
                if d in useful:
                    yield lab, d

    if m.start not in useful:
        return empty_automaton(m.tapes, m.alphabet, m.weights)
    return build(m.tapes, m.alphabet, m.weights, m.start, succ, lambda s: s in m.finals)


def is_empty(m: MultiTapeAutomaton) -> bool:
    return m.start not in _useful_states(m)


def _valid_labels(tapes: int, alphabet: Sequence, mask: frozenset) -> list[Label]:
    """Labels allowed after the slots in ``mask`` have been padded."""
    choices = [(PAD,) if k in mask else tuple(alphabet) + (PAD,) for k in range(tapes)]
    return [lab for lab in itertools.product(*choices) if any(x != PAD for x in lab)]


def complement(m: MultiTapeAutomaton, max_states: int | None = None) -> MultiTapeAutomaton:
    """Complement within the validly padded tuples over ``m``'s alphabet.

    The input is determinized and completed with a dead state; the state
    also records which slots are already padded so the output obeys the
    padding-persistence rule.
    """
    d = m if m.is_deterministic else determinize(m)
    delta = d.delta
    label_cache: dict[frozenset, list[Label]] = {}

    def labels_for(mask):
        got = label_cache.get(mask)
        if got is None:
            got = label_cache[mask] = _valid_labels(d.tapes, d.alphabet, mask)
        return got

    def succ(key):
        s, mask = key
        for lab in labels_for(mask):
            nmask = frozenset(k for k, x in enumerate(lab) if x == PAD)
            if s is None:
                yield lab, (None, nmask)
            else:
                dsts = delta[s].get(lab)
                yield lab, (dsts[0] if dsts else None, nmask)

    def final(key):
        s, _ = key
        return s is None or s not in d.finals

    return build(d.tapes, d.alphabet, d.weights, (d.start, frozenset()), succ, final, max_states)


def product(
    m1: MultiTapeAutomaton,
    map1: Sequence[int],
    m2: MultiTapeAutomaton,
    map2: Sequence[int],
    tapes: int,
    max_states: int | None = None,
) -> MultiTapeAutomaton:
    """Synchronised product placing ``m1``'s slot i at result slot ``map1[i]``.

    Shared slots must agree.  Every result slot must be covered by one of
    the factors.  A factor whose slots are all padded has finished; it may
    do so only from a final state, after which it reads padding forever.
    """
    if len(map1) != m1.tapes or len(map2) != m2.tapes:
        raise ValueError("tape maps do not match tape counts")
    if set(map1) | set(map2) != set(range(tapes)):
        raise ValueError("every result tape must be covered by a factor")
    alphabet, weights = _merged_alphabet(m1, m2)
    d1, d2 = m1.delta, m2.delta
    pad1 = (PAD,) * m1.tapes
    pad2 = (PAD,) * m2.tapes

    def moves(delta, finals, s, pad):
        if s == _DONE:
            yield pad, _DONE
            return
        for lab, dsts in delta[s].items():
            for d in dsts:
                yield lab, d
        if s in finals:
            yield pad, _DONE

    shared = sorted(set(map1) & set(map2))
    pos1 = [list(map1).index(s) for s in shared]
    pos2 = [list(map2).index(s) for s in shared]
    only2 = [(i, slot) for i, slot in enumerate(map2) if slot not in set(map1)]

    def succ(key):
        p, q = key
        by_shared: dict[tuple, list] = {}
        for lab2, q2 in moves(d2, m2.finals, q, pad2):
            by_shared.setdefault(tuple(lab2[i] for i in pos2), []).append((lab2, q2))
        for lab1, p2 in moves(d1, m1.finals, p, pad1):
            for lab2, q2 in by_shared.get(tuple(lab1[i] for i in pos1), ()):
                out = [None] * tapes
                for i, slot in enumerate(map1):
                    out[slot] = lab1[i]
                for i, slot in only2:
                    out[slot] = lab2[i]
                if all(x == PAD for x in out):
                    continue
                yield tuple(out), (p2, q2)

    def final(key):
        p, q = key
        return (p == _DONE or p in m1.finals) and (q == _DONE or q in m2.finals)

    return build(tapes, alphabet, weights, (m1.start, m2.start), succ, final, max_states)


def intersection(m1: MultiTapeAutomaton, m2: MultiTapeAutomaton,
                 max_states: int | None = None) -> MultiTapeAutomaton:
    if m1.tapes != m2.tapes:
        raise ValueError(f"tape mismatch: {m1.tapes} vs {m2.tapes}")
    ident = list(range(m1.tapes))
    return product(m1, ident, m2, ident, m1.tapes, max_states)


def union(m1: MultiTapeAutomaton, m2: MultiTapeAutomaton,
          max_states: int | None = None) -> MultiTapeAutomaton:
    """Product construction on determinized inputs, missing side treated as dead."""
    if m1.tapes != m2.tapes:
        raise ValueError(f"tape mismatch: {m1.tapes} vs {m2.tapes}")
    alphabet, weights = _merged_alphabet(m1, m2)
    a = m1 if m1.is_deterministic else determinize(m1)
    b = m2 if m2.is_deterministic else determinize(m2)
    da, db = a.delta, b.delta

    def succ(key):
        p, q = key
        la = da[p] if p is not None else {}
        lb = db[q] if q is not None else {}
        for lab in set(la) | set(lb):
            pa = la.get(lab)
            qb = lb.get(lab)
            yield lab, (pa[0] if pa else None, qb[0] if qb else None)

    def final(key):
        p, q = key
        return (p is not None and p in a.finals) or (q is not None and q in b.finals)

    return build(a.tapes, alphabet, weights, (a.start, b.start), succ, final, max_states)


def _restrict_valid(tapes, alphabet, weights, start_states, delta, finals, max_states=None):
    """Determinized NFA (given as raw delta) intersected with padding validity."""

    def succ(key):
        states, mask = key
        labels: dict[Label, set] = {}
        for s in states:
            for lab, dsts in delta(s).items():
                if any(lab[k] != PAD for k in mask):
                    continue
                labels.setdefault(lab, set()).update(dsts)
        for lab, dsts in labels.items():
            yield lab, (frozenset(dsts), frozenset(k for k, x in enumerate(lab) if x == PAD))

    def final(key):
        return bool(key[0] & finals)

    return build(tapes, alphabet, weights, (frozenset(start_states), frozenset()), succ, final,
                 max_states)


def concatenation(m1: MultiTapeAutomaton, m2: MultiTapeAutomaton,
                  max_states: int | None = None) -> MultiTapeAutomaton:
    """Concatenate the padded label strings and keep the validly padded results.

    On one tape this is ordinary word concatenation.  On several tapes a
    tuple splits as (u, v) where the labels of u are read first; padding
    inside u must persist through v.
    """
    if m1.tapes != m2.tapes:
        raise ValueError(f"tape mismatch: {m1.tapes} vs {m2.tapes}")
    alphabet, weights = _merged_alphabet(m1, m2)
    d1, d2 = m1.delta, m2.delta
    # NFA states: ("L", s) for m1 and ("R", s) for m2

    def delta(state):
        side, s = state
        out: dict[Label, set] = {}
        if side == "L":
            for lab, dsts in d1[s].items():
                out.setdefault(lab, set()).update(("L", d) for d in dsts)
            if s in m1.finals:
                for lab, dsts in d2[m2.start].items():
                    out.setdefault(lab, set()).update(("R", d) for d in dsts)
        else:
            for lab, dsts in d2[s].items():
                out.setdefault(lab, set()).update(("R", d) for d in dsts)
        return out

    finals = {("R", f) for f in m2.finals}
    if m2.start in m2.finals:
        finals |= {("L", f) for f in m1.finals}
    return _restrict_valid(m1.tapes, alphabet, weights, [("L", m1.start)], delta,
                           frozenset(finals), max_states)


def combine(mode: str, m1: MultiTapeAutomaton, m2: MultiTapeAutomaton,
            max_states: int | None = None) -> MultiTapeAutomaton:
    ops = {"union": union, "intersection": intersection, "concatenation": concatenation}
    try:
        fn = ops[mode]
    except KeyError:
        raise ValueError(f"unknown combine mode {mode!r}") from None
    return fn(m1, m2, max_states)


def project_exists(m: MultiTapeAutomaton, tape: int,
                   max_states: int | None = None) -> MultiTapeAutomaton:
    """Existentially quantify away ``tape`` (0-based), then determinize.

    Steps that become all padding once the slot is dropped can only occur at
    the end of a path; they are folded into the final-state set.
    """
    if m.tapes < 2:
        raise ValueError("projection needs at least two tapes")
    if not 0 <= tape < m.tapes:
        raise ValueError(f"tape index {tape} out of range")
    keep = [k for k in range(m.tapes) if k != tape]
    delta = m.delta

    # states that reach a final state using only dropped-slot steps
    tail_final = set(m.finals)
    changed = True
    while changed:
        changed = False
        for src, lab, dst in m.transitions:
            if src not in tail_final and dst in tail_final and all(lab[k] == PAD for k in keep):
                tail_final.add(src)
                changed = True

    def proj_delta(s):
        out: dict[Label, set] = {}
        for lab, dsts in delta[s].items():
            nl = tuple(lab[k] for k in keep)
            if all(x == PAD for x in nl):
                continue
            out.setdefault(nl, set()).update(dsts)
        return out

    def succ(key):
        labels: dict[Label, set] = {}
        for s in key:
            for lab, dsts in proj_delta(s).items():
                labels.setdefault(lab, set()).update(dsts)
        for lab, dsts in labels.items():
            yield lab, frozenset(dsts)

    return build(len(keep), m.alphabet, m.weights, frozenset([m.start]), succ,
                 lambda key: bool(key & tail_final), max_states)


def permute_tapes(m: MultiTapeAutomaton, order: Sequence[int]) -> MultiTapeAutomaton:
    """Result slot i reads what ``m``'s slot ``order[i]`` read."""
    if sorted(order) != list(range(m.tapes)):
        raise ValueError("order must be a permutation of the tapes")
    trans = tuple((s, tuple(lab[k] for k in order), d) for s, lab, d in m.transitions)
    return MultiTapeAutomaton(m.tapes, m.alphabet, m.weights, m.num_states, m.start,
                              m.finals, trans)


def pair(m1: MultiTapeAutomaton, m2: MultiTapeAutomaton,
         max_states: int | None = None) -> MultiTapeAutomaton:
    """Two-tape automaton for ``L(m1) x L(m2)`` from two one-tape automata."""
    if m1.tapes != 1 or m2.tapes != 1:
        raise ValueError("pair expects one-tape automata")
    return product(m1, [0], m2, [1], 2, max_states)


def compose_relations(r1: MultiTapeAutomaton, r2: MultiTapeAutomaton,
                      max_states: int | None = None) -> MultiTapeAutomaton:
    """``{(x, z) : exists y, (x, y) in r1 and (y, z) in r2}``."""
    if r1.tapes != 2 or r2.tapes != 2:
        raise ValueError("compose_relations expects two-tape automata")
    return project_exists(product(r1, [0, 1], r2, [1, 2], 3, max_states), 1, max_states)


def _max_pad_lag(m: MultiTapeAutomaton, k: int) -> int:
    """Longest run of slot-k padding on an accepting path; -1 if unbounded."""
    useful = _useful_states(m)
    edges: dict[int, list[int]] = {}
    for src, lab, dst in m.transitions:
        if lab[k] == PAD and src in useful and dst in useful:
            edges.setdefault(src, []).append(dst)
    memo: dict[int, int] = {}
    on_stack: set[int] = set()

    def longest(s):
        if s in memo:
            return memo[s]
        if s in on_stack:
            raise _Unbounded
        on_stack.add(s)
        best = 0
        for d in edges.get(s, ()):
            best = max(best, 1 + longest(d))
        on_stack.discard(s)
        memo[s] = best
        return best

    try:
        return max((longest(s) for s in list(edges)), default=0)
    except _Unbounded:
        return -1


class _Unbounded(Exception):
    pass


def reverse(m: MultiTapeAutomaton, max_states: int | None = None) -> MultiTapeAutomaton:
    """Accept the componentwise reversals of ``m``'s tuples.

    Reversing the label string moves each word's padding to the front; it
    is shifted back to the end by delaying the affected slots through a
    bounded buffer.  Languages whose padding lag is unbounded have no
    synchronous reversal in general and raise ``ValueError``.
    """
    m = trim(m)
    lags = []
    for k in range(m.tapes):
        lag = _max_pad_lag(m, k)
        if lag < 0:
            raise ValueError(f"padding lag on tape {k} is unbounded; reversal is not synchronous")
        lags.append(lag)
    rev: dict[int, dict[Label, set[int]]] = {}
    for src, lab, dst in m.transitions:
        rev.setdefault(dst, {}).setdefault(lab, set()).add(src)
    INIT = "init"

    def rdelta(s):
        if s == INIT:
            out: dict[Label, set] = {}
            for f in sorted(m.finals):
                for lab, srcs in rev.get(f, {}).items():
                    out.setdefault(lab, set()).update(srcs)
            return out
        return rev.get(s, {})

    tapes = m.tapes
    letters = tuple(m.alphabet)

    def feed_options(bufs, lags_, mask):
        """Yield (input label, label fed to the reversed machine, new buffers, new mask)."""
        per_slot = []
        for k in range(tapes):
            options = []
            choices = (PAD,) if k in mask else letters + (PAD,)
            for y in choices:
                nb = bufs[k] + (y,)
                if len(nb) > lags_[k]:
                    options.append((y, nb[0], nb[1:]))
                else:
                    options.append((y, PAD, nb))
            per_slot.append(options)
        for combo in itertools.product(*per_slot):
            y = tuple(c[0] for c in combo)
            if all(x == PAD for x in y):
                continue
            fed = tuple(c[1] for c in combo)
            nbufs = tuple(c[2] for c in combo)
            nmask = frozenset(k for k, x in enumerate(y) if x == PAD)
            yield y, fed, nbufs, nmask

    def step(key):
        s, lags_, bufs, mask = key
        out = rdelta(s)
        if not out:
            return
        if not any(lags_):
            # no buffering: the input label is fed unchanged
            for lab, dsts in out.items():
                if any(lab[k] != PAD for k in mask):
                    continue
                nmask = frozenset(k for k, x in enumerate(lab) if x == PAD)
                for d in dsts:
                    yield lab, (d, lags_, bufs, nmask)
            return
        for y, fed, nbufs, nmask in feed_options(bufs, lags_, mask):
            for d in out.get(fed, ()):
                yield y, (d, lags_, nbufs, nmask)

    starts = []
    for lg in itertools.product(*[range(l + 1) for l in lags]):
        starts.append((INIT, lg, tuple(() for _ in range(tapes)), frozenset()))

    def key_final(key):
        s, _, bufs, _ = key
        if s == INIT:
            return m.start in m.finals
        return s == m.start and all(x == PAD for b in bufs for x in b)

    def succ(subset):
        labels: dict[Label, set] = {}
        for key in subset:
            for lab, nk in step(key):
                labels.setdefault(lab, set()).add(nk)
        for lab, keys in labels.items():
            yield lab, frozenset(keys)

    return build(tapes, m.alphabet, m.weights, frozenset(starts), succ,
                 lambda subset: any(key_final(k) for k in subset), max_states)


def minimize(m: MultiTapeAutomaton, max_states: int | None = None) -> MultiTapeAutomaton:
    """Trim, determinize and merge equivalent states by partition refinement."""
    d = trim(m)
    if not d.is_deterministic:
        d = trim(determinize(d, max_states))
    n = d.num_states
    delta = d.delta
    rows = [sorted((d.label_key(lab), dsts[0]) for lab, dsts in delta[s].items())
            for s in range(n)]
    cls = [1 if s in d.finals else 0 for s in range(n)]
    count = len(set(cls))
    while True:
        sig: dict[tuple, int] = {}
        new = []
        for s in range(n):
            key = (cls[s], tuple((lk, cls[t]) for lk, t in rows[s]))
            new.append(sig.setdefault(key, len(sig)))
        if len(sig) == count:
            break
        cls, count = new, len(sig)
    cls = new
    first: dict[int, int] = {}
    for s in range(n):
        first.setdefault(cls[s], s)

    def succ(c):
        s = first[c]
        for lab, dsts in delta[s].items():
            yield lab, cls[dsts[0]]

    return build(d.tapes, d.alphabet, d.weights, cls[d.start], succ,
                 lambda c: first[c] in d.finals, max_states)
