"""JSON serialisation of automata.

Letters are written with ``str`` and read back with a caller-supplied
parser (identity by default), so plain string alphabets round-trip as is.
"""

from __future__ import annotations

import json
from typing import Any, Callable

from .core import PAD, MultiTapeAutomaton

__all__ = ["automaton_to_dict", "automaton_from_dict", "dumps", "loads"]


def automaton_to_dict(m: MultiTapeAutomaton, render: Callable[[Any], str] = str) -> dict:
    def r(x):
        return PAD if x == PAD else render(x)

    return {
        "tapes": m.tapes,
        "alphabet": [r(a) for a in m.alphabet],
        "weights": {r(a): m.weights[a] for a in m.alphabet},
        "states": m.num_states,
        "start": m.start,
        "finals": sorted(m.finals),
        "transitions": [
            {"from": s, "label": [r(x) for x in lab], "to": d} for s, lab, d in m.transitions
        ],
    }


def automaton_from_dict(data: dict, parse: Callable[[str], Any] = lambda s: s) -> MultiTapeAutomaton:
    def p(x):
        return PAD if x == PAD else parse(x)

    try:
        alphabet = tuple(p(a) for a in data["alphabet"])
        weights = {p(a): int(w) for a, w in data["weights"].items()}
        trans = tuple((int(t["from"]), tuple(p(x) for x in t["label"]), int(t["to"]))
                      for t in data["transitions"])
        return MultiTapeAutomaton(
            tapes=int(data["tapes"]),
            alphabet=alphabet,
            weights=weights,
            num_states=int(data["states"]),
            start=int(data["start"]),
            finals=frozenset(int(f) for f in data["finals"]),
            transitions=trans,
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed automaton JSON: {exc}") from exc


def dumps(m: MultiTapeAutomaton, render: Callable[[Any], str] = str) -> str:
    return json.dumps(automaton_to_dict(m, render), sort_keys=True)


def loads(text: str, parse: Callable[[str], Any] = lambda s: s) -> MultiTapeAutomaton:
    return automaton_from_dict(json.loads(text), parse)
