import random

from hypothesis import settings

from solgrowth.automata import (PAD, MultiTapeAutomaton, accepts, intersection,
                                universal_automaton)

LETTERS = ("x", "y")
WEIGHTS = {"x": 1, "y": 2}

# class searches are cached per height, so first calls are much slower than later ones
settings.register_profile("repo", deadline=None)
settings.load_profile("repo")


def random_automaton(rng: random.Random, tapes: int = 1, states: int = 4,
                     density: float = 0.35) -> MultiTapeAutomaton:
    """Small random NFA over {x, y} cut down to validly padded tuples."""
    slots = list(LETTERS) + ([PAD] if tapes > 1 else [])
    labels = [lab for lab in _labels(slots, tapes) if any(x != PAD for x in lab)]
    trans = []
    for s in range(states):
        for lab in labels:
            for d in range(states):
                if rng.random() < density / states:
                    trans.append((s, lab, d))
    finals = frozenset(s for s in range(states) if rng.random() < 0.4)
    m = MultiTapeAutomaton(tapes, LETTERS, dict(WEIGHTS), states, 0, finals, tuple(trans))
    if tapes == 1:
        return m
    return intersection(m, universal_automaton(tapes, LETTERS, WEIGHTS))


def _labels(slots, tapes):
    if tapes == 0:
        yield ()
        return
    for rest in _labels(slots, tapes - 1):
        for x in slots:
            yield rest + (x,)


def accepted_set(m, universe):
    return {t for t in universe if accepts(m, *t)}


# acceptance reporting: one PASS/FAIL line per criterion in the terminal summary
CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(CRITERIA):
        status, text = CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {text}")
