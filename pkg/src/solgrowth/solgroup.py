"""Element calculus for G = <a, t> = Z^2 x|_M Z with companion monodromy.

Vectors are stored in the basis {a, Ma}, so the generator ``a`` is (1, 0)
and ``M`` has rows (0, -1) and (1, T).  Words are strings over ``aAtT``
where an uppercase letter is the inverse generator.
"""

from __future__ import annotations

from dataclasses import dataclass

from .laurent import LaurentPoly, XElement, divides_phi, tail_head_lengths

__all__ = [
    "GroupParams",
    "GroupElement",
    "IDENTITY",
    "parse_word",
    "eval_word",
    "to_group_element",
    "word_element",
    "compose",
    "invert",
    "equal_words",
    "geodesic_length",
    "geodesic_word",
    "matrix_power_apply",
]

LETTERS = "aAtT"


@dataclass(frozen=True)
class GroupParams:
    trace: int

    def __post_init__(self):
        if not isinstance(self.trace, int) or abs(self.trace) < 3:
            raise ValueError(f"trace must be an integer with |T| >= 3, got {self.trace!r}")


@dataclass(frozen=True, order=True)
class GroupElement:
    x: tuple[int, int]
    h: int

    def key(self) -> tuple[int, int, int]:
        return (self.x[0], self.x[1], self.h)


IDENTITY = GroupElement((0, 0), 0)


def parse_word(text: str) -> str:
    """Normalise a word: drop whitespace, accept ``t^-1``/``t⁻¹`` for ``T``."""
    s = "".join(text.split())
    s = s.replace("a⁻¹", "A").replace("t⁻¹", "T").replace("a^-1", "A").replace("t^-1", "T")
    bad = set(s) - set(LETTERS)
    if bad:
        raise ValueError(f"word {text!r} has letters outside {{a, A, t, T}}: {sorted(bad)}")
    return s


def eval_word(word: str) -> XElement:
    """Unreduced type and height by a left-to-right partial-height scan."""
    H = 0
    acc: dict[int, int] = {}
    for ch in word:
        if ch == "t":
            H += 1
        elif ch == "T":
            H -= 1
        elif ch == "a":
            acc[H] = acc.get(H, 0) + 1
        elif ch == "A":
            acc[H] = acc.get(H, 0) - 1
        elif not ch.isspace():
            raise ValueError(f"bad letter {ch!r}")
    return XElement(LaurentPoly(acc), H)


def _apply_m(v: tuple[int, int], T: int) -> tuple[int, int]:
    return (-v[1], v[0] + T * v[1])


def _apply_m_inv(v: tuple[int, int], T: int) -> tuple[int, int]:
    # M^-1 has rows (T, 1) and (-1, 0)
    return (T * v[0] + v[1], -v[0])


def matrix_power_apply(k: int, v: tuple[int, int], T: int) -> tuple[int, int]:
    """``M^k v`` with exact integers (negative ``k`` uses the integer inverse)."""
    step = _apply_m if k >= 0 else _apply_m_inv
    for _ in range(abs(k)):
        v = step(v, T)
    return v


def to_group_element(x: XElement, params: GroupParams | int) -> GroupElement:
    """Evaluate the Laurent polynomial at M and apply it to a = (1, 0)."""
    T = params.trace if isinstance(params, GroupParams) else GroupParams(params).trace
    s0 = s1 = 0
    terms = x.utype.terms
    if terms:
        lo = terms[0][0]
        v = matrix_power_apply(lo, (1, 0), T)
        deg = lo
        for d, c in terms:
            while deg < d:
                v = _apply_m(v, T)
                deg += 1
            s0 += c * v[0]
            s1 += c * v[1]
    return GroupElement((s0, s1), x.height)


def word_element(word: str, params: GroupParams | int) -> GroupElement:
    return to_group_element(eval_word(word), params)


def compose(g1: GroupElement, g2: GroupElement, params: GroupParams | int) -> GroupElement:
    """Semidirect product law ``(x1 + M^h1 x2, h1 + h2)``."""
    T = params.trace if isinstance(params, GroupParams) else params
    y = matrix_power_apply(g1.h, g2.x, T)
    return GroupElement((g1.x[0] + y[0], g1.x[1] + y[1]), g1.h + g2.h)


def invert(g: GroupElement, params: GroupParams | int) -> GroupElement:
    T = params.trace if isinstance(params, GroupParams) else params
    y = matrix_power_apply(-g.h, g.x, T)
    return GroupElement((-y[0], -y[1]), -g.h)


def equal_words(w1: str, w2: str, params: GroupParams | int) -> bool:
    """Equality in G via divisibility of the unreduced-type difference."""
    T = params.trace if isinstance(params, GroupParams) else GroupParams(params).trace
    x1, x2 = eval_word(w1), eval_word(w2)
    return x1.height == x2.height and divides_phi(x1.utype - x2.utype, T)


def geodesic_length(x: XElement) -> int:
    tl, hl = tail_head_lengths(x.utype, x.height)
    return 2 * tl + 2 * hl + abs(x.height) + x.utype.l1_norm()


def _a_power(c: int) -> str:
    return "a" * c if c >= 0 else "A" * (-c)


def geodesic_word(x: XElement) -> str:
    """A shortest word realising ``x``; its length is :func:`geodesic_length`."""
    p, h = x.utype, x.height
    tl, hl = tail_head_lengths(p, h)
    parts: list[str] = []
    if h >= 0:
        parts.append("T" * tl)
        for i in range(-tl, 0):
            parts.append(_a_power(p[i]) + "t")
        parts.append(_a_power(p[0]))
        for i in range(1, h + hl + 1):
            parts.append("t" + _a_power(p[i]))
        parts.append("T" * hl)
    else:
        # mirror image: climb into the head first, then descend through the tail
        parts.append("t" * hl)
        for i in range(hl, 0, -1):
            parts.append(_a_power(p[i]) + "T")
        parts.append(_a_power(p[0]))
        for i in range(-1, h - tl - 1, -1):
            parts.append("T" + _a_power(p[i]))
        parts.append("t" * tl)
    return "".join(parts)
