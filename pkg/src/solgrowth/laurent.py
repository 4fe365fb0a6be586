"""Sparse integer Laurent polynomials and the height-relative size function.

Polynomials are immutable and keyed by degree; the zero polynomial has no
terms.  Division is only ever by ``1 - T z + z^2`` and the remainder is kept
in the span of ``{1, z}`` so that congruence classes have a canonical form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

__all__ = [
    "LaurentPoly",
    "Decomposition",
    "XElement",
    "phi",
    "div_rem_phi",
    "divides_phi",
    "remainder_key",
    "decompose",
    "tail_head_lengths",
    "x_size",
    "parse_poly",
]


class LaurentPoly:
    """An element of Z[z, z^-1] stored as a sorted tuple of (degree, coeff)."""

    __slots__ = ("_terms", "_map", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        if isinstance(coeffs, Mapping):
            items = coeffs.items()
        else:
            items = coeffs
        acc: dict[int, int] = {}
        for deg, c in items:
            if not isinstance(deg, int) or not isinstance(c, int):
                raise TypeError("degrees and coefficients must be int")
            acc[deg] = acc.get(deg, 0) + c
        self._map = {d: c for d, c in acc.items() if c}
        self._terms = tuple(sorted(self._map.items()))
        self._hash = None

    # constructors -----------------------------------------------------
    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> LaurentPoly:
        return cls({degree: coeff})

    @classmethod
    def constant(cls, c: int) -> LaurentPoly:
        return cls({0: c})

    @classmethod
    def from_dense(cls, coeffs: Iterable[int], low: int = 0) -> LaurentPoly:
        """``coeffs[i]`` becomes the coefficient of ``z^(low + i)``."""
        return cls((low + i, c) for i, c in enumerate(coeffs))

    # queries ----------------------------------------------------------
    @property
    def terms(self) -> tuple[tuple[int, int], ...]:
        return self._terms

    def coeff(self, degree: int) -> int:
        return self._map.get(degree, 0)

    def __getitem__(self, degree: int) -> int:
        return self._map.get(degree, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def min_degree(self) -> int | None:
        return self._terms[0][0] if self._terms else None

    def max_degree(self) -> int | None:
        return self._terms[-1][0] if self._terms else None

    def l1_norm(self) -> int:
        return sum(abs(c) for _, c in self._terms)

    def max_abs_coeff(self) -> int:
        return max((abs(c) for _, c in self._terms), default=0)

    def to_dict(self) -> dict[int, int]:
        return dict(self._map)

    def dense(self, low: int, high: int) -> list[int]:
        return [self._map.get(d, 0) for d in range(low, high + 1)]

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc = dict(self._map)
        for d, c in other._terms:
            acc[d] = acc.get(d, 0) + c
        return LaurentPoly(acc)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({d: -c for d, c in self._terms})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc: dict[int, int] = {}
        for d1, c1 in self._terms:
            for d2, c2 in other._terms:
                acc[d1 + d2] = acc.get(d1 + d2, 0) + c1 * c2
        return LaurentPoly(acc)

    __rmul__ = __mul__

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by ``z^k``."""
        return LaurentPoly({d + k: c for d, c in self._terms})

    def evaluate(self, z):
        """Evaluate at a ring element supporting ``*``, ``+`` and ``**`` with negative powers."""
        total = 0
        for d, c in self._terms:
            total = total + c * z**d
        return total

    # comparison / display ---------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for d, c in self._terms:
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if d == 0:
                body = str(mag)
            else:
                var = "z" if d == 1 else f"z^{d}"
                body = var if mag == 1 else f"{mag}{var}"
            out.append((sign, body))
        first_sign, first_body = out[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in out[1:]:
            text += sign + body
        return text


def _coerce(value):
    if isinstance(value, LaurentPoly):
        return value
    if isinstance(value, int):
        return LaurentPoly.constant(value)
    return NotImplemented


_TERM_RE = re.compile(r"([+-]?)(\d*)\*?(z(?:\^\(?(-?\d+)\)?)?)?")


def parse_poly(text: str) -> LaurentPoly:
    """Parse a signed monomial list such as ``"2z^-2+5+z^3"`` or ``"-z"``."""
    s = text.replace(" ", "").replace("⁻¹", "^-1")
    if s in ("", "0"):
        return LaurentPoly()
    pos = 0
    acc: dict[int, int] = {}
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if m is None or m.end() == pos or (not m.group(2) and not m.group(3)):
            raise ValueError(f"cannot parse polynomial {text!r} at offset {pos}")
        if pos > 0 and not m.group(1):
            raise ValueError(f"missing sign before term at offset {pos} in {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        mag = int(m.group(2)) if m.group(2) else 1
        if m.group(3):
            deg = int(m.group(4)) if m.group(4) is not None else 1
        else:
            deg = 0
        acc[deg] = acc.get(deg, 0) + sign * mag
        pos = m.end()
    return LaurentPoly(acc)


# ---------------------------------------------------------------------------
# division modulo 1 - T z + z^2


def _check_trace(T: int) -> None:
    if not isinstance(T, int) or abs(T) < 3:
        raise ValueError(f"trace must be an integer with |T| >= 3, got {T!r}")


def phi(T: int) -> LaurentPoly:
    """The modulus ``1 - T z + z^2``."""
    return LaurentPoly({0: 1, 1: -T, 2: 1})


def div_rem_phi(p: LaurentPoly, T: int) -> tuple[LaurentPoly, LaurentPoly]:
    """Return ``(q, r)`` with ``p = q (1 - T z + z^2) + r`` and ``r`` in span{1, z}.

    Negative degrees are cleared upwards using ``z^-1 = T - z`` and degrees
    above one are cleared downwards using ``z^2 = T z - 1``.
    """
    _check_trace(T)
    work = p.to_dict()
    quot: dict[int, int] = {}
    if work:
        lo = min(work)
        for d in range(lo, 0):
            c = work.pop(d, 0)
            if not c:
                continue
            quot[d] = quot.get(d, 0) + c
            work[d + 1] = work.get(d + 1, 0) + c * T
            work[d + 2] = work.get(d + 2, 0) - c
        hi = max((d for d, c in work.items() if c), default=0)
        for d in range(hi, 1, -1):
            c = work.pop(d, 0)
            if not c:
                continue
            quot[d - 2] = quot.get(d - 2, 0) + c
            work[d - 1] = work.get(d - 1, 0) + c * T
            work[d - 2] = work.get(d - 2, 0) - c
    return LaurentPoly(quot), LaurentPoly({d: c for d, c in work.items() if d in (0, 1)})


def remainder_key(p: LaurentPoly, T: int) -> tuple[int, int]:
    """Canonical class of ``p`` modulo ``1 - T z + z^2`` as (const, z-coefficient).

    Equivalent to the remainder of :func:`div_rem_phi` but computed by a
    linear pass, which matters in enumeration loops.
    """
    _check_trace(T)
    # z^d mod phi = u_d + v_d z; z^(d+1) = (-v_d) + (u_d + T v_d) z
    c0 = c1 = 0
    for d, c in p.terms:
        u, v = _power_remainder(d, T)
        c0 += c * u
        c1 += c * v
    return c0, c1


_POW_CACHE: dict[tuple[int, int], tuple[int, int]] = {}


def _power_remainder(d: int, T: int) -> tuple[int, int]:
    key = (d, T)
    hit = _POW_CACHE.get(key)
    if hit is not None:
        return hit
    u, v = 1, 0
    if d >= 0:
        for _ in range(d):
            u, v = -v, u + T * v
    else:
        # z^-1 = T - z
        for _ in range(-d):
            u, v = T * u + v, -u
    if len(_POW_CACHE) < 1 << 16:
        _POW_CACHE[key] = (u, v)
    return u, v


def divides_phi(p: LaurentPoly, T: int) -> bool:
    """True iff ``1 - T z + z^2`` divides ``p`` in Z[z, z^-1]."""
    return div_rem_phi(p, T)[1].is_zero()


# ---------------------------------------------------------------------------
# tail / center / head


@dataclass(frozen=True)
class XElement:
    """A pair (unreduced type, height)."""

    utype: LaurentPoly = field(default_factory=LaurentPoly)
    height: int = 0

    def __str__(self) -> str:
        return f"({self.utype}, {self.height})"


@dataclass(frozen=True)
class Decomposition:
    tail: LaurentPoly
    center: LaurentPoly
    head: LaurentPoly
    tail_len: int
    head_len: int


def _windows(h: int) -> tuple[int, int]:
    """Center window [lo, hi] for height h."""
    return (0, h) if h >= 0 else (h, 0)


def tail_head_lengths(p: LaurentPoly, h: int) -> tuple[int, int]:
    lo, hi = _windows(h)
    if p.is_zero():
        return 0, 0
    tail_len = max(0, lo - p.min_degree())
    head_len = max(0, p.max_degree() - hi)
    return tail_len, head_len


def decompose(p: LaurentPoly, h: int) -> Decomposition:
    lo, hi = _windows(h)
    tail = LaurentPoly((d, c) for d, c in p.terms if d < lo)
    center = LaurentPoly((d, c) for d, c in p.terms if lo <= d <= hi)
    head = LaurentPoly((d, c) for d, c in p.terms if d > hi)
    tail_len, head_len = tail_head_lengths(p, h)
    return Decomposition(tail, center, head, tail_len, head_len)


def x_size(x: XElement) -> int:
    """``2 TailLen + 2 HeadLen + |h| + 1 + sum |c_i|``."""
    tl, hl = tail_head_lengths(x.utype, x.height)
    return 2 * tl + 2 * hl + abs(x.height) + 1 + x.utype.l1_norm()
