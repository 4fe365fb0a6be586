"""Regular languages encoding X = Z[z, z^-1] x Z, their acceptors, and shrinking moves.

Letters are pairs (c, k) with c in [-n, n] and k in {-1, 1, 2}, weighted
|c| + |k|.  A word is a tail of k = 2 letters, a nonempty center whose
letters share k = 1 or k = -1 (at least two letters when -1), and a head of
k = 2 letters.  ``psi`` reads the tail, center and head off as the
coefficients of a Laurent polynomial; the center length fixes the height.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .automata import (MultiTapeAutomaton, build, compose_relations, determinize, minimize,
                       growth_series, intersection, minimal_cross_section, pair,
                       permute_tapes, reverse, trim)
from .automata.core import PAD
from .automata.series import RationalSeries
from .errors import ResourceLimitError
from .laurent import (LaurentPoly, XElement, _check_trace, div_rem_phi, phi,
                      remainder_key, tail_head_lengths, x_size)
from .oracle import SolConstants, minimal_representative, remainder_bound, sol_constants

__all__ = [
    "SolLetter",
    "parse_sol_word",
    "format_sol_word",
    "parse_letter",
    "alphabet",
    "letter_weights",
    "word_weight",
    "word_shape",
    "is_strict",
    "tail_len",
    "head_len",
    "build_ln",
    "psi",
    "psi_inverse",
    "acceptor_rn_prime",
    "acceptor_rni",
    "pad_relation",
    "acceptor_state_estimate",
    "divergence",
    "shrink_representative",
    "shrink_step",
    "sol_pipeline",
    "PipelineResult",
]


class SolLetter(NamedTuple):
    c: int
    k: int

    @property
    def weight(self) -> int:
        return abs(self.c) + abs(self.k)

    def __str__(self) -> str:
        return f"{self.c}:{self.k}"


SolWord = tuple  # tuple[SolLetter, ...]

_KS = (-1, 1, 2)
_Q = SolLetter(0, 2)


def parse_letter(text: str) -> SolLetter:
    c, k = text.replace("−", "-").split(":")
    return _letter(int(c), int(k))


def _letter(c: int, k: int) -> SolLetter:
    if k not in _KS:
        raise ValueError(f"second entry must be one of -1, 1, 2, got {k}")
    return SolLetter(c, k)


_LETTER_RE = re.compile(r"\(\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*\)")


def parse_sol_word(text: str) -> SolWord:
    """Parse ``"(2,2)(5,1)(0,1)(1,2)"``; an empty string is the empty word."""
    s = text.replace("−", "-").strip()
    out = []
    pos = 0
    for m in _LETTER_RE.finditer(s):
        if s[pos:m.start()].strip():
            raise ValueError(f"unexpected text {s[pos:m.start()]!r} in word {text!r}")
        out.append(_letter(int(m.group(1)), int(m.group(2))))
        pos = m.end()
    if s[pos:].strip():
        raise ValueError(f"unexpected text {s[pos:]!r} in word {text!r}")
    return tuple(out)


def format_sol_word(w: Sequence[SolLetter]) -> str:
    return "".join(f"({a.c},{a.k})" for a in w)


def alphabet(n: int) -> tuple[SolLetter, ...]:
    """A_n in a fixed total order: by k in (-1, 1, 2), then by c."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return tuple(SolLetter(c, k) for k in _KS for c in range(-n, n + 1))


def letter_weights(n: int) -> dict:
    return {a: a.weight for a in alphabet(n)}


def word_weight(w: Sequence[SolLetter]) -> int:
    return sum(a.weight for a in w)


@dataclass(frozen=True)
class WordShape:
    tail: int      # leading k = 2 letters
    sign: int      # common k of the center
    center: int    # number of center letters
    head: int      # trailing k = 2 letters


def word_shape(w: Sequence[SolLetter]) -> WordShape:
    """Check the tail/center/head conditions and return the block lengths."""
    ks = [a.k for a in w]
    mids = [i for i, k in enumerate(ks) if k != 2]
    if not mids:
        raise ValueError("word needs at least one letter with k = 1 or k = -1")
    lo, hi = mids[0], mids[-1]
    if hi - lo + 1 != len(mids):
        raise ValueError("center letters must be contiguous")
    sign = ks[lo]
    if any(k != sign for k in ks[lo:hi + 1]):
        raise ValueError("center letters must share the same k")
    if sign == -1 and len(mids) < 2:
        raise ValueError("a center with k = -1 needs at least two letters")
    return WordShape(lo, sign, len(mids), len(w) - hi - 1)


def is_strict(w: Sequence[SolLetter]) -> bool:
    """The word has valid shape and no (0, 2) at either end."""
    try:
        word_shape(w)
    except ValueError:
        return False
    return not ((w[0].k == 2 and w[0].c == 0) or (w[-1].k == 2 and w[-1].c == 0))


def tail_len(w: Sequence[SolLetter]) -> int:
    return word_shape(w).tail


def head_len(w: Sequence[SolLetter]) -> int:
    return word_shape(w).head


def build_ln(n: int, strict: bool = True, alphabet_n: int | None = None) -> MultiTapeAutomaton:
    """Deterministic automaton for L_n (``strict``) or L_n' over A_n.

    ``alphabet_n`` (>= n) enlarges the declared alphabet without adding
    accepted words, so languages for different n can be combined.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    big = n if alphabet_n is None else alphabet_n
    if big < n:
        raise ValueError("alphabet_n must be at least n")
    letters = alphabet(big)
    weights = {a: a.weight for a in letters}
    usable = [a for a in letters if abs(a.c) <= n]

    def succ(state):
        for a in usable:
            nxt = _ln_step(state, a, strict)
            if nxt is not None:
                yield (a,), nxt

    def final(state):
        return state in ("c1", "cm2", "head_ok") or (state == "head_zero" and not strict)

    return build(1, letters, weights, "start", succ, final)


def _ln_step(state, a, strict):
    if state == "start":
        if a.k == 2:
            return None if (strict and a.c == 0) else "tail"
        return "c1" if a.k == 1 else "cm1"
    if state == "tail":
        if a.k == 2:
            return "tail"
        return "c1" if a.k == 1 else "cm1"
    if state == "c1":
        if a.k == 1:
            return "c1"
    elif state == "cm1":
        return "cm2" if a.k == -1 else None
    elif state == "cm2":
        if a.k == -1:
            return "cm2"
    elif state not in ("head_ok", "head_zero"):
        return None
    if a.k == 2:
        return "head_zero" if a.c == 0 else "head_ok"
    return None


def psi(w: Sequence[SolLetter]) -> XElement:
    """The Laurent polynomial and height encoded by a word of valid shape."""
    s = word_shape(w)
    n1, n2, n3 = s.tail, s.center - 1, s.head
    coeffs: dict[int, int] = {}
    if s.sign == 1:
        base_tail, base_center, base_head, h = -n1, 0, n2 + 1, n2
    else:
        base_tail, base_center, base_head, h = -n1 - n2, -n2, 1, -n2
    for i in range(n1):
        coeffs[base_tail + i] = w[i].c
    for i in range(n2 + 1):
        coeffs[base_center + i] = w[n1 + i].c
    for i in range(n3):
        coeffs[base_head + i] = w[n1 + n2 + 1 + i].c
    return XElement(LaurentPoly({d: c for d, c in coeffs.items() if c}), h)


def psi_inverse(x: XElement, n: int) -> SolWord:
    """The unique strict word over A_n whose image is ``x``."""
    p, h = x.utype, x.height
    if p.terms and p.max_abs_coeff() > n:
        raise ValueError(f"coefficient {p.max_abs_coeff()} exceeds n = {n}")
    tl, hl = tail_head_lengths(p, h)
    if h >= 0:
        lo, hi, k = -tl, h + hl, 1
        clo, chi = 0, h
    else:
        lo, hi, k = h - tl, hl, -1
        clo, chi = h, 0
    return tuple(SolLetter(p[d], k if clo <= d <= chi else 2) for d in range(lo, hi + 1))


# ---------------------------------------------------------------------------
# acceptors

_HEAD, _TAIL, _C1, _CM1, _CM11 = "head", "tail", "c1", "cm1", "cm11"
_ACCEPT_LOCATIONS = (_TAIL, _C1, _CM1)


def acceptor_state_estimate(n: int, T: int) -> int:
    """Upper bound on the right-to-left division automaton's state count."""
    C = remainder_bound(T, n)
    return (2 * C + 1) ** 2 * 5 + 1


def _next_location(loc, e):
    if loc in (_HEAD, _TAIL) and e == 2:
        return loc
    if loc == _HEAD:
        return _C1 if e == 1 else _CM11
    if loc == _C1 and e == 1:
        return _C1
    if loc in (_C1, _CM1) and e == 2:
        return _TAIL
    if loc in (_CM11, _CM1) and e == -1:
        return _CM1
    return None


def _division_automaton(n: int, T: int, max_states: int | None) -> MultiTapeAutomaton:
    """Reads both words from the right, dividing the difference by 1 - T z + z^2."""
    C = remainder_bound(T, n)
    letters = alphabet(n)
    weights = {a: a.weight for a in letters}
    by_k = {k: [a for a in letters if a.k == k] for k in _KS}

    def succ(state):
        r1, r0, loc = state
        for e in _KS:
            nloc = _next_location(loc, e)
            if nloc is None:
                continue
            for a in by_k[e]:
                for b in by_k[e]:
                    # z r + d = r1 (1 - T z + z^2) + (T r1 + r0) z + (d - r1)
                    n1 = T * r1 + r0
                    n0 = a.c - b.c - r1
                    if abs(n1) > C or abs(n0) > C:
                        continue
                    yield (a, b), (n1, n0, nloc)

    def final(state):
        return state[0] == 0 and state[1] == 0 and state[2] in _ACCEPT_LOCATIONS

    return build(2, letters, weights, (0, 0, _HEAD), succ, final, max_states)


def acceptor_rn_prime(n: int, T: int, max_states: int | None = 2_000_000) -> MultiTapeAutomaton:
    """Pairs of L_n' words with congruent images and equal tail and head lengths."""
    _check_trace(T)
    if n < 1:
        raise ValueError("n must be at least 1")
    est = acceptor_state_estimate(n, T)
    if max_states is not None and est > max_states:
        raise ResourceLimitError(
            f"division automaton for n={n}, T={T} may need {est} states",
            estimate=est, limit=max_states)
    rtl = _division_automaton(n, T, max_states)
    return trim(reverse(rtl, max_states))


def pad_relation(n: int, i: int, max_states: int | None = None) -> MultiTapeAutomaton:
    """Pairs (w, Q_r w Q_s) with 0 <= r, s <= i, where Q_r is r copies of (0, 2)."""
    if i < 0:
        raise ValueError("i must be nonnegative")
    letters = alphabet(n)
    weights = {a: a.weight for a in letters}

    # state: (r, q emitted leading pads, buffer, tape0 ended, trailing pads emitted)
    def moves(state):
        r, q, buf, ended, trail = state
        xs = [PAD] if ended else list(letters) + [PAD]
        for x in xs:
            nended = ended or x == PAD
            if q < r:
                nbuf = buf if x == PAD else buf + (x,)
                yield (x, _Q), (r, q + 1, nbuf, nended, trail)
            elif buf:
                nbuf = buf[1:] if x == PAD else buf[1:] + (x,)
                yield (x, buf[0]), (r, q, nbuf, nended, trail)
            elif x != PAD:
                yield (x, x), (r, q, buf, nended, trail)
            elif trail < i:
                yield (x, _Q), (r, q, buf, True, trail + 1)

    def succ(state):
        if state == "init":
            for r in range(i + 1):
                yield from moves((r, 0, (), False, 0))
        else:
            yield from moves(state)

    def final(state):
        if state == "init":
            return True
        r, q, buf, _, _ = state
        return q == r and not buf

    nfa = build(2, letters, weights, "init", succ, final, max_states)
    return trim(determinize(nfa, max_states))


def acceptor_rni(n: int, i: int, T: int, max_states: int | None = 2_000_000) -> MultiTapeAutomaton:
    """Pairs of L_n words in the same class whose tail and head lengths differ by <= i."""
    rp = acceptor_rn_prime(n, T, max_states)
    e = pad_relation(n, i, max_states)
    et = permute_tapes(e, [1, 0])
    left = trim(compose_relations(e, rp, max_states))
    both = trim(compose_relations(left, et, max_states))
    ln = build_ln(n, strict=True)
    return minimize(intersection(pair(ln, ln), both, max_states), max_states)


# ---------------------------------------------------------------------------
# divergence and shrinking


def _as_poly(w) -> LaurentPoly:
    if isinstance(w, XElement):
        return w.utype
    if isinstance(w, LaurentPoly):
        return w
    return psi(w).utype


def divergence(w1, w2) -> int:
    """Max over k of |sum_{j <= k} (|c1_j| - |c2_j|)|; accepts words or X-elements."""
    p1, p2 = _as_poly(w1), _as_poly(w2)
    degs = sorted(set(d for d, _ in p1.terms) | set(d for d, _ in p2.terms))
    best = acc = 0
    for d in degs:
        acc += abs(p1[d]) - abs(p2[d])
        best = max(best, abs(acc))
    return best


def _prefix_excess(p1: LaurentPoly, p2: LaurentPoly, thr: int) -> int | None:
    """Smallest k with sum_{j <= k} (|p1_j| - |p2_j|) > thr, or None."""
    degs = sorted(set(d for d, _ in p1.terms) | set(d for d, _ in p2.terms))
    acc = 0
    for d in degs:
        acc += abs(p1[d]) - abs(p2[d])
        if acc > thr:
            return d
    return None


@dataclass(frozen=True)
class _Ctx:
    t1: LaurentPoly
    h: int
    size1: int
    tl1: int
    hl1: int
    T: int
    consts: SolConstants

    def ok(self, t: LaurentPoly, *, need_bounds=True, need_div=False) -> bool:
        if t.terms and t.max_abs_coeff() > self.consts.n:
            return False
        if x_size(XElement(t, self.h)) >= self.size1:
            return False
        if need_bounds:
            tl, hl = tail_head_lengths(t, self.h)
            if abs(tl - self.tl1) > self.consts.L or abs(hl - self.hl1) > self.consts.L:
                return False
        if need_div and divergence(self.t1, t) > self.consts.K:
            return False
        return True


def _restrict(q: LaurentPoly, lo=None, hi=None) -> LaurentPoly:
    return LaurentPoly((d, c) for d, c in q.terms
                       if (lo is None or d >= lo) and (hi is None or d <= hi))


def _repairs(ctx: _Ctx, t: LaurentPoly, near: Sequence[int]):
    """``t`` plus up to two shifted copies of the modulus at degrees in ``near``."""
    ph = phi(ctx.T)
    yield t
    spots = sorted(set(near))
    for m in spots:
        for e in (1, -1):
            yield t + ph.shift(m) * e
    for a_i, m1 in enumerate(spots):
        for m2 in spots[a_i + 1:]:
            for e1 in (1, -1):
                for e2 in (1, -1):
                    yield t + ph.shift(m1) * e1 + ph.shift(m2) * e2


def _best(ctx: _Ctx, candidates, **checks) -> LaurentPoly | None:
    best = None
    for t in candidates:
        if ctx.ok(t, **checks):
            if best is None or x_size(XElement(t, ctx.h)) < x_size(XElement(best, ctx.h)):
                best = t
    return best


def _adjust_partner(ctx: _Ctx, t2: LaurentPoly):
    """Apply the tail/head and divergence truncations of the quotient in order."""
    T, L = ctx.T, ctx.consts.L
    ph = phi(T)
    t1 = ctx.t1

    def quotient(t):
        q, r = div_rem_phi(t - t1, T)
        assert r.is_zero()
        return q

    # the partner's tail or head is too long
    for _ in range(64):
        tl2, hl2 = tail_head_lengths(t2, ctx.h)
        q = quotient(t2)
        cand = None
        if tl2 > ctx.tl1 + L and q.terms:
            cand = t1 + ph * _restrict(q, lo=q.min_degree() + L)
        elif hl2 > ctx.hl1 + L and q.terms:
            cand = t1 + ph * _restrict(q, hi=q.max_degree() - L)
        if cand is None or not ctx.ok(cand, need_bounds=False):
            break
        if x_size(XElement(cand, ctx.h)) >= x_size(XElement(t2, ctx.h)):
            break
        t2 = cand

    # the partner's tail or head is much shorter than the original's
    tl2, hl2 = tail_head_lengths(t2, ctx.h)
    q = quotient(t2)
    if ctx.tl1 - tl2 > L and t1.terms:
        mp = t1.min_degree() + L
        base = t1 + ph * _restrict(q, hi=mp - 1)
        got = _best(ctx, _repairs(ctx, base, [mp, mp - 1, mp - 2]))
        if got is not None:
            t2 = got
    tl2, hl2 = tail_head_lengths(t2, ctx.h)
    q = quotient(t2)
    if ctx.hl1 - hl2 > L and t1.terms:
        # mirror image of the tail case
        mp = t1.max_degree() - L
        base = t1 + ph * _restrict(q, lo=mp - 1)
        got = _best(ctx, _repairs(ctx, base, [mp - 2, mp - 1, mp]))
        if got is not None:
            t2 = got

    thr = L + 8 * L + 1 + 2 * (abs(T) + 2)
    edges = []
    if t1.terms:
        lo_edge = t1.min_degree()
        hi_edge = t1.max_degree()
        edges = [lo_edge - 2, lo_edge - 1, lo_edge, hi_edge - 2, hi_edge - 1, hi_edge]

    # a prefix of the partner is much larger than the original's
    for _ in range(64):
        k = _prefix_excess(t2, t1, thr)
        if k is None:
            break
        q = quotient(t2)
        base = t1 + ph * _restrict(q, lo=k + 1)
        got = _best(ctx, _repairs(ctx, base, edges))
        if got is None or x_size(XElement(got, ctx.h)) >= x_size(XElement(t2, ctx.h)):
            break
        t2 = got

    # a prefix of the partner is much smaller than the original's
    k = _prefix_excess(t1, t2, thr)
    if k is not None:
        q = quotient(t2)
        base = t1 + ph * _restrict(q, hi=k)
        got = _best(ctx, _repairs(ctx, base, edges))
        if got is not None:
            t2 = got
    return t2


def shrink_step(w: Sequence[SolLetter], consts: SolConstants | None = None,
                T: int | None = None, *, max_candidates: int = 2_000_000):
    """One shrinking move: returns ``(word, move)`` with ``move`` None when unchanged.

    Moves are tried in order: reducing a coefficient of absolute value at
    least 5|T| by adding five shifted copies of the modulus; otherwise a
    strictly smaller partner from the bounded class search, adjusted by the
    quotient truncations that keep tail/head lengths within L and the
    divergence within K.
    """
    if consts is None:
        if T is None:
            raise ValueError("need constants or a trace")
        consts = sol_constants(T)
    T = consts.T
    w = tuple(w)
    x1 = psi(w)
    t1, h = x1.utype, x1.height
    size1 = x_size(x1)
    tl1, hl1 = tail_head_lengths(t1, h)
    ctx = _Ctx(t1, h, size1, tl1, hl1, T, consts)
    limit = 5 * abs(T)
    for d, c in t1.terms:
        if abs(c) >= limit:
            s = (1 if c > 0 else -1) * (1 if T > 0 else -1)
            cand = t1 + phi(T).shift(d - 1) * (5 * s)
            if ctx.ok(cand, need_div=True):
                return psi_inverse(XElement(cand, h), consts.n), "coefficient"
    size2, rep = minimal_representative(x1, T, max_candidates=max_candidates)
    if size2 >= size1:
        return w, None
    t2 = _adjust_partner(ctx, rep.utype)
    if ctx.ok(t2, need_div=True):
        return psi_inverse(XElement(t2, h), consts.n), "partner"
    return w, None


def shrink_representative(w: Sequence[SolLetter], consts: SolConstants | None = None,
                          T: int | None = None, **kw) -> SolWord:
    """A strictly smaller, boundedly close word in the same class, or ``w`` itself."""
    return shrink_step(w, consts, T, **kw)[0]


# ---------------------------------------------------------------------------
# pipeline


@dataclass
class PipelineResult:
    cross_section: MultiTapeAutomaton
    series: RationalSeries
    params: dict
    theorem_scale: bool

    def to_dict(self, render=str) -> dict:
        from .automata.io import automaton_to_dict
        return {
            "params": self.params,
            "theorem_scale": self.theorem_scale,
            "series": self.series.to_dict(),
            "cross_section": automaton_to_dict(self.cross_section, render),
        }


def sol_pipeline(T: int, n: int | None = None, K: int | None = None, i: int | None = None,
                 *, max_states: int | None = 400_000) -> PipelineResult:
    """Cross section of L_n modulo congruence and its growth series.

    Without overrides the theorem's constants are used (n = N, i = L,
    fellow-traveler constant K + (N + 6) L); those builds are refused with a
    :class:`ResourceLimitError` carrying the state estimate.  Any
    intermediate automaton larger than ``max_states`` aborts the run the same
    way.  In practice the subset constructions behind the two projections
    outgrow a few hundred thousand states already for n = 1.
    """
    _check_trace(T)
    consts = sol_constants(T)
    theorem = n is None and K is None and i is None
    n = consts.N if n is None else n
    i = consts.L if i is None else i
    K = consts.fellow if K is None else K
    if n < 1 or i < 0 or K < 0:
        raise ValueError("need n >= 1, i >= 0, K >= 0")
    est = acceptor_state_estimate(n, T)
    if max_states is not None and est > max_states:
        raise ResourceLimitError(
            f"acceptor for n={n}, T={T} needs an estimated {est} states "
            f"(remainder bound C={remainder_bound(T, n)})",
            estimate=est, limit=max_states)
    ln = build_ln(n, strict=True)
    lprime = build_ln(min(n, 5 * abs(T)), strict=True, alphabet_n=n)
    try:
        R = acceptor_rni(n, i, T, max_states)
        cs = minimal_cross_section(ln, lprime, R, K, max_states)
    except ResourceLimitError as exc:
        raise ResourceLimitError(f"pipeline n={n}, K={K}, i={i}, T={T}: {exc}",
                                 what=exc.what, estimate=exc.estimate, limit=exc.limit) from exc
    series = growth_series(cs).reduced()
    params = {"T": T, "n": n, "i": i, "K": K, "lprime_n": min(n, 5 * abs(T)),
              "acceptor_states": R.num_states, "cross_section_states": cs.num_states}
    return PipelineResult(cs, series, params, theorem)
