"""Brute-force ground truth: Cayley-graph spheres, class minima, constants, Parry's series.

The sphere engine keeps only the last two spheres.  In a Cayley graph with
a symmetric generating set the neighbours of the sphere S_r lie in
S_{r-1}, S_r or S_{r+1}, so S_{r+1} = N(S_r) minus (S_r and S_{r-1}).
Elements are packed into two int64 keys and deduplicated by lexsort.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .automata.series import RationalSeries, poly_mul, series_coefficients
from .errors import ResourceLimitError
from .laurent import LaurentPoly, XElement, _check_trace, _power_remainder, remainder_key, x_size
from .solgroup import GroupElement, compose, invert, matrix_power_apply, parse_word, word_element

__all__ = [
    "SphereCounts",
    "ball_bfs",
    "min_size_over_class",
    "minimal_representative",
    "SolConstants",
    "sol_constants",
    "parry_series",
    "PARRY_NUMERATOR_TERMS",
    "PARRY_DENOMINATOR_FACTORS",
    "SeriesComparison",
    "compare_series",
]

_SAFE = 1 << 62


# ---------------------------------------------------------------------------
# sphere counts


@dataclass
class SphereCounts:
    radius: int
    counts: list[int]
    generators: list[str]
    trace: int
    # spheres as (n, 3) int64 arrays of (x1, x2, h), only when requested
    elements: list | None = field(default=None, repr=False, compare=False)

    def ball_counts(self) -> list[int]:
        out, acc = [], 0
        for c in self.counts:
            acc += c
            out.append(acc)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["radius", "count"])
        for r, c in enumerate(self.counts):
            w.writerow([r, c])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, trace: int, generators: list[str]) -> SphereCounts:
        rows = list(csv.reader(io.StringIO(text)))
        counts = [int(c) for r, c in rows[1:]]
        return cls(len(counts) - 1, counts, list(generators), trace)

    def norms(self) -> dict[tuple[int, int, int], int]:
        """Element key ``(x1, x2, h)`` to word norm (needs ``elements``)."""
        if self.elements is None:
            raise ValueError("sphere elements were not kept")
        out = {}
        for r, arr in enumerate(self.elements):
            for x1, x2, h in arr.tolist():
                out[(x1, x2, h)] = r
        return out


def _symmetric_generators(T: int, generators) -> list[GroupElement]:
    gens: list[GroupElement] = []
    for w in generators:
        g = word_element(parse_word(w), T)
        for e in (g, invert(g, T)):
            if e.key() != (0, 0, 0) and e not in gens:
                gens.append(e)
    if not gens:
        raise ValueError("generators must include a nontrivial element")
    return gens


def _dedupe(k1: np.ndarray, k2: np.ndarray):
    if len(k1) == 0:
        return k1, k2
    order = np.lexsort((k2, k1))
    k1, k2 = k1[order], k2[order]
    keep = np.ones(len(k1), dtype=bool)
    keep[1:] = (k1[1:] != k1[:-1]) | (k2[1:] != k2[:-1])
    return k1[keep], k2[keep]


def _setdiff(a1, a2, b1, b2):
    """Rows of the unique set a that are not in the unique set b."""
    if len(a1) == 0 or len(b1) == 0:
        return a1, a2
    k1 = np.concatenate([a1, b1])
    k2 = np.concatenate([a2, b2])
    tag = np.concatenate([np.zeros(len(a1), np.int8), np.ones(len(b1), np.int8)])
    order = np.lexsort((tag, k2, k1))
    k1, k2, tag = k1[order], k2[order], tag[order]
    dup_next = np.zeros(len(k1), dtype=bool)
    dup_next[:-1] = (k1[:-1] == k1[1:]) & (k2[:-1] == k2[1:])
    keep = (tag == 0) & ~dup_next
    return k1[keep], k2[keep]


def ball_bfs(T: int, generators, radius: int, *, workers: int = 1,
             keep_elements: bool = False, max_elements: int | None = 50_000_000) -> SphereCounts:
    """Exact sphere sizes of G = <a, t> for the symmetrised ``generators``.

    Each generator word counts as one letter.  ``workers > 1`` expands the
    frontier for several generators at once; the merge is a sort, so the
    output does not depend on scheduling.
    """
    _check_trace(T)
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    gens = _symmetric_generators(T, list(generators))
    hstep = max(abs(g.h) for g in gens)
    hmin, hmax = -radius * hstep, radius * hstep
    hb = hmax - hmin + 1
    # tab[g][h - hmin] = M^h v_g
    tabs = []
    big = 0
    for g in gens:
        rows = [matrix_power_apply(h, g.x, T) for h in range(hmin, hmax + 1)]
        big = max(big, max(max(abs(a), abs(b)) for a, b in rows))
        tabs.append((g.h, np.array([r[0] for r in rows], dtype=object),
                     np.array([r[1] for r in rows], dtype=object)))
    if big * max(radius, 1) * hb >= _SAFE:
        raise ResourceLimitError(
            f"coordinates may reach {big * radius} at radius {radius}; int64 packing would overflow",
            what="coordinate", estimate=big * radius * hb, limit=_SAFE)
    tabs = [(gh, t1.astype(np.int64), t2.astype(np.int64)) for gh, t1, t2 in tabs]

    def pack(x1, x2, h):
        return x1 * hb + (h - hmin), x2

    def unpack(k1, k2):
        h = np.mod(k1, hb) + hmin
        x1 = (k1 - (h - hmin)) // hb
        return x1, k2, h

    cur1, cur2 = pack(np.zeros(1, np.int64), np.zeros(1, np.int64), np.zeros(1, np.int64))
    prev1 = prev2 = np.zeros(0, np.int64)
    counts = [1]
    spheres = [np.zeros((1, 3), np.int64)] if keep_elements else None
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        for r in range(radius):
            x1, x2, h = unpack(cur1, cur2)
            idx = h - hmin

            def expand(tab):
                gh, t1, t2 = tab
                return _dedupe(*pack(x1 + t1[idx], x2 + t2[idx], h + gh))

            parts = list(pool.map(expand, tabs)) if pool else [expand(t) for t in tabs]
            n1, n2 = _dedupe(np.concatenate([p[0] for p in parts]),
                             np.concatenate([p[1] for p in parts]))
            old1, old2 = _dedupe(np.concatenate([cur1, prev1]), np.concatenate([cur2, prev2]))
            n1, n2 = _setdiff(n1, n2, old1, old2)
            prev1, prev2, cur1, cur2 = cur1, cur2, n1, n2
            counts.append(int(len(n1)))
            if max_elements is not None and len(n1) > max_elements:
                raise ResourceLimitError(
                    f"sphere of radius {r + 1} has {len(n1)} elements",
                    what="elements", estimate=int(len(n1)), limit=max_elements)
            if keep_elements:
                a, b, c = unpack(n1, n2)
                spheres.append(np.stack([a, b, c], axis=1))
    finally:
        if pool:
            pool.shutdown()
    return SphereCounts(radius, counts, list(generators), T, spheres)


# ---------------------------------------------------------------------------
# minimal size over a class


class _ClassSearch:
    """Level-by-level enumeration of X-elements of one height.

    Level b holds every (t, h) with xSize = b whose coefficients satisfy
    |c| < 5|T|.  The first level at which a remainder class appears gives
    its minimum.
    """

    def __init__(self, T: int, h: int, max_candidates: int):
        self.T, self.h = T, h
        self.cmax = 5 * abs(T) - 1
        self.best: dict[tuple[int, int], tuple[int, tuple]] = {}
        self.level = 0
        self.enumerated = 0
        self.max_candidates = max_candidates

    def _positions(self, tl, hl):
        h = self.h
        if h >= 0:
            lo, hi = -tl, h + hl
        else:
            lo, hi = h - tl, hl
        return list(range(lo, hi + 1))

    def _levels(self, b):
        """Yield (key, terms) for every element of size exactly b."""
        h, T, cmax = self.h, self.T, self.cmax
        rest = b - 1 - abs(h)
        if rest < 0:
            return
        for tl in range(rest // 2 + 1):
            for hl in range((rest - 2 * tl) // 2 + 1):
                m = rest - 2 * tl - 2 * hl
                pos = self._positions(tl, hl)
                required = set()
                if tl:
                    required.add(pos[0])
                if hl:
                    required.add(pos[-1])
                pr = [_power_remainder(d, T) for d in pos]
                yield from self._spread(pos, pr, required, m, cmax)

    @staticmethod
    def _spread(pos, pr, required, m, cmax):
        n = len(pos)
        need_after = [0] * (n + 1)
        for i in range(n - 1, -1, -1):
            need_after[i] = need_after[i + 1] + (1 if pos[i] in required else 0)
        terms: list[tuple[int, int]] = []

        def rec(i, budget, k0, k1):
            if i == n:
                if budget == 0:
                    yield (k0, k1), tuple(terms)
                return
            if budget > (n - i) * cmax or budget < need_after[i]:
                return
            lo = 1 if pos[i] in required else 0
            u, v = pr[i]
            top = min(cmax, budget - need_after[i + 1])
            for mag in range(lo, top + 1):
                if mag == 0:
                    yield from rec(i + 1, budget, k0, k1)
                    continue
                for c in (mag, -mag):
                    terms.append((pos[i], c))
                    yield from rec(i + 1, budget - mag, k0 + c * u, k1 + c * v)
                    terms.pop()

        yield from rec(0, m, 0, 0)

    def lookup(self, key, limit):
        while key not in self.best:
            if self.level >= limit:
                return None
            self.level += 1
            for k, terms in self._levels(self.level):
                self.enumerated += 1
                if self.enumerated > self.max_candidates:
                    raise ResourceLimitError(
                        f"class search enumerated more than {self.max_candidates} candidates",
                        what="candidates", estimate=self.enumerated, limit=self.max_candidates)
                if k not in self.best:
                    self.best[k] = (self.level, terms)
        return self.best[key]


_SEARCHES: dict[tuple[int, int], _ClassSearch] = {}


def minimal_representative(x: XElement, T: int, *,
                           max_candidates: int = 5_000_000) -> tuple[int, XElement]:
    """Smallest-size element of the class of ``x`` and its size.

    Candidates have coefficients in (-5|T|, 5|T|) and size at most
    xSize(x); ties are broken by enumeration order, which is deterministic.
    """
    _check_trace(T)
    size = x_size(x)
    key = remainder_key(x.utype, T)
    search = _SEARCHES.get((T, x.height))
    if search is None or search.max_candidates < max_candidates:
        search = _SEARCHES[(T, x.height)] = _ClassSearch(T, x.height, max_candidates)
    hit = search.lookup(key, size)
    if hit is None:
        # only possible if x itself lies outside the coefficient box
        return size, x
    b, terms = hit
    if b >= size:
        return size, x
    return b, XElement(LaurentPoly(terms), x.height)


def min_size_over_class(x: XElement, T: int, *, max_candidates: int = 5_000_000) -> int:
    return minimal_representative(x, T, max_candidates=max_candidates)[0]


# ---------------------------------------------------------------------------
# constants


@dataclass(frozen=True)
class SolConstants:
    T: int
    n: int
    B: int
    C: int
    L: int
    K: int
    N: int
    fellow: int

    def to_dict(self) -> dict:
        return {"T": self.T, "n": self.n, "B": self.B, "C": self.C, "L": self.L,
                "K": self.K, "N": self.N, "fellowConstant": self.fellow}


def remainder_bound(T: int, n: int) -> int:
    """Coefficient bound for division remainders of words over coefficients in [-n, n]."""
    return 2 * n + 2 * n * (abs(T) + 2)


def sol_constants(T: int, n: int | None = None) -> SolConstants:
    """Constants for the shrinking argument; ``n`` defaults to N."""
    _check_trace(T)
    a = abs(T)
    B = 10 * a
    L = (a + 2) * B
    K = (a + 2) * (3 * B + 4) + 8 * L + 1
    N = 5 * a + (a + 2) * B
    if n is None:
        n = N
    if n < 1:
        raise ValueError("n must be positive")
    return SolConstants(T=T, n=n, B=B, C=remainder_bound(T, n), L=L, K=K, N=N,
                        fellow=K + (N + 6) * L)


# ---------------------------------------------------------------------------
# Parry's closed form

# numerator bracket: (k, j, coef) stands for coef * z^(k*T + j)
PARRY_NUMERATOR_TERMS: tuple[tuple[int, int, int], ...] = (
    (0, 0, 1), (0, 1, 3), (0, 2, 4), (0, 3, 4), (0, 4, 3), (0, 5, 1),
    (1, 0, -1), (1, 1, -3), (1, 2, -14), (1, 3, -16), (1, 4, -11), (1, 5, -5), (1, 6, 2),
    (2, 1, 2), (2, 2, -13), (2, 3, 35), (2, 4, 40), (2, 5, 6),
    (2, 6, -23), (2, 7, -7), (2, 8, 4), (2, 9, 4),
    (3, 2, -5), (3, 3, 31), (3, 4, -40), (3, 5, -44),
    (3, 6, 33), (3, 7, 25), (3, 8, -12), (3, 9, -4),
)
# fixed prefactor of the numerator: (1 - z)^2 (1 + z)
PARRY_NUMERATOR_PREFACTOR: tuple[int, ...] = (1, -1, -1, 1)
# denominator: product of factor^power, each factor a tuple of (k, j, coef)
PARRY_DENOMINATOR_FACTORS: tuple[tuple[tuple[tuple[int, int, int], ...], int], ...] = (
    (((0, 0, 1), (0, 1, -2), (0, 2, -1), (1, 0, -1), (1, 1, 4), (1, 2, -1)), 1),
    (((0, 0, 1), (0, 1, -1), (0, 2, -1), (0, 3, -1), (1, 1, -1), (1, 2, 3), (1, 3, 1),
      (1, 4, -1)), 2),
)


def _table_poly(terms, T) -> list[int]:
    deg = max(k * T + j for k, j, _ in terms)
    out = [0] * (deg + 1)
    for k, j, c in terms:
        out[k * T + j] += c
    return out


def parry_series(half_trace: int) -> RationalSeries:
    """N(z)/D(z) for the subgroup <a, tat^-1, t> when the monodromy has trace 2T."""
    if not isinstance(half_trace, int) or half_trace < 2:
        raise ValueError("half trace must be an integer >= 2")
    T = half_trace
    num = poly_mul(PARRY_NUMERATOR_PREFACTOR, _table_poly(PARRY_NUMERATOR_TERMS, T))
    den: tuple[int, ...] = (1,)
    for factor, power in PARRY_DENOMINATOR_FACTORS:
        f = _table_poly(factor, T)
        for _ in range(power):
            den = poly_mul(den, f)
    return RationalSeries(num, den)


# ---------------------------------------------------------------------------
# comparison


@dataclass
class SeriesComparison:
    series_coefficients: list[int]
    counts: list[int]
    diffs: list[int]
    exact_match: bool
    convention: str
    recurrence_ok: bool
    recurrence_failures: list[int]
    homogeneous_from: int
    notes: list[str]

    def to_dict(self) -> dict:
        return {
            "series_coefficients": self.series_coefficients,
            "counts": self.counts,
            "diffs": self.diffs,
            "exact_match": self.exact_match,
            "convention": self.convention,
            "recurrence_ok": self.recurrence_ok,
            "recurrence_failures": self.recurrence_failures,
            "homogeneous_from": self.homogeneous_from,
            "notes": self.notes,
        }


def recurrence_residuals(s: RationalSeries, counts: list[int]) -> list[int]:
    """``sum_j D_j c_(i-j) - N_i`` for each index i of ``counts``.

    Zero everywhere iff the counts are the Taylor coefficients of ``s``;
    beyond deg N this is the homogeneous recurrence of the denominator.
    """
    out = []
    den, num = s.denominator, s.numerator
    for i in range(len(counts)):
        acc = sum(den[j] * counts[i - j] for j in range(min(i, len(den) - 1) + 1))
        acc -= num[i] if i < len(num) else 0
        out.append(acc)
    return out


def compare_series(s: RationalSeries, counts: SphereCounts | list[int],
                   recurrence_from: int = 0) -> SeriesComparison:
    """Per-coefficient diff of ``s`` against sphere counts, with convention diagnosis.

    ``convention`` is "sphere" if the counts are the coefficients, "ball" if
    their partial sums are, and "none" otherwise.  Recurrence residuals are
    checked at indices ``>= recurrence_from``.
    """
    c = list(counts.counts) if isinstance(counts, SphereCounts) else list(counts)
    coeffs = series_coefficients(s, len(c))
    diffs = [a - b for a, b in zip(c, coeffs)]
    exact = not any(diffs)
    balls, acc = [], 0
    for v in c:
        acc += v
        balls.append(acc)
    notes = ["each generator word has weight 1; inverses are included"]
    if exact:
        convention = "sphere"
    elif balls == coeffs:
        convention = "ball"
        notes.append("partial sums match: the series counts balls, i.e. carries a 1/(1-z) factor")
    else:
        convention = "none"
    res = recurrence_residuals(s, c)
    fails = [i for i, r in enumerate(res) if i >= recurrence_from and r != 0]
    return SeriesComparison(coeffs, c, diffs, exact, convention, not fails, fails,
                            len(s.numerator), notes)
