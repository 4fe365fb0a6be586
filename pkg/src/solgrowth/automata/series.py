"""Rational growth series of weighted one-tape automata.

Each edge of weight w is replaced by a path of w unit edges, giving an
integer transfer matrix A.  The denominator is det(I - zA), read off the
characteristic polynomial of A; the numerator is D(z) times the counting
series, truncated below the matrix size.  Everything is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import MultiTapeAutomaton
from .ops import trim

__all__ = [
    "RationalSeries",
    "growth_series",
    "series_coefficients",
    "transfer_matrix",
    "charpoly",
    "poly_mul",
]


def _strip(p: Sequence[int]) -> tuple[int, ...]:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def poly_mul(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _strip(out)


@dataclass(frozen=True)
class RationalSeries:
    """``numerator / denominator`` as ascending coefficient tuples."""

    numerator: tuple[int, ...]
    denominator: tuple[int, ...] = (1,)

    def __post_init__(self):
        num = _strip(self.numerator)
        den = _strip(self.denominator)
        if not den or den[0] == 0:
            raise ValueError("denominator must have a nonzero constant term")
        if den[0] != 1:
            if den[0] == -1:
                num = tuple(-c for c in num)
                den = tuple(-c for c in den)
            else:
                raise ValueError("denominator constant term must be +-1")
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    def coefficients(self, count: int) -> list[int]:
        return series_coefficients(self, count)

    def reduced(self) -> RationalSeries:
        """Cancel the polynomial gcd of numerator and denominator."""
        if not self.numerator:
            return RationalSeries((), (1,))
        g = _poly_gcd(self.numerator, self.denominator)
        if len(g) <= 1:
            return self
        num = _exact_div(self.numerator, g)
        den = _exact_div(self.denominator, g)
        return RationalSeries(num, den)

    def to_dict(self) -> dict:
        return {"numerator": list(self.numerator), "denominator": list(self.denominator)}

    @classmethod
    def from_dict(cls, data: dict) -> RationalSeries:
        return cls(tuple(data["numerator"]), tuple(data["denominator"]))

    def __str__(self) -> str:
        return f"({_fmt(self.numerator)}) / ({_fmt(self.denominator)})"


def _fmt(p: Sequence[int]) -> str:
    if not p:
        return "0"
    parts = []
    for i, c in enumerate(p):
        if not c:
            continue
        mon = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
        mag = abs(c)
        body = str(mag) if (i == 0 or mag != 1) else ""
        parts.append(("-" if c < 0 else "+", body + mon))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return text + "".join(s + b for s, b in parts[1:])


def _poly_gcd(p, q):
    a = [Fraction(c) for c in p]
    b = [Fraction(c) for c in q]
    while b:
        a = _frac_rem(a, b)
        a, b = b, a
    # primitive integer version with positive constant term
    from math import gcd, lcm

    den = 1
    for c in a:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in a]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    if ints and ints[0] < 0:
        ints = [-c for c in ints]
    return tuple(ints)


def _frac_rem(a, b):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        while a and a[-1] == 0:
            a.pop()
    return a


def _exact_div(p, g):
    p = [Fraction(c) for c in p]
    out = [Fraction(0)] * (len(p) - len(g) + 1)
    for shift in range(len(out) - 1, -1, -1):
        f = p[shift + len(g) - 1] / g[-1]
        out[shift] = f
        for i, c in enumerate(g):
            p[shift + i] -= f * c
    if any(p):
        raise ArithmeticError("inexact polynomial division")
    if any(c.denominator != 1 for c in out):
        raise ArithmeticError("non-integral quotient")
    return tuple(int(c) for c in out)


def series_coefficients(s: RationalSeries, count: int) -> list[int]:
    """First ``count`` Taylor coefficients via the denominator recurrence."""
    den = s.denominator
    if den[0] != 1:
        raise ValueError("denominator constant term must be 1")
    out: list[int] = []
    for i in range(count):
        v = s.numerator[i] if i < len(s.numerator) else 0
        for j in range(1, min(i, len(den) - 1) + 1):
            v -= den[j] * out[i - j]
        out.append(v)
    return out


def transfer_matrix(m: MultiTapeAutomaton):
    """Unit-weight expansion: (size, sparse rows, start index, final indices).

    Rows are dicts ``column -> multiplicity``.  Edges of weight w from a
    state share one chain of w - 1 auxiliary nodes.
    """
    n = m.num_states
    rows: list[dict[int, int]] = [dict() for _ in range(n)]
    chains: dict[int, list[int]] = {}
    for src, label, dst in m.transitions:
        w = m.label_weight(label)
        if w == 1:
            rows[src][dst] = rows[src].get(dst, 0) + 1
            continue
        chain = chains.get(src)
        if chain is None:
            chain = chains[src] = []
        while len(chain) < w - 1:
            idx = len(rows)
            rows.append({})
            prev = src if not chain else chain[-1]
            rows[prev][idx] = rows[prev].get(idx, 0) + 1
            chain.append(idx)
        tail = chain[w - 2]
        rows[tail][dst] = rows[tail].get(dst, 0) + 1
    return len(rows), rows, m.start, sorted(m.finals)


def charpoly(rows: list[dict[int, int]]) -> list[int]:
    """Coefficients ``[1, c1, ..., cN]`` of det(xI - A) = x^N + c1 x^(N-1) + ...

    Reduction to upper Hessenberg form over the rationals, then the
    standard determinant recurrence.  Strongly connected components are
    handled separately since the characteristic polynomial of a
    block-triangular matrix is the product over diagonal blocks.
    """
    N = len(rows)
    result = [1]
    for comp in _sccs(rows):
        if len(comp) == 1:
            v = comp[0]
            a = rows[v].get(v, 0)
            result = _mul_full(result, [1, -a])
            continue
        pos = {v: i for i, v in enumerate(comp)}
        mat = [[Fraction(0)] * len(comp) for _ in comp]
        for v in comp:
            for u, c in rows[v].items():
                if u in pos:
                    mat[pos[v]][pos[u]] = Fraction(c)
        cp = _hessenberg_charpoly(mat)
        result = _mul_full(result, cp)
    assert len(result) == N + 1
    return result


def _mul_full(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _hessenberg_charpoly(a: list[list[Fraction]]) -> list[int]:
    n = len(a)
    a = [row[:] for row in a]
    for k in range(n - 2):
        piv = None
        for i in range(k + 1, n):
            if a[i][k] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != k + 1:
            a[piv], a[k + 1] = a[k + 1], a[piv]
            for row in a:
                row[piv], row[k + 1] = row[k + 1], row[piv]
        p = a[k + 1][k]
        for i in range(k + 2, n):
            f = a[i][k] / p
            if f == 0:
                continue
            ri, rk = a[i], a[k + 1]
            for j in range(k, n):
                if rk[j]:
                    ri[j] -= f * rk[j]
            for row in a:
                if row[i]:
                    row[k + 1] += f * row[i]
    # p_k(x) = characteristic polynomial of leading k x k block, as ascending lists
    polys: list[list[Fraction]] = [[Fraction(1)]]
    for k in range(1, n + 1):
        hk = a[k - 1][k - 1]
        cur = [Fraction(0)] + polys[k - 1]  # x * p_{k-1}
        for i, c in enumerate(polys[k - 1]):
            cur[i] -= hk * c
        prod = Fraction(1)
        for i in range(k - 1, 0, -1):
            prod *= a[i][i - 1]
            if prod == 0:
                break
            coef = prod * a[i - 1][k - 1]
            if coef:
                for j, c in enumerate(polys[i - 1]):
                    cur[j] -= coef * c
        polys.append(cur)
    asc = polys[n]
    desc = list(reversed(asc))
    if any(c.denominator != 1 for c in desc):
        raise ArithmeticError("characteristic polynomial is not integral")
    return [int(c) for c in desc]


def _sccs(rows: list[dict[int, int]]) -> list[list[int]]:
    """Tarjan's algorithm, iterative; components in reverse topological order."""
    n = len(rows)
    index = [None] * n
    low = [0] * n
    on = [False] * n
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, iter(rows[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for u in it:
                if index[u] is None:
                    index[u] = low[u] = counter
                    counter += 1
                    stack.append(u)
                    on[u] = True
                    work.append((u, iter(rows[u])))
                    advanced = True
                    break
                if on[u]:
                    low[v] = min(low[v], index[u])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    u = stack.pop()
                    on[u] = False
                    comp.append(u)
                    if u == v:
                        break
                out.append(sorted(comp))
    return out


def growth_series(m: MultiTapeAutomaton) -> RationalSeries:
    """Growth series of a deterministic one-tape automaton, words counted by weight."""
    if m.tapes != 1:
        raise ValueError("growth series needs a one-tape automaton")
    if not m.is_deterministic:
        raise ValueError("growth series needs a deterministic automaton (determinize first)")
    t = trim(m)
    if not t.finals:
        return RationalSeries((), (1,))
    size, rows, start, finals = transfer_matrix(t)
    cp = charpoly(rows)
    den = cp  # ascending coefficients of det(I - zA) are the descending ones of det(xI - A)
    # counting series u^T A^k f for k < size
    fin = set(finals)
    counts = []
    vec = {start: 1}
    for _ in range(size):
        counts.append(sum(c for v, c in vec.items() if v in fin))
        nxt: dict[int, int] = {}
        for v, c in vec.items():
            for u, mult in rows[v].items():
                nxt[u] = nxt.get(u, 0) + c * mult
        vec = nxt
    num = [0] * size
    for i in range(size):
        acc = 0
        for j in range(0, min(i, len(den) - 1) + 1):
            acc += den[j] * counts[i - j]
        num[i] = acc
    return RationalSeries(tuple(num), tuple(den))
