import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solgrowth.automata import accepts, enumerate_language, growth_series
from solgrowth.errors import ResourceLimitError
from solgrowth.laurent import LaurentPoly, XElement, divides_phi, parse_poly, x_size
from solgrowth.oracle import min_size_over_class, sol_constants
from solgrowth.sol_language import (SolLetter, acceptor_rn_prime, acceptor_rni,
                                    acceptor_state_estimate, alphabet, build_ln, divergence,
                                    format_sol_word, head_len, is_strict, pad_relation,
                                    parse_letter, parse_sol_word, psi, psi_inverse,
                                    shrink_representative, shrink_step, sol_pipeline, tail_len,
                                    word_shape, word_weight)

W = parse_sol_word
P = parse_poly


def test_letters_and_alphabet():
    assert SolLetter(-3, 2).weight == 5
    assert parse_letter("−2:1") == SolLetter(-2, 1)
    with pytest.raises(ValueError):
        parse_letter("1:3")
    a = alphabet(1)
    assert len(a) == 9
    assert [x.k for x in a] == [-1] * 3 + [1] * 3 + [2] * 3
    assert format_sol_word(W("(2,2)(5,1)(0,1)(1,2)")) == "(2,2)(5,1)(0,1)(1,2)"
    assert W("") == ()
    with pytest.raises(ValueError):
        W("(1,1)x")


def test_shape():
    s = word_shape(W("(2,2)(5,1)(0,1)(1,2)"))
    assert (s.tail, s.sign, s.center, s.head) == (1, 1, 2, 1)
    assert tail_len(W("(1,2)(1,2)(1,1)")) == 2
    assert head_len(W("(1,1)(0,2)")) == 1
    for bad in ("(1,2)", "(3,-1)", "(1,1)(1,2)(1,1)", "(1,1)(1,-1)"):
        with pytest.raises(ValueError):
            word_shape(W(bad))
    assert not is_strict(W("(0,2)(1,1)"))
    assert is_strict(W("(1,1)"))


def test_build_ln_examples():
    strict, loose = build_ln(3), build_ln(3, strict=False)
    assert accepts(strict, W("(1,1)"))
    assert not accepts(strict, W("(3,-1)"))
    assert not accepts(strict, W("(0,2)(1,1)"))
    assert accepts(loose, W("(0,2)(1,1)"))
    with pytest.raises(ValueError):
        build_ln(0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_build_ln_matches_shape_predicate(n):
    strict, loose = build_ln(n), build_ln(n, strict=False)
    words = set()
    frontier = [()]
    for _ in range(6):
        frontier = [w + (a,) for w in frontier for a in alphabet(n)]
        words.update(w for w in frontier if word_weight(w) <= 6)
        frontier = [w for w in frontier if word_weight(w) <= 6]
    got_s = {w for (w,) in enumerate_language(strict, 6)}
    got_l = {w for (w,) in enumerate_language(loose, 6)}
    assert got_s == {w for w in words if is_strict(w)}

    def valid(w):
        try:
            word_shape(w)
            return True
        except ValueError:
            return False
    assert got_l == {w for w in words if valid(w)}


def test_psi_examples():
    assert psi(W("(1,1)")) == XElement(P("1"), 0)
    x = psi(W("(2,2)(5,1)(0,1)(1,2)"))
    assert x == XElement(P("2z^-1+5+z^2"), 1)
    assert x_size(x) == word_weight(W("(2,2)(5,1)(0,1)(1,2)")) == 14
    assert psi(W("(3,-1)(0,-1)")) == XElement(P("3z^-1"), -1)
    with pytest.raises(ValueError):
        psi(W("(1,2)"))


def test_psi_inverse_examples():
    assert psi_inverse(XElement(P("1"), 0), 1) == W("(1,1)")
    assert psi_inverse(XElement(P("2z^-1+5+z^2"), 1), 5) == W("(2,2)(5,1)(0,1)(1,2)")
    assert psi_inverse(XElement(LaurentPoly(), -1), 1) == W("(0,-1)(0,-1)")
    with pytest.raises(ValueError):
        psi_inverse(XElement(P("3"), 0), 2)


@given(st.dictionaries(st.integers(-4, 4), st.integers(-3, 3), max_size=5), st.integers(-4, 4))
def test_psi_inverse_round_trip(coeffs, h):
    x = XElement(LaurentPoly(coeffs), h)
    w = psi_inverse(x, 3)
    assert psi(w) == x
    assert is_strict(w)
    assert word_weight(w) == x_size(x)


def test_psi_weight_preserving_small():
    seen = {}
    for (w,) in enumerate_language(build_ln(3), 9):
        x = psi(w)
        assert word_weight(w) == x_size(x)
        assert x not in seen
        seen[x] = w


# ---------------------------------------------------------------- acceptors


@pytest.fixture(scope="module")
def rp3():
    return acceptor_rn_prime(3, 3)


def test_rn_prime_examples(rp3):
    for w in ("(1,1)", "(2,2)(1,1)(-1,2)", "(1,-1)(2,-1)"):
        assert accepts(rp3, W(w), W(w))
    assert accepts(rp3, W("(0,1)(3,1)(0,1)"), W("(1,1)(0,1)(1,1)"))
    assert accepts(rp3, W("(1,1)(0,1)(1,1)"), W("(0,1)(3,1)(0,1)"))
    assert not accepts(rp3, W("(1,1)"), W("(1,1)(0,2)"))
    assert not accepts(rp3, W("(0,1)(3,1)(0,1)"), W("(1,1)(0,1)(2,1)"))


def _same_class(w1, w2, T):
    x1, x2 = psi(w1), psi(w2)
    return x1.height == x2.height and divides_phi(x1.utype - x2.utype, T)


@pytest.mark.parametrize("T", [3, -4])
def test_rn_prime_random_pairs(T):
    rp = acceptor_rn_prime(2, T)
    words = [w for (w,) in enumerate_language(build_ln(2, strict=False), 7)]
    rng = random.Random(T)
    # bias towards congruent pairs: perturb by the modulus where possible
    for _ in range(3000):
        w1, w2 = rng.choice(words), rng.choice(words)
        expect = (_same_class(w1, w2, T) and tail_len(w1) == tail_len(w2)
                  and head_len(w1) == head_len(w2))
        assert accepts(rp, w1, w2) == expect


def test_state_estimate_and_refusal():
    assert acceptor_state_estimate(2, 3) == (2 * 24 + 1) ** 2 * 5 + 1
    with pytest.raises(ResourceLimitError) as info:
        acceptor_rn_prime(165, 3)
    assert info.value.estimate == acceptor_state_estimate(165, 3)


def test_pad_relation():
    e = pad_relation(1, 1)
    w = W("(1,1)")
    q = W("(0,2)")
    assert accepts(e, w, w)
    assert accepts(e, w, q + w)
    assert accepts(e, w, w + q)
    assert accepts(e, w, q + w + q)
    assert not accepts(e, w, q + q + w)
    assert accepts(pad_relation(1, 0), w, w)
    assert not accepts(pad_relation(1, 0), w, q + w)


@pytest.fixture(scope="module")
def r21():
    return acceptor_rni(2, 1, 3)


def _congruent_pairs(n, T, top):
    words = [w for (w,) in enumerate_language(build_ln(n), top)]
    by_key = {}
    for w in words:
        by_key.setdefault(psi(w).height, []).append(w)
    for group in by_key.values():
        for a in group:
            for b in group:
                if _same_class(a, b, T):
                    yield a, b


def test_rni_examples(r21):
    for w in ("(1,1)", "(2,2)(1,1)", "(1,-1)(-2,-1)(1,2)"):
        assert accepts(r21, W(w), W(w))
    a, b = W("(1,1)(-1,1)(1,2)"), W("(0,1)(2,1)")
    assert _same_class(a, b, 3) and head_len(a) - head_len(b) == 1
    assert accepts(r21, a, b) and accepts(r21, b, a)
    found = 0
    for a, b in _congruent_pairs(2, 3, 8):
        gap = max(abs(head_len(a) - head_len(b)), abs(tail_len(a) - tail_len(b)))
        assert accepts(r21, a, b) == (gap <= 1)
        found += gap == 2
    assert found > 0


def test_rni_symmetric(r21):
    words = [w for (w,) in enumerate_language(build_ln(2), 6)]
    rng = random.Random(5)
    for _ in range(2000):
        a, b = rng.choice(words), rng.choice(words)
        assert accepts(r21, a, b) == accepts(r21, b, a)


# ---------------------------------------------------------------- divergence and shrinking


def test_divergence_examples():
    w = W("(2,2)(5,1)(0,1)(1,2)")
    assert divergence(w, w) == 0
    assert divergence(P("3"), P("1")) == 2
    assert divergence(W("(0,1)(3,1)(0,1)"), W("(1,1)(0,1)(1,1)")) == 2


@given(st.dictionaries(st.integers(-4, 4), st.integers(-5, 5), max_size=5),
       st.dictionaries(st.integers(-4, 4), st.integers(-5, 5), max_size=5))
def test_divergence_symmetric(c1, c2):
    p1, p2 = LaurentPoly(c1), LaurentPoly(c2)
    assert divergence(p1, p2) == divergence(p2, p1)
    assert divergence(p1, p1) == 0


def test_shrink_examples():
    c = sol_constants(3)
    assert shrink_representative(W("(1,1)"), c) == W("(1,1)")
    out = shrink_representative(W("(15,1)"), c)
    assert psi(out) == XElement(P("5z^-1+5z"), 0)
    assert word_weight(out) == 15
    assert shrink_step(W("(7,1)"), c) == (W("(7,1)"), None)
    with pytest.raises(ValueError):
        shrink_step(W("(1,1)"))


def _non_minimal(T, count):
    """Elements with small coefficients whose class holds something smaller."""
    out = []
    for d0 in range(-1, 2):
        for cs in ((2, 0, 2), (3, 3, 0), (1, 4, 1), (4, 0, 0), (0, 5, 0), (2, 4, 2), (6, 1, 0)):
            for h in (0, 1, -1):
                x = XElement(LaurentPoly({d0 + j: c for j, c in enumerate(cs)}), h)
                if min_size_over_class(x, T) < x_size(x):
                    out.append(x)
                if len(out) == count:
                    return out
    return out


@pytest.mark.parametrize("T", [3, -3])
def test_shrink_partner_move(T):
    c = sol_constants(T)
    cases = _non_minimal(T, 6)
    assert cases
    for x in cases:
        w = psi_inverse(x, c.n)
        out, move = shrink_step(w, c)
        assert move == "partner"
        assert word_weight(out) < word_weight(w)
        assert _same_class(out, w, T)
        assert divergence(out, w) <= c.K


# ---------------------------------------------------------------- pipeline


def test_pipeline_theorem_scale_refused():
    with pytest.raises(ResourceLimitError) as info:
        sol_pipeline(3)
    d = info.value.to_dict()
    assert d["error"] == "resource_limit"
    assert d["estimate"] == acceptor_state_estimate(165, 3)


def test_pipeline_reduced_scale_reports_limit():
    # the short-lex projection outgrows small budgets even for n = 1
    with pytest.raises(ResourceLimitError) as info:
        sol_pipeline(3, n=1, K=1, i=0, max_states=50_000)
    assert info.value.limit == 50_000
    assert "n=1" in str(info.value)


def test_pipeline_bad_overrides():
    with pytest.raises(ValueError):
        sol_pipeline(3, n=0, K=1, i=0)
    with pytest.raises(ValueError):
        sol_pipeline(2, n=1, K=1, i=0)


@pytest.mark.xfail(run=False, strict=True,
                   reason="the projections' subset constructions exceed memory at this size; "
                          "see the decisions ledger")
def test_pipeline_toy_override_completes():
    res = sol_pipeline(3, n=2, K=2, i=1, max_states=None)
    assert not res.theorem_scale
    for (w,) in enumerate_language(res.cross_section, 8):
        assert word_weight(w) == min_size_over_class(psi(w), 3)
