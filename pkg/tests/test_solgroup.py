import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from solgrowth.laurent import LaurentPoly, XElement, parse_poly
from solgrowth.solgroup import (IDENTITY, GroupElement, GroupParams, compose, equal_words,
                                eval_word, geodesic_length, geodesic_word, invert, parse_word,
                                to_group_element, word_element)

P = parse_poly
words = st.text(alphabet="aAtT", max_size=12)


def test_params_validation():
    GroupParams(3)
    GroupParams(-4)
    for bad in (0, 2, -2, 1):
        with pytest.raises(ValueError):
            GroupParams(bad)


def test_parse_word_variants():
    assert parse_word("t a t⁻¹") == "taT"
    assert parse_word("t^-1 a") == "Ta"
    with pytest.raises(ValueError):
        parse_word("ab")


def test_eval_examples():
    assert eval_word("") == XElement(LaurentPoly(), 0)
    assert eval_word("taT") == XElement(P("z"), 0)
    assert eval_word(parse_word("t⁻¹ a t a a t")) == XElement(P("z^-1+2"), 1)


def test_to_group_element_examples():
    assert to_group_element(XElement(P("1"), 0), 3) == GroupElement((1, 0), 0)
    assert to_group_element(XElement(P("z"), 0), 3) == GroupElement((0, 1), 0)
    assert to_group_element(XElement(P("z^2"), 0), 3) == GroupElement((-1, 3), 0)


def test_compose_examples():
    a = word_element("a", 3)
    t = word_element("t", 3)
    assert compose(a, a, 3) == GroupElement((2, 0), 0)
    assert compose(t, a, 3) == GroupElement((0, 1), 1) == word_element("ta", 3)
    g = GroupElement((7, -2), 5)
    assert compose(g, invert(g, 3), 3) == IDENTITY
    assert compose(invert(g, 3), g, 3) == IDENTITY


def test_equal_examples():
    assert equal_words("taTa", "taTa", 3)
    assert equal_words(parse_word("t t a t⁻¹ t⁻¹"), parse_word("a⁻¹ t a a a t⁻¹"), 3)
    assert not equal_words("a", "t", 3)


@given(words, words)
def test_cocycle(u, v):
    xu, xv, xuv = eval_word(u), eval_word(v), eval_word(u + v)
    assert xuv.height == xu.height + xv.height
    assert xuv.utype == xu.utype + xv.utype.shift(xu.height)


@given(words, words, st.sampled_from([3, -3, 4, 5]))
def test_homomorphism(u, v, T):
    assert word_element(u + v, T) == compose(word_element(u, T), word_element(v, T), T)


@given(words, st.sampled_from([3, -3, 4, 5]))
def test_inverse_word(u, T):
    inv = "".join({"a": "A", "A": "a", "t": "T", "T": "t"}[c] for c in reversed(u))
    assert word_element(inv, T) == invert(word_element(u, T), T)


def test_geodesic_examples():
    assert geodesic_length(XElement(LaurentPoly(), 0)) == 0
    assert geodesic_length(XElement(P("1"), 0)) == 1
    assert geodesic_length(XElement(P("z^-1+2"), 1)) == 6
    assert geodesic_word(XElement(P("1"), 0)) == "a"
    assert geodesic_word(XElement(P("z^-1+2"), 1)) == "Tataat"
    assert geodesic_word(XElement(P("z^-1"), -1)) == "Ta"


@given(st.dictionaries(st.integers(-5, 5), st.integers(-4, 4), max_size=6), st.integers(-5, 5))
def test_geodesic_word_round_trip(coeffs, h):
    x = XElement(LaurentPoly(coeffs), h)
    w = geodesic_word(x)
    assert eval_word(w) == x
    assert len(w) == geodesic_length(x)


def test_geodesic_optimal_short_words():
    # exhaustive to length 6 here; the acceptance suite goes to 9
    best = {}
    for n in range(7):
        for w in itertools.product("aAtT", repeat=n):
            x = eval_word("".join(w))
            best.setdefault(x, n)
    for x, n in best.items():
        assert geodesic_length(x) == n


def test_equality_matches_matrices_sample():
    rng = random.Random(7)
    for _ in range(500):
        T = rng.choice([3, -3, 4, 5])
        u = "".join(rng.choice("aAtT") for _ in range(rng.randint(0, 8)))
        v = "".join(rng.choice("aAtT") for _ in range(rng.randint(0, 8)))
        assert equal_words(u, v, T) == (word_element(u, T) == word_element(v, T))
