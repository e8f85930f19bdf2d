from itertools import product

import pytest
from hypothesis import given, strategies as st

from fnfm.freeword import (AllIntegers, AlphabetMismatch, FreeHom, commutes, commutes_by_roots,
                           content_gcd, exponent_vector, kth_root, power_exponents, primitive_root, reduce,
                           weighted_sum, words_up_to)
from helpers import A2, B2, w, words


def test_reduce_examples():
    assert reduce([1, -1, 2], A2) == w(A2, 2)
    assert reduce([], A2).is_identity()
    assert reduce([1, 2, -2, 1], A2) == w(A2, 1, 1)


def test_word_printing():
    assert str(w(A2, 1, -2, 1)) == "a1 a2^-1 a1"
    assert str(A2.identity()) == "1"


def test_mixed_alphabets_rejected():
    with pytest.raises(AlphabetMismatch):
        w(A2, 1) * w(B2, 1)


def test_primitive_root_examples():
    assert primitive_root(w(A2, 1, 2, 1, 2)) == (w(A2, 1, 2), 2)
    assert primitive_root(w(A2, 1)) == (w(A2, 1), 1)
    assert primitive_root(w(A2, 1, 2, 2, -1)) == (w(A2, 1, 2, -1), 2)


def test_power_exponents_examples():
    assert power_exponents(w(A2, *[1] * 6)) == {1, -1, 2, -2, 3, -3, 6, -6}
    assert power_exponents(A2.identity()) is AllIntegers
    assert power_exponents(w(A2, 1, 2)) == {1, -1}


def test_kth_root():
    assert kth_root(w(A2, 1, 2, 1, 2), 2) == w(A2, 1, 2)
    assert kth_root(w(A2, 1, 2, 1, 2), -2) == w(A2, -2, -1)
    assert kth_root(w(A2, 1, 2), 2) is None


def test_commutes_examples():
    assert commutes(w(A2, 1), w(A2, 1, 1))
    assert not commutes(w(A2, 1), w(A2, 2))
    assert commutes(w(A2, 1, 2, 1, 2), w(A2, 1, 2))


def test_exponent_vector_examples():
    assert exponent_vector(w(A2, 1, -2, 1)) == (2, -1)
    assert exponent_vector(A2.identity()) == (0, 0)
    assert exponent_vector(w(A2, 1, 2, -1)) == (0, 1)
    assert content_gcd(w(A2, 1, 1, 2, 2)) == 2


def test_weighted_sum_examples():
    assert weighted_sum(w(A2, 1), (2, 1)) == 2
    assert weighted_sum(w(A2, 1, -2), (1, 1)) == 0
    assert weighted_sum(w(A2, 1, 1, 2), (3, -1)) == 5


def test_freehom_right_action():
    f = FreeHom(A2, A2, [w(A2, 1, 2), w(A2, 2)])
    g = FreeHom(A2, A2, [w(A2, 2), w(A2, 1)])
    x = w(A2, 1)
    assert f.then(g)(x) == g(f(x))
    assert f.power(3)(x) == f(f(f(x)))
    assert FreeHom.identity(A2).is_identity()
    assert FreeHom.trivial(A2, B2).is_trivial()
    assert g.letter_permutation() == {1: 2, 2: 1, -1: -2, -2: -1}


@given(words(A2, 12))
def test_reduce_idempotent_and_cancels(x):
    assert reduce(x.letters, A2) == x
    assert (x * x.inverse()).is_identity()


@given(st.lists(st.sampled_from(A2.letters()), max_size=12))
def test_reduce_never_lengthens(letters):
    assert len(reduce(letters, A2)) <= len(letters)


def test_primitive_root_reconstructs_exhaustive():
    for x in words_up_to(A2, 10):
        if x.is_identity():
            continue
        r, k = primitive_root(x)
        assert r ** k == x
        assert k >= 1 and primitive_root(r) == (r, 1)


def test_commutes_two_ways_exhaustive():
    ws = list(words_up_to(A2, 6))
    small = [x for x in ws if len(x) <= 3]
    for x, z in product(small, ws):
        assert commutes(x, z) == commutes_by_roots(x, z)


@given(words(A2), words(A2))
def test_exponent_vector_additive(x, y):
    ex, ey = exponent_vector(x), exponent_vector(y)
    assert exponent_vector(x * y) == tuple(a + b for a, b in zip(ex, ey))


def test_power_exponents_brute_force():
    """Enumerate alpha^k for all alpha, |alpha| <= 8 (a root is never longer than
    its power) and compare with power_exponents on every word of length <= 8."""
    found: dict = {}
    for a in words_up_to(A2, 8):
        if a.is_identity():
            continue
        for sign in (1, -1):
            k = 1
            while len(a ** k) <= 8:
                found.setdefault(a ** (sign * k), set()).add(sign * k)
                k += 1
    for x in words_up_to(A2, 8):
        if not x.is_identity():
            assert power_exponents(x) == found[x]
