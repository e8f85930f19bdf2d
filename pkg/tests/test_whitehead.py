import random

from hypothesis import given, settings

from fnfm.endo import EndoType, PairElement
from fnfm.freeword import content_gcd, exponent_vector, power_exponents, primitive_root
from fnfm.whitehead import (Answer, compose_all, hom_exists_bounded, hom_obstruction, is_primitive,
                            minimize_whitehead, orbit_representative, whp_auto_free, whp_product)
from helpers import A2, B2, pair, random_word, w, words


def test_minimize_examples():
    assert minimize_whitehead(w(A2, 1, 2, -1))[0] in (w(A2, 1), w(A2, 2), w(A2, -1), w(A2, -2))
    assert minimize_whitehead(w(A2, 1)) == (w(A2, 1), ())
    assert minimize_whitehead(w(A2, 1, 1))[0] == w(A2, 1, 1)


def test_auto_free_examples():
    v = whp_auto_free(w(A2, 1), w(A2, 2))
    assert v.answer is Answer.YES and v.certificate(w(A2, 1)) == w(A2, 2)
    v = whp_auto_free(w(A2, 1), w(A2, 1, 2))
    assert v.answer is Answer.YES and v.certificate(w(A2, 1)) == w(A2, 1, 2)
    assert whp_auto_free(w(A2, 1), w(A2, 1, 1)).answer is Answer.NO
    assert str(whp_auto_free(w(A2, 1), w(A2, 1, 1))) == "No"


def test_hom_examples():
    v = hom_exists_bounded(w(A2, 1), w(B2, 1, 2, -1, 1))
    assert v.answer is Answer.YES and v.certificate(w(A2, 1)) == w(B2, 1, 2, -1, 1)
    assert hom_exists_bounded(w(A2, 1, 1), w(B2, 1)).answer is Answer.NO
    assert hom_exists_bounded(w(A2, 1, 2, -1, -2), w(B2, 1)).answer is Answer.NO


def test_product_examples():
    src, tgt = pair(w(A2, 1), w(B2, 1)), pair(w(A2, 1, 1), w(B2, 1, 1, 1))
    v = whp_product(src, tgt, "e")
    assert v.answer is Answer.YES and v.certificate.etype is EndoType.I
    assert v.certificate(src) == tgt
    v = whp_product(pair(w(A2, 1), B2.identity()), pair(w(A2, 2), B2.identity()), "a")
    assert v.answer is Answer.YES and v.certificate.etype is EndoType.VI
    v = whp_product(pair(w(A2, 1), B2.identity()), pair(w(A2, 1, 1), B2.identity()), "a")
    assert v.answer is Answer.NO
    assert [s for s, _ in v.detail["stages"]] == ["Aut6", "Aut7"]


def test_variant_m_rejects_non_injective_targets():
    # a1 -> 1 is impossible for an injective map, and (a1, b1) -> (1, 1) cannot be reached
    v = whp_product(pair(w(A2, 1), w(B2, 1)), pair(A2.identity(), B2.identity()), "m")
    assert v.answer is Answer.NO


def test_unknown_is_reported_with_bound():
    # commutator to a long commutator-subgroup element: obstructions pass, search bound is tiny
    v = hom_exists_bounded(w(A2, 1, 2, -1, -2), w(B2, 1, 1, 2, -1, -1, -2), bound=2)
    assert v.answer is Answer.UNKNOWN and str(v) == "Unknown(bound=2)"
    assert hom_exists_bounded(w(A2, 1, 2, -1, -2), w(B2, 1, 1, 2, -1, -1, -2), bound=4).answer is Answer.YES


def test_type_I_stage_runs_first():
    # (a1, b1) -> (a1^2, b1^3) is reachable by Type I and also by Type VI (a1 -> a1^2, b1 -> b1^3)
    v = whp_product(pair(w(A2, 1), w(B2, 1)), pair(w(A2, 1, 1), w(B2, 1, 1, 1)), "e")
    assert v.detail["stages"][0] == ("type I", "Yes") and v.path == "type I"


@settings(max_examples=60)
@given(words(A2, 6), words(A2, 6))
def test_auto_free_symmetric(u, v):
    a, b = whp_auto_free(u, v), whp_auto_free(v, u)
    assert a.answer == b.answer
    if a.answer is Answer.YES:
        assert a.certificate(u) == v and b.certificate(v) == u


@given(words(A2, 10))
def test_minimize_replays(x):
    m, moves = minimize_whitehead(x)
    assert len(m) <= len(x)
    assert compose_all(A2, moves)(x) == m
    assert orbit_representative(x) == orbit_representative(m)


def test_obstruction_soundness():
    rng = random.Random(8)
    fired = 0
    for _ in range(400):
        u, v = random_word(rng, A2, 5), random_word(rng, B2, 5)
        reason = hom_obstruction(u, v)
        if reason is None:
            continue
        fired += 1
        g, ev = content_gcd(u), exponent_vector(v)
        if u.is_identity():
            assert not v.is_identity()
        elif g == 0 and any(ev):
            assert "commutator" in reason
        elif g and any(x % g for x in ev):
            assert "gcd" in reason
        else:
            assert primitive_root(u)[1] not in power_exponents(v)
    assert fired > 50


def test_primitive():
    assert is_primitive(w(A2, 1, 2, 1, 2, 2))
    assert not is_primitive(w(A2, 1, 2, -1, -2))


def test_yes_certificates_on_random_products():
    rng = random.Random(12)
    for _ in range(15):
        src = PairElement(random_word(rng, A2, 3), random_word(rng, B2, 3))
        tgt = PairElement(random_word(rng, A2, 3), random_word(rng, B2, 3))
        for variant in "aem":
            v = whp_product(src, tgt, variant, bound=4)
            if v.answer is Answer.YES:
                assert v.certificate(src) == tgt
