"""Shared fixtures and brute-force oracles for the test suite."""

from __future__ import annotations

import random
from itertools import product

from hypothesis import strategies as st

from fnfm.endo import EndoSpec, PairElement, make_type_I, make_type_VI, make_type_VII, validate_and_classify
from fnfm.freeword import Alphabet, FreeHom, FreeWord, reduce, words_up_to

A2 = Alphabet(2, "a")
B2 = Alphabet(2, "b")
SAMPLES = __import__("pathlib").Path(__file__).resolve().parent.parent / "samples"


def w(alpha: Alphabet, *letters: int) -> FreeWord:
    return reduce(letters, alpha)


def pair(x: FreeWord, y: FreeWord) -> PairElement:
    return PairElement(x, y)


def hom(dom: Alphabet, cod: Alphabet, *images) -> FreeHom:
    return FreeHom(dom, cod, [w(cod, *img) for img in images])


def random_word(rng: random.Random, alpha: Alphabet, maxlen: int) -> FreeWord:
    n = rng.randint(0, maxlen)
    return reduce([rng.choice(alpha.letters()) for _ in range(n)], alpha)


def words(alpha: Alphabet, max_size: int = 8):
    """Hypothesis strategy for reduced words over ``alpha``."""
    return st.lists(st.sampled_from(alpha.letters()), max_size=max_size).map(lambda ls: reduce(ls, alpha))


def pairs_up_to(A: Alphabet, B: Alphabet, length: int):
    xs, ys = list(words_up_to(A, length)), list(words_up_to(B, length))
    for x, y in product(xs, ys):
        yield PairElement(x, y)


def power_pairs(u: FreeWord, v: FreeWord, bound: int):
    for a, b in product(range(-bound, bound + 1), repeat=2):
        yield (a, b), PairElement(u ** a, v ** b)


# --- one fixture per type ------------------------------------------------------------

def spec(images_a, images_b) -> EndoSpec:
    """Letter-tuple images over F2 x F2."""
    return EndoSpec.create(2, 2, images_a, images_b)


def type_I():
    return validate_and_classify(make_type_I(w(A2, 1), w(B2, 1), (2, 1), (1, 1), (-1, 0), (0, 1)))


def type_II():
    return validate_and_classify(spec([((), (1,)), ((), ())], [((1,), (1,)), ((2,), ())]))


def type_III_nonfg():
    return validate_and_classify(spec([((1,), ()), ((), ())], [((1,), (1,)), ((-1,), (2,))]))


def type_III(uP: int, R, phi: FreeHom | None = None):
    """a1 -> (a1^uP, 1), a2 -> 1, b_j -> (a1^R_j, phi(b_j))."""
    phi = phi or FreeHom.identity(B2)
    return validate_and_classify(EndoSpec(A2, B2, [pair(w(A2, 1) ** uP, B2.identity()), pair(A2.identity(), B2.identity())],
                                          [pair(w(A2, 1) ** r, phi(g)) for r, g in zip(R, B2.generators())]))


def type_IV():
    return validate_and_classify(spec([((), ()), ((), ())], [((1,), (1, 1)), ((2,), (2,))]))


def type_V():
    return validate_and_classify(spec([((), (1,)), ((), ())], [((), (1,)), ((), ())]))


def type_VI(phi: FreeHom | None = None, psi: FreeHom | None = None):
    return validate_and_classify(make_type_VI(phi or FreeHom.identity(A2), psi or FreeHom.identity(B2)))


def swap():
    return validate_and_classify(make_type_VII(FreeHom.relabel(A2, B2), FreeHom.relabel(B2, A2)))


def type_VII(phi: FreeHom, psi: FreeHom):
    return validate_and_classify(make_type_VII(phi, psi))


def all_type_fixtures():
    return {"I": type_I(), "II": type_II(), "III": type_III_nonfg(), "IV": type_IV(), "V": type_V(),
            "VI": type_VI(), "VII": swap()}


def type_I_fixtures(count: int = 20, seed: int = 7):
    """Deterministic random Type I endos over u = a1, v = b1 (no zero weight vector)."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        P, Q, R, S = ([rng.randint(-2, 2) for _ in range(2)] for _ in range(4))
        if not (any(P) and any(Q) and any(R) and any(S)):
            continue
        e = validate_and_classify(make_type_I(w(A2, 1), w(B2, 1), P, Q, R, S))
        assert e.etype.value == "I"
        out.append(e)
    return out


# Nielsen automorphisms of F2 used as components
NIELSEN_A = hom(A2, A2, (1, 2), (2,))
NIELSEN_B = hom(B2, B2, (1, 2), (2,))
