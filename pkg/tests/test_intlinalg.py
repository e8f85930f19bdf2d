import random
from itertools import product

from hypothesis import given, strategies as st

from fnfm.intlinalg import (Lattice, identity, kernel_basis, matpow, matvec, periodic_lattice, solve_diophantine,
                            vector_period)


def test_kernel_examples():
    assert kernel_basis([[1, -1], [1, -1]]) == Lattice.spanned_by(2, [(1, 1)])
    assert kernel_basis(identity(2)).rank == 0
    assert kernel_basis([[0, 0], [0, 0]]) == Lattice.full(2)


def test_solve_examples():
    x0, _ = solve_diophantine([[1, 2]], [3])
    assert x0[0] + 2 * x0[1] == 3
    assert solve_diophantine([[2, 4]], [3]) is None
    x0, kern = solve_diophantine([[0, 0]], [0])
    assert x0 == (0, 0) and kern == Lattice.full(2)


def test_periodic_examples():
    assert periodic_lattice([[0, 1], [1, 0]]) == Lattice.full(2)
    assert periodic_lattice([[2, 0], [0, 1]]) == Lattice.spanned_by(2, [(0, 1)])
    assert periodic_lattice([[2, 0], [0, 2]]).rank == 0
    assert vector_period([[0, 1], [1, 0]], (1, 0)) == 2
    assert vector_period([[2, 0], [0, 1]], (1, 0)) is None


def test_lattice_equality_is_subgroup_equality():
    assert Lattice.spanned_by(2, [(2, 0), (0, 3), (2, 3)]) == Lattice.spanned_by(2, [(2, 3), (0, 3)])
    assert (4, 6) in Lattice.spanned_by(2, [(2, 3)])
    assert (1, 0) not in Lattice.spanned_by(2, [(2, 0)])


def _matrices(count, seed, shape=(2, 2), lo=-3, hi=3):
    rng = random.Random(seed)
    r, c = shape
    return [[[rng.randint(lo, hi) for _ in range(c)] for _ in range(r)] for _ in range(count)]


def test_kernel_complete_in_box():
    for M in _matrices(60, 1) + [[[1, -1], [1, -1]], [[0, 0], [0, 0]], [[2, 4], [1, 2]]]:
        K = kernel_basis(M)
        for v in K.basis:
            assert matvec(M, v) == [0, 0]
        for v in product(range(-10, 11), repeat=2):
            assert (matvec(M, v) == [0, 0]) == (v in K)


def test_solve_sound_and_complete():
    rng = random.Random(2)
    for A in _matrices(40, 3, shape=(1, 3)) + _matrices(40, 4, shape=(2, 3)):
        b = [rng.randint(-4, 4) for _ in A]
        res = solve_diophantine(A, b)
        if res is None:
            assert not any(matvec(A, x) == b for x in product(range(-15, 16), repeat=3))
        else:
            x0, kern = res
            assert matvec(A, x0) == b
            for v in kern.basis:
                x = [p + 2 * q for p, q in zip(x0, v)]
                assert matvec(A, x) == b


@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_periodic_lattice_brute_force(entries):
    M = [entries[:2], entries[2:]]
    per = periodic_lattice(M)
    powers = [matpow(M, k) for k in range(1, 13)]
    for v in product(range(-8, 9), repeat=2):
        brute = any(matvec(P, v) == list(v) for P in powers)
        assert brute == (v in per)
