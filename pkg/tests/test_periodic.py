import random

import pytest
from hypothesis import given, strategies as st

from fnfm.endo import make_type_I, validate_and_classify
from fnfm.fixed import OracleMismatch, SubgroupBasisInput, Verdict
from fnfm.freeword import FreeHom, weighted_sum, words_up_to
from fnfm.periodic import (PeriodBoundExceeded, bounded_period, component_per_basis, geometric_weight,
                           periodic_subgroup, type3_per_criterion)
from helpers import (A2, B2, NIELSEN_B, hom, pair, pairs_up_to, power_pairs, spec, swap, type_I_fixtures, type_III,
                     type_VI, type_VII, w)


def brute_period(e, g, limit, cap=2000):
    """Least k <= limit with e^k(g) = g.  Orbits of periodic points in these
    fixtures stay short, so an orbit longer than ``cap`` letters is abandoned."""
    cur = g
    for k in range(1, limit + 1):
        cur = e(cur)
        if cur == g:
            return k
        if len(cur) > cap:
            return None
    return None


def test_type_I_swap_matrix():
    e = validate_and_classify(make_type_I(w(A2, 1), w(B2, 1), (0, 1), (1, 0), (1, 0), (0, 1)))
    r = periodic_subgroup(e)
    assert r.verdict is Verdict.LATTICE and r.period_bound == 12
    assert set(r.per_period_data) <= {1, 2}
    g = pair(w(A2, 1), w(B2, -1))
    assert r.contains(g) and e.iterate(g, 2) == g


def test_type_V_minus_one():
    e = validate_and_classify(spec([((), (-1,)), ((), ())], [((), (-1,)), ((), ())]))
    r = periodic_subgroup(e)
    assert r.verdict is Verdict.INFINITE_CYCLIC
    assert r.generators == [pair(A2.identity(), w(B2, 1))]
    assert r.per_period_data == {2: [pair(A2.identity(), w(B2, 1))]}


def test_swap_is_all_periodic():
    r = periodic_subgroup(swap())
    assert r.verdict is Verdict.FIN_GEN
    assert all(r.contains(g) for g in pairs_up_to(A2, B2, 2))
    assert r.odd_period_points == [pair(w(A2, 1), w(B2, 1)), pair(w(A2, 2), w(B2, 2))]


def test_type_III_expanding_point():
    e = type_III(2, (3, 0))
    assert e(pair(w(A2, 1) ** -3, w(B2, 1))) == pair(w(A2, 1) ** -3, w(B2, 1))
    assert periodic_subgroup(e).contains(pair(w(A2, 1) ** -3, w(B2, 1)))


def test_bounded_period_examples():
    sw = hom(B2, B2, (2,), (1,))
    assert bounded_period(sw, w(B2, 1), 10) == 2
    assert bounded_period(sw, w(B2, 1, 2), 10) == 2
    assert bounded_period(FreeHom.identity(B2), w(B2, 1, -2, 1), 10) == 1
    assert bounded_period(NIELSEN_B, w(B2, 1), 10) is None


def test_criterion_examples():
    assert type3_per_criterion(2, (3, 0), [w(B2, 1)]) == -3
    assert type3_per_criterion(3, (0, 0), [w(B2, 1)]) == 0
    # orbit values 2 then 1: sum 2*2 + 1 = 5, 1 - 4 = -3 does not divide it
    sw = hom(B2, B2, (2,), (1,))
    assert type3_per_criterion(2, (2, 1), [w(B2, 1), w(B2, 2)], sw) is None
    with pytest.raises(ValueError):
        type3_per_criterion(1, (1, 0), [w(B2, 1)])


def test_component_basis_checks():
    with pytest.raises(OracleMismatch):
        component_per_basis(NIELSEN_B, SubgroupBasisInput(B2, (w(B2, 1),)), 20)
    basis, L = component_per_basis(hom(B2, B2, (2,), (1,)), None)
    assert L == 2 and basis == B2.generators()
    with pytest.raises(PeriodBoundExceeded):
        # a letter permutation whose auto basis cannot close within the limit
        component_per_basis(hom(B2, B2, (2,), (1,)), None, 1)


def _fixtures():
    sw = hom(B2, B2, (2,), (1,))
    neg = hom(B2, B2, (-1,), (2,))
    yield type_III(2, (3, 0)), None
    yield type_III(2, (2, 1), sw), None
    yield type_III(-2, (1, 1), sw), None
    yield type_III(1, (1, -1)), None
    yield type_III(1, (1, 0), sw), None
    yield type_III(-1, (1, 2)), None
    yield type_III(-1, (1, 0), sw), None
    yield type_III(3, (1, 0), neg), None
    yield type_VI(hom(A2, A2, (2,), (1,)), sw), None
    yield type_VI(hom(A2, A2, (1, 2), (2,)), FreeHom.trivial(B2, B2)), \
        {"phi": SubgroupBasisInput(A2, (w(A2, 2), w(A2, 1, 2, -1)))}
    yield validate_and_classify(spec([((), ()), ((), ())], [((1,), (2,)), ((1, 1), (1,))])), None
    yield validate_and_classify(spec([((), (1,)), ((), ())], [((1,), (1,)), ((1, 1), (-1,))])), None
    yield validate_and_classify(spec([((), (1,)), ((), (1,))], [((1,), (-1,)), ((1, 1), ())])), None
    yield type_VII(hom(A2, B2, (1, 2), (2,)), FreeHom.relabel(B2, A2)), \
        {"phipsi": SubgroupBasisInput(A2, (w(A2, 2), w(A2, 1, 2, -1)))}


def test_certificates_have_stated_periods():
    for e, oracle in _fixtures():
        r = periodic_subgroup(e, oracle)
        assert r.verdict.decided
        for k, gens in r.per_period_data.items():
            for g in gens:
                assert brute_period(e, g, k) == k


def test_membership_matches_brute_force():
    for e, oracle in _fixtures():
        r = periodic_subgroup(e, oracle)
        bound = max(r.period_bound, 1)
        for g in pairs_up_to(A2, B2, 2):
            assert r.contains(g) == (brute_period(e, g, bound) is not None), (e.describe(), g)
        for a in range(-8, 9):
            for y in words_up_to(B2, 3):
                g = pair(w(A2, 1) ** a, y)
                assert r.contains(g) == (brute_period(e, g, bound) is not None), (e.describe(), g)


def test_type_I_lattice_against_brute_force():
    for e in type_I_fixtures(20, seed=9):
        r = periodic_subgroup(e)
        for _, g in power_pairs(e.u, e.v, 8):
            assert r.contains(g) == (brute_period(e, g, 12) is not None)


def test_type_VII_odd_even_split():
    e = type_VII(hom(A2, B2, (1, 2), (2,)), FreeHom.relabel(B2, A2))
    r = periodic_subgroup(e, {"phipsi": SubgroupBasisInput(A2, (w(A2, 2), w(A2, 1, 2, -1)))})
    for g in r.odd_period_points:
        assert brute_period(e, g, 6) % 2 == 1
    odd = even = 0
    for g in pairs_up_to(A2, B2, 4):
        k = brute_period(e, g, 6)
        assert r.contains(g) == (k is not None)
        if k is not None:
            odd, even = odd + k % 2, even + (k % 2 == 0)
    assert odd and even


@given(st.sampled_from([-5, -4, -3, -2, 2, 3, 4, 5]), st.integers(1, 4), st.integers(1, 4),
       st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_geometric_series_identity(uP, pi, s, values):
    v = values[:pi]
    lhs = sum((v * s)[t] * uP ** (s * pi - t - 1) for t in range(s * pi))
    inner = sum(v[t] * uP ** (pi - t - 1) for t in range(pi))
    num, den = 1 - uP ** (s * pi), 1 - uP ** pi
    assert lhs * den == num * inner
    # divisibility does not depend on how many times the orbit is traversed
    assert (lhs % (1 - uP ** (s * pi)) == 0) == (inner % den == 0)


def test_geometric_weight_matches_iteration():
    rng = random.Random(4)
    sw = hom(B2, B2, (2,), (1,))
    for _ in range(20):
        uP, R = rng.choice([-3, -2, -1, 1, 2, 3]), (rng.randint(-3, 3), rng.randint(-3, 3))
        e = type_III(uP, R, sw)
        for y in words_up_to(B2, 3):
            x = pair(A2.identity(), y)
            RN = geometric_weight(uP, R, sw, 4)
            assert e.iterate(x, 4).x == w(A2, 1) ** weighted_sum(y, RN)
