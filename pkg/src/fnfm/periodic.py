"""Periodic subgroups Per(e) of endomorphisms of Fn x Fm, with period bounds.

``period_bound`` is a common period: every periodic point g satisfies
e^period_bound(g) = g.  Generators are grouped by their exact period in
``per_period_data``.  Free-group component maps need a basis of their periodic
subgroup, supplied as an oracle exactly as for fixed subgroups, unless the map
is the identity, trivial, or a signed letter permutation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm
from typing import Callable, Sequence

from . import stallings
from .endo import EndoType, PairElement, ProductEndo
from .fixed import (Oracle, OracleMismatch, OracleRequired, SubgroupBasisInput, Verdict,
                    _oracle_for, power_index, type3_kernel_parts)
from .freeword import FreeHom, FreeWord, primitive_root, weighted_sum
from .intlinalg import PERIOD_EXPONENT, periodic_lattice

# how far oracle words are iterated when checking they are periodic
DEFAULT_PERIOD_LIMIT = 64


class PeriodBoundExceeded(RuntimeError):
    def __init__(self, limit: int, what: str = ""):
        self.limit = limit
        super().__init__(f"no period found up to {limit}" + (f" for {what}" if what else ""))


@dataclass
class PerReport:
    etype: EndoType
    verdict: Verdict
    generators: list[PairElement]
    period_bound: int | None
    per_period_data: dict[int, list[PairElement]]
    structure_note: str
    membership: Callable[[PairElement], bool] = field(repr=False)
    witness: dict | None = None
    swapped: bool = False
    odd_period_points: list[PairElement] = field(default_factory=list)

    def contains(self, g: PairElement) -> bool:
        return self.membership(g)


def bounded_period(h: FreeHom, y: FreeWord, limit: int) -> int | None:
    """Least k <= limit with h^k(y) = y, or None."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    w = y
    for k in range(1, limit + 1):
        w = h(w)
        if w == y:
            return k
    return None


def auto_per_basis(h: FreeHom) -> list[FreeWord] | None:
    if h.domain != h.codomain:
        return None
    if h.is_trivial():
        return []
    if h.is_identity() or h.letter_permutation() is not None:
        return h.domain.generators()
    return None


def component_per_basis(h: FreeHom, supplied: SubgroupBasisInput | None,
                        limit: int = DEFAULT_PERIOD_LIMIT) -> tuple[list[FreeWord], int] | None:
    """(basis of Per(h), common period L), or None when no basis is available.

    L is the lcm of the basis periods, so h^L fixes all of Per(h).
    """
    if supplied is not None:
        if supplied.alphabet != h.domain:
            raise OracleMismatch("oracle basis is over the wrong alphabet")
        basis = list(supplied.words)
    else:
        basis = auto_per_basis(h)
        if basis is None:
            return None
    L = 1
    for y in basis:
        k = bounded_period(h, y, limit)
        if k is None:
            if supplied is not None:
                raise OracleMismatch(f"oracle word {y} has no period up to {limit}")
            raise PeriodBoundExceeded(limit, str(y))
        L = lcm(L, k)
    return basis, L


def type3_per_criterion(uP: int, R: Sequence[int], orbit: Sequence[FreeWord],
                        component: FreeHom | None = None) -> int | None:
    """Exponent a making (u^a, w) periodic, w = orbit[0] of period len(orbit).

    After one pass around the orbit the exponent moves by
    a -> uP^pi * a + sum_t (w phi^t)^R * uP^(pi-t-1), so the point returns
    exactly when a = sum / (1 - uP^pi).  Returns None when that is not an
    integer.  If ``component`` is given the orbit is checked to close.
    """
    if abs(uP) == 1:
        raise ValueError("criterion needs |u^P| != 1")
    if not orbit:
        raise ValueError("empty orbit")
    if component is not None:
        for s, t in zip(orbit, list(orbit[1:]) + [orbit[0]]):
            if component(s) != t:
                raise ValueError("orbit does not close under the component map")
    pi = len(orbit)
    total = sum(weighted_sum(w, R) * uP ** (pi - t - 1) for t, w in enumerate(orbit))
    q, r = divmod(total, 1 - uP ** pi)
    return None if r else q


def geometric_weight(uP: int, R: Sequence[int], h: FreeHom, N: int) -> tuple[int, ...]:
    """Weights R_N with y^(R_N) = sum_{t<N} (y h^t)^R * uP^(N-t-1) for all y."""
    out = []
    for b in h.domain.generators():
        w, total = b, 0
        for t in range(N):
            total += weighted_sum(w, R) * uP ** (N - t - 1)
            w = h(w)
        out.append(total)
    return tuple(out)


def _conditional(e: ProductEndo, component: str, require_oracle: bool) -> PerReport:
    if require_oracle:
        raise OracleRequired(component)
    note = f"depends on a basis of Per({component}); supply one with an oracle"
    return PerReport(e.etype, Verdict.CONDITIONAL, [], None, {}, note,
                     lambda g: False, None, e.swapped)


def _element_period(e: ProductEndo, g: PairElement, bound: int) -> int:
    w = g
    for k in range(1, bound + 1):
        w = e(w)
        if w == g:
            return k
    raise AssertionError(f"generator {g} is not periodic within {bound}")


def _finish(e: ProductEndo, verdict: Verdict, gens: list[PairElement], bound: int, note: str,
            member_normal, witness=None, odd=()) -> PerReport:
    user_gens = sorted((e.to_user(g) for g in gens if not g.is_identity()), key=PairElement.sort_key)
    by_period: dict[int, list[PairElement]] = {}
    for g in user_gens:
        by_period.setdefault(_element_period(e, g, bound), []).append(g)
    if verdict in (Verdict.LATTICE, Verdict.FIN_GEN, Verdict.INFINITE_CYCLIC) and not user_gens:
        verdict = Verdict.TRIVIAL
    odd_user = [e.to_user(g) for g in odd]
    for g in odd_user:
        if _element_period(e, g, bound) % 2 == 0:
            raise AssertionError(f"{g} does not have odd period")
    return PerReport(e.etype, verdict, user_gens, bound, dict(sorted(by_period.items())), note,
                     lambda g: member_normal(e.to_normal(g)), witness, e.swapped, odd_user)


def _exponent_in(w: FreeWord, base: FreeWord) -> int | None:
    """a with base^a == w, or None; base must be nontrivial."""
    root, k = primitive_root(base)
    j = power_index(w, root)
    if j is None or j % k:
        return None
    return j // k


def periodic_subgroup(e: ProductEndo, oracle: Oracle = None, require_oracle: bool = False,
                      limit: int = DEFAULT_PERIOD_LIMIT) -> PerReport:
    """Compute Per(e).  ``oracle`` holds bases of periodic subgroups of the
    component maps, keyed like the oracles of :func:`fixed.fixed_subgroup`."""
    N = e.normal
    one_x, one_y = N.A.identity(), N.B.identity()
    t = e.etype

    if t is EndoType.I:
        M = [[e.uP, e.yR(e.v)], [e.xQ(e.u), e.vS]]
        K = periodic_lattice(M)
        gens = [PairElement(e.u ** a, e.v ** b) for a, b in K.basis]

        def member(g):
            a, b = power_index(g.x, e.u), power_index(g.y, e.v)
            return a is not None and b is not None and (a, b) in K

        note = f"Per = {{(u^a, v^b) : (a, b) in Per(M)}}, M = {M}, rank {K.rank}"
        return _finish(e, Verdict.LATTICE, gens, PERIOD_EXPONENT, note, member)

    if t is EndoType.II:
        w = e.phi(e.v)
        if not w.is_identity():
            # periodic points are (w^a, v^b) with (a, b) -> (b, a w^Q + b v^S)
            M = [[0, 1], [e.xQ(w), e.vS]]
            K = periodic_lattice(M)
            gens = [PairElement(w ** a, e.v ** b) for a, b in K.basis]

            def member(g):
                a, b = _exponent_in(g.x, w), power_index(g.y, e.v)
                return a is not None and b is not None and (a, b) in K

            note = (f"Per = {{((v phi)^a, v^b) : (a, b) in Per(C)}}, C = {M} acting on "
                    f"consecutive exponents, rank {K.rank}")
            return _finish(e, Verdict.LATTICE, gens, PERIOD_EXPONENT, note, member)
        return _scalar_report(e, "v phi = 1")

    if t is EndoType.V:
        return _scalar_report(e, "first coordinate dies")

    if t is EndoType.III:
        return _per_type3(e, oracle, require_oracle, limit)

    if t is EndoType.IV:
        got = component_per_basis(e.psi, _oracle_for(oracle, "psi"), limit)
        if got is None:
            return _conditional(e, "psi", require_oracle)
        basis, L = got
        lift = e.psi.power(L - 1).then(e.phi)
        gens = [PairElement(lift(y), y) for y in basis]
        G = stallings.fold(basis, N.B)
        note = f"Per = {{(y psi^(L-1) phi, y) : y in Per(psi)}} = Per(psi), L = {L}"
        return _finish(e, Verdict.FIN_GEN, gens, L, note,
                       lambda g: stallings.contains(G, g.y) and g.x == lift(g.y))

    if t is EndoType.VI:
        gx = component_per_basis(e.phi, _oracle_for(oracle, "phi"), limit)
        if gx is None:
            return _conditional(e, "phi", require_oracle)
        gy = component_per_basis(e.psi, _oracle_for(oracle, "psi"), limit)
        if gy is None:
            return _conditional(e, "psi", require_oracle)
        (bx, Lx), (by, Ly) = gx, gy
        gens = [PairElement(x, one_y) for x in bx] + [PairElement(one_x, y) for y in by]
        Gx, Gy = stallings.fold(bx, N.A), stallings.fold(by, N.B)
        note = f"Per = Per(phi) x Per(psi), common periods {Lx} and {Ly}"
        return _finish(e, Verdict.FIN_GEN, gens, lcm(Lx, Ly), note,
                       lambda g: stallings.contains(Gx, g.x) and stallings.contains(Gy, g.y))

    return _per_type7(e, oracle, require_oracle, limit)


def _scalar_report(e: ProductEndo, why: str) -> PerReport:
    # periodic points are (1, v^b) with b -> b v^S
    one_x = e.normal.A.identity()
    vS = e.vS
    if vS in (1, -1):
        note = f"Per = {{(1, v^b)}} = Z ({why}, v^S = {vS})"
        return _finish(e, Verdict.INFINITE_CYCLIC, [PairElement(one_x, e.v)], 2, note,
                       lambda g: g.x.is_identity() and power_index(g.y, e.v) is not None)
    note = f"Per trivial ({why}, v^S = {vS} not in {{-1, 1}})"
    return _finish(e, Verdict.TRIVIAL, [], 1, note, lambda g: g.is_identity())


def _per_type3(e: ProductEndo, oracle: Oracle, require_oracle: bool, limit: int) -> PerReport:
    N = e.normal
    got = component_per_basis(e.phi, _oracle_for(oracle, "phi"), limit)
    if got is None:
        return _conditional(e, "phi", require_oracle)
    basis, L = got
    uP = e.uP

    if abs(uP) == 1:
        # after n = L (or 2L when u^P = -1) steps the exponent moves by a fixed
        # amount y^(R_n); (u^a, y) is periodic iff that amount is zero
        n = L if uP == 1 else 2 * L
        Rn = geometric_weight(uP, e.R, e.phi, n)
        verdict, gens, note, member, witness = type3_kernel_parts(e, basis, Rn, "Per(phi)", "Per")
        note += f"; u^P = {uP}, weights R_{n} = {list(Rn)}"
        odd = []
        if uP == -1:
            odd = [g for g in _odd_period_candidates(e, basis, L)]
        return _finish(e, verdict, gens, n, note, member, witness, odd)

    RL = geometric_weight(uP, e.R, e.phi, L)
    modulus = abs(1 - uP ** L)
    F = stallings.fold(basis, N.B)
    W = stallings.subgroup_of_weighted(stallings.build_weighted(RL, modulus), N.B)
    G = stallings.intersect(F, W)

    def exponent(y):
        q, r = divmod(weighted_sum(y, RL), 1 - uP ** L)
        assert r == 0
        return q

    gens = []
    for y in G.basis():
        a = exponent(y)
        orbit = [y]
        while len(orbit) < L and e.phi(orbit[-1]) != y:
            orbit.append(e.phi(orbit[-1]))
        assert type3_per_criterion(uP, e.R, orbit, e.phi) == a
        gens.append(PairElement(e.u ** a, y))

    def member(g):
        return stallings.contains(G, g.y) and g.x == e.u ** exponent(g.y)

    note = (f"Per = {{(u^a, y) : y in G, a = y^(R_L)/(1 - u^(P L))}}, "
            f"G = Per(phi) ∩ {{y : {modulus} divides y^(R_L)}}, L = {L}, R_L = {list(RL)}, "
            f"rank G = {stallings.rank(G)}")
    return _finish(e, Verdict.FIN_GEN, gens, L, note, member)


def _odd_period_candidates(e: ProductEndo, basis: list[FreeWord], L: int) -> list[PairElement]:
    # with u^P = -1 and y of odd period pi, (u^a, y) returns after 2 pi steps
    # for every a; the point itself has odd period when a solves a = -a + y^(R_pi)
    out = []
    for y in basis:
        pi = bounded_period(e.phi, y, L)
        if pi % 2 == 0:
            continue
        s = weighted_sum(y, geometric_weight(-1, e.R, e.phi, pi))
        if s % 2 == 0:
            out.append(PairElement(e.u ** (s // 2), y))
    return out


def _per_type7(e: ProductEndo, oracle: Oracle, require_oracle: bool, limit: int) -> PerReport:
    # e^2 = (phi psi) x (psi phi), so Per(e) = Per(phi psi) x Per(psi phi);
    # phi maps Per(phi psi) onto Per(psi phi), which supplies the second basis
    N = e.normal
    comp1 = e.phi.then(e.psi)
    comp2 = e.psi.then(e.phi)
    got1 = component_per_basis(comp1, _oracle_for(oracle, "phipsi"), limit)
    got2 = component_per_basis(comp2, _oracle_for(oracle, "psiphi"), limit)
    if got1 is None and got2 is not None:
        got1 = component_per_basis(comp1, SubgroupBasisInput(N.A, [e.psi(y) for y in got2[0]]), limit)
    if got2 is None and got1 is not None:
        got2 = component_per_basis(comp2, SubgroupBasisInput(N.B, [e.phi(x) for x in got1[0]]), limit)
    if got1 is None:
        return _conditional(e, "phipsi", require_oracle)
    (bx, L1), (by, L2) = got1, got2
    one_x, one_y = N.A.identity(), N.B.identity()
    gens = [PairElement(x, one_y) for x in bx] + [PairElement(one_x, y) for y in by]
    Gx, Gy = stallings.fold(bx, N.A), stallings.fold(by, N.B)
    odd = []
    for x in bx:
        pi = bounded_period(comp1, x, L1)
        if pi % 2:
            # apply^pi (x, y) = (y psi (phi psi)^j, x phi (psi phi)^j) with pi = 2j + 1
            y = e.phi.then(comp2.power((pi - 1) // 2))(x)
            odd.append(PairElement(x, y))
    note = ("Per = Per(phi psi) x Per(psi phi) (the square is of type VI); "
            "points of odd period are (x, x phi (psi phi)^((pi-1)/2)) with x of odd period pi")
    return _finish(e, Verdict.FIN_GEN, gens, 2 * lcm(L1, L2), note,
                   lambda g: stallings.contains(Gx, g.x) and stallings.contains(Gy, g.y),
                   None, odd)
