"""Fixed subgroups Fix(e) of endomorphisms of Fn x Fm, type by type.

Every report carries a membership test, and every generator it lists has been
checked to be fixed by the endomorphism.  Where a type reduces to the fixed
subgroup of a free-group component map, a basis for that subgroup has to come
from an oracle (:class:`SubgroupBasisInput`) unless the map is the identity,
trivial, or a signed permutation of the generators.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from . import stallings
from .endo import EndoType, PairElement, ProductEndo
from .freeword import Alphabet, FreeHom, FreeWord, primitive_root, weighted_sum
from .intlinalg import kernel_basis


class Verdict(enum.Enum):
    TRIVIAL = "trivial"
    INFINITE_CYCLIC = "infinite cyclic"
    LATTICE = "free abelian lattice"
    FIN_GEN = "finitely generated"
    NOT_FIN_GEN = "NOT finitely generated"
    CONDITIONAL = "conditional on oracle"

    def __str__(self):
        return self.value

    @property
    def decided(self) -> bool:
        return self is not Verdict.CONDITIONAL


class OracleRequired(LookupError):
    def __init__(self, component: str):
        self.component = component
        super().__init__(f"a basis for the fixed subgroup of component '{component}' is required")


class OracleMismatch(ValueError):
    pass


@dataclass(frozen=True)
class SubgroupBasisInput:
    """A user-supplied basis of Fix (or Per) of a free-group component map."""

    alphabet: Alphabet
    words: tuple[FreeWord, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))
        for w in self.words:
            if w.alphabet != self.alphabet:
                raise OracleMismatch(f"oracle word {w} not over {self.alphabet}")


Oracle = SubgroupBasisInput | Mapping[str, SubgroupBasisInput] | None


@dataclass
class FixReport:
    etype: EndoType
    verdict: Verdict
    generators: list[PairElement]
    structure_note: str
    membership: Callable[[PairElement], bool] = field(repr=False)
    witness: dict | None = None
    swapped: bool = False

    def contains(self, g: PairElement) -> bool:
        return self.membership(g)


def _oracle_for(oracle: Oracle, key: str) -> SubgroupBasisInput | None:
    if oracle is None:
        return None
    if isinstance(oracle, SubgroupBasisInput):
        return oracle
    return oracle.get(key)


def auto_fix_basis(h: FreeHom) -> list[FreeWord] | None:
    """Fix basis for maps where it is immediate, else None.

    A signed letter permutation sends reduced words to reduced words letter by
    letter, so a word is fixed iff each of its letters is.
    """
    if h.domain != h.codomain:
        return None
    if h.is_identity():
        return h.domain.generators()
    if h.is_trivial():
        return []
    perm = h.letter_permutation()
    if perm is not None:
        return [FreeWord(h.domain, (i,)) for i in range(1, h.domain.rank + 1) if perm[i] == i]
    return None


def component_fix_basis(h: FreeHom, supplied: SubgroupBasisInput | None) -> list[FreeWord] | None:
    if supplied is not None:
        if supplied.alphabet != h.domain:
            raise OracleMismatch("oracle basis is over the wrong alphabet")
        for w in supplied.words:
            if h(w) != w:
                raise OracleMismatch(f"oracle word {w} is not fixed by the component map")
        return list(supplied.words)
    return auto_fix_basis(h)


def power_index(w: FreeWord, root: FreeWord) -> int | None:
    """k with root^k == w (root primitive), or None."""
    if w.is_identity():
        return 0
    r, e = primitive_root(w)
    if r == root:
        return e
    if r == root.inverse():
        return -e
    return None


def type3_counter_membership(y: FreeWord, R: Sequence[int]) -> bool:
    """One-counter machine for {y : sum_j tau_j(y) r_j = 0}: each letter b_j^e
    pushes e*r_j onto a signed counter; accept when the counter is back at 0."""
    if len(R) != y.alphabet.rank:
        raise ValueError("weight vector does not match the alphabet")
    counter = 0
    for x in y.letters:
        r = R[abs(x) - 1]
        counter += r if x > 0 else -r
    return counter == 0


def type3_H_graph(R: Sequence[int], modulus: int, fixbasis: SubgroupBasisInput) -> stallings.SubgroupGraph:
    """Fix(component) intersected with {y : modulus divides y^R}."""
    if modulus < 1:
        raise ValueError("modulus must be >= 1")
    F = stallings.fold(fixbasis.words, fixbasis.alphabet)
    W = stallings.subgroup_of_weighted(stallings.build_weighted(R, modulus), fixbasis.alphabet)
    return stallings.intersect(F, W)


def format_linear_constraint(R: Sequence[int], var: str = "tau") -> str:
    terms = []
    for j, r in enumerate(R, 1):
        if r == 0:
            continue
        coef = "" if abs(r) == 1 else f"{abs(r)}*"
        sign = "-" if r < 0 else "+"
        terms.append((sign, f"{coef}{var}{j}(y)"))
    if not terms:
        return "0 = 0"
    first_sign, first = terms[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, t in terms[1:]:
        text += f" {sign} {t}"
    return text + " = 0"


def _finish(e: ProductEndo, verdict: Verdict, gens: list[PairElement], note: str,
            member_normal: Callable[[PairElement], bool], witness=None) -> FixReport:
    user_gens = sorted((e.to_user(g) for g in gens if not g.is_identity()), key=PairElement.sort_key)
    for g in user_gens:
        if e(g) != g:
            raise AssertionError(f"certificate {g} is not fixed")
    if verdict in (Verdict.LATTICE, Verdict.FIN_GEN, Verdict.INFINITE_CYCLIC) and not user_gens:
        verdict = Verdict.TRIVIAL
    return FixReport(e.etype, verdict, user_gens, note,
                     lambda g: member_normal(e.to_normal(g)), witness, e.swapped)


def _conditional(e: ProductEndo, component: str, require_oracle: bool) -> FixReport:
    if require_oracle:
        raise OracleRequired(component)
    note = f"depends on a basis of Fix({component}); supply one with an oracle"
    return FixReport(e.etype, Verdict.CONDITIONAL, [], note, lambda g: e(g) == g, None, e.swapped)


def fixed_subgroup(e: ProductEndo, oracle: Oracle = None, require_oracle: bool = False) -> FixReport:
    """Compute Fix(e).

    ``oracle`` is a single :class:`SubgroupBasisInput` or a mapping keyed by
    component name ("phi", "psi", or "phipsi" for Type VII's composite
    phi-then-psi), in the normalized frame reported by classification.
    """
    N = e.normal
    one_x, one_y = N.A.identity(), N.B.identity()
    t = e.etype

    if t is EndoType.I:
        uP, uQ = e.xP(e.u), e.xQ(e.u)
        vR, vS = e.yR(e.v), e.yS(e.v)
        M = [[uP - 1, vR], [uQ, vS - 1]]
        K = kernel_basis(M)
        gens = [PairElement(e.u ** a, e.v ** b) for a, b in K.basis]

        def member(g):
            a, b = power_index(g.x, e.u), power_index(g.y, e.v)
            return a is not None and b is not None and (a, b) in K

        note = f"Fix = {{(u^a, v^b) : (a, b) in Ker M}}, M = {M}, Ker rank {K.rank}"
        return _finish(e, Verdict.LATTICE, gens, note, member)

    if t is EndoType.II:
        vphi = e.phi(e.v)
        scalar = e.xQ(vphi) + e.vS
        if scalar == 1:
            note = "Fix = {((v phi)^b, v^b)} = Z since (v phi)^Q + v^S = 1"
            gen = PairElement(vphi, e.v)
            return _finish(e, Verdict.INFINITE_CYCLIC, [gen], note,
                           lambda g: (b := power_index(g.y, e.v)) is not None and g.x == vphi ** b)
        note = f"Fix trivial since (v phi)^Q + v^S = {scalar} != 1"
        return _finish(e, Verdict.TRIVIAL, [], note, lambda g: g.is_identity())

    if t is EndoType.V:
        if e.vS == 1:
            return _finish(e, Verdict.INFINITE_CYCLIC, [PairElement(one_x, e.v)],
                           "Fix = {(1, v^b)} = Z since v^S = 1",
                           lambda g: g.x.is_identity() and power_index(g.y, e.v) is not None)
        return _finish(e, Verdict.TRIVIAL, [], f"Fix trivial since v^S = {e.vS} != 1",
                       lambda g: g.is_identity())

    if t is EndoType.III:
        return _fix_type3(e, oracle, require_oracle)

    if t is EndoType.IV:
        basis = component_fix_basis(e.psi, _oracle_for(oracle, "psi"))
        if basis is None:
            return _conditional(e, "psi", require_oracle)
        gens = [PairElement(e.phi(y), y) for y in basis]
        G = stallings.fold(basis, N.B)
        return _finish(e, Verdict.FIN_GEN, gens, "Fix = {(y phi, y) : y in Fix(psi)} = Fix(psi)",
                       lambda g: stallings.contains(G, g.y) and g.x == e.phi(g.y))

    if t is EndoType.VI:
        bx = component_fix_basis(e.phi, _oracle_for(oracle, "phi"))
        if bx is None:
            return _conditional(e, "phi", require_oracle)
        by = component_fix_basis(e.psi, _oracle_for(oracle, "psi"))
        if by is None:
            return _conditional(e, "psi", require_oracle)
        gens = [PairElement(x, one_y) for x in bx] + [PairElement(one_x, y) for y in by]
        Gx, Gy = stallings.fold(bx, N.A), stallings.fold(by, N.B)
        return _finish(e, Verdict.FIN_GEN, gens, "Fix = Fix(phi) x Fix(psi)",
                       lambda g: stallings.contains(Gx, g.x) and stallings.contains(Gy, g.y))

    # Type VII: either description works; the first needs Fix(phi psi), the second Fix(psi phi)
    gens, member = type7_fix_first(e, oracle)
    if gens is not None:
        return _finish(e, Verdict.FIN_GEN, gens, "Fix = {(x, x phi) : x in Fix(phi psi)} = Fix(phi psi)", member)
    gens, member = type7_fix_second(e, oracle, derive=False)
    if gens is not None:
        return _finish(e, Verdict.FIN_GEN, gens, "Fix = {(y psi, y) : y in Fix(psi phi)} = Fix(psi phi)", member)
    return _conditional(e, "phipsi", require_oracle)


def type7_fix_first(e: ProductEndo, oracle: Oracle = None):
    """Generators {(x, x phi) : x in Fix(phi psi)} and a membership test."""
    comp = e.phi.then(e.psi)
    basis = component_fix_basis(comp, _oracle_for(oracle, "phipsi"))
    if basis is None:
        return None, None
    G = stallings.fold(basis, comp.domain)
    return ([PairElement(x, e.phi(x)) for x in basis],
            lambda g: stallings.contains(G, g.x) and g.y == e.phi(g.x))


def type7_fix_second(e: ProductEndo, oracle: Oracle = None, derive: bool = True):
    """Generators {(y psi, y) : y in Fix(psi phi)} and a membership test.

    Without a "psiphi" basis, and with ``derive`` set, the basis is taken as
    the phi-image of a Fix(phi psi) basis (phi maps one onto the other).
    """
    comp = e.psi.then(e.phi)
    basis = component_fix_basis(comp, _oracle_for(oracle, "psiphi"))
    if basis is None and derive:
        first = component_fix_basis(e.phi.then(e.psi), _oracle_for(oracle, "phipsi"))
        if first is not None:
            basis = [e.phi(x) for x in first]
    if basis is None:
        return None, None
    G = stallings.fold(basis, comp.domain)
    return ([PairElement(e.psi(y), y) for y in basis],
            lambda g: stallings.contains(G, g.y) and g.x == e.psi(g.y))


def _fix_type3(e: ProductEndo, oracle: Oracle, require_oracle: bool) -> FixReport:
    N = e.normal
    uP = e.uP
    basis = component_fix_basis(e.phi, _oracle_for(oracle, "phi"))
    if basis is None:
        return _conditional(e, "phi", require_oracle)
    R = e.R
    if uP == 1:
        verdict, gens, note, member, witness = type3_kernel_parts(e, basis, R, "Fix(phi)", "Fix")
        return _finish(e, verdict, gens, note, member, witness)

    modulus = abs(uP - 1)
    G = type3_H_graph(R, modulus, SubgroupBasisInput(N.B, basis))
    gens = []
    for y in G.basis():
        a, rem = divmod(e.yR(y), 1 - uP)
        assert rem == 0
        gens.append(PairElement(e.u ** a, y))

    def member(g):
        if not stallings.contains(G, g.y):
            return False
        return g.x == e.u ** (e.yR(g.y) // (1 - uP))

    note = (f"Fix = {{(u^(y^R/(1-u^P)), y) : y in G}}, G = Fix(phi) ∩ {{y : {modulus} divides y^R}}, "
            f"u^P = {uP}, rank G = {stallings.rank(G)}")
    return _finish(e, Verdict.FIN_GEN, gens, note, member)


def type3_kernel_parts(e: ProductEndo, basis: list[FreeWord], R: Sequence[int], base_name: str,
                       kind: str = "Fix"):
    """Shared by Fix (u^P = 1) and Per (u^P = +-1): the subgroup <u> x H with
    H the kernel of y -> y^R on the free group with the given basis.

    Returns (verdict, generators, note, membership, witness) in the normalized frame.
    """
    N = e.normal
    one_x, one_y = N.A.identity(), N.B.identity()
    vals = [weighted_sum(y, R) for y in basis]
    constraint = format_linear_constraint(R)
    H_text = f"H = {{y in {base_name} : {constraint}}}"
    u_gen = PairElement(e.u, one_y)
    base_graph = stallings.fold(basis, N.B)

    def member(g):
        if power_index(g.x, e.u) is None:
            return False
        return (stallings.contains(base_graph, g.y)
                and type3_counter_membership(g.y, R))

    if all(v == 0 for v in vals):
        gens = [u_gen] + [PairElement(one_x, y) for y in basis]
        note = f"{kind} = <u> x H, {H_text} = {base_name} (weights vanish on it)"
        return Verdict.FIN_GEN, gens, note, member, None
    if len(basis) == 1:
        note = f"{kind} = <u> x H, {H_text} trivial ({base_name} cyclic, weight nonzero)"
        return Verdict.FIN_GEN, [u_gen], note, member, None
    # nonzero map from a free group of rank >= 2 onto an infinite cyclic group:
    # its kernel is normal of infinite index, hence not finitely generated
    g_idx = next(i for i, v in enumerate(vals) if v)
    h_idx = next(i for i in range(len(basis)) if i != g_idx)
    g, h = basis[g_idx], basis[h_idx]
    t = h ** vals[g_idx] * g ** (-vals[h_idx])
    family = [g ** k * t * g ** (-k) for k in range(4)]
    assert all(weighted_sum(w, R) == 0 for w in family)
    witness = {
        "H": H_text,
        "constraint": constraint,
        "basis": list(basis),
        "weights_on_basis": vals,
        "reason": f"y -> y^R maps {base_name} (rank {len(basis)}) onto a nonzero subgroup of Z; "
                  "its kernel H is a nontrivial normal subgroup of infinite index, so H is not "
                  "finitely generated (its reduced words do not form a rational language)",
        "family_in_H": family,
    }
    note = f"{kind} = <u> x H, {H_text} NOT finitely generated"
    return Verdict.NOT_FIN_GEN, [], note, member, witness
