"""Whitehead problems: is there an automorphism / monomorphism / endomorphism
sending a given element to another?

For a single free group the automorphism question is decided completely by
Whitehead's method: shorten both words with Whitehead automorphisms, then
search the finite graph of minimal-length words.  Homomorphism questions
between free groups are answered by two sound obstructions followed by a
bounded exhaustive search, so they may come back Unknown.  The product-group
versions reduce to these per the endomorphism types.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from . import stallings
from .endo import (EndoSpec, PairElement, ProductEndo, make_type_I, make_type_VI, make_type_VII,
                   hom_injective, validate_and_classify)
from .freeword import (Alphabet, AlphabetMismatch, FreeHom, FreeWord, content_gcd, exponent_vector,
                       kth_root, power_exponents, primitive_root, words_up_to)
from .intlinalg import solve_diophantine

DEFAULT_BOUND = 6


class Answer(enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


@dataclass
class WhVerdict:
    answer: Answer
    certificate: FreeHom | ProductEndo | None = None
    bound: int | None = None
    path: str = ""
    detail: dict = field(default_factory=dict)

    def __str__(self):
        if self.answer is Answer.UNKNOWN:
            return f"Unknown(bound={self.bound})"
        return str(self.answer)


def _yes(cert, path, **detail) -> WhVerdict:
    return WhVerdict(Answer.YES, cert, None, path, detail)


def _no(path, **detail) -> WhVerdict:
    return WhVerdict(Answer.NO, None, None, path, detail)


def _unknown(bound, path, **detail) -> WhVerdict:
    return WhVerdict(Answer.UNKNOWN, None, bound, path, detail)


# --- Whitehead automorphisms of a single free group ---------------------------------

@lru_cache(maxsize=None)
def permutation_moves(alphabet: Alphabet) -> tuple[FreeHom, ...]:
    """Signed permutations of the generators (length preserving)."""
    n = alphabet.rank
    out = []
    for perm in itertools.permutations(range(1, n + 1)):
        for signs in itertools.product((1, -1), repeat=n):
            images = [FreeWord(alphabet, (s * p,)) for p, s in zip(perm, signs)]
            h = FreeHom(alphabet, alphabet, images)
            if not h.is_identity():
                out.append(h)
    return tuple(out)


@lru_cache(maxsize=None)
def multiplier_moves(alphabet: Alphabet) -> tuple[FreeHom, ...]:
    """Moves fixing a letter a and sending every other generator x to one of
    x, x a, a^-1 x, a^-1 x a.  Inner automorphisms by a letter are included."""
    n = alphabet.rank
    out = []
    for a in alphabet.letters():
        others = [i for i in range(1, n + 1) if i != abs(a)]
        for choice in itertools.product(range(4), repeat=len(others)):
            if not any(choice):
                continue
            images = [FreeWord(alphabet, (i,)) for i in range(1, n + 1)]
            for i, c in zip(others, choice):
                left = (-a,) if c in (2, 3) else ()
                right = (a,) if c in (1, 3) else ()
                images[i - 1] = FreeWord(alphabet, left + (i,) + right)
            out.append(FreeHom(alphabet, alphabet, images))
    return tuple(out)


def compose_all(alphabet: Alphabet, moves) -> FreeHom:
    out = FreeHom.identity(alphabet)
    for h in moves:
        out = out.then(h)
    return out


@lru_cache(maxsize=None)
def _move_inverse(h: FreeHom) -> FreeHom:
    return stallings.invert_free_iso(h)


def _inverse_of_moves(alphabet: Alphabet, moves) -> FreeHom:
    return compose_all(alphabet, [_move_inverse(h) for h in reversed(moves)])


@lru_cache(maxsize=4096)
def _to_minimal(w: FreeWord) -> tuple[FreeWord, FreeHom, FreeHom]:
    """(minimal word, automorphism reaching it from w, its inverse)."""
    m, moves = minimize_whitehead(w)
    return m, compose_all(w.alphabet, moves), _inverse_of_moves(w.alphabet, moves)


@lru_cache(maxsize=65536)
def _orbit_map(start: FreeWord, target: FreeWord) -> FreeHom:
    return compose_all(start.alphabet, _path_to(_orbit(start), target))


@lru_cache(maxsize=4096)
def minimize_whitehead(w: FreeWord) -> tuple[FreeWord, tuple[FreeHom, ...]]:
    """Shorten w by Whitehead automorphisms until no move helps.

    Returns the minimal word and the moves applied, in order; replaying them
    on w reproduces the minimum.
    """
    cur, applied = w, []
    while True:
        best = None
        for h in multiplier_moves(w.alphabet):
            c = h(cur)
            if len(c) < len(cur) and (best is None or (len(c), c.sort_key()) < (len(best[0]), best[0].sort_key())):
                best = (c, h)
        if best is None:
            return cur, tuple(applied)
        cur = best[0]
        applied.append(best[1])


@lru_cache(maxsize=1024)
def _orbit(start: FreeWord) -> dict:
    """All minimal-length words in the Aut-orbit of a minimal word, with BFS
    parent pointers word -> (previous word, move)."""
    L = len(start)
    parent = {start: None}
    queue = deque([start])
    moves = permutation_moves(start.alphabet) + multiplier_moves(start.alphabet)
    while queue:
        w = queue.popleft()
        for h in moves:
            c = h(w)
            if len(c) == L and c not in parent:
                parent[c] = (w, h)
                queue.append(c)
    return parent


def orbit_representative(w: FreeWord) -> FreeWord:
    """Canonical representative of the Aut-orbit of w (least minimal word)."""
    m, _ = minimize_whitehead(w)
    return min(_orbit(m), key=FreeWord.sort_key)


def _path_to(orbit: dict, target: FreeWord) -> list[FreeHom]:
    path = []
    w = target
    while orbit[w] is not None:
        w, h = orbit[w]
        path.append(h)
    return path[::-1]


def whp_auto_free(u: FreeWord, v: FreeWord) -> WhVerdict:
    """Decide whether some automorphism of the free group sends u to v."""
    if u.alphabet != v.alphabet:
        raise AlphabetMismatch("words in different free groups")
    um, to_u, _ = _to_minimal(u)
    vm, _, from_v = _to_minimal(v)
    if len(um) != len(vm):
        return _no("whitehead: minimal lengths differ", min_source=len(um), min_target=len(vm))
    orbit = _orbit(um)
    if vm not in orbit:
        return _no("whitehead: minimal-length orbit search", orbit_size=len(orbit))
    cert = to_u.then(_orbit_map(um, vm)).then(from_v)
    assert cert(u) == v
    return _yes(cert, "whitehead: minimal-length orbit search", orbit_size=len(orbit))


def is_primitive(w: FreeWord) -> bool:
    return len(minimize_whitehead(w)[0]) == 1


# --- homomorphisms between free groups --------------------------------------------

def hom_obstruction(u: FreeWord, v: FreeWord) -> str | None:
    """A reason no homomorphism can send u to v, or None.

    Abelianization: ab(h(u)) = M ab(u), and every entry of M c is a multiple
    of gcd(c).  Powers: h(root^k) = h(root)^k, so v must be a k-th power.
    """
    if u.is_identity():
        return None if v.is_identity() else "u is trivial but v is not"
    g = content_gcd(u)
    ev = exponent_vector(v)
    if g == 0:
        if any(ev):
            return "u lies in the commutator subgroup but v does not"
    elif any(x % g for x in ev):
        return f"gcd of exponent sums of u is {g}, which does not divide those of v"
    _, k = primitive_root(u)
    if k not in power_exponents(v):
        return f"u is a {k}-th power but v is not"
    return None


def _injective_embedding(A: Alphabet, B: Alphabet) -> FreeHom | None:
    """Some injective hom A -> B, or None when there is none."""
    if A.rank <= B.rank:
        return FreeHom(A, B, [FreeWord(B, (i,)) for i in range(1, A.rank + 1)])
    if B.rank == 1:
        return None
    # conjugates of b2 by distinct powers of b1 form a free basis
    return FreeHom(A, B, [FreeWord(B, (1,) * i + (2,) + (-1,) * i) for i in range(A.rank)])


def _image_tuples(B: Alphabet, k: int, bound: int, nonempty: bool):
    """Tuples of k reduced words over B with total length <= bound."""
    pools: dict[int, list[FreeWord]] = {}
    for w in words_up_to(B, bound):
        pools.setdefault(len(w), []).append(w)
    lo = 1 if nonempty else 0

    def rec(i, budget):
        if i == k:
            yield ()
            return
        for length in range(lo, budget + 1):
            for w in pools.get(length, ()):
                for rest in rec(i + 1, budget - length):
                    yield (w,) + rest

    yield from rec(0, bound)


def hom_exists_bounded(u: FreeWord, v: FreeWord, bound: int = DEFAULT_BOUND,
                       injective: bool = False) -> WhVerdict:
    """Is there a homomorphism (injective if asked) from u's free group to v's
    sending u to v?  Yes carries the hom; No only comes from a complete
    obstruction; otherwise Unknown(bound) after exhausting image tuples of
    total length <= bound."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    A, B = u.alphabet, v.alphabet
    reason = hom_obstruction(u, v)
    if reason:
        return _no("obstruction", reason=reason)
    if injective:
        if not u.is_identity() and v.is_identity():
            return _no("obstruction", reason="an injective map cannot kill u")
        emb = _injective_embedding(A, B)
        if emb is None:
            return _no("obstruction", reason=f"F{A.rank} does not embed in F{B.rank}")
        if u.is_identity():
            return _yes(emb, "embedding")
        if A == B:
            auto = whp_auto_free(u, v)
            if auto.answer is Answer.YES:
                return _yes(auto.certificate, "whitehead automorphism")
        if emb(u) == v:
            return _yes(emb, "embedding")
    else:
        if v.is_identity():
            return _yes(FreeHom.trivial(A, B), "trivial map")
        if is_primitive(u):
            m, moves = minimize_whitehead(u)
            letter = m.letters[0]
            images = [B.identity()] * A.rank
            images[abs(letter) - 1] = v if letter > 0 else v.inverse()
            cert = compose_all(A, moves).then(FreeHom(A, B, images))
            assert cert(u) == v
            return _yes(cert, "u is primitive")

    used = sorted({abs(x) for x in u.letters}) if not injective else list(range(1, A.rank + 1))
    for imgs in _image_tuples(B, len(used), bound, nonempty=injective):
        images = [B.identity()] * A.rank
        for i, w in zip(used, imgs):
            images[i - 1] = w
        h = FreeHom(A, B, images)
        if h(u) == v and (not injective or hom_injective(h)):
            return _yes(h, "bounded search", bound=bound)
    return _unknown(bound, "bounded search exhausted")


# --- product groups ----------------------------------------------------------------

def _power_set(z: FreeWord) -> list[int]:
    """Exponents k with z a k-th power, small ones first ({0} for z = 1)."""
    if z.is_identity():
        return [0]
    return sorted(power_exponents(z), key=lambda k: (abs(k), k < 0))


def _root(z: FreeWord, k: int) -> FreeWord:
    if z.is_identity():
        return FreeWord(z.alphabet, (1,))
    r = kth_root(z, k)
    assert r is not None
    return r


def _solve_linear(c: list[int], target: int, split: int) -> list[int] | None:
    """Integer solution of c . t = target, preferring one whose two parts
    (t[:split], t[split:]) are both nonzero."""
    sol = solve_diophantine([c], [target])
    if sol is None:
        return None
    x0, K = sol
    combos = sorted(itertools.product(range(-2, 3), repeat=K.rank), key=lambda t: (sum(map(abs, t)), t))
    for coeffs in combos:
        t = list(x0)
        for a, b in zip(coeffs, K.basis):
            t = [ti + a * bi for ti, bi in zip(t, b)]
        if any(t[:split]) and any(t[split:]):
            return t
    return list(x0)


def _certify(spec: EndoSpec, src: PairElement, tgt: PairElement, stage: str, **detail) -> WhVerdict:
    e = validate_and_classify(spec)
    assert e(src) == tgt, f"{stage} certificate does not map source to target"
    return _yes(e, stage, **detail)


def _stage_type1(src, tgt):
    x, y = src.x, src.y
    z, w = tgt.x, tgt.y
    n = x.alphabet.rank
    c = list(exponent_vector(x)) + list(exponent_vector(y))
    for k in _power_set(z):
        pr = _solve_linear(c, k, n)
        if pr is None:
            continue
        for l in _power_set(w):
            qs = _solve_linear(c, l, n)
            if qs is None:
                continue
            spec = make_type_I(_root(z, k), _root(w, l), pr[:n], qs[:n], pr[n:], qs[n:])
            return _certify(spec, src, tgt, "type I", k=k, l=l)
    return _no("type I", reason="no (k, l) makes the exponent system solvable")


def _exponent_stage(src, tgt_power: FreeWord, make, stage):
    """Solve t . (ab(x), ab(y)) = k for k in the power set of tgt_power, then build."""
    x, y = src.x, src.y
    c = list(exponent_vector(x)) + list(exponent_vector(y))
    n = x.alphabet.rank
    for k in _power_set(tgt_power):
        t = _solve_linear(c, k, n)
        if t is not None:
            return make(_root(tgt_power, k), t[:n], t[n:])
    return None


def _component(u, v, bound, injective=False):
    return hom_exists_bounded(u, v, bound, injective)


def _combine(stage, parts, build):
    """Yes if every part is Yes; No if some part is No; else Unknown."""
    if any(p.answer is Answer.NO for p in parts):
        return _no(stage, reason="; ".join(p.detail.get("reason", p.path) for p in parts if p.answer is Answer.NO))
    if all(p.answer is Answer.YES for p in parts):
        return build(*[p.certificate for p in parts])
    bound = max(p.bound or 0 for p in parts)
    return _unknown(bound, stage)


def _cascade_e(src: PairElement, tgt: PairElement, bound: int):
    A, B = src.x.alphabet, src.y.alphabet
    x, y, z, w = src.x, src.y, tgt.x, tgt.y
    one_a, one_b = A.identity(), B.identity()

    def type2():
        h = _component(y, z, bound)

        def build(phi):
            def make(v, q, s):
                return EndoSpec(A, B, [PairElement(one_a, v ** qi) for qi in q],
                                [PairElement(phi(b), v ** si) for b, si in zip(B.generators(), s)])
            spec = _exponent_stage(src, w, make, "type II")
            return _certify(spec, src, tgt, "type II") if spec else _no("type II", reason="exponent equation unsolvable")
        return _combine("type II", [h], build)

    def type2s():
        h = _component(x, w, bound)

        def build(phi):
            def make(u, p, r):
                return EndoSpec(A, B, [PairElement(u ** pi, phi(a)) for a, pi in zip(A.generators(), p)],
                                [PairElement(u ** ri, one_b) for ri in r])
            spec = _exponent_stage(src, z, make, "type II (swapped)")
            return (_certify(spec, src, tgt, "type II (swapped)") if spec
                    else _no("type II (swapped)", reason="exponent equation unsolvable"))
        return _combine("type II (swapped)", [h], build)

    def type3():
        h = _component(y, w, bound)

        def build(psi):
            def make(u, p, r):
                return EndoSpec(A, B, [PairElement(u ** pi, one_b) for pi in p],
                                [PairElement(u ** ri, psi(b)) for b, ri in zip(B.generators(), r)])
            spec = _exponent_stage(src, z, make, "type III")
            return _certify(spec, src, tgt, "type III") if spec else _no("type III", reason="exponent equation unsolvable")
        return _combine("type III", [h], build)

    def type3s():
        h = _component(x, z, bound)

        def build(psi):
            def make(v, q, s):
                return EndoSpec(A, B, [PairElement(psi(a), v ** qi) for a, qi in zip(A.generators(), q)],
                                [PairElement(one_a, v ** si) for si in s])
            spec = _exponent_stage(src, w, make, "type III (swapped)")
            return (_certify(spec, src, tgt, "type III (swapped)") if spec
                    else _no("type III (swapped)", reason="exponent equation unsolvable"))
        return _combine("type III (swapped)", [h], build)

    def type4():
        return _combine("type IV", [_component(y, z, bound), _component(y, w, bound)],
                        lambda phi, psi: _certify(
                            EndoSpec(A, B, [PairElement(one_a, one_b)] * A.rank,
                                     [PairElement(phi(b), psi(b)) for b in B.generators()]),
                            src, tgt, "type IV"))

    def type4s():
        return _combine("type IV (swapped)", [_component(x, z, bound), _component(x, w, bound)],
                        lambda phi, psi: _certify(
                            EndoSpec(A, B, [PairElement(phi(a), psi(a)) for a in A.generators()],
                                     [PairElement(one_a, one_b)] * B.rank),
                            src, tgt, "type IV (swapped)"))

    def type5():
        if not z.is_identity():
            return _no("type V", reason="first coordinate of every image is trivial")

        def make(v, q, s):
            return EndoSpec(A, B, [PairElement(one_a, v ** qi) for qi in q], [PairElement(one_a, v ** si) for si in s])
        spec = _exponent_stage(src, w, make, "type V")
        return _certify(spec, src, tgt, "type V") if spec else _no("type V", reason="exponent equation unsolvable")

    def type5s():
        if not w.is_identity():
            return _no("type V (swapped)", reason="second coordinate of every image is trivial")

        def make(u, p, r):
            return EndoSpec(A, B, [PairElement(u ** pi, one_b) for pi in p], [PairElement(u ** ri, one_b) for ri in r])
        spec = _exponent_stage(src, z, make, "type V (swapped)")
        return _certify(spec, src, tgt, "type V (swapped)") if spec else _no("type V (swapped)", reason="exponent equation unsolvable")

    def type6():
        return _combine("type VI", [_component(x, z, bound), _component(y, w, bound)],
                        lambda phi, psi: _certify(make_type_VI(phi, psi), src, tgt, "type VI"))

    def type7():
        return _combine("type VII", [_component(x, w, bound), _component(y, z, bound)],
                        lambda phi, psi: _certify(make_type_VII(phi, psi), src, tgt, "type VII"))

    return [("type I", lambda: _stage_type1(src, tgt)), ("type II", type2), ("type II (swapped)", type2s),
            ("type III", type3), ("type III (swapped)", type3s), ("type IV", type4),
            ("type IV (swapped)", type4s), ("type V", type5), ("type V (swapped)", type5s),
            ("type VI", type6), ("type VII", type7)]


def _cascade_m(src: PairElement, tgt: PairElement, bound: int):
    x, y, z, w = src.x, src.y, tgt.x, tgt.y
    stages = [("type VI", lambda: _combine(
        "type VI", [_component(x, z, bound, True), _component(y, w, bound, True)],
        lambda phi, psi: _certify(make_type_VI(phi, psi), src, tgt, "type VI")))]
    stages.append(("type VII", lambda: _combine(
        "type VII", [_component(x, w, bound, True), _component(y, z, bound, True)],
        lambda phi, psi: _certify(make_type_VII(phi, psi), src, tgt, "type VII"))))
    return stages


def _cascade_a(src: PairElement, tgt: PairElement):
    A, B = src.x.alphabet, src.y.alphabet
    x, y, z, w = src.x, src.y, tgt.x, tgt.y
    stages = [("Aut6", lambda: _combine(
        "Aut6", [whp_auto_free(x, z), whp_auto_free(y, w)],
        lambda phi, psi: _certify(make_type_VI(phi, psi), src, tgt, "Aut6")))]
    if A.rank == B.rank:
        ab, ba = FreeHom.relabel(A, B), FreeHom.relabel(B, A)

        def aut7():
            # phi = relabel then alpha (alpha in Aut B), psi = relabel then beta (beta in Aut A)
            p1, p2 = whp_auto_free(ab(x), w), whp_auto_free(ba(y), z)
            return _combine("Aut7", [p1, p2], lambda alpha, beta: _certify(
                make_type_VII(ab.then(alpha), ba.then(beta)), src, tgt, "Aut7"))
        stages.append(("Aut7", aut7))
    return stages


def whp_product(gx: PairElement, gy: PairElement, variant: str = "e", bound: int = DEFAULT_BOUND) -> WhVerdict:
    """Is there an automorphism ("a"), monomorphism ("m") or endomorphism ("e")
    of Fn x Fm sending gx to gy?  Stages run in order and the first Yes wins;
    the verdict records every stage's outcome in ``detail["stages"]``."""
    if (gx.x.alphabet, gx.y.alphabet) != (gy.x.alphabet, gy.y.alphabet):
        raise AlphabetMismatch("source and target lie in different groups")
    n, m = gx.x.alphabet.rank, gx.y.alphabet.rank
    if variant in ("a", "m") and min(n, m) < 2:
        raise ValueError(f"variant {variant} needs both ranks >= 2")
    if variant == "a":
        stages = _cascade_a(gx, gy)
    elif variant == "m":
        stages = _cascade_m(gx, gy, bound)
    elif variant == "e":
        stages = _cascade_e(gx, gy, bound)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    log = []
    unknown = None
    for name, run in stages:
        verdict = run()
        log.append((name, str(verdict)))
        if verdict.answer is Answer.YES:
            verdict.detail["stages"] = log
            return verdict
        if verdict.answer is Answer.UNKNOWN and unknown is None:
            unknown = verdict
    if unknown is not None:
        return WhVerdict(Answer.UNKNOWN, None, unknown.bound, f"{unknown.path}", {"stages": log})
    return WhVerdict(Answer.NO, None, None, "all stages refuted", {"stages": log})
