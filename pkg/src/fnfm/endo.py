"""Endomorphisms of Fn x Fm: validation, Type I-VII classification, action.

An endomorphism is given by the images of the generators ``(a_i, 1)`` and
``(1, b_j)``.  Which of the four image sets X, Y, Z, W (first/second
coordinates of the a-images, first/second coordinates of the b-images) are
trivial decides the type.  Patterns that are mirror images of a listed type
under exchanging the two factors are stored in swapped coordinates, with
``ProductEndo.swapped`` set; :meth:`ProductEndo.to_normal` and
:meth:`ProductEndo.to_user` convert points between the two frames.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from . import stallings
from .freeword import Alphabet, FreeHom, FreeWord, primitive_root, weighted_sum


class EndoType(enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"
    VI = "VI"
    VII = "VII"

    def __str__(self):
        return self.value


class EndoError(ValueError):
    pass


class CommutationViolation(EndoError):
    def __init__(self, i: int, j: int, component: int):
        self.i, self.j, self.component = i, j, component
        what = "x_i and z_j" if component == 1 else "y_i and w_j"
        super().__init__(f"images of a{i} and b{j} do not commute in component {component} ({what})")


class InconsistentRoots(EndoError):
    pass


class NotAnAutomorphism(EndoError):
    pass


@dataclass(frozen=True)
class PairElement:
    x: FreeWord
    y: FreeWord

    def __mul__(self, other: "PairElement") -> "PairElement":
        return PairElement(self.x * other.x, self.y * other.y)

    def inverse(self) -> "PairElement":
        return PairElement(self.x.inverse(), self.y.inverse())

    def __pow__(self, k: int) -> "PairElement":
        return PairElement(self.x ** k, self.y ** k)

    def is_identity(self) -> bool:
        return self.x.is_identity() and self.y.is_identity()

    def swapped(self) -> "PairElement":
        return PairElement(self.y, self.x)

    def sort_key(self):
        return (len(self.x) + len(self.y), self.x.sort_key(), self.y.sort_key())

    def __len__(self) -> int:
        return len(self.x) + len(self.y)

    def __str__(self) -> str:
        return f"({self.x} | {self.y})"


@dataclass(frozen=True)
class EndoSpec:
    """Raw generator images; validation happens in :func:`validate_and_classify`."""

    A: Alphabet
    B: Alphabet
    images_a: tuple[PairElement, ...]
    images_b: tuple[PairElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "images_a", tuple(self.images_a))
        object.__setattr__(self, "images_b", tuple(self.images_b))
        if len(self.images_a) != self.A.rank or len(self.images_b) != self.B.rank:
            raise EndoError("wrong number of generator images")
        for img in self.images_a + self.images_b:
            if img.x.alphabet != self.A or img.y.alphabet != self.B:
                raise EndoError(f"image {img} is not in the ambient group")

    @classmethod
    def create(cls, n: int, m: int, images_a, images_b) -> "EndoSpec":
        """Build from ``(x, y)`` pairs given as FreeWords or letter tuples."""
        A, B = Alphabet(n, "a"), Alphabet(m, "b")

        def word(alpha, w):
            return w if isinstance(w, FreeWord) else FreeWord(alpha, tuple(w))

        return cls(A, B,
                   tuple(PairElement(word(A, x), word(B, y)) for x, y in images_a),
                   tuple(PairElement(word(A, x), word(B, y)) for x, y in images_b))

    @property
    def n(self) -> int:
        return self.A.rank

    @property
    def m(self) -> int:
        return self.B.rank

    def swapped(self) -> "EndoSpec":
        return EndoSpec(self.B, self.A,
                        tuple(g.swapped() for g in self.images_b),
                        tuple(g.swapped() for g in self.images_a))

    def identity_element(self) -> PairElement:
        return PairElement(self.A.identity(), self.B.identity())

    def generators(self) -> list[PairElement]:
        e = self.identity_element()
        return ([PairElement(a, e.y) for a in self.A.generators()]
                + [PairElement(e.x, b) for b in self.B.generators()])

    def apply_naive(self, g: PairElement) -> PairElement:
        """Generator substitution; the reference the classified formulas are checked against."""
        fx = FreeHom(self.A, self.A, [img.x for img in self.images_a])
        fy = FreeHom(self.A, self.B, [img.y for img in self.images_a])
        gx = FreeHom(self.B, self.A, [img.x for img in self.images_b])
        gy = FreeHom(self.B, self.B, [img.y for img in self.images_b])
        return PairElement(fx(g.x) * gx(g.y), fy(g.x) * gy(g.y))

    def triviality(self) -> tuple[bool, bool, bool, bool]:
        """(X, Y, Z, W) trivial flags."""
        return (all(g.x.is_identity() for g in self.images_a),
                all(g.y.is_identity() for g in self.images_a),
                all(g.x.is_identity() for g in self.images_b),
                all(g.y.is_identity() for g in self.images_b))


# (X, Y, Z, W trivial) -> (type, swapped)
CLASSIFICATION_TABLE: dict[tuple[bool, bool, bool, bool], tuple[EndoType, bool]] = {
    (False, False, False, False): (EndoType.I, False),
    (True, False, False, False): (EndoType.II, False),
    (False, False, False, True): (EndoType.II, True),
    (False, True, False, False): (EndoType.III, False),
    (False, False, True, False): (EndoType.III, True),
    (True, True, False, False): (EndoType.IV, False),
    (False, False, True, True): (EndoType.IV, True),
    (True, False, True, False): (EndoType.V, False),
    (False, True, False, True): (EndoType.V, True),
    (False, True, True, False): (EndoType.VI, False),
    (True, True, True, False): (EndoType.VI, False),
    (False, True, True, True): (EndoType.VI, False),
    (True, True, True, True): (EndoType.VI, False),
    (True, False, False, True): (EndoType.VII, False),
    (True, True, False, True): (EndoType.VII, False),
    (True, False, True, True): (EndoType.VII, False),
}


@dataclass(frozen=True)
class ProductEndo:
    """A validated endomorphism with its type data (in normalized coordinates).

    Depending on ``etype`` the fields carry: I: u, v, P, Q, R, S;
    II: phi (B->A), v, Q, S; III: u, P, R, phi (End B); IV: phi (B->A),
    psi (End B); V: v, Q, S; VI: phi (End A), psi (End B);
    VII: phi (A->B), psi (B->A).
    """

    spec: EndoSpec
    etype: EndoType
    swapped: bool = False
    u: FreeWord | None = None
    v: FreeWord | None = None
    P: tuple[int, ...] | None = None
    Q: tuple[int, ...] | None = None
    R: tuple[int, ...] | None = None
    S: tuple[int, ...] | None = None
    phi: FreeHom | None = None
    psi: FreeHom | None = None

    @property
    def normal(self) -> EndoSpec:
        return self.spec.swapped() if self.swapped else self.spec

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def m(self) -> int:
        return self.spec.m

    def to_normal(self, g: PairElement) -> PairElement:
        return g.swapped() if self.swapped else g

    def to_user(self, g: PairElement) -> PairElement:
        return g.swapped() if self.swapped else g

    # weighted exponent sums, normalized frame
    def xP(self, x: FreeWord) -> int:
        return weighted_sum(x, self.P)

    def xQ(self, x: FreeWord) -> int:
        return weighted_sum(x, self.Q)

    def yR(self, y: FreeWord) -> int:
        return weighted_sum(y, self.R)

    def yS(self, y: FreeWord) -> int:
        return weighted_sum(y, self.S)

    @property
    def uP(self) -> int:
        return self.xP(self.u)

    @property
    def vS(self) -> int:
        return self.yS(self.v)

    def apply_normal(self, g: PairElement) -> PairElement:
        x, y = g.x, g.y
        t = self.etype
        N = self.normal
        if t is EndoType.I:
            return PairElement(self.u ** (self.xP(x) + self.yR(y)), self.v ** (self.xQ(x) + self.yS(y)))
        if t is EndoType.II:
            return PairElement(self.phi(y), self.v ** (self.xQ(x) + self.yS(y)))
        if t is EndoType.III:
            return PairElement(self.u ** (self.xP(x) + self.yR(y)), self.phi(y))
        if t is EndoType.IV:
            return PairElement(self.phi(y), self.psi(y))
        if t is EndoType.V:
            return PairElement(N.A.identity(), self.v ** (self.xQ(x) + self.yS(y)))
        if t is EndoType.VI:
            return PairElement(self.phi(x), self.psi(y))
        return PairElement(self.psi(y), self.phi(x))

    def __call__(self, g: PairElement) -> PairElement:
        return self.to_user(self.apply_normal(self.to_normal(g)))

    def iterate(self, g: PairElement, k: int) -> PairElement:
        for _ in range(k):
            g = self(g)
        return g

    def expand(self) -> EndoSpec:
        """Rebuild the user-frame spec from the type data."""
        N = self.normal
        e = N.identity_element()
        imgs_a = [self.apply_normal(PairElement(a, e.y)) for a in N.A.generators()]
        imgs_b = [self.apply_normal(PairElement(e.x, b)) for b in N.B.generators()]
        out = EndoSpec(N.A, N.B, imgs_a, imgs_b)
        return out.swapped() if self.swapped else out

    def components(self) -> dict[str, FreeHom]:
        return {k: h for k, h in (("phi", self.phi), ("psi", self.psi)) if h is not None}

    def describe(self) -> dict:
        """Type data as printable fields (normalized frame)."""
        out = {"type": str(self.etype), "swapped": self.swapped}
        for name in ("u", "v"):
            w = getattr(self, name)
            if w is not None:
                out[name] = str(w)
        for name in ("P", "Q", "R", "S"):
            vec = getattr(self, name)
            if vec is not None:
                out[name] = list(vec)
        for name, h in self.components().items():
            out[name] = [str(img) for img in h.images]
        return out


def _common_root(words: Sequence[FreeWord]) -> FreeWord:
    for w in words:
        if not w.is_identity():
            r = primitive_root(w)[0]
            # canonical orientation, so a1^-1 and a1 give the same root
            return min(r, r.inverse(), key=FreeWord.sort_key)
    raise InconsistentRoots("no nontrivial word to take a root of")


def _exponent_of(root: FreeWord, w: FreeWord) -> int:
    if w.is_identity():
        return 0
    r, e = primitive_root(w)
    if r == root:
        return e
    if r == root.inverse():
        return -e
    raise InconsistentRoots(f"{w} is not a power of {root}")


def _check_commutation(spec: EndoSpec):
    for i, ga in enumerate(spec.images_a, 1):
        for j, gb in enumerate(spec.images_b, 1):
            if ga.x * gb.x != gb.x * ga.x:
                raise CommutationViolation(i, j, 1)
            if ga.y * gb.y != gb.y * ga.y:
                raise CommutationViolation(i, j, 2)


def validate_and_classify(spec: EndoSpec) -> ProductEndo:
    _check_commutation(spec)
    etype, swapped = CLASSIFICATION_TABLE[spec.triviality()]
    N = spec.swapped() if swapped else spec
    X = [g.x for g in N.images_a]
    Y = [g.y for g in N.images_a]
    Z = [g.x for g in N.images_b]
    W = [g.y for g in N.images_b]
    data: dict = {}
    if etype in (EndoType.I, EndoType.III):
        u = _common_root(X + Z)
        data.update(u=u, P=tuple(_exponent_of(u, x) for x in X), R=tuple(_exponent_of(u, z) for z in Z))
    if etype in (EndoType.I, EndoType.II, EndoType.V):
        v = _common_root(Y + W)
        data.update(v=v, Q=tuple(_exponent_of(v, y) for y in Y), S=tuple(_exponent_of(v, w) for w in W))
    if etype in (EndoType.II, EndoType.IV):
        data["phi"] = FreeHom(N.B, N.A, Z)
    if etype is EndoType.III:
        data["phi"] = FreeHom(N.B, N.B, W)
    if etype is EndoType.IV:
        data["psi"] = FreeHom(N.B, N.B, W)
    if etype is EndoType.VI:
        data.update(phi=FreeHom(N.A, N.A, X), psi=FreeHom(N.B, N.B, W))
    if etype is EndoType.VII:
        data.update(phi=FreeHom(N.A, N.B, Y), psi=FreeHom(N.B, N.A, Z))
    e = ProductEndo(spec, etype, swapped, **data)
    if e.expand() != spec:
        raise InconsistentRoots("classified data does not reproduce the specification")
    return e


def apply(e: ProductEndo, g: PairElement) -> PairElement:
    return e(g)


def compose(e1: ProductEndo, e2: ProductEndo) -> ProductEndo:
    """The endomorphism "e1 then e2"."""
    if (e1.spec.A, e1.spec.B) != (e2.spec.A, e2.spec.B):
        raise EndoError("endomorphisms of different groups")
    gens = e1.spec.generators()
    n = e1.spec.n
    images = [e2(e1(g)) for g in gens]
    return validate_and_classify(EndoSpec(e1.spec.A, e1.spec.B, images[:n], images[n:]))


def power(e: ProductEndo, k: int) -> ProductEndo:
    if k < 1:
        raise ValueError("power must be >= 1")
    out = e
    for _ in range(k - 1):
        out = compose(out, e)
    return out


def hom_injective(h: FreeHom) -> bool:
    """A hom from F_k is injective iff its image has rank k (free groups are hopfian)."""
    return stallings.rank(stallings.fold(h.images, h.codomain)) == h.domain.rank


def hom_surjective(h: FreeHom) -> bool:
    return stallings.is_whole_group(stallings.fold(h.images, h.codomain))


@dataclass(frozen=True)
class MorphismFlags:
    injective: bool
    surjective: bool
    automorphism: bool
    aut_coset: str | None = None


def morphism_flags(e: ProductEndo) -> MorphismFlags:
    if e.etype not in (EndoType.VI, EndoType.VII):
        return MorphismFlags(False, False, False, None)
    inj = hom_injective(e.phi) and hom_injective(e.psi)
    sur = hom_surjective(e.phi) and hom_surjective(e.psi)
    aut = inj and sur
    coset = ("Aut6" if e.etype is EndoType.VI else "Aut7") if aut else None
    return MorphismFlags(inj, sur, aut, coset)


def make_type_VI(phi: FreeHom, psi: FreeHom) -> EndoSpec:
    A, B = phi.domain, psi.domain
    return EndoSpec(A, B,
                    [PairElement(img, B.identity()) for img in phi.images],
                    [PairElement(A.identity(), img) for img in psi.images])


def make_type_VII(phi: FreeHom, psi: FreeHom) -> EndoSpec:
    """(x, y) -> (psi(y), phi(x)) with phi: A -> B and psi: B -> A."""
    A, B = phi.domain, psi.domain
    return EndoSpec(A, B,
                    [PairElement(A.identity(), img) for img in phi.images],
                    [PairElement(img, B.identity()) for img in psi.images])


def make_type_I(u: FreeWord, v: FreeWord, P, Q, R, S) -> EndoSpec:
    A, B = u.alphabet, v.alphabet
    return EndoSpec(A, B,
                    [PairElement(u ** p, v ** q) for p, q in zip(P, Q)],
                    [PairElement(u ** r, v ** s) for r, s in zip(R, S)])


def invert_automorphism(e: ProductEndo) -> ProductEndo:
    if not morphism_flags(e).automorphism:
        raise NotAnAutomorphism(f"type {e.etype} endomorphism is not an automorphism")
    if e.etype is EndoType.VI:
        spec = make_type_VI(stallings.invert_free_iso(e.phi), stallings.invert_free_iso(e.psi))
    else:
        spec = make_type_VII(stallings.invert_free_iso(e.psi), stallings.invert_free_iso(e.phi))
    inv = validate_and_classify(spec)
    for g in e.spec.generators():
        if inv(e(g)) != g or e(inv(g)) != g:
            raise AssertionError("inverse failed the composition check")
    return inv
