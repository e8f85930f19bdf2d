"""Reduced words in a free group of finite rank, and homomorphisms between them.

Letters are signed generator indices: ``+i`` is the i-th generator and ``-i``
its inverse (indices start at 1).  Words are always kept freely reduced.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce as _fold
from math import gcd
from typing import Iterable, Iterator, Sequence


class AlphabetMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    rank: int
    tag: str = "a"

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"alphabet rank must be positive, got {self.rank}")

    def letters(self) -> list[int]:
        """All 2*rank signed letters, positive ones first."""
        return list(range(1, self.rank + 1)) + [-i for i in range(1, self.rank + 1)]

    def generators(self) -> list["FreeWord"]:
        return [FreeWord(self, (i,)) for i in range(1, self.rank + 1)]

    def identity(self) -> "FreeWord":
        return FreeWord(self, ())

    def word(self, *letters: int) -> "FreeWord":
        return FreeWord(self, letters)


def _free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class FreeWord:
    """An element of the free group on ``alphabet``.

    Construction reduces eagerly, so two equal group elements always compare
    equal and hash alike.
    """

    alphabet: Alphabet
    letters: tuple[int, ...] = field(default=())

    def __post_init__(self):
        rank = self.alphabet.rank
        for x in self.letters:
            if x == 0 or abs(x) > rank:
                raise IndexError(f"letter {x} outside alphabet of rank {rank}")
        object.__setattr__(self, "letters", _free_reduce(self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def _check(self, other: "FreeWord"):
        if other.alphabet != self.alphabet:
            raise AlphabetMismatch(f"{self.alphabet} vs {other.alphabet}")

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        self._check(other)
        return FreeWord(self.alphabet, self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(self.alphabet, tuple(-x for x in reversed(self.letters)))

    def __invert__(self) -> "FreeWord":
        return self.inverse()

    def __pow__(self, k: int) -> "FreeWord":
        base = self if k >= 0 else self.inverse()
        return FreeWord(self.alphabet, base.letters * abs(k))

    def prefix(self, k: int) -> "FreeWord":
        return FreeWord(self.alphabet, self.letters[:k])

    def sort_key(self):
        return (len(self.letters), tuple((abs(x), x < 0) for x in self.letters))

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        tag = self.alphabet.tag
        return " ".join(f"{tag}{abs(x)}" if x > 0 else f"{tag}{abs(x)}^-1" for x in self.letters)

    def __repr__(self) -> str:
        return f"FreeWord({self})"


def reduce(letters: Sequence[int], alphabet: Alphabet) -> FreeWord:
    """Freely reduce a raw signed-index sequence."""
    return FreeWord(alphabet, tuple(letters))


def _cyclic_split(w: FreeWord) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split w = c * core * c^-1 with core cyclically reduced."""
    s = w.letters
    i, j = 0, len(s) - 1
    while i < j and s[i] == -s[j]:
        i += 1
        j -= 1
    return s[:i], s[i:j + 1]


def primitive_root(w: FreeWord) -> tuple[FreeWord, int]:
    """Return ``(root, k)`` with ``root**k == w``, k maximal.

    Uses the conjugate form w = c·core·c⁻¹: w is a k-th power exactly when the
    cyclically reduced core is a k-fold repetition of a string.
    """
    if w.is_identity():
        raise ValueError("the identity has no primitive root")
    conj, core = _cyclic_split(w)
    n = len(core)
    for d in range(1, n + 1):
        if n % d == 0 and core[:d] * (n // d) == core:
            inv = tuple(-x for x in reversed(conj))
            return FreeWord(w.alphabet, conj + core[:d] + inv), n // d
    raise AssertionError("unreachable")


class _AllIntegers:
    """Marker for the set of all integers (power exponents of the identity)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __contains__(self, k) -> bool:
        return isinstance(k, int)

    def __repr__(self) -> str:
        return "AllIntegers"


AllIntegers = _AllIntegers()


def divisors(k: int) -> list[int]:
    k = abs(k)
    small = [d for d in range(1, int(k ** 0.5) + 1) if k % d == 0]
    return sorted(set(small + [k // d for d in small]))


def power_exponents(w: FreeWord):
    """The set {k : w = α^k for some α}; ``AllIntegers`` for the identity."""
    if w.is_identity():
        return AllIntegers
    _, e = primitive_root(w)
    return frozenset(s * d for d in divisors(e) for s in (1, -1))


def kth_root(w: FreeWord, k: int) -> FreeWord | None:
    """Some α with α^k = w, or None. For the identity and k != 0, α = 1."""
    if k == 0:
        return w.alphabet.identity() if w.is_identity() else None
    if w.is_identity():
        return w
    root, e = primitive_root(w)
    if e % k:
        return None
    return root ** (e // k)


def commutes(x: FreeWord, z: FreeWord) -> bool:
    x._check(z)
    return (x * z) == (z * x)


def commutes_by_roots(x: FreeWord, z: FreeWord) -> bool:
    """Commutation via the common-primitive-root criterion."""
    x._check(z)
    if x.is_identity() or z.is_identity():
        return True
    rx, _ = primitive_root(x)
    rz, _ = primitive_root(z)
    return rx == rz or rx == rz.inverse()


def exponent_vector(w: FreeWord) -> tuple[int, ...]:
    out = [0] * w.alphabet.rank
    for x in w.letters:
        out[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(out)


def weighted_sum(w: FreeWord, weights: Sequence[int]) -> int:
    if len(weights) != w.alphabet.rank:
        raise ValueError(f"expected {w.alphabet.rank} weights, got {len(weights)}")
    return sum(c * k for c, k in zip(exponent_vector(w), weights))


def content_gcd(w: FreeWord) -> int:
    """gcd of the exponent vector (0 when w lies in the commutator subgroup)."""
    return _fold(gcd, exponent_vector(w), 0)


def reduced_words(alphabet: Alphabet, length: int) -> Iterator[FreeWord]:
    """All reduced words of exactly ``length`` letters."""
    letters = alphabet.letters()

    def rec(prefix):
        if len(prefix) == length:
            yield FreeWord(alphabet, tuple(prefix))
            return
        for x in letters:
            if prefix and prefix[-1] == -x:
                continue
            prefix.append(x)
            yield from rec(prefix)
            prefix.pop()

    yield from rec([])


def words_up_to(alphabet: Alphabet, length: int) -> Iterator[FreeWord]:
    for k in range(length + 1):
        yield from reduced_words(alphabet, k)


class FreeHom:
    """A homomorphism between free groups given by generator images.

    Maps act on the right in the usual group-theoretic convention, so
    ``f.then(g)`` means "apply f, then g".
    """

    __slots__ = ("domain", "codomain", "images", "_inv_images")

    def __init__(self, domain: Alphabet, codomain: Alphabet, images: Sequence[FreeWord]):
        images = tuple(images)
        if len(images) != domain.rank:
            raise ValueError(f"need {domain.rank} images, got {len(images)}")
        for img in images:
            if img.alphabet != codomain:
                raise AlphabetMismatch(f"image {img} not over {codomain}")
        self.domain = domain
        self.codomain = codomain
        self.images = images
        self._inv_images = tuple(img.inverse() for img in images)

    @classmethod
    def identity(cls, alphabet: Alphabet) -> "FreeHom":
        return cls(alphabet, alphabet, alphabet.generators())

    @classmethod
    def trivial(cls, domain: Alphabet, codomain: Alphabet) -> "FreeHom":
        return cls(domain, codomain, [codomain.identity()] * domain.rank)

    @classmethod
    def relabel(cls, domain: Alphabet, codomain: Alphabet) -> "FreeHom":
        """The natural identification a_i -> b_i between equal-rank alphabets."""
        if domain.rank != codomain.rank:
            raise ValueError("relabel needs equal ranks")
        return cls(domain, codomain, codomain.generators())

    def __call__(self, w: FreeWord) -> FreeWord:
        if w.alphabet != self.domain:
            raise AlphabetMismatch(f"{w} not in domain {self.domain}")
        out: list[int] = []
        for x in w.letters:
            img = self.images[x - 1] if x > 0 else self._inv_images[-x - 1]
            for y in img.letters:
                if out and out[-1] == -y:
                    out.pop()
                else:
                    out.append(y)
        return FreeWord(self.codomain, tuple(out))

    def then(self, other: "FreeHom") -> "FreeHom":
        if other.domain != self.codomain:
            raise AlphabetMismatch("composition domain mismatch")
        return FreeHom(self.domain, other.codomain, [other(img) for img in self.images])

    def power(self, k: int) -> "FreeHom":
        if self.domain != self.codomain:
            raise ValueError("only endomorphisms have powers")
        out = FreeHom.identity(self.domain)
        for _ in range(k):
            out = out.then(self)
        return out

    def is_identity(self) -> bool:
        return self.domain == self.codomain and all(
            img.letters == (i,) for i, img in enumerate(self.images, 1))

    def is_trivial(self) -> bool:
        return all(img.is_identity() for img in self.images)

    def letter_permutation(self) -> dict[int, int] | None:
        """If every generator maps to a single letter bijectively, return the
        signed letter map {x: image letter}; otherwise None."""
        if self.domain.rank != self.codomain.rank:
            return None
        perm = {}
        for i, img in enumerate(self.images, 1):
            if len(img) != 1:
                return None
            perm[i] = img.letters[0]
            perm[-i] = -img.letters[0]
        if len({abs(v) for v in perm.values()}) != self.domain.rank:
            return None
        return perm

    def __eq__(self, other) -> bool:
        return (isinstance(other, FreeHom) and self.domain == other.domain
                and self.codomain == other.codomain and self.images == other.images)

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, self.images))

    def __repr__(self) -> str:
        maps = ", ".join(f"{self.domain.tag}{i}->{img}" for i, img in enumerate(self.images, 1))
        return f"FreeHom({maps})"
