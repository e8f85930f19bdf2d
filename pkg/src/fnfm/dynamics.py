"""Uniform continuity and truncated boundary dynamics.

Points of the completion (pairs of possibly infinite reduced words) are only
ever held as truncations.  A component of a :class:`TruncatedPoint` shorter
than ``depth`` is an exact finite word; one of length ``depth`` stands for
every word sharing that prefix.  Images keep only the letters that are
determined by the known prefix, using a bounded cancellation constant.
Everything about attractors and singular points below is evidence at a
given depth, never a proof.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

from . import stallings
from .endo import EndoType, NotAnAutomorphism, PairElement, ProductEndo, hom_injective, invert_automorphism
from .fixed import Oracle, OracleRequired, _oracle_for, component_fix_basis
from .freeword import FreeHom, FreeWord, words_up_to

DEFAULT_BUDGET = 32
DEFAULT_PROBE_DEPTH = 16
DEFAULT_MAX_DEPTH = 256


class NotUniformlyContinuous(ValueError):
    pass


class NotFixedAtDepth(ValueError):
    pass


class UCReason(enum.Enum):
    UC_COMPONENTS = "type IV, VI or VII with each component trivial or injective"
    TYPE_OBSTRUCTION = "type I, II, III and V are never uniformly continuous"
    COMPONENT_OBSTRUCTION = "a component is neither trivial nor injective"


@dataclass(frozen=True)
class UCReport:
    uniformly_continuous: bool
    reason: UCReason
    which: str | None = None

    def __str__(self):
        tail = f" ({self.which})" if self.which else ""
        return f"{'uniformly continuous' if self.uniformly_continuous else 'not uniformly continuous'}: {self.reason.value}{tail}"


def uniform_continuity(e: ProductEndo) -> UCReport:
    if e.etype not in (EndoType.IV, EndoType.VI, EndoType.VII):
        return UCReport(False, UCReason.TYPE_OBSTRUCTION)
    for name, h in e.components().items():
        if not (h.is_trivial() or hom_injective(h)):
            return UCReport(False, UCReason.COMPONENT_OBSTRUCTION, name)
    return UCReport(True, UCReason.UC_COMPONENTS)


@dataclass(frozen=True)
class TruncatedPoint:
    """``depth`` letters are retained per component; ``x_depth``/``y_depth``
    override it per component when images are known further on one side."""

    x_prefix: FreeWord
    y_prefix: FreeWord
    depth: int
    x_depth: int | None = None
    y_depth: int | None = None

    def __post_init__(self):
        if self.x_depth is None:
            object.__setattr__(self, "x_depth", self.depth)
        if self.y_depth is None:
            object.__setattr__(self, "y_depth", self.depth)
        object.__setattr__(self, "depth", min(self.x_depth, self.y_depth))
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        if len(self.x_prefix) > self.x_depth or len(self.y_prefix) > self.y_depth:
            raise ValueError("prefix longer than depth")

    @classmethod
    def of(cls, x: FreeWord, y: FreeWord, depth: int) -> "TruncatedPoint":
        """Truncate (x, y) at ``depth``; shorter components stay exact."""
        return cls(x.prefix(depth), y.prefix(depth), depth)

    @property
    def x_exact(self) -> bool:
        return len(self.x_prefix) < self.x_depth

    @property
    def y_exact(self) -> bool:
        return len(self.y_prefix) < self.y_depth

    def swapped(self) -> "TruncatedPoint":
        return TruncatedPoint(self.y_prefix, self.x_prefix, self.depth, self.y_depth, self.x_depth)

    def agrees_with(self, other: "TruncatedPoint") -> bool:
        """True when nothing known about one contradicts the other."""
        for a, ea, b, eb in ((self.x_prefix, self.x_exact, other.x_prefix, other.x_exact),
                             (self.y_prefix, self.y_exact, other.y_prefix, other.y_exact)):
            k = min(len(a), len(b))
            if a.letters[:k] != b.letters[:k]:
                return False
            if ea and eb and a != b:
                return False
            if ea and len(b) > len(a) or eb and len(a) > len(b):
                return False
        return True

    def __str__(self):
        def show(w, exact):
            return str(w) if exact else f"{w} ..."
        return f"({show(self.x_prefix, self.x_exact)} | {show(self.y_prefix, self.y_exact)})"


def bounded_cancellation(h: FreeHom) -> int:
    """An upper bound on cancellation between h(u) and h(v) when uv is reduced.

    Zero when no two letter images can cancel; otherwise rank * max image
    length, the standard bound for maps that are injective on pi_1.
    """
    if h.is_trivial():
        return 0
    imgs = {x: (h.images[x - 1] if x > 0 else h.images[-x - 1].inverse()) for x in h.domain.letters()}
    if all(imgs.values()):
        free = all(imgs[x].letters[-1] != -imgs[y].letters[0]
                   for x in imgs for y in imgs if y != -x)
        if free:
            return 0
    return h.domain.rank * max(len(w) for w in h.images)


# a component value: (word, exact)
_Comp = tuple[FreeWord, bool]


def _push(h: FreeHom, comp: _Comp) -> tuple[FreeWord, bool, int | None]:
    """Image of a component: (known word, exact, guaranteed length if inexact)."""
    w, exact = comp
    img = h(w)
    if exact or h.is_trivial():
        return img, True, None
    g = max(0, len(img) - bounded_cancellation(h))
    return img.prefix(g), False, g


def _step_normal(e: ProductEndo, x: _Comp, y: _Comp):
    t = e.etype
    if t is EndoType.IV:
        return _push(e.phi, y), _push(e.psi, y)
    if t is EndoType.VI:
        return _push(e.phi, x), _push(e.psi, y)
    if t is EndoType.VII:
        return _push(e.psi, y), _push(e.phi, x)
    raise NotUniformlyContinuous(f"type {t} endomorphisms do not extend to the completion")


def apply_truncated(e: ProductEndo, p: TruncatedPoint, max_depth: int = DEFAULT_MAX_DEPTH) -> TruncatedPoint:
    """One step of the extension of e to the completion, at guaranteed depth."""
    if not uniform_continuity(e).uniformly_continuous:
        raise NotUniformlyContinuous(str(uniform_continuity(e)))
    q = p.swapped() if e.swapped else p
    (wx, ex, gx), (wy, ey, gy) = _step_normal(e, (q.x_prefix, q.x_exact), (q.y_prefix, q.y_exact))

    def depth_of(w, g):
        # exact words keep one spare position so they still read as exact
        return min(g if g is not None else len(w) + 1, max_depth)

    dx, dy = depth_of(wx, gx), depth_of(wy, gy)
    out = TruncatedPoint(wx.prefix(dx), wy.prefix(dy), min(dx, dy), dx, dy)
    return out.swapped() if e.swapped else out


def iterate_truncated(e: ProductEndo, p: TruncatedPoint, steps: int,
                      max_depth: int = DEFAULT_MAX_DEPTH) -> list[TruncatedPoint]:
    """The truncated orbit p, e(p), ..., e^steps(p)."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    orbit = [p]
    for _ in range(steps):
        orbit.append(apply_truncated(e, orbit[-1], max_depth))
    return orbit


def _lcp(a: FreeWord, b: FreeWord) -> int:
    k = 0
    for x, y in zip(a.letters, b.letters):
        if x != y:
            break
        k += 1
    return k


def _close(comp: FreeWord, exact: bool, target: FreeWord, d: int) -> bool:
    """Is the finite word ``comp``'s point within 2^-d of the target component?"""
    if exact:
        return comp == target
    return _lcp(comp, target) >= d


class BoundaryLabel(enum.Enum):
    SINGULAR = "SingularAtDepth"
    REGULAR = "RegularAtDepth"
    ATTRACTOR = "AttractorEvidence"
    REPELLER = "RepellerEvidence"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


@dataclass
class BoundaryClass:
    labels: tuple[BoundaryLabel, ...]
    depth: int
    witnesses: dict = field(default_factory=dict)

    @property
    def classification(self) -> str:
        return " + ".join(str(l) for l in self.labels)

    @property
    def conclusive(self) -> bool:
        return BoundaryLabel.INCONCLUSIVE not in self.labels


def _check_fixed(e: ProductEndo, p: TruncatedPoint, depth: int):
    q = apply_truncated(e, p)
    for name, a, ea, b, eb in (("x", p.x_prefix, p.x_exact, q.x_prefix, q.x_exact),
                               ("y", p.y_prefix, p.y_exact, q.y_prefix, q.y_exact)):
        if ea:
            if not (eb and a == b):
                raise NotFixedAtDepth(f"{name}-component {a} is not mapped to itself")
            continue
        need = min(depth, len(a))
        if len(b) < need and not eb:
            raise NotFixedAtDepth(f"{name}-component image is only known to {len(b)} letters, need {need}")
        if a.letters[:need] != b.letters[:need]:
            raise NotFixedAtDepth(f"{name}-component moves within the first {need} letters")


def _loops_with_prefix(G: stallings.SubgroupGraph, prefix: FreeWord, max_len: int):
    """Reduced base loops of G that start with ``prefix``, length <= max_len,
    shortest first."""
    v = G.read(prefix)
    if v is None:
        return
    last = prefix.letters[-1] if prefix.letters else None
    queue = deque([(v, last, prefix.letters)])
    while queue:
        u, prev, word = queue.popleft()
        if u == 0:
            yield FreeWord(G.alphabet, word)
        if len(word) >= max_len:
            continue
        for x, (t, _) in sorted(G.adj[u].items()):
            if prev is not None and x == -prev:
                continue
            queue.append((t, x, word + (x,)))


def _fixed_near(e: ProductEndo, p: TruncatedPoint, depth: int, oracle: Oracle, slack: int):
    """A finite fixed point within 2^-depth of p, None if there is none up to
    length depth + slack, or raises OracleRequired."""
    q = p.swapped() if e.swapped else p
    N = e.normal
    x, y = q.x_prefix, q.y_prefix
    xe, ye = q.x_exact, q.y_exact
    limit = depth + slack
    t = e.etype

    def basis(h, key):
        b = component_fix_basis(h, _oracle_for(oracle, key))
        if b is None:
            raise OracleRequired(key)
        return b

    def pick(G, w, exact):
        if exact:
            return [w] if stallings.contains(G, w) else []
        return _loops_with_prefix(G, w.prefix(depth), limit)

    found = None
    if t is EndoType.VI:
        Gx = stallings.fold(basis(e.phi, "phi"), N.A)
        Gy = stallings.fold(basis(e.psi, "psi"), N.B)
        fx = next(iter(pick(Gx, x, xe)), None)
        fy = next(iter(pick(Gy, y, ye)), None)
        if fx is not None and fy is not None:
            found = PairElement(fx, fy)
    elif t is EndoType.IV:
        G = stallings.fold(basis(e.psi, "psi"), N.B)
        for cand in pick(G, y, ye):
            if _close(e.phi(cand), xe, x, depth):
                found = PairElement(e.phi(cand), cand)
                break
    else:
        comp = e.phi.then(e.psi)
        G = stallings.fold(basis(comp, "phipsi"), N.A)
        for cand in pick(G, x, xe):
            if _close(e.phi(cand), ye, y, depth):
                found = PairElement(cand, e.phi(cand))
                break
    if found is None:
        return None
    found = e.to_user(found)
    assert e(found) == found
    return found


def _perturbations(p: TruncatedPoint, k: int, suffix_len: int = 3):
    """Finite points agreeing with p on the first k letters of each inexact
    component, with every reduced suffix of length <= suffix_len appended."""
    def variants(w: FreeWord, exact: bool):
        if exact:
            return [w]
        head = w.prefix(k)
        out = []
        for s in words_up_to(w.alphabet, suffix_len):
            cand = head * s
            if len(cand) >= k and cand.letters[:k] == head.letters:
                out.append(cand)
        return out
    xs, ys = variants(p.x_prefix, p.x_exact), variants(p.y_prefix, p.y_exact)
    for a in xs:
        for b in ys:
            yield PairElement(a, b)


def _attracted(e: ProductEndo, p: TruncatedPoint, k: int, budget: int, probe_depth: int):
    """Do all perturbations within 2^-k converge back to p (prefix-wise) within
    ``budget`` steps?  Returns (verdict, witnesses)."""
    target = min(probe_depth, p.depth)
    witnesses = []
    for g in _perturbations(p, k):
        start = TruncatedPoint.of(g.x, g.y, max(probe_depth, len(g.x) + 1, len(g.y) + 1))
        cur = start
        steps = None
        for n in range(1, budget + 1):
            cur = apply_truncated(e, cur, max_depth=4 * probe_depth)
            if _near(cur, p, target):
                steps = n
                break
        witnesses.append({"start": str(g), "steps": steps, "end": str(cur)})
        if steps is None:
            return False, witnesses
    return True, witnesses


def _near(a: TruncatedPoint, p: TruncatedPoint, target: int) -> bool:
    for w, ew, z, ez in ((a.x_prefix, a.x_exact, p.x_prefix, p.x_exact),
                         (a.y_prefix, a.y_exact, p.y_prefix, p.y_exact)):
        if ez:
            if not (ew and w == z):
                return False
        elif _lcp(w, z) < min(target, len(z)):
            return False
    return True


def boundary_fixed_classify(e: ProductEndo, p: TruncatedPoint, depth: int | None = None,
                            oracle: Oracle = None, k: int | None = None, budget: int = DEFAULT_BUDGET,
                            probe_depth: int = DEFAULT_PROBE_DEPTH, slack: int = 4) -> BoundaryClass:
    """Classify a (truncated) fixed point of the extension of e.

    Singular when a finite fixed point lies within 2^-depth of p (searched up
    to length depth + slack for coupled types), Regular otherwise.  Attractor
    evidence: every perturbation beyond position k returns to p within the
    budget; repeller evidence is the same test for the inverse automorphism.
    """
    uc = uniform_continuity(e)
    if not uc.uniformly_continuous:
        raise NotUniformlyContinuous(str(uc))
    depth = p.depth if depth is None else min(depth, p.depth)
    if depth < 1:
        raise ValueError("depth must be >= 1")
    _check_fixed(e, p, depth)
    k = max(1, depth // 2) if k is None else k
    labels = []
    witnesses: dict = {}
    try:
        near = _fixed_near(e, p, depth, oracle, slack)
    except OracleRequired as exc:
        labels.append(BoundaryLabel.INCONCLUSIVE)
        witnesses["singularity"] = f"needs a basis of Fix({exc.component})"
    else:
        if near is not None:
            labels.append(BoundaryLabel.SINGULAR)
            witnesses["finite_fixed_point"] = near
        else:
            labels.append(BoundaryLabel.REGULAR)
            witnesses["finite_fixed_point"] = None

    ok, orbits = _attracted(e, p, k, budget, probe_depth)
    witnesses["attractor_probe"] = orbits
    if ok:
        labels.append(BoundaryLabel.ATTRACTOR)
    try:
        inv = invert_automorphism(e)
    except NotAnAutomorphism:
        witnesses["repeller_probe"] = "inconclusive: not an automorphism"
    else:
        ok, orbits = _attracted(inv, p, k, budget, probe_depth)
        witnesses["repeller_probe"] = orbits
        if ok:
            labels.append(BoundaryLabel.REPELLER)
    return BoundaryClass(tuple(labels), depth, witnesses)
