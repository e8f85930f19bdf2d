"""Stallings graphs of finitely generated subgroups of free groups.

A :class:`SubgroupGraph` is a folded, base-pointed graph with edges labelled
by generators; its reduced base loops spell exactly the subgroup.  Graphs built
by :func:`fold` also carry, per edge, a word in the *input* generators, which
lets :meth:`SubgroupGraph.express` rewrite a member as a product of them.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .freeword import Alphabet, AlphabetMismatch, FreeHom, FreeWord, _free_reduce

XWord = tuple[int, ...]


def _xinv(w: XWord) -> XWord:
    return tuple(-x for x in reversed(w))


def _xmul(*ws: XWord) -> XWord:
    return _free_reduce(x for w in ws for x in w)


class SubgroupGraph:
    """Folded core graph; vertex 0 is the base.

    ``adj[v]`` maps a signed letter to ``(target, xlabel)``; both orientations
    of every edge are present.  ``xlabel`` is None for graphs that were not
    produced by folding generators.
    """

    __slots__ = ("alphabet", "adj", "ngens")

    def __init__(self, alphabet: Alphabet, adj, ngens: int | None = None):
        self.alphabet = alphabet
        self.adj = tuple(dict(a) for a in adj)
        self.ngens = ngens

    @property
    def num_vertices(self) -> int:
        return len(self.adj)

    @property
    def num_edges(self) -> int:
        return sum(1 for a in self.adj for x in a if x > 0)

    def edges(self):
        for v, a in enumerate(self.adj):
            for x, (t, _) in a.items():
                if x > 0:
                    yield v, x, t

    def read(self, w: FreeWord, start: int = 0) -> int | None:
        """Endpoint of the path labelled w from ``start``, or None if it falls off."""
        v = start
        for x in w.letters:
            step = self.adj[v].get(x)
            if step is None:
                return None
            v = step[0]
        return v

    def express(self, w: FreeWord) -> XWord | None:
        """Write w as a reduced word in the folded generators (signed 1-based
        indices), or None when w is not in the subgroup."""
        if w.alphabet != self.alphabet:
            raise AlphabetMismatch("word over a different alphabet")
        if self.ngens is None:
            raise ValueError("graph carries no generator bookkeeping")
        v = 0
        parts = []
        for x in w.letters:
            step = self.adj[v].get(x)
            if step is None:
                return None
            v, xl = step
            parts.append(xl)
        if v != 0:
            return None
        return _xmul(*parts)

    def basis(self) -> list[FreeWord]:
        """A free basis: one generator per edge outside a BFS spanning tree."""
        path: dict[int, tuple[int, ...]] = {0: ()}
        tree = set()
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for x in sorted(self.adj[v], key=lambda t: (abs(t), t < 0)):
                t = self.adj[v][x][0]
                if t not in path:
                    path[t] = path[v] + (x,)
                    tree.add((v, x))
                    tree.add((t, -x))
                    queue.append(t)
        gens = []
        for v, x, t in self.edges():
            if (v, x) in tree:
                continue
            letters = path[v] + (x,) + tuple(-y for y in reversed(path[t]))
            gens.append(FreeWord(self.alphabet, letters))
        return sorted(gens, key=FreeWord.sort_key)

    def __repr__(self) -> str:
        return f"SubgroupGraph(V={self.num_vertices}, E={self.num_edges}, rank={rank(self)})"


def _trim_and_renumber(alphabet: Alphabet, adj: dict[int, dict], base: int, ngens) -> SubgroupGraph:
    # drop hanging trees (degree-1 vertices other than the base)
    adj = {v: dict(a) for v, a in adj.items()}
    changed = True
    while changed:
        changed = False
        for v in list(adj):
            if v != base and len(adj[v]) <= 1:
                for x, (t, _) in adj[v].items():
                    adj[t].pop(-x, None)
                del adj[v]
                changed = True
    # canonical BFS numbering from the base
    order = {base: 0}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for x in sorted(adj[v], key=lambda t: (abs(t), t < 0)):
            t = adj[v][x][0]
            if t not in order:
                order[t] = len(order)
                queue.append(t)
    out = [None] * len(order)
    for v, i in order.items():
        out[i] = {x: (order[t], xl) for x, (t, xl) in adj[v].items()}
    return SubgroupGraph(alphabet, out, ngens)


def fold(generators: Sequence[FreeWord], alphabet: Alphabet | None = None) -> SubgroupGraph:
    """Stallings folding of the petal graph of ``generators``."""
    gens = list(generators)
    if alphabet is None:
        if not gens:
            raise ValueError("alphabet required for an empty generator list")
        alphabet = gens[0].alphabet
    for g in gens:
        if g.alphabet != alphabet:
            raise AlphabetMismatch(f"{g} not over {alphabet}")

    # multigraph: eid -> [src, letter(>0), tgt, xlabel]
    edges: dict[int, list] = {}
    inc: dict[int, set] = {0: set()}
    nv = 1
    ne = 0

    def add_edge(s, x, t, xl):
        nonlocal ne
        if x < 0:
            s, x, t, xl = t, -x, s, _xinv(xl)
        edges[ne] = [s, x, t, xl]
        inc[s].add(ne)
        inc[t].add(ne)
        ne += 1

    for k, g in enumerate(gens, 1):
        if g.is_identity():
            continue
        prev = 0
        for pos, x in enumerate(g.letters):
            last = pos == len(g) - 1
            if last:
                nxt = 0
            else:
                nxt = nv
                inc[nxt] = set()
                nv += 1
            add_edge(prev, x, nxt, (k,) if last else ())
            prev = nxt

    def outgoing(v):
        """Signed letters leaving v -> list of (eid, other end, xlabel read from v)."""
        table: dict[int, list] = {}
        for e in inc[v]:
            s, x, t, xl = edges[e]
            if s == v:
                table.setdefault(x, []).append((e, t, xl))
            if t == v:
                table.setdefault(-x, []).append((e, s, _xinv(xl)))
        return table

    pending = deque(inc)
    while pending:
        u = pending.popleft()
        if u not in inc:
            continue
        clash = None
        for x, lst in outgoing(u).items():
            if len(lst) > 1:
                clash = lst[0], lst[1]
                break
        if clash is None:
            continue
        (e1, v1, alpha), (e2, v2, beta) = clash
        if e1 == e2:
            # a loop read in both directions with the same letter cannot happen
            raise AssertionError("degenerate fold")
        if v1 != v2:
            if v2 == 0:
                e1, v1, alpha, e2, v2, beta = e2, v2, beta, e1, v1, alpha
            # gauge-shift v2 by g = beta^-1 alpha, then merge v2 into v1
            g = _xmul(_xinv(beta), alpha)
            ginv = _xinv(g)
            for e in list(inc[v2]):
                s, x, t, xl = edges[e]
                if s == v2:
                    xl = _xmul(ginv, xl)
                    s = v1
                if t == v2:
                    xl = _xmul(xl, g)
                    t = v1
                edges[e] = [s, x, t, xl]
                inc[v1].add(e)
            del inc[v2]
            if u == v2:
                u = v1
        # e1 and e2 are now parallel; drop e2 (a differing xlabel is a relation)
        s, _, t, _ = edges.pop(e2)
        inc[s].discard(e2)
        inc[t].discard(e2)
        pending.append(u)
        pending.append(v1)
        for e in inc[v1]:
            s, _, t, _ = edges[e]
            pending.append(s)
            pending.append(t)

    adj: dict[int, dict] = {v: {} for v in inc}
    for s, x, t, xl in edges.values():
        adj[s][x] = (t, xl)
        adj[t][-x] = (s, _xinv(xl))
    return _trim_and_renumber(alphabet, adj, 0, len(gens))


def whole_group(alphabet: Alphabet) -> SubgroupGraph:
    return fold(alphabet.generators(), alphabet)


def trivial_subgroup(alphabet: Alphabet) -> SubgroupGraph:
    return fold([], alphabet)


def contains(G: SubgroupGraph, w: FreeWord) -> bool:
    if w.alphabet != G.alphabet:
        raise AlphabetMismatch("word over a different alphabet")
    return G.read(w) == 0


def rank(G: SubgroupGraph) -> int:
    return G.num_edges - G.num_vertices + 1


def is_whole_group(G: SubgroupGraph) -> bool:
    return all(contains(G, g) for g in G.alphabet.generators())


def same_subgroup(G: SubgroupGraph, H: SubgroupGraph) -> bool:
    return all(contains(H, b) for b in G.basis()) and all(contains(G, b) for b in H.basis())


def intersect(G: SubgroupGraph, H: SubgroupGraph) -> SubgroupGraph:
    """Pointed product graph restricted to the base component, then core-trimmed."""
    if G.alphabet != H.alphabet:
        raise AlphabetMismatch("subgroups of different free groups")
    start = (0, 0)
    index = {start: 0}
    adj: dict[int, dict] = {0: {}}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        g, h = p
        for x, (tg, _) in G.adj[g].items():
            step = H.adj[h].get(x)
            if step is None:
                continue
            q = (tg, step[0])
            if q not in index:
                index[q] = len(index)
                adj[index[q]] = {}
                queue.append(q)
            adj[index[p]][x] = (index[q], None)
    return _trim_and_renumber(G.alphabet, adj, 0, None)


@dataclass(frozen=True)
class WeightedAutomaton:
    """The automaton on Z_modulus reading b_j^e as "add e*weights[j]"."""

    weights: tuple[int, ...]
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1; use a counter for modulus 0")
        object.__setattr__(self, "weights", tuple(self.weights))

    def step(self, state: int, letter: int) -> int:
        r = self.weights[abs(letter) - 1]
        return (state + (r if letter > 0 else -r)) % self.modulus

    def run(self, w: FreeWord) -> int:
        s = 0
        for x in w.letters:
            s = self.step(s, x)
        return s

    def accepts(self, w: FreeWord) -> bool:
        if len(self.weights) != w.alphabet.rank:
            raise ValueError("weight vector does not match the alphabet")
        return self.run(w) == 0


def build_weighted(r: Sequence[int], modulus: int) -> WeightedAutomaton:
    return WeightedAutomaton(tuple(r), modulus)


def subgroup_of_weighted(A: WeightedAutomaton, alphabet: Alphabet) -> SubgroupGraph:
    """The automaton's reachable state graph read as a Stallings graph at 0.

    Transitions are bijections on Z_modulus, so the graph is already folded
    and complete; its base loops are exactly the accepted reduced words.
    """
    if len(A.weights) != alphabet.rank:
        raise ValueError("weight vector does not match the alphabet")
    seen = {0}
    queue = deque([0])
    adj: dict[int, dict] = {}
    while queue:
        s = queue.popleft()
        adj.setdefault(s, {})
        for x in alphabet.letters():
            t = A.step(s, x)
            adj[s][x] = (t, None)
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return _trim_and_renumber(alphabet, adj, 0, None)


def invert_free_iso(h: FreeHom) -> FreeHom:
    """Inverse of a free-group isomorphism, by rewriting each codomain
    generator in terms of the image basis."""
    if h.domain.rank != h.codomain.rank:
        raise ValueError("not an isomorphism: ranks differ")
    G = fold(h.images, h.codomain)
    if rank(G) != h.domain.rank or not is_whole_group(G):
        raise ValueError("not an isomorphism")
    images = []
    for g in h.codomain.generators():
        xw = G.express(g)
        assert xw is not None
        images.append(FreeWord(h.domain, xw))
    inv = FreeHom(h.codomain, h.domain, images)
    assert h.then(inv).is_identity() and inv.then(h).is_identity()
    return inv
