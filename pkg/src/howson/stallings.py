"""Stallings graphs for finitely generated subgroups of free groups.

A subgroup is a folded core based graph with edges labeled by generators;
words spelling closed paths at the basepoint are exactly the subgroup
elements.  Graphs produced by the constructors here are canonically
numbered (BFS from the basepoint, transitions ordered by label then
direction), so equality of canonical graphs is based labeled isomorphism.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping, Sequence

from . import abelian
from .words import Alphabet, Word

INFINITE = math.inf


class NotAMemberError(ValueError):
    """The word does not belong to the subgroup."""


class SubgroupGraph:
    """Based edge-labeled graph; basepoint is always vertex 0."""

    __slots__ = ("alphabet", "num_vertices", "edges", "folded", "core", "_adj", "_tree")

    def __init__(
        self,
        alphabet: Alphabet,
        num_vertices: int,
        edges: Iterable[tuple[int, int, int]],
        folded: bool = False,
        core: bool = False,
    ):
        edge_set = frozenset(edges)
        if num_vertices < 1:
            raise ValueError("graph needs a basepoint")
        for u, g, v in edge_set:
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise ValueError(f"edge endpoint out of range: {(u, g, v)}")
            if not 1 <= g <= alphabet.n:
                raise ValueError(f"edge label out of range: {(u, g, v)}")
        self.alphabet = alphabet
        self.num_vertices = num_vertices
        self.edges = edge_set
        self.folded = folded
        self.core = core
        self._adj = None
        self._tree = None

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SubgroupGraph)
            and self.alphabet == other.alphabet
            and self.num_vertices == other.num_vertices
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.alphabet, self.num_vertices, self.edges))

    def __repr__(self) -> str:
        return (
            f"SubgroupGraph(n={self.alphabet.n}, V={self.num_vertices}, "
            f"E={sorted(self.edges)})"
        )

    def adjacency(self) -> tuple[dict, dict]:
        """(out, inn) transition maps; requires a folded graph."""
        if not self.folded:
            raise ValueError("adjacency maps need a folded graph")
        if self._adj is None:
            out: dict[tuple[int, int], int] = {}
            inn: dict[tuple[int, int], int] = {}
            for u, g, v in self.edges:
                if (u, g) in out or (v, g) in inn:
                    raise ValueError("graph marked folded but has a label clash")
                out[(u, g)] = v
                inn[(v, g)] = u
            self._adj = (out, inn)
        return self._adj


def is_deterministic(graph: SubgroupGraph) -> bool:
    """No vertex has two equal-label outgoing or incoming edges."""
    out = set()
    inn = set()
    for u, g, v in graph.edges:
        if (u, g) in out or (v, g) in inn:
            return False
        out.add((u, g))
        inn.add((v, g))
    return True


def is_core(graph: SubgroupGraph) -> bool:
    deg = [0] * graph.num_vertices
    for u, _, v in graph.edges:
        deg[u] += 1
        deg[v] += 1
    return all(deg[v] >= 2 for v in range(1, graph.num_vertices))


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        self.parent[self.find(b)] = self.find(a)


def fold(graph: SubgroupGraph) -> SubgroupGraph:
    """Identify equal-label edges at shared endpoints until deterministic.

    The accepted language (closed paths at the basepoint) is unchanged.
    """
    uf = _UnionFind(graph.num_vertices)
    edges = set(graph.edges)
    while True:
        edges = {(uf.find(u), g, uf.find(v)) for u, g, v in edges}
        clash = None
        out: dict[tuple[int, int], int] = {}
        inn: dict[tuple[int, int], int] = {}
        for u, g, v in sorted(edges):
            if (u, g) in out and out[(u, g)] != v:
                clash = (out[(u, g)], v)
                break
            if (v, g) in inn and inn[(v, g)] != u:
                clash = (inn[(v, g)], u)
                break
            out[(u, g)] = v
            inn[(v, g)] = u
        if clash is None:
            break
        uf.union(*clash)
    base = uf.find(0)
    reps = [base] + sorted(
        {uf.find(v) for v in range(graph.num_vertices)} - {base}
    )
    index = {r: i for i, r in enumerate(reps)}
    new_edges = {(index[u], g, index[v]) for u, g, v in edges}
    return SubgroupGraph(graph.alphabet, len(reps), new_edges, folded=True)


def trim_core_with_map(
    graph: SubgroupGraph,
) -> tuple[SubgroupGraph, dict[int, int]]:
    """Remove hanging trees; also return the surviving-vertex renumbering."""
    edges = set(graph.edges)
    alive = set(range(graph.num_vertices))
    while True:
        deg: dict[int, int] = {v: 0 for v in alive}
        for u, _, v in edges:
            deg[u] += 1
            deg[v] += 1
        dead = {v for v in alive if v != 0 and deg[v] <= 1}
        if not dead:
            break
        alive -= dead
        edges = {e for e in edges if e[0] in alive and e[2] in alive}
    order = [0] + sorted(alive - {0})
    vmap = {v: i for i, v in enumerate(order)}
    trimmed = SubgroupGraph(
        graph.alphabet,
        len(order),
        {(vmap[u], g, vmap[v]) for u, g, v in edges},
        folded=graph.folded,
        core=True,
    )
    return trimmed, vmap


def trim_core(graph: SubgroupGraph) -> SubgroupGraph:
    return trim_core_with_map(graph)[0]


def canonical_with_map(
    graph: SubgroupGraph,
) -> tuple[SubgroupGraph, dict[int, int]]:
    """BFS renumbering from the basepoint; transitions by (label, +/-)."""
    out, inn = graph.adjacency()
    order = [0]
    seen = {0}
    qi = 0
    while qi < len(order):
        v = order[qi]
        qi += 1
        for g in range(1, graph.alphabet.n + 1):
            for w in (out.get((v, g)), inn.get((v, g))):
                if w is not None and w not in seen:
                    seen.add(w)
                    order.append(w)
    if len(order) != graph.num_vertices:
        raise ValueError("graph is not connected")
    vmap = {v: i for i, v in enumerate(order)}
    renamed = SubgroupGraph(
        graph.alphabet,
        graph.num_vertices,
        {(vmap[u], g, vmap[v]) for u, g, v in graph.edges},
        folded=True,
        core=graph.core,
    )
    return renamed, vmap


def canonical(graph: SubgroupGraph) -> SubgroupGraph:
    return canonical_with_map(graph)[0]


def from_generators(alphabet: Alphabet, gens: Sequence[Word]) -> SubgroupGraph:
    """Folded core graph of the subgroup generated by the given words."""
    edges = []
    nv = 1
    for w in gens:
        if w.alphabet != alphabet:
            raise ValueError("alphabet mismatch")
        cur = 0
        last = len(w.letters) - 1
        for j, s in enumerate(w.letters):
            nxt = 0 if j == last else nv
            if j != last:
                nv += 1
            edges.append((cur, abs(s), nxt) if s > 0 else (nxt, abs(s), cur))
            cur = nxt
    bouquet = SubgroupGraph(alphabet, nv, edges)
    return canonical(trim_core(fold(bouquet)))


def whole_group(alphabet: Alphabet) -> SubgroupGraph:
    return from_generators(alphabet, alphabet.letters())


def membership(graph: SubgroupGraph, w: Word) -> bool:
    """True iff w spells a closed path at the basepoint."""
    if w.alphabet != graph.alphabet:
        raise ValueError("alphabet mismatch")
    out, inn = graph.adjacency()
    cur = 0
    for s in w.letters:
        cur = out.get((cur, s)) if s > 0 else inn.get((cur, -s))
        if cur is None:
            return False
    return cur == 0


def rank(graph: SubgroupGraph) -> int:
    """Free rank of the subgroup: E - V + 1 for a folded core graph."""
    return len(graph.edges) - graph.num_vertices + 1


def index(graph: SubgroupGraph) -> int | float:
    """Subgroup index: V if the graph is a complete cover, else INFINITE."""
    out, inn = graph.adjacency()
    for v in range(graph.num_vertices):
        for g in range(1, graph.alphabet.n + 1):
            if (v, g) not in out or (v, g) not in inn:
                return INFINITE
    return graph.num_vertices


def _tree_data(graph: SubgroupGraph):
    """BFS spanning tree: parent pointers, tree edges, sorted non-tree edges."""
    if graph._tree is None:
        out, inn = graph.adjacency()
        parent: dict[int, tuple[int, int] | None] = {0: None}
        tree_edges: set[tuple[int, int, int]] = set()
        order = [0]
        qi = 0
        while qi < len(order):
            v = order[qi]
            qi += 1
            for g in range(1, graph.alphabet.n + 1):
                w = out.get((v, g))
                if w is not None and w not in parent:
                    parent[w] = (v, g)
                    tree_edges.add((v, g, w))
                    order.append(w)
                w = inn.get((v, g))
                if w is not None and w not in parent:
                    parent[w] = (v, -g)
                    tree_edges.add((w, g, v))
                    order.append(w)
        if len(order) != graph.num_vertices:
            raise ValueError("graph is not connected")
        nontree = sorted(e for e in graph.edges if e not in tree_edges)
        graph._tree = (parent, tree_edges, nontree)
    return graph._tree


def _path_letters(parent: Mapping[int, tuple[int, int] | None], v: int) -> list[int]:
    letters = []
    while parent[v] is not None:
        u, s = parent[v]
        letters.append(s)
        v = u
    letters.reverse()
    return letters


def nontree_edges(graph: SubgroupGraph) -> list[tuple[int, int, int]]:
    return list(_tree_data(graph)[2])


def basis(graph: SubgroupGraph) -> list[Word]:
    """Free basis: one word per non-tree edge of the BFS spanning tree."""
    parent, _, nontree = _tree_data(graph)
    words = []
    for u, g, v in nontree:
        letters = (
            _path_letters(parent, u)
            + [g]
            + [-s for s in reversed(_path_letters(parent, v))]
        )
        words.append(Word(graph.alphabet, letters))
    return words


def express_in_basis(graph: SubgroupGraph, w: Word) -> list[int]:
    """Rewrite a member as signed 1-based indices into basis(graph)."""
    if w.alphabet != graph.alphabet:
        raise ValueError("alphabet mismatch")
    _, _, nontree = _tree_data(graph)
    edge_index = {e: i for i, e in enumerate(nontree)}
    out, inn = graph.adjacency()
    cur = 0
    expr = []
    for s in w.letters:
        if s > 0:
            nxt = out.get((cur, s))
            edge = (cur, s, nxt)
        else:
            nxt = inn.get((cur, -s))
            edge = (nxt, -s, cur)
        if nxt is None:
            raise NotAMemberError(f"{w} is not in the subgroup")
        i = edge_index.get(edge)
        if i is not None:
            expr.append(i + 1 if s > 0 else -(i + 1))
        cur = nxt
    if cur != 0:
        raise NotAMemberError(f"{w} is not in the subgroup")
    return expr


def pullback(g1: SubgroupGraph, g2: SubgroupGraph) -> SubgroupGraph:
    """Graph of the intersection: basepoint component of the fiber product."""
    if g1.alphabet != g2.alphabet:
        raise ValueError("alphabet mismatch")
    out1, inn1 = g1.adjacency()
    out2, inn2 = g2.adjacency()
    start = (0, 0)
    ids = {start: 0}
    order = [start]
    edges = set()
    qi = 0
    while qi < len(order):
        u1, u2 = order[qi]
        qi += 1
        for g in range(1, g1.alphabet.n + 1):
            v1, v2 = out1.get((u1, g)), out2.get((u2, g))
            if v1 is not None and v2 is not None:
                if (v1, v2) not in ids:
                    ids[(v1, v2)] = len(order)
                    order.append((v1, v2))
                edges.add((ids[(u1, u2)], g, ids[(v1, v2)]))
            w1, w2 = inn1.get((u1, g)), inn2.get((u2, g))
            if w1 is not None and w2 is not None:
                if (w1, w2) not in ids:
                    ids[(w1, w2)] = len(order)
                    order.append((w1, w2))
                edges.add((ids[(w1, w2)], g, ids[(u1, u2)]))
    product = SubgroupGraph(g1.alphabet, len(order), edges, folded=True)
    return canonical(trim_core(product))


def finite_quotient_preimage(
    g0: SubgroupGraph,
    voltages: Sequence[abelian.AbElement],
    s: abelian.AbSubgroup,
) -> SubgroupGraph:
    """Graph of {w in the subgroup of g0 : hom(w) in S} as a derived covering.

    The homomorphism is given by its values on basis(g0), tree edges carry
    voltage zero.  Vertices of the covering are pairs (vertex, coset of S
    inside the subgroup generated by the voltage images), so the covering
    degree is [im q + S : S].
    """
    ambient = s.ambient
    if len(voltages) != rank(g0):
        raise ValueError("one voltage per basis element required")
    for a in voltages:
        if a.group != ambient:
            raise ValueError("voltage outside the ambient group")
    quotient, project = abelian.quotient_data(ambient, s)
    _, tree_edges, nontree = _tree_data(g0)
    volt: dict[tuple[int, int, int], tuple[int, ...]] = {
        e: (0,) * quotient.rank for e in tree_edges
    }
    for i, e in enumerate(nontree):
        volt[e] = project(voltages[i]).residues

    def add(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((x + y) % d for x, y, d in zip(a, b, quotient.moduli))

    zero = (0,) * quotient.rank
    cosets = [zero]
    coset_id = {zero: 0}
    qi = 0
    values = sorted({volt[e] for e in nontree})
    while qi < len(cosets):
        t = cosets[qi]
        qi += 1
        for val in values:
            u = add(t, val)
            if u not in coset_id:
                coset_id[u] = len(cosets)
                cosets.append(u)
    deg = len(cosets)
    edges = set()
    for u, g, v in g0.edges:
        w = volt[(u, g, v)]
        for ti, t in enumerate(cosets):
            edges.add((u * deg + ti, g, v * deg + coset_id[add(t, w)]))
    covering = SubgroupGraph(
        g0.alphabet, g0.num_vertices * deg, edges, folded=True
    )
    return canonical(trim_core(covering))
