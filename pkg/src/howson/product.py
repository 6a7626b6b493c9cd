"""Finitely generated subgroups of F_n x A for a finite abelian A.

A subgroup is stored as enriched Stallings data: the projection graph
K0 <= F_n, the fiber K intersect A as a lattice subgroup, and a voltage
map assigning to each basis element of K0 the canonical representative of
its torsion coset.  The triple determines
K = {(x, a) : x in K0, a in phi(x) + fiber}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import abelian, stallings
from .abelian import AbElement, AbGroup, AbSubgroup
from .stallings import SubgroupGraph
from .words import Alphabet, Word


@dataclass(frozen=True)
class GeneratorPair:
    """A generator (word, torsion) of a subgroup of F_n x A."""

    word: Word
    torsion: AbElement


@dataclass(frozen=True)
class ProductSubgroup:
    proj: SubgroupGraph
    fiber: AbSubgroup
    voltages: tuple[AbElement, ...]

    @property
    def alphabet(self) -> Alphabet:
        return self.proj.alphabet

    @property
    def ambient(self) -> AbGroup:
        return self.fiber.ambient

    def phihat(self, w: Word) -> AbElement:
        """Voltage of a member of the projection (well defined mod fiber)."""
        expr = stallings.express_in_basis(self.proj, w)
        total = self.ambient.zero()
        for i in expr:
            v = self.voltages[abs(i) - 1]
            total = total + (v if i > 0 else -v)
        return total

    def generator_pairs(self) -> list[GeneratorPair]:
        """A generating set: voltage-decorated basis plus fiber generators."""
        pairs = [
            GeneratorPair(w, v)
            for w, v in zip(stallings.basis(self.proj), self.voltages)
        ]
        empty = Word(self.alphabet)
        pairs += [GeneratorPair(empty, f) for f in self.fiber.generators()]
        return pairs


def _check_pair(alphabet: Alphabet, ambient: AbGroup, gp: GeneratorPair) -> None:
    if gp.word.alphabet != alphabet:
        raise ValueError("alphabet mismatch")
    if gp.torsion.group != ambient:
        raise ValueError("ambient group mismatch")


def normalize(
    alphabet: Alphabet, ambient: AbGroup, gens: Sequence[GeneratorPair]
) -> ProductSubgroup:
    """Canonical enriched data of the subgroup generated by the given pairs.

    Folds the voltage-carrying bouquet; a fold that merges two parallel
    edges contributes the voltage difference to the fiber, a fold that
    merges distinct endpoints first equalizes the two voltages by shifting
    a vertex potential (closed-path voltages are invariant under potential
    shifts, so the subgroup is unchanged).
    """
    zero = ambient.zero()
    fiber_gens: list[AbElement] = []
    edges: list[list] = []  # [u, g, v, voltage]
    nv = 1
    for gp in gens:
        _check_pair(alphabet, ambient, gp)
        letters = gp.word.letters
        if not letters:
            if gp.torsion != zero:
                fiber_gens.append(gp.torsion)
            continue
        cur = 0
        last = len(letters) - 1
        for j, s in enumerate(letters):
            nxt = 0 if j == last else nv
            if j != last:
                nv += 1
            vol = gp.torsion if j == last else zero
            if s > 0:
                edges.append([cur, s, nxt, vol])
            else:
                edges.append([nxt, -s, cur, -vol])
            cur = nxt

    uf = stallings._UnionFind(nv)

    def shift(cls: int, delta: AbElement) -> None:
        for e in edges:
            src, dst = uf.find(e[0]), uf.find(e[2])
            if src == cls and dst == cls:
                continue
            if dst == cls:
                e[3] = e[3] + delta
            elif src == cls:
                e[3] = e[3] - delta

    while True:
        for e in edges:
            e[0] = uf.find(e[0])
            e[2] = uf.find(e[2])
        # merge exact parallels, collecting voltage differences into the fiber
        by_key: dict[tuple[int, int, int], list] = {}
        deduped = []
        for e in sorted(edges, key=lambda e: (e[0], e[1], e[2], e[3].residues)):
            key = (e[0], e[1], e[2])
            kept = by_key.get(key)
            if kept is None:
                by_key[key] = e
                deduped.append(e)
            elif e[3] != kept[3]:
                fiber_gens.append(e[3] - kept[3])
        edges = deduped
        clash = None
        out: dict[tuple[int, int], list] = {}
        inn: dict[tuple[int, int], list] = {}
        for e in edges:
            u, g, v = e[0], e[1], e[2]
            if (u, g) in out:
                clash = ("out", out[(u, g)], e)
                break
            if (v, g) in inn:
                clash = ("in", inn[(v, g)], e)
                break
            out[(u, g)] = e
            inn[(v, g)] = e
        if clash is None:
            break
        kind, e1, e2 = clash
        if kind == "out":
            u, v1, c1 = e1[0], e1[2], e1[3]
            v2, c2 = e2[2], e2[3]
            if v2 != u:
                shift(v2, c1 - c2)
            else:  # e2 is a loop, so e1 is not; shift its far endpoint instead
                shift(v1, c2 - c1)
            uf.union(v1, v2)
        else:
            v, u1, c1 = e1[2], e1[0], e1[3]
            u2, c2 = e2[0], e2[3]
            if u2 != v:
                shift(u2, c2 - c1)
            else:
                shift(u1, c1 - c2)
            uf.union(u1, u2)

    base = uf.find(0)
    reps = [base] + sorted({uf.find(v) for v in range(nv)} - {base})
    idx = {r: i for i, r in enumerate(reps)}
    volt = {(idx[e[0]], e[1], idx[e[2]]): e[3] for e in edges}
    graph = SubgroupGraph(alphabet, len(reps), volt.keys(), folded=True)
    graph, vmap = stallings.trim_core_with_map(graph)
    volt = {
        (vmap[u], g, vmap[v]): c
        for (u, g, v), c in volt.items()
        if u in vmap and v in vmap
    }
    graph, vmap = stallings.canonical_with_map(graph)
    volt = {(vmap[u], g, vmap[v]): c for (u, g, v), c in volt.items()}

    fiber = abelian.subgroup_from_generators(ambient, fiber_gens)
    voltages = tuple(
        fiber.canonical_rep(v) for v in _basis_voltages(graph, volt, ambient)
    )
    return ProductSubgroup(graph, fiber, voltages)


def _basis_voltages(
    graph: SubgroupGraph,
    volt: dict[tuple[int, int, int], AbElement],
    ambient: AbGroup,
) -> list[AbElement]:
    """Accumulated voltage of each basis word's path through the graph."""
    parent, _, nontree = stallings._tree_data(graph)
    pot: dict[int, AbElement] = {0: ambient.zero()}

    def potential(v: int) -> AbElement:
        if v not in pot:
            u, s = parent[v]
            edge = (u, s, v) if s > 0 else (v, -s, u)
            step = volt[edge] if s > 0 else -volt[edge]
            pot[v] = potential(u) + step
        return pot[v]

    return [potential(u) + volt[(u, g, v)] - potential(v) for u, g, v in nontree]


def p_membership(p: ProductSubgroup, gp: GeneratorPair) -> bool:
    """True iff the pair lies in the subgroup."""
    _check_pair(p.alphabet, p.ambient, gp)
    if not stallings.membership(p.proj, gp.word):
        return False
    return p.fiber.contains(gp.torsion - p.phihat(gp.word))


def p_rank(p: ProductSubgroup) -> int:
    """Minimal number of generators: rank of the projection plus d(fiber)."""
    return stallings.rank(p.proj) + abelian.min_generators(p.fiber)


def p_intersect(p1: ProductSubgroup, p2: ProductSubgroup) -> ProductSubgroup:
    """Intersection via pullback of projections and a voltage-kernel covering."""
    if p1.alphabet != p2.alphabet:
        raise ValueError("alphabet mismatch")
    if p1.ambient != p2.ambient:
        raise ValueError("ambient group mismatch")
    ambient = p1.ambient
    both = stallings.pullback(p1.proj, p2.proj)
    fiber_sum = abelian.ab_sum(p1.fiber, p2.fiber)
    quotient, project = abelian.quotient_data(ambient, fiber_sum)
    psi = [
        project(p1.phihat(x) - p2.phihat(x)) for x in stallings.basis(both)
    ]
    proj = stallings.finite_quotient_preimage(
        both, psi, abelian.subgroup_from_generators(quotient, [])
    )
    fiber = abelian.ab_intersect(p1.fiber, p2.fiber)
    voltages = []
    for y in stallings.basis(proj):
        rep = abelian.lattice_crt(p1.fiber, p1.phihat(y), p2.fiber, p2.phihat(y))
        if rep is None:  # impossible: kernel membership makes the cosets meet
            raise AssertionError("voltage cosets of a kernel element are disjoint")
        voltages.append(fiber.canonical_rep(rep))
    return ProductSubgroup(proj, fiber, tuple(voltages))


def check_hanna_neumann(h: SubgroupGraph, k: SubgroupGraph) -> bool:
    """rk(H cap K) - 1 <= (rk H - 1)(rk K - 1), ranks <= 1 clamped to 0."""
    meet = stallings.pullback(h, k)
    bound = max(0, stallings.rank(h) - 1) * max(0, stallings.rank(k) - 1)
    return stallings.rank(meet) - 1 <= bound


def check_kp_bound(m: int, rk_h: int, rk_k: int, rk_i: int) -> bool:
    """Intersection-rank bound for a degree-m finite extension of a free group.

    Instantiates the free-group bound (p-1)(q-1)+1 at p = m(rk_h - 1) + 1,
    q = m(rk_k - 1) + 1, plus the extension term m - 1.
    """
    return rk_i <= (m * max(0, rk_h - 1)) * (m * max(0, rk_k - 1)) + m


@dataclass(frozen=True)
class WitnessReport:
    """The constructed pair (H, K) in F_2 x Z/l with its verified ranks."""

    h: int
    k: int
    l: int
    subgroup_h: ProductSubgroup
    subgroup_k: ProductSubgroup
    intersection: ProductSubgroup
    rk_h: int
    rk_k: int
    rk_hk: int
    index_h: int
    index_k0: int
    index_hk: int
    identity_holds: bool
    kp_bound_holds: bool


def witness(h: int, k: int, l: int) -> WitnessReport:
    """Subgroups H, K <= F_2 x Z/lZ with rk(H cap K) - 1 = l(h-1)(k-1).

    H is the full preimage of (h-1)Z under the first exponent sum; K is the
    graph of dividing the second exponent sum by k-1 and projecting mod l,
    over the preimage K0 of (k-1)Z.
    """
    if min(h, k, l) < 2:
        raise ValueError("parameters must be >= 2")
    alphabet = Alphabet(2)
    ambient = AbGroup((l,))
    f2 = stallings.whole_group(alphabet)
    triv_fiber = abelian.subgroup_from_generators(ambient, [])

    def exponent_kernel(modulus: int, coord: int) -> SubgroupGraph:
        target = AbGroup((modulus,))
        images = [
            target.element((1,)) if g == coord else target.zero()
            for g in (1, 2)
        ]
        return stallings.finite_quotient_preimage(
            f2, images, abelian.subgroup_from_generators(target, [])
        )

    h_proj = exponent_kernel(h - 1, 1)
    sub_h = ProductSubgroup(
        h_proj, triv_fiber, (ambient.zero(),) * stallings.rank(h_proj)
    )
    k0 = exponent_kernel(k - 1, 2)
    k_voltages = []
    for x in stallings.basis(k0):
        e = x.exponent_sum(2)
        if e % (k - 1):
            raise AssertionError("basis word escapes the (k-1)Z preimage")
        k_voltages.append(ambient.element((e // (k - 1),)))
    sub_k = ProductSubgroup(k0, triv_fiber, tuple(k_voltages))

    meet = p_intersect(sub_h, sub_k)
    rk_h, rk_k, rk_hk = p_rank(sub_h), p_rank(sub_k), p_rank(meet)
    identity = rk_hk - 1 == l * (h - 1) * (k - 1) and rk_h == h and rk_k == k
    return WitnessReport(
        h=h,
        k=k,
        l=l,
        subgroup_h=sub_h,
        subgroup_k=sub_k,
        intersection=meet,
        rk_h=rk_h,
        rk_k=rk_k,
        rk_hk=rk_hk,
        index_h=stallings.index(h_proj),
        index_k0=stallings.index(k0),
        index_hk=stallings.index(meet.proj),
        identity_holds=identity,
        kp_bound_holds=check_kp_bound(ambient.order, rk_h, rk_k, rk_hk),
    )
