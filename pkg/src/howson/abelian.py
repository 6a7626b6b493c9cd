"""Exact arithmetic in finite abelian groups A = Z^r / D Z^r.

Subgroups are full-rank integer lattices L with D Z^r <= L <= Z^r, stored as
a canonical row-style Hermite normal form basis, so that membership, sums,
intersections and quotients are all plain integer linear algebra.  All
arithmetic uses Python integers and is exact at any size.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product
from math import lcm, prod
from typing import Callable, Iterator, Sequence


class AmbientTooLargeError(ValueError):
    """The reduced finite ambient group exceeds the configured size bound."""


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) = a*x + b*y and g >= 0.

    When a already divides b the coefficients are (sign(a), 0), so an
    elimination step built on them leaves the pivot row untouched.
    """
    if a != 0 and b % a == 0:
        return (a, 1, 0) if a > 0 else (-a, -1, 0)
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def hnf_with_transform(
    rows: Sequence[Sequence[int]], ncols: int
) -> tuple[list[list[int]], list[list[int]], list[tuple[int, int]]]:
    """Row-style Hermite normal form with transformation matrix.

    Returns (H, U, pivots) where U is unimodular, U*M = H, H is in row
    echelon form with positive pivots and the entries above each pivot
    reduced into [0, pivot).  Rows past the last pivot are zero.
    """
    m = len(rows)
    A = [list(r) for r in rows]
    U = _identity(m)
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        for i in range(r + 1, m):
            if A[i][c] == 0:
                continue
            a, b = A[r][c], A[i][c]
            g, x, y = _egcd(a, b)
            p, q = a // g, b // g
            A[r], A[i] = (
                [x * A[r][j] + y * A[i][j] for j in range(ncols)],
                [-q * A[r][j] + p * A[i][j] for j in range(ncols)],
            )
            U[r], U[i] = (
                [x * U[r][j] + y * U[i][j] for j in range(m)],
                [-q * U[r][j] + p * U[i][j] for j in range(m)],
            )
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-v for v in A[r]]
            U[r] = [-v for v in U[r]]
        for j in range(r):
            f = A[j][c] // A[r][c]
            if f:
                A[j] = [A[j][t] - f * A[r][t] for t in range(ncols)]
                U[j] = [U[j][t] - f * U[r][t] for t in range(m)]
        pivots.append((r, c))
        r += 1
    return A, U, pivots


def hnf(rows: Sequence[Sequence[int]], ncols: int) -> tuple[tuple[int, ...], ...]:
    """Canonical HNF basis of the lattice spanned by the given rows."""
    H, _, pivots = hnf_with_transform(rows, ncols)
    return tuple(tuple(H[i]) for i, _ in pivots)


def snf_with_transform(
    rows: Sequence[Sequence[int]], ncols: int
) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Smith normal form: (diag, U, V) with U*M*V diagonal, d1 | d2 | ..."""
    m = len(rows)
    A = [list(r) for r in rows]
    U = _identity(m)
    V = _identity(ncols)

    def row_op(t: int, i: int) -> None:
        a, b = A[t][t], A[i][t]
        g, x, y = _egcd(a, b)
        p, q = a // g, b // g
        A[t], A[i] = (
            [x * A[t][j] + y * A[i][j] for j in range(ncols)],
            [-q * A[t][j] + p * A[i][j] for j in range(ncols)],
        )
        U[t], U[i] = (
            [x * U[t][j] + y * U[i][j] for j in range(m)],
            [-q * U[t][j] + p * U[i][j] for j in range(m)],
        )

    def col_op(t: int, j: int) -> None:
        a, b = A[t][t], A[t][j]
        g, x, y = _egcd(a, b)
        p, q = a // g, b // g
        for row in A:
            row[t], row[j] = x * row[t] + y * row[j], -q * row[t] + p * row[j]
        for row in V:
            row[t], row[j] = x * row[t] + y * row[j], -q * row[t] + p * row[j]

    t = 0
    size = min(m, ncols)
    while t < size:
        piv = next(
            (
                (i, j)
                for i in range(t, m)
                for j in range(t, ncols)
                if A[i][j] != 0
            ),
            None,
        )
        if piv is None:
            break
        i, j = piv
        if i != t:
            A[t], A[i] = A[i], A[t]
            U[t], U[i] = U[i], U[t]
        if j != t:
            for row in A:
                row[t], row[j] = row[j], row[t]
            for row in V:
                row[t], row[j] = row[j], row[t]
        while True:
            for i in range(t + 1, m):
                if A[i][t]:
                    row_op(t, i)
            for j in range(t + 1, ncols):
                if A[t][j]:
                    col_op(t, j)
            if any(A[i][t] for i in range(t + 1, m)) or any(
                A[t][j] for j in range(t + 1, ncols)
            ):
                continue
            bad = next(
                (
                    i
                    for i in range(t + 1, m)
                    for j in range(t + 1, ncols)
                    if A[i][j] % A[t][t] != 0
                ),
                None,
            )
            if bad is None:
                break
            A[t] = [A[t][j] + A[bad][j] for j in range(ncols)]
            U[t] = [U[t][j] + U[bad][j] for j in range(m)]
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            U[t] = [-v for v in U[t]]
        t += 1
    diag = [A[i][i] for i in range(size)]
    return diag, U, V


def snf_diagonal(rows: Sequence[Sequence[int]], ncols: int) -> tuple[int, ...]:
    """Diagonal d1 | d2 | ... of the Smith normal form."""
    diag, _, _ = snf_with_transform(rows, ncols)
    return tuple(diag)


@dataclass(frozen=True)
class AbGroup:
    """A = Z/d1 x ... x Z/dr, moduli >= 1."""

    moduli: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(d < 1 for d in self.moduli):
            raise ValueError("moduli must be >= 1")

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def order(self) -> int:
        return prod(self.moduli)

    def zero(self) -> "AbElement":
        return AbElement(self, (0,) * self.rank)

    def element(self, residues: Sequence[int]) -> "AbElement":
        if len(residues) != self.rank:
            raise ValueError("dimension mismatch")
        return AbElement(
            self, tuple(r % d for r, d in zip(residues, self.moduli))
        )

    def elements(self) -> Iterator["AbElement"]:
        for tup in iter_product(*(range(d) for d in self.moduli)):
            yield AbElement(self, tup)


@dataclass(frozen=True)
class AbElement:
    group: AbGroup
    residues: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.residues) != self.group.rank or any(
            not 0 <= r < d for r, d in zip(self.residues, self.group.moduli)
        ):
            raise ValueError("residues not canonical for the group")

    def _check(self, other: "AbElement") -> None:
        if self.group != other.group:
            raise ValueError("ambient group mismatch")

    def __add__(self, other: "AbElement") -> "AbElement":
        self._check(other)
        return self.group.element(
            [a + b for a, b in zip(self.residues, other.residues)]
        )

    def __neg__(self) -> "AbElement":
        return self.group.element([-a for a in self.residues])

    def __sub__(self, other: "AbElement") -> "AbElement":
        return self + (-other)

    def scale(self, k: int) -> "AbElement":
        return self.group.element([k * a for a in self.residues])

    def order(self) -> int:
        return lcm(
            1, *(d // _egcd(r, d)[0] for r, d in zip(self.residues, self.group.moduli))
        )


class AbSubgroup:
    """A subgroup of an AbGroup, stored as a canonical full-rank lattice."""

    __slots__ = ("ambient", "lattice")

    def __init__(self, ambient: AbGroup, lattice: tuple[tuple[int, ...], ...]):
        r = ambient.rank
        if len(lattice) != r or any(len(row) != r for row in lattice):
            raise ValueError("lattice basis must be square of ambient rank")
        if any(lattice[i][i] <= 0 for i in range(r)) or any(
            lattice[i][j] != 0 for i in range(r) for j in range(i)
        ):
            raise ValueError("lattice basis must be upper triangular HNF")
        self.ambient = ambient
        self.lattice = lattice
        for i, d in enumerate(ambient.moduli):
            vec = [d if j == i else 0 for j in range(r)]
            if any(_reduce_mod_lattice(lattice, vec)):
                raise ValueError("lattice does not contain D*Z^r")

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AbSubgroup)
            and self.ambient == other.ambient
            and self.lattice == other.lattice
        )

    def __hash__(self) -> int:
        return hash((self.ambient, self.lattice))

    def __repr__(self) -> str:
        return f"AbSubgroup({self.ambient}, {self.lattice})"

    @property
    def order(self) -> int:
        det = prod(self.lattice[i][i] for i in range(self.ambient.rank))
        return self.ambient.order // det

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_whole(self) -> bool:
        return self.order == self.ambient.order

    def contains(self, x: AbElement) -> bool:
        if x.group != self.ambient:
            raise ValueError("ambient group mismatch")
        return not any(_reduce_mod_lattice(self.lattice, list(x.residues)))

    def canonical_rep(self, x: AbElement) -> AbElement:
        """Canonical representative of the coset x + S (HNF box residue)."""
        if x.group != self.ambient:
            raise ValueError("ambient group mismatch")
        return self.ambient.element(
            _reduce_mod_lattice(self.lattice, list(x.residues))
        )

    def generators(self) -> list[AbElement]:
        """Lattice basis rows as group elements, zero images dropped."""
        gens = [self.ambient.element(row) for row in self.lattice]
        return [g for g in gens if g != self.ambient.zero()]

    def elements(self) -> list[AbElement]:
        """All elements, by closure of the generators (small groups only)."""
        zero = self.ambient.zero()
        seen = {zero}
        frontier = [zero]
        gens = self.generators()
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = x + g
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return sorted(seen, key=lambda e: e.residues)


def _reduce_mod_lattice(
    lattice: Sequence[Sequence[int]], vec: list[int]
) -> list[int]:
    """Unique representative of vec modulo the HNF lattice, in the pivot box."""
    r = len(vec)
    for i in range(r):
        q = vec[i] // lattice[i][i]
        if q:
            for j in range(i, r):
                vec[j] -= q * lattice[i][j]
    return vec


def _solve_triangular(
    lattice: Sequence[Sequence[int]], target: Sequence[int]
) -> list[int]:
    """Integer coefficients c with c * lattice = target (must be solvable)."""
    r = len(target)
    v = list(target)
    c = [0] * r
    for i in range(r):
        q, rem = divmod(v[i], lattice[i][i])
        if rem:
            raise ValueError("target not in lattice")
        c[i] = q
        for j in range(i, r):
            v[j] -= q * lattice[i][j]
    if any(v):
        raise ValueError("target not in lattice")
    return c


def subgroup_from_generators(
    ambient: AbGroup, gens: Sequence[AbElement]
) -> AbSubgroup:
    """Smallest subgroup containing the given elements."""
    r = ambient.rank
    rows = [list(g.residues) for g in gens]
    for g in gens:
        if g.group != ambient:
            raise ValueError("ambient group mismatch")
    rows += [
        [d if j == i else 0 for j in range(r)]
        for i, d in enumerate(ambient.moduli)
    ]
    return AbSubgroup(ambient, hnf(rows, r))


def whole_group(ambient: AbGroup) -> AbSubgroup:
    return subgroup_from_generators(
        ambient,
        [
            ambient.element([1 if j == i else 0 for j in range(ambient.rank)])
            for i in range(ambient.rank)
        ],
    )


def ab_membership(s: AbSubgroup, x: AbElement) -> bool:
    return s.contains(x)


def ab_sum(s: AbSubgroup, t: AbSubgroup) -> AbSubgroup:
    if s.ambient != t.ambient:
        raise ValueError("ambient group mismatch")
    rows = [list(row) for row in s.lattice] + [list(row) for row in t.lattice]
    return AbSubgroup(s.ambient, hnf(rows, s.ambient.rank))


def ab_intersect(s: AbSubgroup, t: AbSubgroup) -> AbSubgroup:
    """Lattice intersection via the kernel of the stacked-basis system."""
    if s.ambient != t.ambient:
        raise ValueError("ambient group mismatch")
    r = s.ambient.rank
    stacked = [list(row) for row in s.lattice] + [list(row) for row in t.lattice]
    _, U, pivots = hnf_with_transform(stacked, r)
    rows = []
    for i in range(len(pivots), 2 * r):
        # kernel row: its first half expresses a vector of L_s that also lies in L_t
        rows.append(
            [
                sum(U[i][k] * s.lattice[k][j] for k in range(r))
                for j in range(r)
            ]
        )
    return AbSubgroup(s.ambient, hnf(rows, r))


def min_generators(s: AbSubgroup) -> int:
    """Minimal number of generators: invariant factors > 1 of L / D*Z^r."""
    r = s.ambient.rank
    if r == 0:
        return 0
    relations = [
        _solve_triangular(
            s.lattice, [d if j == i else 0 for j in range(r)]
        )
        for i, d in enumerate(s.ambient.moduli)
    ]
    diag = snf_diagonal(relations, r)
    return sum(1 for d in diag if d > 1)


def quotient_data(
    ambient: AbGroup, m: AbSubgroup
) -> tuple[AbGroup, Callable[[AbElement], AbElement]]:
    """The quotient A/M in invariant-factor form with its projection map."""
    if m.ambient != ambient:
        raise ValueError("ambient group mismatch")
    r = ambient.rank
    diag, _, V = snf_with_transform([list(row) for row in m.lattice], r)
    keep = [i for i in range(r) if diag[i] != 1]
    quotient = AbGroup(tuple(diag[i] for i in keep))

    def project(x: AbElement) -> AbElement:
        if x.group != ambient:
            raise ValueError("ambient group mismatch")
        return quotient.element(
            [sum(x.residues[k] * V[k][j] for k in range(r)) for j in keep]
        )

    return quotient, project


def lattice_crt(
    s: AbSubgroup, x: AbElement, t: AbSubgroup, y: AbElement
) -> AbElement | None:
    """An element of (x + S) intersect (y + T), or None if the cosets miss."""
    if s.ambient != t.ambient:
        raise ValueError("ambient group mismatch")
    r = s.ambient.rank
    stacked = [list(row) for row in s.lattice] + [list(row) for row in t.lattice]
    H, U, pivots = hnf_with_transform(stacked, r)
    d = [b - a for a, b in zip(x.residues, y.residues)]
    coeffs = [0] * (2 * r)
    for i, c in pivots:
        q, rem = divmod(d[c], H[i][c])
        if rem:
            return None
        if q:
            for j in range(r):
                d[j] -= q * H[i][j]
        coeffs[i] = q
    if any(d):
        return None
    shift = [0] * r
    for i in range(2 * r):
        if coeffs[i] == 0:
            continue
        for k in range(r):
            if U[i][k]:
                for j in range(r):
                    shift[j] += coeffs[i] * U[i][k] * s.lattice[k][j]
    return s.ambient.element([a + b for a, b in zip(x.residues, shift)])


@dataclass(frozen=True)
class TorsionElement:
    """An element of the direct sum of Z/mZ over m >= 2, by its support."""

    support: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        moduli = [m for m, _ in self.support]
        if len(set(moduli)) != len(moduli):
            raise ValueError("support moduli must be distinct")
        for m, r in self.support:
            if m < 2:
                raise ValueError("support moduli must be >= 2")
            if not 0 < r < m:
                raise ValueError("support residues must be canonical and nonzero")

    @classmethod
    def make(cls, pairs: Sequence[tuple[int, int]]) -> "TorsionElement":
        """Canonicalize: reduce residues, drop zeros, sort by modulus."""
        cleaned = sorted((m, r % m) for m, r in pairs if r % m)
        return cls(tuple(cleaned))


@dataclass(frozen=True)
class QmodZElement:
    """An element of Q/Z as its canonical representative in [0, 1)."""

    value: Fraction

    def __post_init__(self) -> None:
        if not 0 <= self.value < 1:
            raise ValueError("representative must lie in [0, 1)")

    @classmethod
    def make(cls, p: int, q: int) -> "QmodZElement":
        if q == 0:
            raise ValueError("zero denominator")
        return cls(Fraction(p, q) % 1)


def embed_ambient(
    elements: Sequence[TorsionElement] | Sequence[QmodZElement],
    max_order: int = 10**6,
) -> tuple[AbGroup, list[AbElement]]:
    """Reduce locally finite inputs to a finite ambient A with element images.

    Torsion inputs land in the product of Z/mZ over the union of their
    supports (moduli ascending); Q/Z inputs land in Z/L with L the lcm of
    the denominators, p/q mapping to p*L/q.
    """
    if not elements:
        return AbGroup(()), []
    if all(isinstance(e, TorsionElement) for e in elements):
        moduli = sorted({m for e in elements for m, _ in e.support})
        ambient = AbGroup(tuple(moduli))
        if ambient.order > max_order:
            raise AmbientTooLargeError(
                f"ambient order {ambient.order} exceeds bound {max_order}"
            )
        pos = {m: i for i, m in enumerate(moduli)}
        images = []
        for e in elements:
            vec = [0] * len(moduli)
            for m, r in e.support:
                vec[pos[m]] = r
            images.append(ambient.element(vec))
        return ambient, images
    if all(isinstance(e, QmodZElement) for e in elements):
        big_l = lcm(*(e.value.denominator for e in elements))
        if big_l > max_order:
            raise AmbientTooLargeError(
                f"ambient order {big_l} exceeds bound {max_order}"
            )
        ambient = AbGroup((big_l,))
        images = [
            ambient.element([e.value.numerator * (big_l // e.value.denominator)])
            for e in elements
        ]
        return ambient, images
    raise ValueError("mixed element kinds")
