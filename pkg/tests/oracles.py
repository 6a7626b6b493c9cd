"""Brute-force oracles, independent of the algorithms under test."""

from __future__ import annotations

from itertools import combinations

from howson.abelian import AbElement, AbGroup, AbSubgroup
from howson.words import Alphabet, Word


def reduced_words(alphabet: Alphabet, max_len: int) -> list[Word]:
    """All freely reduced words of length <= max_len."""
    words = [Word(alphabet)]
    frontier = [()]
    for _ in range(max_len):
        new = []
        for letters in frontier:
            for g in range(1, alphabet.n + 1):
                for s in (g, -g):
                    if letters and letters[-1] == -s:
                        continue
                    new.append(letters + (s,))
        words.extend(Word(alphabet, w) for w in new)
        frontier = new
    return words


def closure_words(
    alphabet: Alphabet, gens: list[Word], max_product: int, max_len: int
) -> set[Word]:
    """Members found as products of up to max_product generators, capped by length.

    Sound but not complete: every returned word is in the subgroup.
    """
    steps = [g for w in gens for g in (w, ~w)]
    seen = {Word(alphabet)}
    frontier = list(seen)
    for _ in range(max_product):
        new = []
        for w in frontier:
            for s in steps:
                nxt = w * s
                if len(nxt) <= max_len and nxt not in seen:
                    seen.add(nxt)
                    new.append(nxt)
        frontier = new
    return seen


def ab_closure(ambient: AbGroup, gens: list[AbElement]) -> set[tuple[int, ...]]:
    """All elements of the subgroup generated by gens, by BFS."""
    zero = ambient.zero()
    seen = {zero.residues}
    frontier = [zero]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x + g
            if y.residues not in seen:
                seen.add(y.residues)
                frontier.append(y)
    return seen


def enumeration_min_generators(s: AbSubgroup) -> int:
    """Minimal generator count from element enumeration only.

    For a finite abelian group the answer is max over primes p of the
    dimension of S/pS, and |pS| is found by multiplying every element by p.
    """
    elements = s.elements()
    order = len(elements)
    d = 0
    n = order
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            p_s = {e.scale(p).residues for e in elements}
            quotient = order // len(p_s)
            dim = 0
            while quotient > 1:
                quotient //= p
                dim += 1
            d = max(d, dim)
        p += 1
    if n > 1:
        p_s = {e.scale(n).residues for e in elements}
        quotient = order // len(p_s)
        dim = 0
        while quotient > 1:
            quotient //= n
            dim += 1
        d = max(d, dim)
    return d


def check_min_generators(s: AbSubgroup, claimed: int) -> bool:
    """Confirm the claimed minimal generator count by subset search (small S).

    No subset of size claimed - 1 may generate, and some subset of size
    claimed must.
    """
    elements = s.elements()
    target = {e.residues for e in elements}
    if claimed == 0:
        return len(target) == 1
    if any(
        ab_closure(s.ambient, list(subset)) == target
        for subset in combinations(elements, claimed - 1)
    ):
        return False
    return any(
        ab_closure(s.ambient, list(subset)) == target
        for subset in combinations(elements, claimed)
    )
