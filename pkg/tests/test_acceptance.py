"""Acceptance suite: one test per criterion, each printing a PASS line.

All values are exact integers; there are no numeric tolerances anywhere.
Each criterion carries a wall-clock budget, asserted alongside the result.
"""

import random
import time
from itertools import product as iproduct

from howson import abelian, product, stallings
from howson.abelian import AbGroup, subgroup_from_generators
from howson.product import GeneratorPair
from howson.specfile import Presentation, hnn_embed
from howson.words import Alphabet, Word

from oracles import check_min_generators, enumeration_min_generators, reduced_words

F2 = Alphabet(2)
F3 = Alphabet(3)

# intersection rank data (m, rk_h, rk_k, rk_i) accumulated by criteria 1-3
# and re-checked against the extension bound in criterion 6
_INTERSECTIONS: list[tuple[int, int, int, int]] = []


def _report(number: int, name: str, ok: bool, elapsed: float, budget: float):
    verdict = "PASS" if ok and elapsed < budget else "FAIL"
    print(
        f"ACCEPTANCE {number:02d} {name}: {verdict} "
        f"({elapsed:.2f}s, budget {budget:g}s)"
    )
    assert ok, f"criterion {number} failed"
    assert elapsed < budget, f"criterion {number} exceeded {budget:g}s"


def _random_word(rng, alphabet, max_len):
    letters = []
    while len(letters) < rng.randint(1, max_len):
        s = rng.choice(range(1, alphabet.n + 1))
        s = s if rng.random() < 0.5 else -s
        if letters and letters[-1] == -s:
            continue
        letters.append(s)
    return Word(alphabet, letters)


def _random_graph(rng, alphabet, max_gens, max_len):
    gens = [
        _random_word(rng, alphabet, max_len)
        for _ in range(rng.randint(1, max_gens))
    ]
    return stallings.from_generators(alphabet, gens)


def test_criterion_01_rank_identity_grid():
    start = time.perf_counter()
    ok = True
    for h, k, l in iproduct(range(2, 5), range(2, 5), range(2, 7)):
        report = product.witness(h, k, l)
        expected = l * (h - 1) * (k - 1) + 1
        ok &= report.rk_h == h and report.rk_k == k
        ok &= report.rk_hk == expected and report.identity_holds
        _INTERSECTIONS.append((l, report.rk_h, report.rk_k, report.rk_hk))
    _report(1, "rank identity grid", ok, time.perf_counter() - start, 5.0)


def test_criterion_02_unbounded_rank_probe():
    start = time.perf_counter()
    ranks = []
    for l in range(2, 21):
        report = product.witness(2, 2, l)
        ranks.append(report.rk_hk)
        _INTERSECTIONS.append((l, report.rk_h, report.rk_k, report.rk_hk))
    ok = ranks == [l + 1 for l in range(2, 21)]
    ok &= all(a < b for a, b in zip(ranks, ranks[1:]))
    _report(2, "unbounded intersection-rank probe", ok, time.perf_counter() - start, 2.0)


def test_criterion_03_worked_example():
    start = time.perf_counter()
    ok = True
    for m in range(2, 11):
        ambient = AbGroup((m,))
        h = product.normalize(
            F2,
            ambient,
            [
                GeneratorPair(Word.parse(F2, "a"), ambient.zero()),
                GeneratorPair(Word.parse(F2, "b"), ambient.zero()),
            ],
        )
        k = product.normalize(
            F2,
            ambient,
            [
                GeneratorPair(Word.parse(F2, "a"), ambient.zero()),
                GeneratorPair(Word.parse(F2, "b"), ambient.element((1,))),
            ],
        )
        meet = product.p_intersect(h, k)
        rk_i = product.p_rank(meet)
        ok &= rk_i == m + 1
        _INTERSECTIONS.append((m, product.p_rank(h), product.p_rank(k), rk_i))
    _report(3, "worked example rank m+1", ok, time.perf_counter() - start, 1.0)


def _abelian_groups_up_to(bound):
    """All moduli tuples (each factor >= 2) with product <= bound."""
    found = [()]
    def extend(prefix, prod_so_far, last):
        for d in range(last, bound + 1):
            if prod_so_far * d > bound:
                break
            found.append(prefix + (d,))
            extend(prefix + (d,), prod_so_far * d, d)
    extend((), 1, 2)
    return found


def test_criterion_04_schreier_formula():
    start = time.perf_counter()
    rng = random.Random(101)
    groups = [m for m in _abelian_groups_up_to(30) if m]
    ok = True
    for _ in range(100):
        alphabet = rng.choice((F2, F3))
        target = AbGroup(rng.choice(groups))
        images = [
            target.element([rng.randrange(d) for d in target.moduli])
            for _ in range(alphabet.n)
        ]
        preimage = stallings.finite_quotient_preimage(
            stallings.whole_group(alphabet),
            images,
            subgroup_from_generators(target, []),
        )
        idx = stallings.index(preimage)
        ok &= idx != stallings.INFINITE
        ok &= stallings.rank(preimage) == idx * (alphabet.n - 1) + 1
    _report(4, "index-rank formula", ok, time.perf_counter() - start, 10.0)


def test_criterion_05_intersection_bound_suite():
    start = time.perf_counter()
    rng = random.Random(42)
    ok = True
    for _ in range(1000):
        h = _random_graph(rng, F2, 4, 6)
        k = _random_graph(rng, F2, 4, 6)
        ok &= product.check_hanna_neumann(h, k)
    _report(5, "free intersection-rank bound, 1000 pairs", ok, time.perf_counter() - start, 30.0)


def test_criterion_06_extension_bound():
    start = time.perf_counter()
    assert _INTERSECTIONS, "criteria 1-3 must run first"
    ok = all(
        product.check_kp_bound(m, rk_h, rk_k, rk_i)
        for m, rk_h, rk_k, rk_i in _INTERSECTIONS
    )
    _report(6, "finite-extension rank bound", ok, time.perf_counter() - start, 5.0)


def test_criterion_07_pullback_oracle():
    start = time.perf_counter()
    rng = random.Random(7)
    words = reduced_words(F2, 8)
    ok = True
    for _ in range(50):
        h = _random_graph(rng, F2, 3, 5)
        k = _random_graph(rng, F2, 3, 5)
        meet = stallings.pullback(h, k)
        for word in words:
            if stallings.membership(meet, word) != (
                stallings.membership(h, word) and stallings.membership(k, word)
            ):
                ok = False
                break
    _report(7, "pullback membership oracle", ok, time.perf_counter() - start, 60.0)


def test_criterion_08_product_intersection_oracle():
    start = time.perf_counter()
    rng = random.Random(8)
    words = reduced_words(F2, 6)
    ok = True
    for _ in range(20):
        moduli = rng.choice(((2,), (3,), (4,), (2, 3), (12,), (2, 2, 3)))
        ambient = AbGroup(moduli)
        subs = []
        for _ in range(2):
            gens = [
                GeneratorPair(
                    _random_word(rng, F2, 4),
                    ambient.element([rng.randrange(d) for d in moduli]),
                )
                for _ in range(rng.randint(1, 3))
            ]
            subs.append(product.normalize(F2, ambient, gens))
        p1, p2 = subs
        meet = product.p_intersect(p1, p2)
        for word in words:
            for a in ambient.elements():
                gp = GeneratorPair(word, a)
                if product.p_membership(meet, gp) != (
                    product.p_membership(p1, gp) and product.p_membership(p2, gp)
                ):
                    ok = False
                    break
    _report(8, "product intersection oracle", ok, time.perf_counter() - start, 60.0)


def test_criterion_09_abelian_laws():
    start = time.perf_counter()
    rng = random.Random(9)
    ok = True
    for _ in range(200):
        while True:
            moduli = tuple(rng.randint(1, 15) for _ in range(rng.randint(1, 3)))
            order = 1
            for d in moduli:
                order *= d
            if order <= 200:
                break
        ambient = AbGroup(moduli)
        def pick():
            gens = [
                ambient.element([rng.randrange(d) for d in moduli])
                for _ in range(2)
            ]
            return subgroup_from_generators(ambient, gens)
        s, t = pick(), pick()
        total = abelian.ab_sum(s, t)
        meet = abelian.ab_intersect(s, t)
        ok &= total.order * meet.order == s.order * t.order
        claimed = abelian.min_generators(s)
        ok &= claimed == enumeration_min_generators(s)
        if s.order <= 32:
            ok &= check_min_generators(s, claimed)
    _report(9, "abelian order law and minimal generators", ok, time.perf_counter() - start, 10.0)


def test_criterion_10_two_generator_embedding():
    start = time.perf_counter()
    rng = random.Random(10)
    ok = True
    for _ in range(20):
        g = rng.randint(0, 5)
        s = rng.randint(0, 4) if g else 0
        gens = tuple(f"c{i}" for i in range(1, g + 1))
        rels = tuple(
            tuple(
                (rng.choice(gens), rng.choice((-2, -1, 1, 2)))
                for _ in range(rng.randint(1, 4))
            )
            for _ in range(s)
        )
        embedded = hnn_embed(Presentation(gens, rels))
        ok &= embedded.generators == gens + ("a", "b", "t")
        ok &= len(embedded.relators) == s + g + 1
        ok &= embedded.relators[:s] == rels
        ok &= embedded.relators[s] == (("t", -1), ("a", 1), ("t", 1), ("b", -1))
        for i, c in enumerate(gens, start=1):
            rel = embedded.relators[s + i]
            ok &= rel[0] == ("t", -1) and rel[-1] == (c, -1)
            ok &= ("b", -i) in rel and ("b", i) in rel
    _report(10, "two-generator embedding schema", ok, time.perf_counter() - start, 1.0)
