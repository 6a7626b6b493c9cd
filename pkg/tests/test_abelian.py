import random
from math import prod

import pytest

from howson.abelian import (
    AbGroup,
    AmbientTooLargeError,
    QmodZElement,
    TorsionElement,
    ab_intersect,
    ab_membership,
    ab_sum,
    embed_ambient,
    hnf,
    lattice_crt,
    min_generators,
    quotient_data,
    snf_diagonal,
    subgroup_from_generators,
    whole_group,
)

from oracles import ab_closure, check_min_generators


def random_ab_group(rng, max_order=200):
    while True:
        moduli = tuple(
            rng.randint(1, 12) for _ in range(rng.randint(1, 3))
        )
        if prod(moduli) <= max_order:
            return AbGroup(moduli)


def random_subgroup(rng, ambient, num_gens=2):
    gens = [
        ambient.element([rng.randrange(d) for d in ambient.moduli])
        for _ in range(num_gens)
    ]
    return subgroup_from_generators(ambient, gens), gens


class TestHnf:
    def test_identity(self):
        assert hnf([[1, 0], [0, 1]], 2) == ((1, 0), (0, 1))

    def test_spec_lattice(self):
        assert hnf([[2, 0], [0, 3], [4, 6]], 2) == ((2, 0), (0, 3))

    def test_zero_matrix(self):
        assert hnf([[0, 0], [0, 0]], 2) == ()

    def test_unimodular_invariance(self):
        rng = random.Random(5)
        for _ in range(50):
            rows = [[rng.randint(-5, 5) for _ in range(3)] for _ in range(3)]
            mixed = [list(r) for r in rows]
            for _ in range(6):  # random elementary row operations
                i, j = rng.sample(range(3), 2)
                c = rng.randint(-3, 3)
                mixed[i] = [a + c * b for a, b in zip(mixed[i], mixed[j])]
            assert hnf(mixed, 3) == hnf(rows, 3)

    @staticmethod
    def _in_echelon_lattice(basis, vec):
        vec = list(vec)
        for row in basis:
            piv = next(j for j, x in enumerate(row) if x)
            if vec[piv] % row[piv]:
                return False
            q = vec[piv] // row[piv]
            vec = [a - q * b for a, b in zip(vec, row)]
        return not any(vec)

    def test_spans_same_lattice(self):
        rng = random.Random(9)
        for _ in range(30):
            rows = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)]
            basis = hnf(rows, 2)
            # every integer combination of the inputs lies in the HNF lattice
            for c1 in range(-4, 5):
                for c2 in range(-4, 5):
                    combo = [
                        c1 * rows[0][j] + c2 * rows[1][j] for j in range(2)
                    ]
                    assert self._in_echelon_lattice(basis, combo)
            # and the lattices have equal covolume when full rank
            det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
            if det:
                assert len(basis) == 2
                piv0 = next(x for x in basis[0] if x)
                piv1 = next(x for x in basis[1] if x)
                assert piv0 * piv1 == abs(det)


class TestSnf:
    def test_coprime_diagonal(self):
        assert snf_diagonal([[2, 0], [0, 3]], 2) == (1, 6)

    def test_divisible_diagonal(self):
        assert snf_diagonal([[2, 0], [0, 4]], 2) == (2, 4)

    def test_identity(self):
        assert snf_diagonal([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3) == (1, 1, 1)

    def test_divisibility_chain_random(self):
        rng = random.Random(13)
        for _ in range(50):
            rows = [[rng.randint(-6, 6) for _ in range(3)] for _ in range(3)]
            diag = snf_diagonal(rows, 3)
            for a, b in zip(diag, diag[1:]):
                assert b == 0 or (a != 0 and b % a == 0) or (a == 0 and b == 0)


class TestSubgroups:
    def test_trivial(self):
        ambient = AbGroup((4, 6))
        s = subgroup_from_generators(ambient, [])
        assert s.order == 1
        assert s.contains(ambient.zero())
        assert not s.contains(ambient.element((2, 0)))

    def test_spec_order_four(self):
        ambient = AbGroup((4, 6))
        s = subgroup_from_generators(
            ambient, [ambient.element((2, 0)), ambient.element((0, 3))]
        )
        assert s.order == 4
        assert s.contains(ambient.element((2, 0)))
        assert not s.contains(ambient.element((1, 0)))
        closure = ab_closure(ambient, s.generators())
        assert len(closure) == 4

    def test_whole_group(self):
        ambient = AbGroup((4, 6))
        assert whole_group(ambient).order == 24

    def test_membership_matches_enumeration(self):
        rng = random.Random(21)
        for _ in range(30):
            ambient = random_ab_group(rng)
            s, gens = random_subgroup(rng, ambient)
            closure = ab_closure(ambient, gens)
            for x in ambient.elements():
                assert ab_membership(s, x) == (x.residues in closure)

    def test_order_law(self):
        rng = random.Random(23)
        for _ in range(40):
            ambient = random_ab_group(rng)
            s, sgens = random_subgroup(rng, ambient)
            t, tgens = random_subgroup(rng, ambient)
            total = ab_sum(s, t)
            meet = ab_intersect(s, t)
            assert total.order * meet.order == s.order * t.order
            assert len(ab_closure(ambient, sgens + tgens)) == total.order
            for x in ambient.elements():
                assert meet.contains(x) == (s.contains(x) and t.contains(x))

    def test_sum_identities(self):
        ambient = AbGroup((4, 6))
        s, _ = random_subgroup(random.Random(1), ambient)
        assert ab_sum(s, subgroup_from_generators(ambient, [])) == s
        assert ab_sum(s, whole_group(ambient)) == whole_group(ambient)
        assert ab_intersect(s, whole_group(ambient)) == s


class TestMinGenerators:
    def test_trivial(self):
        assert min_generators(subgroup_from_generators(AbGroup((4,)), [])) == 0

    def test_not_cyclic(self):
        assert min_generators(whole_group(AbGroup((2, 4)))) == 2

    def test_cyclic(self):
        ambient = AbGroup((4, 6))
        s = subgroup_from_generators(ambient, [ambient.element((1, 0))])
        assert min_generators(s) == 1

    def test_against_enumeration(self):
        rng = random.Random(29)
        for _ in range(25):
            ambient = random_ab_group(rng, max_order=64)
            s, _ = random_subgroup(rng, ambient)
            if s.order <= 64:
                assert check_min_generators(s, min_generators(s))


class TestQuotient:
    def test_by_whole_group(self):
        ambient = AbGroup((4, 6))
        q, _ = quotient_data(ambient, whole_group(ambient))
        assert q.order == 1

    def test_by_trivial(self):
        ambient = AbGroup((4, 6))
        q, project = quotient_data(
            ambient, subgroup_from_generators(ambient, [])
        )
        assert q.order == ambient.order
        images = {project(x).residues for x in ambient.elements()}
        assert len(images) == ambient.order

    def test_z4_by_two(self):
        ambient = AbGroup((4,))
        m = subgroup_from_generators(ambient, [ambient.element((2,))])
        q, project = quotient_data(ambient, m)
        assert q.moduli == (2,)
        assert project(ambient.element((1,))).residues == (1,)
        assert project(ambient.element((2,))).residues == (0,)

    def test_projection_is_hom_with_kernel_m(self):
        rng = random.Random(31)
        for _ in range(20):
            ambient = random_ab_group(rng)
            m, _ = random_subgroup(rng, ambient)
            q, project = quotient_data(ambient, m)
            assert q.order * m.order == ambient.order
            elements = list(ambient.elements())
            for _ in range(20):
                x, y = rng.choice(elements), rng.choice(elements)
                assert project(x + y) == project(x) + project(y)
            for x in elements:
                assert (project(x) == q.zero()) == m.contains(x)


class TestLatticeCrt:
    def test_meets_both_cosets(self):
        rng = random.Random(37)
        hits = 0
        for _ in range(40):
            ambient = random_ab_group(rng)
            s, _ = random_subgroup(rng, ambient)
            t, _ = random_subgroup(rng, ambient)
            elements = list(ambient.elements())
            x, y = rng.choice(elements), rng.choice(elements)
            rep = lattice_crt(s, x, t, y)
            expected = {
                e.residues
                for e in elements
                if s.contains(e - x) and t.contains(e - y)
            }
            if rep is None:
                assert expected == set()
            else:
                hits += 1
                assert rep.residues in expected
        assert hits > 0


class TestEmbedAmbient:
    def test_qmodz_halves_and_thirds(self):
        ambient, images = embed_ambient(
            [QmodZElement.make(1, 2), QmodZElement.make(1, 3)]
        )
        assert ambient.moduli == (6,)
        assert [i.residues for i in images] == [(3,), (2,)]
        assert images[0].order() == 2
        assert images[1].order() == 3

    def test_torsion_support_union(self):
        ambient, images = embed_ambient(
            [
                TorsionElement.make([(5, 2)]),
                TorsionElement.make([(2, 1), (5, 1)]),
            ]
        )
        assert ambient.moduli == (2, 5)
        assert images[0].residues == (0, 2)
        assert images[1].residues == (1, 1)

    def test_empty(self):
        ambient, images = embed_ambient([])
        assert ambient.moduli == ()
        assert images == []

    def test_orders_preserved(self):
        els = [TorsionElement.make([(4, 2), (9, 3)]), TorsionElement.make([(4, 1)])]
        ambient, images = embed_ambient(els)
        assert images[0].order() == 6
        assert images[1].order() == 4

    def test_overflow_guard(self):
        with pytest.raises(AmbientTooLargeError):
            embed_ambient([QmodZElement.make(1, 101)], max_order=100)

    def test_mixed_kinds_rejected(self):
        with pytest.raises(ValueError):
            embed_ambient([QmodZElement.make(1, 2), TorsionElement.make([(2, 1)])])

    def test_torsion_canonicalization(self):
        el = TorsionElement.make([(3, 4), (2, 2)])
        assert el.support == ((3, 1),)

    def test_qmodz_canonical_range(self):
        assert QmodZElement.make(5, 3).value == QmodZElement.make(2, 3).value
        with pytest.raises(ValueError):
            QmodZElement.make(1, 0)
