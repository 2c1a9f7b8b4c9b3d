"""Automorphism search, rigidity, and ur-element universes vs brute force."""

import itertools
import random

import pytest

from quasilab import fixtures, structures
from quasilab.errors import BoundExceededError

from helpers import brute_force_automorphisms, brute_force_orbits, random_test_structure


def mappings(perms):
    return [p.mapping for p in perms]


class TestAutomorphisms:
    def test_free_domain_gives_symmetric_group(self):
        s = fixtures.poor_structure(3)
        assert sorted(mappings(structures.automorphisms(s))) == sorted(
            itertools.permutations(range(3))
        )

    def test_conjugation_swap_is_an_automorphism(self):
        s = fixtures.conjugation_structure()
        autos = structures.automorphisms(s)
        assert len(autos) == 2
        conj = [p for p in autos if p.mapping != tuple(range(9))][0]
        assert conj(fixtures.GF9_I) == fixtures.GF9_MINUS_I
        assert conj(fixtures.GF9_MINUS_I) == fixtures.GF9_I
        assert conj(0) == 0 and conj(1) == 1 and conj(2) == 2  # base field fixed

    def test_two_element_conjugate_relation(self):
        # the minimal rendering: just {i, -i} with the conjugation pairing
        s = structures.FiniteStructure(
            structures.signature({"conj": 2}), 2,
            {"conj": [(0, 1), (1, 0)]}, labels={0: "i", 1: "-i"},
        )
        assert sorted(mappings(structures.automorphisms(s))) == [(0, 1), (1, 0)]
        assert structures.orbit_indiscernible(s, 0, 1)

    def test_linear_order_identity_only(self):
        autos = structures.automorphisms(fixtures.linear_order(4))
        assert mappings(autos) == [(0, 1, 2, 3)]

    def test_constants_are_fixed(self):
        s = structures.FiniteStructure(
            structures.signature({}, ["c"]), 3, {}, {"c": 1}
        )
        autos = structures.automorphisms(s)
        assert all(p(1) == 1 for p in autos)
        assert len(autos) == 2  # the two permutations of {0, 2}

    def test_group_laws_on_computed_results(self):
        for s in (fixtures.conjugation_structure(), fixtures.poor_structure(4),
                  fixtures.singleton_predicate_structure(4)):
            autos = structures.automorphisms(s)
            group = set(autos)
            assert structures.Permutation.identity(s.size) in group
            for p in autos:
                assert p.inverse() in group
                for q in autos:
                    assert p.compose(q) in group

    def test_warns_above_exhaustive_bound(self):
        with pytest.warns(UserWarning, match="exceeds"):
            structures.automorphisms(fixtures.linear_order(4), exhaustive_bound=3)

    def test_agrees_with_brute_force(self):
        rng = random.Random(7)
        for _ in range(40):
            s = random_test_structure(rng, max_size=5)
            assert mappings(structures.automorphisms(s)) == brute_force_automorphisms(s)


class TestRigidity:
    def test_linear_order_rigid(self):
        assert structures.is_rigid(fixtures.linear_order(4))

    def test_empty_signature_deformable(self):
        assert not structures.is_rigid(fixtures.poor_structure(2))

    def test_single_predicate_leaves_rest_symmetric(self):
        # P marks one element; the other n-1 can still be permuted freely
        for n in (3, 4, 5):
            s = fixtures.singleton_predicate_structure(n)
            assert not structures.is_rigid(s)
            assert len(brute_force_automorphisms(s)) > 1


class TestOrbits:
    def test_reflexive(self):
        s = fixtures.conjugation_structure()
        assert structures.orbit_indiscernible(s, 4, 4)

    def test_i_and_minus_i_indiscernible(self):
        s = fixtures.conjugation_structure()
        assert structures.orbit_indiscernible(s, fixtures.GF9_I, fixtures.GF9_MINUS_I)

    def test_rigid_order_separates_endpoints(self):
        s = fixtures.linear_order(4)
        assert not structures.orbit_indiscernible(s, 0, 3)

    def test_orbits_partition_domain(self):
        rng = random.Random(11)
        for _ in range(20):
            s = random_test_structure(rng, max_size=5)
            parts = structures.orbits(s)
            flat = sorted(e for part in parts for e in part)
            assert flat == list(range(s.size))
            assert parts == brute_force_orbits(s)


class TestRigidify:
    def test_free_domain_becomes_rigid(self):
        out = structures.rigidify(fixtures.poor_structure(3))
        assert structures.is_rigid(out)
        assert brute_force_automorphisms(out) == [(0, 1, 2)]

    def test_conjugation_swap_removed(self):
        out = structures.rigidify(fixtures.conjugation_structure())
        assert brute_force_automorphisms(out) == [tuple(range(9))]

    def test_rigid_input_is_fixed_point(self):
        s = fixtures.linear_order(4)
        assert structures.rigidify(s) is s

    def test_conservative_extension(self):
        rng = random.Random(3)
        for _ in range(20):
            s = random_test_structure(rng, max_size=5)
            out = structures.rigidify(s)
            assert out.size == s.size
            for name in s.tables:
                assert s.tables[name] == out.tables[name]
            assert out.constants == s.constants


class TestUrUniverse:
    def test_one_atom_rank_one(self):
        u = structures.build_ur_universe(["a"], 1)
        assert len(u.levels[1]) == 2  # {} and {a}
        a = structures.Atom("a")
        assert frozenset() in u.levels[1] and frozenset([a]) in u.levels[1]

    def test_two_atoms_rank_one(self):
        u = structures.build_ur_universe(["a", "b"], 1)
        assert len(u.levels[1]) == 4

    def test_two_atoms_rank_two_level_count(self):
        u = structures.build_ur_universe(["a", "b"], 2)
        # level 2 holds every subset of (atoms plus the 4 level-1 sets)
        assert len(u.levels[2]) == 2 ** (2 + 4)
        assert len(u.members) == 2 + 64  # level 1 sets all reappear in level 2

    def test_guards(self):
        with pytest.raises(BoundExceededError):
            structures.build_ur_universe(["a", "b", "c", "d", "e"], 1)
        with pytest.raises(BoundExceededError):
            structures.build_ur_universe(["a"], 4)
        with pytest.raises(BoundExceededError):
            structures.build_ur_universe(["a", "b", "c", "d"], 2, max_members=1000)


class TestExtendPermutation:
    def test_identity_extends_to_identity(self):
        u = structures.build_ur_universe(["a", "b"], 2)
        ext = structures.extend_permutation(u, {"a": "a", "b": "b"})
        assert all(ext(x) == x for x in u.members)

    def test_swap_acts_recursively(self):
        u = structures.build_ur_universe(["a", "b"], 2)
        ext = structures.extend_permutation(u, {"a": "b", "b": "a"})
        a, b = structures.Atom("a"), structures.Atom("b")
        assert ext(frozenset([a])) == frozenset([b])
        mixed = frozenset([a, frozenset([b])])
        assert ext(mixed) == frozenset([b, frozenset([a])])

    def test_membership_preserved_exhaustively(self):
        u = structures.build_ur_universe(["a", "b"], 2)
        for names in itertools.permutations(["a", "b"]):
            ext = structures.extend_permutation(u, dict(zip(["a", "b"], names)))
            for x in u.members:
                for y in u.members:
                    assert u.member_of(x, y) == u.member_of(ext(x), ext(y))

    def test_non_permutation_rejected(self):
        u = structures.build_ur_universe(["a", "b"], 1)
        with pytest.raises(ValueError):
            structures.extend_permutation(u, {"a": "a", "b": "a"})


class TestIdentityWitness:
    def test_separates_atom_in_two_atom_universe(self):
        u = structures.build_ur_universe(["a", "b"], 1)
        w = structures.identity_property_witness(u, "a")
        assert w.satisfied_by == ["a"]
        assert w.separates and w.distinct_from_all_others

    def test_no_other_member_satisfies(self):
        u = structures.build_ur_universe(["a", "b", "c"], 2)
        for atom in ("a", "b", "c"):
            w = structures.identity_property_witness(u, atom)
            assert w.satisfied_by == [atom]
            assert w.members_checked == len(u.members)

    def test_requires_rank(self):
        u = structures.build_ur_universe(["a"], 0)
        with pytest.raises(ValueError):
            structures.identity_property_witness(u, "a")
