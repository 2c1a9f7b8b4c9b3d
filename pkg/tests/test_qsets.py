"""Quasi-set operations against labelled-expansion oracles."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasilab import qsets
from quasilab.errors import BoundExceededError, KindConflictError, UnknownKindError

from helpers import (
    indistinguishable_oracle,
    labelled_intersection,
    labelled_union_disjoint,
    labelled_union_overlap,
    m_part_by_name,
    powerset_by_labelled_subsets,
)

ELECTRON = qsets.kind("electron", {"charge": ("-1", "esu"), "spin": ("1/2", "hbar")})
POSITRON = qsets.kind("positron", {"charge": ("1", "esu"), "spin": ("1/2", "hbar")})
PHOTON = qsets.kind("photon", {"charge": (0, "esu"), "spin": (1, "hbar")})


def qs(m=None, labels=(), nested=()):
    return qsets.QSet(m or {}, labels, nested)


class TestKind:
    def test_attributes_exact(self):
        k = qsets.kind("electron", {"mass": ("9.109e-31", "kg")})
        value, unit = k.attribute("mass")
        assert value == Fraction(9109, 10**34)  # 9.109e-31 parsed exactly
        assert unit == "kg"

    def test_float_attribute_rejected(self):
        with pytest.raises(TypeError):
            qsets.kind("electron", {"mass": (9.109e-31, "kg")})

    def test_same_name_same_attributes_equal(self):
        again = qsets.kind("electron", {"spin": ("1/2", "hbar"), "charge": ("-1", "esu")})
        assert again == ELECTRON

    def test_conflicting_redeclaration_rejected(self):
        u = qsets.Universe([ELECTRON])
        with pytest.raises(KindConflictError):
            u.declare(qsets.kind("electron", {"charge": (1, "esu")}))

    def test_unknown_kind(self):
        with pytest.raises(UnknownKindError):
            qsets.Universe([ELECTRON]).kind("muon")


class TestQcard:
    def test_two_electrons(self):
        assert qsets.qcard(qs({ELECTRON: 2})) == 2

    def test_empty(self):
        assert qsets.qcard(qsets.EMPTY) == 0

    def test_mixed_by_enumeration_oracle(self):
        q = qs({ELECTRON: 2, POSITRON: 1}, ["Alice"])
        from helpers import labelled_items

        assert qsets.qcard(q) == len(labelled_items(q)) == 4

    def test_nested_count_as_single_elements(self):
        inner = qs({ELECTRON: 3})
        q = qs({POSITRON: 1}, nested=[(inner, 2)])
        assert qsets.qcard(q) == 3  # 1 m-object + 2 nested occurrences


class TestUnion:
    def test_overlap_matches_labelled_oracle(self):
        a, b = qs({ELECTRON: 2}), qs({ELECTRON: 1})
        out = qsets.qunion(a, b)
        assert m_part_by_name(out) == labelled_union_overlap(
            m_part_by_name(a), m_part_by_name(b)
        ) == {"electron": 2}

    def test_disjoint_source_adds(self):
        out = qsets.qunion(qs({ELECTRON: 2}), qs({POSITRON: 1}), disjoint_source=True)
        assert m_part_by_name(out) == {"electron": 2, "positron": 1}

    def test_empty_is_identity(self):
        q = qs({ELECTRON: 2}, ["Alice"], [qs({PHOTON: 1})])
        assert qsets.qunion(qsets.EMPTY, q) == q
        assert qsets.qunion(q, qsets.EMPTY) == q

    def test_disjoint_source_overlapping_kinds_sum(self):
        out = qsets.qunion(qs({ELECTRON: 2}), qs({ELECTRON: 1}), disjoint_source=True)
        assert m_part_by_name(out) == labelled_union_disjoint(
            {"electron": 2}, {"electron": 1}
        ) == {"electron": 3}

    def test_kind_attribute_conflict(self):
        other = qsets.kind("electron", {"charge": (1, "esu")})
        with pytest.raises(KindConflictError):
            qsets.qunion(qs({ELECTRON: 1}), qs({other: 1}))

    def test_classical_parts_union_by_label(self):
        out = qsets.qunion(qs(labels=["Alice", "Bob"]), qs(labels=["Bob"]))
        assert {m.label for m in out.mobjects} == {"Alice", "Bob"}


class TestIntersection:
    def test_matches_labelled_oracle(self):
        out = qsets.qintersection(qs({ELECTRON: 2}), qs({ELECTRON: 1}))
        assert m_part_by_name(out) == labelled_intersection(
            {"electron": 2}, {"electron": 1}
        ) == {"electron": 1}

    def test_disjoint_kinds_empty(self):
        assert qsets.qintersection(qs({ELECTRON: 2}), qs({POSITRON: 1})).is_empty()

    def test_idempotent(self):
        q = qs({ELECTRON: 2}, ["Alice"], [qs({PHOTON: 1})])
        assert qsets.qintersection(q, q) == q


class TestPowerset:
    def test_two_electrons(self):
        rep = qsets.qpowerset_report(qs({ELECTRON: 2}))
        members = [child for child, n in rep.collection.nested for _ in range(n)]
        assert sorted(qsets.qcard(m) for m in members) == [0, 1, 2]
        assert rep.enumerated_qcard == 3
        assert rep.axiom_qcard == 4  # the two readings genuinely differ here
        assert not rep.agree

    def test_single_mobject(self):
        rep = qsets.qpowerset_report(qs(labels=["Alice"]))
        assert rep.enumerated_qcard == 2 == rep.axiom_qcard

    def test_empty(self):
        rep = qsets.qpowerset_report(qsets.EMPTY)
        assert rep.enumerated_qcard == 1
        assert qsets.qcard(rep.collection) == 1

    @pytest.mark.parametrize("m,labels", [
        ({ELECTRON: 2, POSITRON: 1}, ["Alice"]),
        ({ELECTRON: 3}, []),
        ({}, ["Alice", "Bob"]),
    ])
    def test_against_labelled_subset_oracle(self, m, labels):
        q = qs(m, labels)
        rep = qsets.qpowerset_report(q)
        assert rep.enumerated_qcard == powerset_by_labelled_subsets(q)

    def test_bound_guard(self):
        with pytest.raises(BoundExceededError):
            qsets.qpowerset(qs({ELECTRON: 5000}), bound=64)


class TestIndistinguishable:
    def test_reflexive_case(self):
        assert qsets.indistinguishable(qs({ELECTRON: 2}), qs({ELECTRON: 2}))

    def test_cardinal_mismatch(self):
        assert not qsets.indistinguishable(qs({ELECTRON: 2}), qs({ELECTRON: 1}))

    def test_nested_multiplicity_matches_bijection_search(self):
        one = qs({ELECTRON: 1})
        listed_twice = qs(nested=[one, qs({ELECTRON: 1})])
        with_multiplicity = qs(nested=[(one, 2)])
        assert qsets.indistinguishable(listed_twice, with_multiplicity)
        assert indistinguishable_oracle(listed_twice, with_multiplicity)

    def test_agrees_with_bijection_oracle_on_random_nests(self):
        rng = random.Random(42)
        pool = [ELECTRON, POSITRON, PHOTON]

        def rand_q(depth):
            m = {k: rng.randint(0, 2) for k in pool if rng.random() < 0.5}
            nested = [rand_q(depth - 1) for _ in range(rng.randint(0, 2))] if depth else []
            return qsets.QSet(m, [], nested)

        for _ in range(200):
            a, b = rand_q(2), rand_q(2)
            assert qsets.indistinguishable(a, b) == indistinguishable_oracle(a, b)


class TestStrongSingleton:
    def test_definition(self):
        q = qsets.strong_singleton(ELECTRON)
        assert qsets.qcard(q) == 1
        assert m_part_by_name(q) == {"electron": 1}

    def test_by_universe_name(self):
        u = qsets.Universe([ELECTRON, POSITRON])
        assert m_part_by_name(u.strong_singleton("positron")) == {"positron": 1}

    @given(st.sampled_from([ELECTRON, POSITRON, PHOTON]))
    def test_any_two_indistinguishable(self, k):
        assert qsets.indistinguishable(
            qsets.strong_singleton(k), qsets.strong_singleton(k)
        )

    def test_no_member_handles(self):
        # the API yields kind/multiplicity views only, never an m-object value
        q = qsets.strong_singleton(ELECTRON)
        assert all(isinstance(n, int) for n in q.m_part.values())
        assert q.mobjects == ()


class TestClassification:
    @pytest.mark.parametrize("flags,category", [
        ((True, True), "individual"),
        ((True, False), "non-individual-ii"),
        ((False, True), "non-individual-i"),
        ((False, False), "non-individual-iii"),
    ])
    def test_taxonomy(self, flags, category):
        verdict = qsets.classify_individuality(*flags)
        assert verdict.category == category
        assert (verdict.discernible, verdict.reidentifiable) == flags


# -- algebraic properties ------------------------------------------------------------

_kind_strategy = st.sampled_from([ELECTRON, POSITRON, PHOTON])


@st.composite
def qset_strategy(draw, depth=2):
    m = draw(st.dictionaries(_kind_strategy, st.integers(0, 5), max_size=3))
    labels = draw(st.lists(st.sampled_from(["Alice", "Bob", "Chiara"]), max_size=2))
    nested = []
    if depth > 0:
        nested = draw(st.lists(qset_strategy(depth=depth - 1), max_size=2))
    return qsets.QSet(m, labels, nested)


@settings(max_examples=60, deadline=None)
@given(qset_strategy(), qset_strategy())
def test_minmax_cardinality_identity(a, b):
    assert qsets.qcard(qsets.qintersection(a, b)) + qsets.qcard(qsets.qunion(a, b)) \
        == qsets.qcard(a) + qsets.qcard(b)


@settings(max_examples=60, deadline=None)
@given(qset_strategy(), qset_strategy())
def test_disjoint_union_additivity(a, b):
    stripped = qsets.QSet(a.m_part, [], a.nested)  # label-disjoint by construction
    out = qsets.qunion(stripped, b, disjoint_source=True)
    assert qsets.qcard(out) == qsets.qcard(stripped) + qsets.qcard(b)


@settings(max_examples=60, deadline=None)
@given(qset_strategy(), qset_strategy(), qset_strategy())
def test_indistinguishable_is_equivalence(a, b, c):
    assert qsets.indistinguishable(a, a)
    assert qsets.indistinguishable(a, b) == qsets.indistinguishable(b, a)
    if qsets.indistinguishable(a, b) and qsets.indistinguishable(b, c):
        assert qsets.indistinguishable(a, c)


@settings(max_examples=60, deadline=None)
@given(qset_strategy())
def test_serialize_parse_roundtrip_is_canonical(q):
    u = qsets.Universe([ELECTRON, POSITRON, PHOTON])
    text = qsets.format_document(u, [(None, q)])
    doc = qsets.parse_qsets(text)
    assert doc.get() == q
    assert doc.canonical() == text


def test_parse_error_reports_position():
    with pytest.raises(qsets.ParseError) as err:
        qsets.parse_qsets("kind electron { }\nqset { m: { muon: 1 } }")
    assert "muon" in str(err.value)


def test_document_canonical_ordering():
    text = 'kind b { }\nkind a { }\nqset { m: { b: 1, a: 2 } }\n'
    doc = qsets.parse_qsets(text)
    # kinds come back lexicographic regardless of declaration order
    assert doc.canonical().splitlines()[0] == "kind a { }"
    assert "m: { a: 2, b: 1 }" in doc.canonical()
