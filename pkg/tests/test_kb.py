import itertools

import pytest
from hypothesis import given, strategies as st

from odrlsem.errors import ClosureContradiction, DomainViolation, UnknownConcept
from odrlsem.kb import BOTTOM, Domain, KnowledgeBase, Violation, build_kb, ground, kb_disjoint, kb_leq, validate_kb

from conftest import kb_from_seed

GEO_CONCEPTS = ["europe", "germany", "france", "bavaria"]
GEO_EDGES = [("germany", "europe"), ("france", "europe"), ("bavaria", "germany")]


def test_geo_closure(geo):
    assert kb_leq(geo, "bavaria", "europe")
    assert kb_disjoint(geo, "bavaria", "france")
    assert not kb_leq(geo, "europe", "france")
    assert all(kb_leq(geo, x, x) for x in geo.concepts)
    assert not any(kb_disjoint(geo, x, x) for x in geo.concepts)


def test_closure_matches_hand_enumeration():
    kb = build_kb(GEO_CONCEPTS, GEO_EDGES, [("germany", "france")])
    expected_leq = {(x, x) for x in GEO_CONCEPTS} | set(GEO_EDGES) | {("bavaria", "europe")}
    assert kb.leq == expected_leq
    assert kb.disjoint == {("germany", "france"), ("france", "germany"), ("bavaria", "france"), ("france", "bavaria")}


def test_single_concept():
    kb = build_kb(["x"])
    assert kb.leq == {("x", "x")}
    assert kb.disjoint == frozenset()


def test_nominal_domain():
    kb = build_kb(["sftp", "https"], domain="nominal")
    assert kb.disjoint == {("sftp", "https"), ("https", "sftp")}
    assert kb.leq == {("sftp", "sftp"), ("https", "https")}
    assert kb.domain is Domain.NOMINAL
    assert kb_disjoint(kb, "sftp", "https")


def test_nominal_rejects_edges():
    with pytest.raises(DomainViolation):
        build_kb(["a", "b"], [("a", "b")], domain="nominal")


@pytest.mark.parametrize("kwargs, axiom", [
    ({"leq": [("a", "b")], "disjoint": [("a", "b")]}, "LemmaViolation"),
    ({"leq": [("a", "b"), ("b", "a")], "disjoint": [("a", "c")], "not_leq": [("b", "a")]}, "NotLeqViolation"),
])
def test_contradictions(kwargs, axiom):
    with pytest.raises(ClosureContradiction) as info:
        build_kb(["a", "b", "c"], **kwargs)
    assert info.value.axiom == axiom


def test_disjointness_below_an_order_pair_is_a_contradiction():
    # c <= a and c <= b, so a disjoint from b makes c disjoint from itself
    with pytest.raises(ClosureContradiction):
        build_kb(["a", "b", "c"], [("c", "a"), ("c", "b")], [("a", "b")])


@pytest.mark.parametrize("field", ["leq", "disjoint", "not_leq"])
def test_unknown_concept_in_relation(field):
    with pytest.raises(UnknownConcept):
        build_kb(["a"], **{field: [("a", "ghost")]})


def test_gamma_range_must_be_known():
    with pytest.raises(UnknownConcept):
        build_kb(["a"], gamma={"v": "ghost"})


def test_duplicate_edges_are_harmless():
    assert build_kb(["a", "b"], [("a", "b"), ("a", "b")]).leq == build_kb(["a", "b"], [("a", "b")]).leq


def test_cycles_are_permitted():
    kb = build_kb(["a", "b"], [("a", "b"), ("b", "a")])
    assert kb_leq(kb, "a", "b") and kb_leq(kb, "b", "a")


def test_identifiers_are_not_normalised():
    kb = build_kb(["DE", "de"])
    assert len(kb.concepts) == 2


def test_queries_reject_unknown_concepts(geo):
    with pytest.raises(UnknownConcept):
        kb_leq(geo, "atlantis", "europe")
    with pytest.raises(UnknownConcept):
        kb_disjoint(geo, "europe", "atlantis")


def test_ground(geo):
    assert ground(geo, "https://sws.geonames.org/3017382/") == "france"
    assert ground(geo, "unmapped-iri") is BOTTOM
    assert ground(build_kb(["a"]), "a") is BOTTOM
    assert not BOTTOM


def test_validate_well_formed(geo):
    assert validate_kb(geo) == []


def _hand(concepts, leq=(), disjoint=(), not_leq=(), gamma=None):
    refl = {(c, c) for c in concepts}
    return KnowledgeBase("hand", Domain.TAXONOMIC, tuple(concepts), frozenset(refl | set(leq)),
                         frozenset(disjoint), frozenset(not_leq), gamma or {}, True)


def test_validate_reports_irreflexivity():
    assert validate_kb(_hand(["a"], disjoint=[("a", "a")])) == [Violation("Irreflexivity", ("a",))]


def test_validate_reports_lemma_violation():
    kb = _hand(["a", "b"], leq=[("a", "b")], disjoint=[("a", "b"), ("b", "a")])
    assert [str(v) for v in validate_kb(kb)] == ["LemmaViolation(a, b)"]


def test_validate_unchecked_build():
    kb = build_kb(["a", "b"], [("a", "b")], [("a", "b")], check=False)
    assert "LemmaViolation" in {v.axiom for v in validate_kb(kb)}


def test_validate_reports_missing_closure():
    kb = _hand(["a", "b", "c"], leq=[("a", "b"), ("b", "c")])
    assert Violation("Transitivity", ("a", "b", "c")) in validate_kb(kb)


def test_kb_is_immutable(geo):
    with pytest.raises(AttributeError):
        geo.concepts = ()
    with pytest.raises(TypeError):
        geo.gamma["x"] = "europe"


@given(st.integers(0, 10_000))
def test_closure_idempotent(seed):
    kb = kb_from_seed(seed, 6)
    again = build_kb(kb.concepts, kb.leq, kb.disjoint, kb.not_leq, kb.gamma, una=kb.una)
    assert (again.leq, again.disjoint) == (kb.leq, kb.disjoint)
    assert validate_kb(kb) == []


@given(st.integers(0, 10_000))
def test_structural_axioms_exhaustively(seed):
    kb = kb_from_seed(seed, 6)
    cs = kb.concepts
    for x, y in itertools.product(cs, repeat=2):
        assert not (kb_leq(kb, x, y) and kb_disjoint(kb, x, y))
        assert kb_disjoint(kb, x, y) == kb_disjoint(kb, y, x)
        if (x, y) in kb.not_leq:
            assert not kb_leq(kb, x, y)
    for x, y, x2, y2 in itertools.product(cs, repeat=4):
        if kb_disjoint(kb, x, y) and kb_leq(kb, x2, x) and kb_leq(kb, y2, y):
            assert kb_disjoint(kb, x2, y2)


@given(st.lists(st.sampled_from("abcdef"), min_size=1, max_size=6, unique=True))
def test_nominal_degeneration(names):
    kb = build_kb(names, domain="nominal")
    for x, y in itertools.product(names, repeat=2):
        assert kb_leq(kb, x, y) == (x == y)
        assert kb_disjoint(kb, x, y) == (x != y)
