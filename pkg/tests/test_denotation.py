import random

import pytest
from hypothesis import given, strategies as st

from odrlsem.bench import oracle
from odrlsem.bench.generators import random_constraint
from odrlsem.denotation import TOP, Constraint, Denotation, Membership3, Mode, Operator, denote, intersect, member3
from odrlsem.errors import UngroundedConstraint, UnknownOperator
from odrlsem.kb import build_kb

from conftest import kb_from_seed

T, F, U = Membership3.TRUE, Membership3.FALSE, Membership3.UNKNOWN
EUROPE = "https://sws.geonames.org/6255148/"


def c(op, value, operand="l"):
    return Constraint(operand, op, tuple(value) if isinstance(value, list) else value)


def test_constraint_arity():
    with pytest.raises(ValueError):
        Constraint("l", "eq", ("a", "b"))
    with pytest.raises(ValueError):
        Constraint("l", "isAnyOf", "a")
    with pytest.raises(ValueError):
        Constraint("l", "isAllOf", ())
    with pytest.raises(UnknownOperator):
        Constraint("l", "subsetOf", "a")
    assert Constraint("l", "isAnyOf", ["a", "b"]).value == ("a", "b")


def test_operator_names_are_case_sensitive():
    with pytest.raises(UnknownOperator):
        Operator.parse("ISA")


def test_geo_denotations(geo):
    assert denote(geo, c("isPartOf", EUROPE)).concepts == {"europe", "germany", "france", "bavaria"}
    assert denote(geo, c("hasPart", "bavaria")).concepts == {"bavaria", "germany", "europe"}
    assert denote(geo, c("neq", "france")).concepts == {"europe", "germany", "bavaria"}
    assert denote(geo, c("isNoneOf", ["germany"])).concepts == {"europe", "france"}
    assert denote(geo, c("isAllOf", ["germany", "europe"])).concepts == {"germany", "bavaria"}
    assert denote(geo, c("isAnyOf", ["bavaria", "france"])).concepts == {"bavaria", "france"}


def test_single_concept_neq_is_empty():
    kb = build_kb(["only"], gamma={"only": "only"})
    d = denote(kb, c("neq", "only"))
    assert d.is_empty and not d.is_top


def test_ungrounded_is_top(geo):
    assert denote(geo, c("eq", "urn:nowhere")) is TOP
    # one unmapped member is enough
    assert denote(geo, c("isAnyOf", ["france", "urn:nowhere"])).is_top


def test_duplicate_set_values(geo):
    assert denote(geo, c("isAnyOf", ["france", "france"])) == denote(geo, c("eq", "france"))


def test_intersect():
    a, bc = Denotation.of({"a", "b"}), Denotation.of({"b", "c"})
    assert intersect(Denotation.of(()), TOP).is_empty
    assert intersect(TOP, Denotation.of(())).is_empty
    assert intersect(TOP, Denotation.of({"a"})) is TOP
    assert intersect(a, bc).concepts == {"b"}
    assert intersect(TOP, TOP) is TOP


def test_member3_examples(lng, dpv):
    assert member3(lng, "fr", c("isA", "de")) is F
    assert member3(dpv, "ScientificResearch", c("isA", "NonCommercial")) is U
    for x in lng.concepts:
        assert member3(lng, x, c("eq", x)) is T


def test_member3_eq_without_una():
    kb = build_kb(["a", "b"], gamma={"a": "a", "b": "b"}, una=False)
    assert member3(kb, "a", c("eq", "b")) is U
    assert member3(kb, "a", c("neq", "b")) is U
    strict = build_kb(["a", "b"], gamma={"a": "a", "b": "b"})
    assert member3(strict, "a", c("eq", "b")) is F
    assert member3(strict, "a", c("neq", "b")) is T


def test_member3_uses_negative_order_facts():
    kb = build_kb(["a", "b"], not_leq=[("a", "b")], gamma={"b": "b"})
    assert member3(kb, "a", c("isA", "b")) is F
    assert member3(build_kb(["a", "b"], gamma={"b": "b"}), "a", c("isA", "b")) is U


def test_member3_rejects_ungrounded(geo):
    with pytest.raises(UngroundedConstraint):
        member3(geo, "europe", c("eq", "urn:nowhere"))


def test_member3_closed_mode_is_crisp(dpv):
    k = c("isA", "NonCommercial")
    assert member3(dpv, "ScientificResearch", k, Mode.CLOSED) is F
    assert member3(dpv, "NonCommercialResearch", k, Mode.CLOSED) is T


def test_kleene_connectives():
    assert ~U is U and ~T is F
    assert Membership3.all([T, U]) is U and Membership3.all([U, F]) is F
    assert Membership3.any([F, U]) is U and Membership3.any([U, T]) is T


# --- properties -------------------------------------------------------------------

def _grounded(rng, kb, **kw):
    while True:
        k = random_constraint(rng, kb, ungrounded=0, **kw)
        if all(v in kb.gamma for v in k.values):
            return k


@given(st.integers(0, 10_000))
def test_operator_label_equivalence(seed):
    kb = kb_from_seed(seed, 6)
    for v in kb.gamma:
        assert denote(kb, c("isA", v)) == denote(kb, c("isPartOf", v))


@given(st.integers(0, 10_000))
def test_closure_directions(seed):
    kb = kb_from_seed(seed, 6)
    for v in kb.gamma:
        down = denote(kb, c("isA", v)).concepts
        up = denote(kb, c("hasPart", v)).concepts
        for x, y in kb.leq:
            assert not (y in down and x not in down)
            assert not (x in up and y not in up)


@given(st.integers(0, 10_000), st.lists(st.integers(0, 5), min_size=1, max_size=3))
def test_set_operator_algebra(seed, picks):
    kb = kb_from_seed(seed, 6)
    values = sorted(kb.gamma)
    if not values:
        return
    vs = [values[i % len(values)] for i in picks]
    singles = [denote(kb, c("isA", v)).concepts for v in vs]
    union = frozenset().union(*singles)
    assert denote(kb, c("isAnyOf", vs)).concepts == union
    assert denote(kb, c("isNoneOf", vs)).concepts == frozenset(kb.concepts) - union
    assert denote(kb, c("isAllOf", vs)).concepts == frozenset.intersection(*singles)


@given(st.lists(st.sampled_from("pqrs"), min_size=1, max_size=3))
def test_nominal_degeneration(vs):
    kb = build_kb(list("pqrs"), domain="nominal", gamma={x: x for x in "pqrs"})
    for v in vs:
        assert denote(kb, c("isA", v)) == denote(kb, c("eq", v))
    expected = {vs[0]} if len(set(vs)) == 1 else set()
    assert denote(kb, c("isAllOf", vs)).concepts == expected


@given(st.integers(0, 10_000))
def test_closed_member3_agrees_with_reference_denotation(seed):
    rng = random.Random(seed)
    kb = kb_from_seed(seed, 6)
    if not kb.gamma:
        return
    for _ in range(5):
        k = _grounded(rng, kb)
        ref = oracle.closed_denotation(kb, k)
        assert denote(kb, k).concepts == ref
        for x in kb.concepts:
            assert member3(kb, x, k, Mode.CLOSED) is (T if x in ref else F)


@given(st.integers(0, 10_000))
def test_open_member3_sound_and_exact_over_completions(seed):
    rng = random.Random(seed)
    kb = kb_from_seed(seed, 4)
    if not kb.gamma:
        return
    comps = oracle.completions(kb)
    for _ in range(5):
        k = _grounded(rng, kb)
        for x in kb.concepts:
            seen = {oracle._member(comp, x, k, kb) for comp in comps}
            expected = T if seen == {True} else F if seen == {False} else U
            assert member3(kb, x, k) is expected


@given(st.integers(0, 10_000))
def test_conservative_intersection_is_monotone(seed):
    # replacing an operand by TOP never turns a definite result into a different definite one
    rng = random.Random(seed)
    universe = ["a", "b", "c"]
    d1 = Denotation.of(x for x in universe if rng.random() < 0.5)
    d2 = Denotation.of(x for x in universe if rng.random() < 0.5)
    full = intersect(d1, d2)
    for coarse in (intersect(TOP, d2), intersect(d1, TOP)):
        assert coarse is TOP or coarse == full
