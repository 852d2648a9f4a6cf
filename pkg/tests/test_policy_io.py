import json

import pytest
from hypothesis import given, strategies as st

from odrlsem.bench import fixtures
from odrlsem.denotation import Constraint
from odrlsem.errors import ParseError, UnknownConcept, ValidationError
from odrlsem.policy_io import (
    alignment_from_json,
    alignment_to_json,
    composite_from_json,
    composite_to_json,
    constraint_from_json,
    context_from_json,
    context_to_json,
    kb_from_json,
    kb_to_json,
    load_kbdir,
    parse_alignment_file,
    parse_context_file,
    parse_kb_file,
    parse_policy_file,
)
from odrlsem.verdict import Composite

from conftest import kb_from_seed


@pytest.mark.parametrize("name, kb_id", [
    ("geo.json", "GEO000"), ("dpv.json", "DPV000"), ("lng.json", "LNG000"),
    ("iso3166.json", "GEO001"), ("lng_families.json", "LNG001"), ("wit_a.json", "WITA"), ("wit_b.json", "WITB"),
])
def test_demo_kbs_match_fixtures(data_dir, name, kb_id):
    assert parse_kb_file(data_dir / name) == fixtures.kb(kb_id)


@pytest.mark.parametrize("kb_id", fixtures.KB_IDS)
def test_kb_round_trip(kb_id):
    kb = fixtures.kb(kb_id)
    assert kb_from_json(json.loads(json.dumps(kb_to_json(kb)))) == kb


def test_serialised_kb_keeps_only_generators():
    d = kb_to_json(fixtures.kb("GEO000"))
    assert ["bavaria", "europe"] not in d["leq"]
    assert ["bavaria", "france"] not in d["disjoint"]


@given(st.integers(0, 10_000))
def test_random_kb_round_trip(seed):
    kb = kb_from_seed(seed, 6)
    assert kb_from_json(kb_to_json(kb)) == kb


def test_policy_round_trip(data_dir):
    for name in ("library_offer.json", "research_request.json"):
        raw = json.loads((data_dir / name).read_text())
        tree = parse_policy_file(data_dir / name)
        assert isinstance(tree, Composite) and composite_to_json(tree) == raw


def test_nested_composite():
    raw = {"or": [{"leftOperand": "a", "operator": "isAnyOf", "rightOperand": ["x", "y"]},
                  {"xone": [{"leftOperand": "b", "operator": "neq", "rightOperand": "z"}]}]}
    assert composite_to_json(composite_from_json(raw)) == raw


def test_alignment_and_context_round_trip(data_dir):
    a = parse_alignment_file(data_dir / "alignments" / "GEO001-GEO000.json")
    assert a == fixtures.alignment("GEO001-GEO000")
    assert alignment_from_json(alignment_to_json(a)) == a
    ctx = parse_context_file(data_dir / "context.json")
    assert context_from_json(context_to_json(ctx)) == ctx


def test_load_kbdir_shares_files(data_dir):
    kbs = load_kbdir(data_dir)
    assert set(kbs) == {"spatial", "purpose", "language"}
    assert kbs["spatial"] == fixtures.kb("GEO000")


def test_unknown_operator_is_located():
    with pytest.raises(ParseError) as info:
        constraint_from_json({"leftOperand": "a", "operator": "subsetOf", "rightOperand": "x"}, "req")
    assert info.value.location == "req.operator"
    assert "subsetOf" in str(info.value)


@pytest.mark.parametrize("raw, location", [
    ({"leftOperand": "a", "operator": "eq"}, "c"),
    ({"leftOperand": "a", "operator": "eq", "rightOperand": ["x"]}, "c.rightOperand"),
    ({"leftOperand": "a", "operator": "isAnyOf", "rightOperand": []}, "c.rightOperand"),
    ({"leftOperand": "a", "operator": "isAnyOf", "rightOperand": ["x", 3]}, "c.rightOperand[1]"),
    ({"leftOperand": "a", "operator": "eq", "rightOperand": "x", "extra": 1}, "c"),
    ({"and": []}, "c.and"),
])
def test_malformed_constraints(raw, location):
    with pytest.raises(ParseError) as info:
        composite_from_json(raw, "c")
    assert info.value.location == location


def test_kb_structure_errors():
    with pytest.raises(ParseError):
        kb_from_json({"id": "x", "concepts": ["a"], "domain": "spatial"})
    with pytest.raises(ParseError):
        kb_from_json({"id": "x", "concepts": ["a"], "leq": [["a"]]})
    with pytest.raises(ParseError):
        kb_from_json({"id": "x", "concepts": ["a"], "una": "yes"})


def test_unknown_concept_is_a_validation_error():
    with pytest.raises(ValidationError) as info:
        kb_from_json({"id": "x", "concepts": ["a"], "leq": [["a", "ghost"]]}, "kb.json")
    assert isinstance(info.value.cause, UnknownConcept)
    assert str(info.value).startswith("kb.json: UnknownConcept")


def test_contradictory_kb_is_a_validation_error(data_dir):
    with pytest.raises(ValidationError):
        parse_kb_file(data_dir / "contradictory_kb.json")


def test_bad_files(tmp_path):
    with pytest.raises(ParseError):
        parse_kb_file(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{\n  \"id\": ")
    with pytest.raises(ParseError) as info:
        parse_kb_file(broken)
    assert info.value.location.startswith(str(broken) + ":")


def test_alignment_must_be_a_function():
    with pytest.raises(ParseError):
        alignment_from_json({"source": "s", "target": "t", "map": [["a", "x"], ["a", "y"]]})


def test_constraint_values_are_preserved_verbatim():
    c = constraint_from_json({"leftOperand": "lang", "operator": "isAnyOf", "rightOperand": ["DE", "de"]})
    assert c == Constraint("lang", "isAnyOf", ("DE", "de"))
