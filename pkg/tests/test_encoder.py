import random

import pytest
from hypothesis import given, strategies as st

from odrlsem.bench import fixtures, oracle
from odrlsem.bench.generators import random_constraint
from odrlsem.denotation import TOP, Constraint
from odrlsem.encoder import (
    Polarity,
    ProverStatus,
    emit_problem,
    epr_check,
    expected_status,
    interpret_result,
    write_problem,
)
from odrlsem.errors import UngroundedConstraint, UnrecognizedToken
from odrlsem.fol import AnnotatedFormula, Atom, Const, Exists, Forall, Fn, Var, parse_tptp
from odrlsem.groundsat import decide_text, ground_status
from odrlsem.verdict import Verdict, check_group

from conftest import kb_from_seed

THM, CSA = ProverStatus.THEOREM, ProverStatus.COUNTER_SAT


def c(op, value, operand="l"):
    return Constraint(operand, op, tuple(value) if isinstance(value, list) else value)


@pytest.fixture
def conflict_problem(lng):
    return emit_problem(lng, c("isA", "de"), c("eq", "fr"), "conflict", "lng_de_fr")


def test_axiom_names(conflict_problem):
    names = [f.name for f in conflict_problem.formulas]
    for expected in ("ax_domain", "ax_leq_refl", "ax_leq_trans", "ax_disj_irrefl", "ax_disj_sym",
                     "ax_disj_down", "def_in_1", "def_in_2", "cj_lng_de_fr"):
        assert expected in names
    assert any(n.startswith("ax_una_") for n in names)
    assert "fof(cj_lng_de_fr, conjecture," in conflict_problem.tptp_text


def test_expected_status_table():
    assert expected_status(Verdict.CONFLICT, "conflict") is THM
    assert expected_status(Verdict.CONFLICT, "compat") is CSA
    assert expected_status(Verdict.COMPATIBLE, "compat") is THM
    assert expected_status(Verdict.UNKNOWN, "compat") is CSA
    assert expected_status(Verdict.UNKNOWN, "conflict") is CSA


def test_interpret_result():
    assert interpret_result("Theorem", "conflict") is Verdict.CONFLICT
    assert interpret_result("unsat", Polarity.COMPAT) is Verdict.COMPATIBLE
    assert interpret_result("CounterSatisfiable", "compat") is Verdict.UNKNOWN
    assert interpret_result(" sat\n", "conflict") is Verdict.UNKNOWN
    with pytest.raises(UnrecognizedToken):
        interpret_result("Timeout", "compat")


def test_ground_decisions(conflict_problem, lng, dpv):
    assert conflict_problem.expected is THM
    assert ground_status(conflict_problem) is THM
    assert ground_status(emit_problem(lng, c("isA", "de"), c("eq", "fr"), "compat")) is CSA
    unknown = [emit_problem(dpv, c("isA", "NonCommercial"), c("eq", "ScientificResearch"), p) for p in Polarity]
    assert [ground_status(p) for p in unknown] == [CSA, CSA]


def test_ungrounded_needs_permission(geo):
    with pytest.raises(UngroundedConstraint):
        emit_problem(geo, c("eq", "urn:nowhere"), c("eq", "france"), "compat")
    p = emit_problem(geo, TOP, c("eq", "france"), "compat", allow_ungrounded=True)
    assert "def_in_1" not in {f.name for f in p.formulas}
    assert ground_status(p) is CSA and epr_check(p).ok


def test_output_is_deterministic_and_parsable(conflict_problem, lng, tmp_path):
    again = emit_problem(lng, c("isA", "de"), c("eq", "fr"), "conflict", "lng_de_fr")
    assert again.tptp_text == conflict_problem.tptp_text and again.smtlib_text == conflict_problem.smtlib_text
    assert [f.name for f in parse_tptp(conflict_problem.tptp_text)] == [f.name for f in conflict_problem.formulas]
    p, s = write_problem(conflict_problem, tmp_path)
    assert p.name == "lng_de_fr.p" and s.read_bytes().endswith(b"(check-sat)\n")
    assert b"\r\n" not in p.read_bytes()
    assert decide_text(p.read_text()) is THM


def test_smtlib_structure(conflict_problem):
    text = conflict_problem.smtlib_text
    assert "(set-logic UF)" in text and "(declare-sort U 0)" in text
    assert ":named cj_lng_de_fr" in text


def test_epr_guard_rejects_functions_and_alternation():
    x, y = Var("X"), Var("Y")
    with_fn = AnnotatedFormula("f", "axiom", Forall(("X",), Atom("p", (Fn("g", (x,)),))))
    forall_exists = AnnotatedFormula("ae", "axiom", Forall(("X",), Exists(("Y",), Atom("r", (x, y)))))
    fine = AnnotatedFormula("ok", "axiom", Exists(("Y",), Forall(("X",), Atom("r", (x, y)))))
    neg = AnnotatedFormula("cj", "conjecture", Exists(("X",), Atom("p", (x,))))
    res = epr_check([with_fn, forall_exists, fine, neg])
    assert not res.ok and len(res.offending) == 2
    assert epr_check([fine, neg, AnnotatedFormula("g", "axiom", Atom("p", (Const("a"),)))]).ok


def test_constant_names_are_unique():
    from odrlsem.encoder import constant_names
    from odrlsem.kb import build_kb

    names = constant_names(build_kb(["a-b", "a_b", "a.b"]))
    assert len(set(names.values())) == 3


@pytest.mark.parametrize("kb_id", fixtures.KB_IDS)
def test_every_fixture_encodes_as_epr(kb_id):
    kb = fixtures.kb(kb_id)
    x = kb.concepts[0]
    for pol in Polarity:
        for op in ("isA", "hasPart", "neq", "isNoneOf"):
            value = [x] if op == "isNoneOf" else x
            assert epr_check(emit_problem(kb, c(op, value), c("eq", x), pol, allow_ungrounded=True)).ok


@given(st.integers(0, 10_000))
def test_ground_sat_agrees_with_engine(seed):
    rng = random.Random(seed)
    kb = kb_from_seed(seed, 4, una=True)
    cs = [random_constraint(rng, kb) for _ in range(2)]
    verdict = check_group(kb, cs[:1], cs[1:]).verdict
    assert oracle.prover_oracle(kb, cs[:1], cs[1:]) is verdict
    for pol in Polarity:
        p = emit_problem(kb, cs[0], cs[1], pol, allow_ungrounded=True)
        assert epr_check(p).ok
        assert ground_status(p) is expected_status(verdict, pol)


def test_z3_agrees_on_smtlib(conflict_problem, lng):
    z3 = pytest.importorskip("z3")
    for problem in (conflict_problem, emit_problem(lng, c("isA", "de"), c("eq", "de-AT"), "compat")):
        s = z3.Solver()
        s.from_string(problem.smtlib_text)
        assert str(s.check()) == problem.expected.smt
