"""Emit conflict-detection problems as TPTP FOF and SMT-LIB2 text.

Each problem fixes the KB theory (domain closure, optional unique names, the
preorder and disjointness axioms and facts), defines one membership predicate
per constraint through the order predicate, and states either the existence
query ``?[X]: (in_1(X) & in_2(X))`` (compat-query) or its negation
(conflict-query). A prover answering Theorem/unsat then settles the verdict;
CounterSatisfiable/sat leaves it open.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

from .denotation import TOP, Constraint, Mode, Operator, grounded_indices
from .errors import UngroundedConstraint, UnrecognizedToken
from .fol import (
    And, AnnotatedFormula, Atom, Const, Eq, Exists, Fn, Forall, Iff, Implies, Not, Or, Var,
    parse_tptp, smt_formula, tptp_formula,
)
from .kb import KnowledgeBase
from .verdict import Verdict, check_group

__all__ = [
    "EncodedProblem",
    "EprResult",
    "Polarity",
    "ProverStatus",
    "emit_problem",
    "epr_check",
    "expected_status",
    "interpret_result",
    "write_problem",
]


class Polarity(str, Enum):
    COMPAT = "compat-query"
    CONFLICT = "conflict-query"

    @classmethod
    def parse(cls, text: "Polarity | str") -> "Polarity":
        if isinstance(text, Polarity):
            return text
        aliases = {"compat": cls.COMPAT, "conflict": cls.CONFLICT}
        return aliases.get(text) or cls(text)


class ProverStatus(str, Enum):
    THEOREM = "Theorem"
    COUNTER_SAT = "CounterSatisfiable"

    def __str__(self):
        return self.value

    @property
    def smt(self) -> str:
        return "unsat" if self is ProverStatus.THEOREM else "sat"


@dataclass(frozen=True)
class EncodedProblem:
    problem_id: str
    tptp_text: str
    smtlib_text: str
    polarity: Polarity
    expected: ProverStatus
    formulas: tuple[AnnotatedFormula, ...] = ()


_X, _Y, _Z = Var("X"), Var("Y"), Var("Z")


def _symbol(text: str) -> str:
    s = re.sub(r"[^A-Za-z0-9]+", "_", text).strip("_")
    return s or "u"


def constant_names(kb: KnowledgeBase) -> dict[str, str]:
    """Concept id to a TPTP/SMT-safe constant name, unique within the KB."""
    out: dict[str, str] = {}
    used: set[str] = set()
    for c in kb.concepts:
        base = "c_" + _symbol(c)
        name, k = base, 2
        while name in used:
            name, k = f"{base}_{k}", k + 1
        used.add(name)
        out[c] = name
    return out


def _membership(op: Operator, gs: Sequence[Const]):
    if op is Operator.EQ:
        return Eq(_X, gs[0])
    if op is Operator.NEQ:
        return Not(Eq(_X, gs[0]))
    if op in (Operator.IS_A, Operator.IS_PART_OF):
        return Atom("leq", (_X, gs[0]))
    if op is Operator.HAS_PART:
        return Atom("leq", (gs[0], _X))
    lits = tuple(Atom("leq", (_X, g)) for g in gs)
    if op is Operator.IS_ANY_OF:
        return Or(lits)
    if op is Operator.IS_ALL_OF:
        return And(lits)
    return Not(Or(lits))


def _as_group(side) -> tuple:
    return (side,) if isinstance(side, Constraint) or side is TOP else tuple(side)


def expected_status(verdict: Verdict, polarity: Polarity | str) -> ProverStatus:
    """The prover status an engine verdict predicts for the given query."""
    polarity = Polarity.parse(polarity)
    proved = (verdict is Verdict.CONFLICT and polarity is Polarity.CONFLICT) or (
        verdict is Verdict.COMPATIBLE and polarity is Polarity.COMPAT)
    return ProverStatus.THEOREM if proved else ProverStatus.COUNTER_SAT


def kb_axioms(kb: KnowledgeBase) -> list[AnnotatedFormula]:
    names = constant_names(kb)
    k = {c: Const(n) for c, n in names.items()}
    ax = [AnnotatedFormula("ax_domain", "axiom", Forall(("X",), Or(tuple(Eq(_X, k[c]) for c in kb.concepts))))]
    if kb.una:
        for i, x in enumerate(kb.concepts):
            for y in kb.concepts[i + 1:]:
                ax.append(AnnotatedFormula(f"ax_una_{names[x]}_{names[y]}", "axiom", Not(Eq(k[x], k[y]))))
    ax += [
        AnnotatedFormula("ax_leq_refl", "axiom", Forall(("X",), Atom("leq", (_X, _X)))),
        AnnotatedFormula("ax_leq_trans", "axiom", Forall(("X", "Y", "Z"), Implies(
            And((Atom("leq", (_X, _Y)), Atom("leq", (_Y, _Z)))), Atom("leq", (_X, _Z))))),
        AnnotatedFormula("ax_disj_irrefl", "axiom", Forall(("X",), Not(Atom("disj", (_X, _X))))),
        AnnotatedFormula("ax_disj_sym", "axiom", Forall(("X", "Y"), Implies(
            Atom("disj", (_X, _Y)), Atom("disj", (_Y, _X))))),
        AnnotatedFormula("ax_disj_down", "axiom", Forall(("X", "Y", "Z"), Implies(
            And((Atom("disj", (_X, _Y)), Atom("leq", (_Z, _X)))), Atom("disj", (_Z, _Y))))),
    ]
    for x, y in sorted(kb.leq):
        if x != y:
            ax.append(AnnotatedFormula(f"ax_leq_{names[x]}_{names[y]}", "axiom", Atom("leq", (k[x], k[y]))))
    for x, y in sorted(kb.disjoint):
        if x < y:
            ax.append(AnnotatedFormula(f"ax_disj_{names[x]}_{names[y]}", "axiom", Atom("disj", (k[x], k[y]))))
    for x, y in sorted(kb.not_leq):
        ax.append(AnnotatedFormula(f"ax_nleq_{names[x]}_{names[y]}", "axiom", Not(Atom("leq", (k[x], k[y])))))
    return ax


def emit_problem(
    kb: KnowledgeBase,
    left: Constraint | Iterable[Constraint],
    right: Constraint | Iterable[Constraint],
    polarity: Polarity | str,
    problem_id: str = "p",
    *,
    expected: ProverStatus | None = None,
    allow_ungrounded: bool = False,
) -> EncodedProblem:
    """Encode one same-operand constraint pair (or pair of conjunctions).

    ``expected`` defaults to the status predicted by the open-world engine.
    With ``allow_ungrounded`` a constraint whose value does not ground (or the
    :data:`TOP` marker standing for one) gets an unconstrained membership
    predicate instead of raising.
    """
    if not kb.concepts:
        raise ValueError(f"cannot encode over the empty KB {kb.kb_id!r}")
    polarity = Polarity.parse(polarity)
    group = _as_group(left) + _as_group(right)
    names = constant_names(kb)
    formulas = kb_axioms(kb)
    grounded_all = True
    for n, c in enumerate(group, start=1):
        gs = None if c is TOP else grounded_indices(kb, c)
        if gs is None:
            if not allow_ungrounded:
                raise UngroundedConstraint(f"{c} does not ground in {kb.kb_id!r}")
            grounded_all = False
            continue
        consts = [Const(names[kb.concepts[i]]) for i in gs]
        formulas.append(AnnotatedFormula(
            f"def_in_{n}", "axiom", Forall(("X",), Iff(Atom(f"in_{n}", (_X,)), _membership(c.operator, consts)))))
    query = Exists(("X",), And(tuple(Atom(f"in_{n}", (_X,)) for n in range(1, len(group) + 1))))
    conj = query if polarity is Polarity.COMPAT else Not(query)
    pid = _symbol(problem_id)
    formulas.append(AnnotatedFormula(f"cj_{pid}", "conjecture", conj))
    if expected is None:
        verdict = check_group(kb, _as_group(left), _as_group(right), Mode.OPEN).verdict
        expected = expected_status(verdict, polarity)
    header = [
        f"% problem {problem_id}: {polarity.value}",
        f"% kb {kb.kb_id} ({kb.domain.value}, una={'true' if kb.una else 'false'})",
    ]
    header += [f"% in_{n}: {c}" for n, c in enumerate(group, start=1)]
    if not grounded_all:
        header.append("% ungrounded constraints leave their membership predicate free")
    tptp = _render_tptp(header, formulas)
    smt = _render_smt(header, names, len(group), formulas)
    return EncodedProblem(problem_id, tptp, smt, polarity, ProverStatus(expected), tuple(formulas))


def _render_tptp(header, formulas) -> str:
    lines = list(header)
    lines += [f"fof({f.name}, {f.role}, {tptp_formula(f.formula)})." for f in formulas]
    return "\n".join(lines) + "\n"


def _render_smt(header, names, n_in, formulas) -> str:
    lines = [";" + h[1:] for h in header]
    lines.append("(set-logic UF)")
    lines.append("(declare-sort U 0)")
    lines += [f"(declare-const {n} U)" for n in names.values()]
    lines.append("(declare-fun leq (U U) Bool)")
    lines.append("(declare-fun disj (U U) Bool)")
    lines += [f"(declare-fun in_{n} (U) Bool)" for n in range(1, n_in + 1)]
    for f in formulas:
        body = smt_formula(f.formula)
        if f.role == "conjecture":
            body = f"(not {body})"
        lines.append(f"(assert (! {body} :named {f.name}))")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


def write_problem(problem: EncodedProblem, out_dir: str | Path) -> tuple[Path, Path]:
    """Write ``<id>.p`` and ``<id>.smt2`` (UTF-8, LF endings) and return both paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = _symbol(problem.problem_id)
    p, s = out / f"{stem}.p", out / f"{stem}.smt2"
    p.write_bytes(problem.tptp_text.encode("utf-8"))
    s.write_bytes(problem.smtlib_text.encode("utf-8"))
    return p, s


# --- EPR guard -------------------------------------------------------------

class EprResult(NamedTuple):
    ok: bool
    offending: list[str]


def _epr_violation(f, positive: bool, under_forall: bool) -> str | None:
    if isinstance(f, (Atom, Eq)):
        terms = f.args if isinstance(f, Atom) else (f.left, f.right)
        return "function symbol" if any(_has_fn(t) for t in terms) else None
    if isinstance(f, Not):
        return _epr_violation(f.arg, not positive, under_forall)
    if isinstance(f, (And, Or)):
        for a in f.args:
            if (msg := _epr_violation(a, positive, under_forall)):
                return msg
        return None
    if isinstance(f, Implies):
        return (_epr_violation(f.left, not positive, under_forall)
                or _epr_violation(f.right, positive, under_forall))
    if isinstance(f, Iff):
        # each side occurs under both polarities
        for side in (f.left, f.right):
            for pol in (True, False):
                if (msg := _epr_violation(side, pol, under_forall)):
                    return msg
        return None
    if isinstance(f, (Forall, Exists)):
        universal = isinstance(f, Forall) == positive
        if not universal and under_forall:
            return "existential inside universal scope"
        return _epr_violation(f.body, positive, under_forall or universal)
    raise TypeError(f"not a formula: {f!r}")


def _has_fn(t) -> bool:
    return isinstance(t, Fn)


def epr_check(problem: EncodedProblem | Iterable[AnnotatedFormula]) -> EprResult:
    """Whether every formula (conjectures negated) has an ∃*∀* prenex form and no functions.

    For an :class:`EncodedProblem` the TPTP text itself is parsed and checked.
    """
    formulas = parse_tptp(problem.tptp_text) if isinstance(problem, EncodedProblem) else list(problem)
    bad = []
    for f in formulas:
        positive = f.role != "conjecture"
        msg = _epr_violation(f.formula, positive, False)
        if msg:
            bad.append(f"{f.name}: {msg}")
    return EprResult(not bad, bad)


# --- prover output ---------------------------------------------------------

_PROVED = {"Theorem": True, "unsat": True, "CounterSatisfiable": False, "sat": False}


def interpret_result(token: str, polarity: Polarity | str) -> Verdict:
    """Map a prover status token and the query polarity to a verdict."""
    proved = _PROVED.get(str(token).strip())
    if proved is None:
        raise UnrecognizedToken(f"unrecognised prover status {token!r}")
    if not proved:
        return Verdict.UNKNOWN
    return Verdict.CONFLICT if Polarity.parse(polarity) is Polarity.CONFLICT else Verdict.COMPATIBLE
