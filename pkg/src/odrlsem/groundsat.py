"""Decide emitted problems by ground instantiation over their constants.

Every emitted theory carries a domain-closure axiom, so each model's elements
are named by constants. Quantifiers therefore expand into finite conjunctions
and disjunctions over the constants, equality becomes an ordinary predicate
constrained to be a congruence, and the result is a propositional problem that
``pycosat`` decides. The conjecture is a theorem iff the axioms together with
its negation are unsatisfiable.
"""

from __future__ import annotations

import itertools
from typing import Iterable

import pycosat

from .encoder import EncodedProblem, ProverStatus
from .fol import (
    And, AnnotatedFormula, Atom, Const, Eq, Exists, Fn, Forall, Iff, Implies, Not, Or, Var, parse_tptp,
)

__all__ = ["decide", "decide_text", "ground_status"]


class _Cnf:
    def __init__(self):
        self.atoms: dict[tuple, int] = {}
        self.clauses: list[list[int]] = []
        self.true = self.fresh()
        self.clauses.append([self.true])

    def fresh(self) -> int:
        n = len(self.atoms) + 1
        self.atoms[("#", n)] = n
        return n

    def atom(self, key) -> int:
        if key not in self.atoms:
            self.atoms[key] = len(self.atoms) + 1
        return self.atoms[key]

    def conj(self, lits: list[int]) -> int:
        if not lits:
            return self.true
        if len(lits) == 1:
            return lits[0]
        v = self.fresh()
        for lit in lits:
            self.clauses.append([-v, lit])
        self.clauses.append([v] + [-lit for lit in lits])
        return v

    def disj(self, lits: list[int]) -> int:
        return -self.conj([-lit for lit in lits])


def _eq_key(a: str, b: str):
    return ("=", a, b) if a <= b else ("=", b, a)


class _Grounder:
    def __init__(self, consts: list[str]):
        self.consts = consts
        self.cnf = _Cnf()
        self.preds: dict[str, int] = {}

    def term(self, t, env) -> str:
        if isinstance(t, Var):
            return env[t.name]
        if isinstance(t, Const):
            return t.name
        raise ValueError(f"function terms cannot be grounded: {t!r}")

    def lit(self, f, env) -> int:
        cnf = self.cnf
        if isinstance(f, Atom):
            args = tuple(self.term(a, env) for a in f.args)
            self.preds.setdefault(f.pred, len(args))
            return cnf.atom((f.pred, *args))
        if isinstance(f, Eq):
            a, b = self.term(f.left, env), self.term(f.right, env)
            return cnf.true if a == b else cnf.atom(_eq_key(a, b))
        if isinstance(f, Not):
            return -self.lit(f.arg, env)
        if isinstance(f, And):
            return cnf.conj([self.lit(a, env) for a in f.args])
        if isinstance(f, Or):
            return cnf.disj([self.lit(a, env) for a in f.args])
        if isinstance(f, Implies):
            return cnf.disj([-self.lit(f.left, env), self.lit(f.right, env)])
        if isinstance(f, Iff):
            a, b = self.lit(f.left, env), self.lit(f.right, env)
            return cnf.conj([cnf.disj([-a, b]), cnf.disj([a, -b])])
        if isinstance(f, (Forall, Exists)):
            parts = []
            for values in itertools.product(self.consts, repeat=len(f.vars)):
                parts.append(self.lit(f.body, {**env, **dict(zip(f.vars, values))}))
            return cnf.conj(parts) if isinstance(f, Forall) else cnf.disj(parts)
        raise TypeError(f"not a formula: {f!r}")

    def assert_true(self, f):
        self.cnf.clauses.append([self.lit(f, {})])

    def congruence(self):
        """Equality is an equivalence compatible with every predicate."""
        cnf, cs = self.cnf, self.consts

        def eq(a, b):
            return cnf.true if a == b else cnf.atom(_eq_key(a, b))

        for a, b, c in itertools.permutations(cs, 3):
            cnf.clauses.append([-eq(a, b), -eq(b, c), eq(a, c)])
        for pred, arity in self.preds.items():
            for args in itertools.product(cs, repeat=arity):
                src = cnf.atom((pred, *args))
                for pos in range(arity):
                    for other in cs:
                        if other == args[pos]:
                            continue
                        moved = args[:pos] + (other,) + args[pos + 1:]
                        cnf.clauses.append([-eq(args[pos], other), -src, cnf.atom((pred, *moved))])


def _constants(formulas: Iterable[AnnotatedFormula]) -> list[str]:
    found: set[str] = set()

    def walk(x):
        if isinstance(x, Const):
            found.add(x.name)
        elif isinstance(x, Fn):
            raise ValueError(f"function symbol {x.name} is outside the decidable fragment")
        elif isinstance(x, (Atom,)):
            for a in x.args:
                walk(a)
        elif isinstance(x, Eq):
            walk(x.left)
            walk(x.right)
        elif isinstance(x, Not):
            walk(x.arg)
        elif isinstance(x, (And, Or)):
            for a in x.args:
                walk(a)
        elif isinstance(x, (Implies, Iff)):
            walk(x.left)
            walk(x.right)
        elif isinstance(x, (Forall, Exists)):
            walk(x.body)

    for f in formulas:
        walk(f.formula)
    return sorted(found)


def decide(formulas: list[AnnotatedFormula]) -> ProverStatus:
    """Theorem if the axioms entail every conjecture, CounterSatisfiable otherwise.

    The formulas must include a domain-closure axiom; without it grounding
    over the named constants would not be complete.
    """
    consts = _constants(formulas)
    if not consts:
        raise ValueError("problem names no constants")
    g = _Grounder(consts)
    conjectures = [f.formula for f in formulas if f.role == "conjecture"]
    for f in formulas:
        if f.role != "conjecture":
            g.assert_true(f.formula)
    if conjectures:
        g.assert_true(Not(And(tuple(conjectures))))
    g.congruence()
    result = pycosat.solve(g.cnf.clauses)
    return ProverStatus.COUNTER_SAT if isinstance(result, list) else ProverStatus.THEOREM


def decide_text(tptp_text: str) -> ProverStatus:
    return decide(parse_tptp(tptp_text))


def ground_status(problem: EncodedProblem) -> ProverStatus:
    """Status of an emitted problem, computed from its TPTP text alone."""
    return decide_text(problem.tptp_text)
