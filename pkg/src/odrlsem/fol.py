"""A small first-order syntax tree with TPTP FOF / SMT-LIB2 printers and a TPTP reader.

The reader accepts the fragment the printers produce (plus function terms,
so that hand-written non-EPR formulas can be checked).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import ParseError

__all__ = [
    "And", "AnnotatedFormula", "Atom", "Const", "Eq", "Exists", "Fn", "Forall", "Iff",
    "Implies", "Not", "Or", "Var", "parse_tptp", "smt_formula", "tptp_formula",
]


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Fn:
    name: str
    args: tuple


Term = Union[Var, Const, Fn]


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple = ()


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    vars: tuple
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    vars: tuple
    body: "Formula"


Formula = Union[Atom, Eq, Not, And, Or, Implies, Iff, Forall, Exists]


@dataclass(frozen=True)
class AnnotatedFormula:
    name: str
    role: str  # "axiom" or "conjecture"
    formula: Formula


# --- TPTP ------------------------------------------------------------------

def _tptp_term(t) -> str:
    if isinstance(t, Fn):
        return f"{t.name}({','.join(_tptp_term(a) for a in t.args)})"
    return t.name


def tptp_formula(f) -> str:
    if isinstance(f, Atom):
        return f"{f.pred}({','.join(_tptp_term(a) for a in f.args)})" if f.args else f.pred
    if isinstance(f, Eq):
        return f"{_tptp_term(f.left)} = {_tptp_term(f.right)}"
    if isinstance(f, Not):
        if isinstance(f.arg, Eq):
            return f"{_tptp_term(f.arg.left)} != {_tptp_term(f.arg.right)}"
        return f"~ {_tptp_unit(f.arg)}"
    if isinstance(f, (And, Or)):
        if len(f.args) == 1:
            return tptp_formula(f.args[0])
        sep = " & " if isinstance(f, And) else " | "
        return sep.join(_tptp_unit(a) for a in f.args)
    if isinstance(f, Implies):
        return f"{_tptp_unit(f.left)} => {_tptp_unit(f.right)}"
    if isinstance(f, Iff):
        return f"{_tptp_unit(f.left)} <=> {_tptp_unit(f.right)}"
    if isinstance(f, (Forall, Exists)):
        q = "!" if isinstance(f, Forall) else "?"
        return f"{q} [{','.join(f.vars)}] : {_tptp_unit(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


def _tptp_unit(f) -> str:
    text = tptp_formula(f)
    if isinstance(f, Atom) or (isinstance(f, Not) and not isinstance(f.arg, Eq)):
        return text
    if isinstance(f, (And, Or)) and len(f.args) == 1:
        return _tptp_unit(f.args[0])
    return f"({text})"


# --- SMT-LIB2 --------------------------------------------------------------

def _smt_term(t) -> str:
    if isinstance(t, Fn):
        return f"({t.name} {' '.join(_smt_term(a) for a in t.args)})"
    return t.name


def smt_formula(f, sort: str = "U") -> str:
    if isinstance(f, Atom):
        return f"({f.pred} {' '.join(_smt_term(a) for a in f.args)})" if f.args else f.pred
    if isinstance(f, Eq):
        return f"(= {_smt_term(f.left)} {_smt_term(f.right)})"
    if isinstance(f, Not):
        return f"(not {smt_formula(f.arg, sort)})"
    if isinstance(f, (And, Or)):
        if len(f.args) == 1:
            return smt_formula(f.args[0], sort)
        op = "and" if isinstance(f, And) else "or"
        return f"({op} {' '.join(smt_formula(a, sort) for a in f.args)})"
    if isinstance(f, Implies):
        return f"(=> {smt_formula(f.left, sort)} {smt_formula(f.right, sort)})"
    if isinstance(f, Iff):
        return f"(= {smt_formula(f.left, sort)} {smt_formula(f.right, sort)})"
    if isinstance(f, (Forall, Exists)):
        q = "forall" if isinstance(f, Forall) else "exists"
        binders = " ".join(f"({v} {sort})" for v in f.vars)
        return f"({q} ({binders}) {smt_formula(f.body, sort)})"
    raise TypeError(f"not a formula: {f!r}")


# --- TPTP reader -----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(%[^\n]*)|(<=>|=>|!=|[(),.:\[\]!?~&|=])|([A-Za-z0-9_$]+))")


def _tokens(text: str) -> Iterator[tuple[str, int]]:
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                return
            line = text.count("\n", 0, pos) + 1
            raise ParseError(f"unexpected character {text[pos]!r}", f"line {line}")
        pos = m.end()
        if m.group(1) is not None:
            continue
        tok = m.group(2) or m.group(3)
        if tok:
            yield tok, text.count("\n", 0, m.start()) + 1


class _Reader:
    def __init__(self, text):
        self.toks = list(_tokens(text))
        self.i = 0
        self.bound: list[set] = []

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def where(self):
        if self.i < len(self.toks):
            return f"line {self.toks[self.i][1]}"
        return "end of input"

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError(f"expected {expected or 'token'}, found {tok!r}", self.where())
        self.i += 1
        return tok

    def problem(self):
        out = []
        while self.peek() is not None:
            self.take("fof")
            self.take("(")
            name = self.take()
            self.take(",")
            role = self.take()
            self.take(",")
            f = self.formula()
            self.take(")")
            self.take(".")
            out.append(AnnotatedFormula(name, role, f))
        return out

    def formula(self):
        left = self.unit()
        op = self.peek()
        if op in ("&", "|"):
            args = [left]
            while self.peek() == op:
                self.take()
                args.append(self.unit())
            return And(tuple(args)) if op == "&" else Or(tuple(args))
        if op == "=>":
            self.take()
            return Implies(left, self.unit())
        if op == "<=>":
            self.take()
            return Iff(left, self.unit())
        return left

    def unit(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        if tok == "~":
            self.take()
            return Not(self.unit())
        if tok in ("!", "?"):
            self.take()
            self.take("[")
            names = [self.take()]
            while self.peek() == ",":
                self.take()
                names.append(self.take())
            self.take("]")
            self.take(":")
            self.bound.append(set(names))
            body = self.unit()
            self.bound.pop()
            cls = Forall if tok == "!" else Exists
            return cls(tuple(names), body)
        return self.atomic()

    def term(self):
        name = self.take()
        if self.peek() == "(":
            return Fn(name, self.args())
        if name[0].isupper():
            if not any(name in b for b in self.bound):
                raise ParseError(f"free variable {name}", self.where())
            return Var(name)
        return Const(name)

    def args(self):
        self.take("(")
        out = [self.term()]
        while self.peek() == ",":
            self.take()
            out.append(self.term())
        self.take(")")
        return tuple(out)

    def atomic(self):
        start = self.i
        name = self.take()
        args = self.args() if self.peek() == "(" else ()
        if self.peek() in ("=", "!="):
            self.i = start
            left = self.term()
            op = self.take()
            right = self.term()
            eq = Eq(left, right)
            return eq if op == "=" else Not(eq)
        if name[0].isupper():
            raise ParseError(f"variable {name} used as a formula", self.where())
        return Atom(name, args)


def parse_tptp(text: str) -> list[AnnotatedFormula]:
    """Read ``fof(name, role, formula).`` statements."""
    return _Reader(text).problem()
