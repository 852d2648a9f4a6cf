"""JSON readers and writers for KBs, constraints, composites, alignments and contexts.

Readers reject unknown fields and report the offending file and field path.
Structural failures in otherwise well-formed input (unknown concepts,
contradictory closures, ...) surface as :class:`ValidationError`.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

from .alignment import Alignment
from .denotation import Constraint, Operator
from .errors import OdrlSemError, ParseError, UnknownOperator, ValidationError
from .kb import Domain, KnowledgeBase, build_kb
from .runtime import ExecutionContext
from .verdict import Composite, CompositeConstraint

__all__ = [
    "alignment_from_json", "alignment_to_json", "composite_from_json", "composite_to_json",
    "constraint_from_json", "constraint_to_json", "context_from_json", "context_to_json",
    "dump_json", "kb_from_json", "kb_to_json", "load_json", "load_kbdir", "parse_alignment_file",
    "parse_context_file", "parse_kb_file", "parse_policy_file", "raw_kb_from_json",
]


def load_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror or exc}", str(path)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from None


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def _at(where: str, field: str) -> str:
    if not where:
        return field
    return f"{where}[{field}]" if field[:1].isdigit() else f"{where}.{field}"


def _object(d, where, required=(), optional=()):
    if not isinstance(d, dict):
        raise ParseError(f"expected an object, got {type(d).__name__}", where)
    unknown = sorted(set(d) - set(required) - set(optional))
    if unknown:
        raise ParseError(f"unknown field(s) {unknown}", where)
    for key in required:
        if key not in d:
            raise ParseError(f"missing field {key!r}", where)
    return d


def _string(x, where) -> str:
    if not isinstance(x, str) or not x:
        raise ParseError("expected a non-empty string", where)
    return x


def _strings(x, where) -> list[str]:
    if not isinstance(x, list):
        raise ParseError("expected an array of strings", where)
    return [_string(v, _at(where, str(i))) for i, v in enumerate(x)]


def _pairs(x, where) -> list[tuple[str, str]]:
    if not isinstance(x, list):
        raise ParseError("expected an array of pairs", where)
    out = []
    for i, p in enumerate(x):
        loc = _at(where, str(i))
        if not isinstance(p, list) or len(p) != 2:
            raise ParseError("expected a 2-element array", loc)
        out.append((_string(p[0], _at(loc, "0")), _string(p[1], _at(loc, "1"))))
    return out


# --- knowledge bases -------------------------------------------------------

_KB_FIELDS = ("id", "domain", "una", "concepts", "leq", "disjoint", "not_leq", "gamma")


def raw_kb_from_json(d: Mapping, where: str = "") -> dict:
    """Checked keyword arguments for :func:`build_kb` from a KB object."""
    _object(d, where, required=("id", "concepts"), optional=_KB_FIELDS)
    domain = d.get("domain", "taxonomic")
    if domain not in {m.value for m in Domain}:
        raise ParseError(f"unknown domain {domain!r}", _at(where, "domain"))
    una = d.get("una", True)
    if not isinstance(una, bool):
        raise ParseError("expected true or false", _at(where, "una"))
    gamma = d.get("gamma", {})
    if not isinstance(gamma, dict):
        raise ParseError("expected an object mapping values to concepts", _at(where, "gamma"))
    for v, c in gamma.items():
        _string(c, _at(_at(where, "gamma"), v))
    return dict(
        kb_id=_string(d["id"], _at(where, "id")),
        domain=domain,
        una=una,
        concepts=_strings(d["concepts"], _at(where, "concepts")),
        leq=_pairs(d.get("leq", []), _at(where, "leq")),
        disjoint=_pairs(d.get("disjoint", []), _at(where, "disjoint")),
        not_leq=_pairs(d.get("not_leq", []), _at(where, "not_leq")),
        gamma=dict(gamma),
    )


def kb_from_json(d: Mapping, where: str = "") -> KnowledgeBase:
    raw = raw_kb_from_json(d, where)
    try:
        return build_kb(**raw)
    except (OdrlSemError, ValueError) as exc:
        raise ValidationError(exc, where) from exc


def _cover_edges(kb: KnowledgeBase) -> list[list[str]]:
    """Order pairs not implied through a strictly intermediate concept."""
    leq = kb.leq
    out = []
    for x, y in sorted(leq):
        if x == y:
            continue
        between = any((x, z) in leq and (z, y) in leq and (z, x) not in leq and (y, z) not in leq
                      for z in kb.concepts)
        if not between:
            out.append([x, y])
    return out


def _disjoint_generators(kb: KnowledgeBase) -> list[list[str]]:
    """Disjoint pairs (one orientation) not implied by a pair higher up the order."""
    if kb.domain is Domain.NOMINAL:
        return []
    leq, disj = kb.leq, kb.disjoint
    out = []
    for x, y in sorted(disj):
        if x > y:
            continue
        implied = any(
            (a, b) in disj and (x, a) in leq and (y, b) in leq
            and not ((a, x) in leq and (b, y) in leq)
            for a in kb.concepts for b in kb.concepts
        )
        if not implied:
            out.append([x, y])
    return out


def kb_to_json(kb: KnowledgeBase) -> dict:
    d = {
        "id": kb.kb_id,
        "domain": kb.domain.value,
        "una": kb.una,
        "concepts": list(kb.concepts),
        "leq": _cover_edges(kb),
        "disjoint": _disjoint_generators(kb),
    }
    if kb.not_leq:
        d["not_leq"] = [list(p) for p in sorted(kb.not_leq)]
    d["gamma"] = dict(sorted(kb.gamma.items()))
    return d


def parse_kb_file(path: str | Path) -> KnowledgeBase:
    return kb_from_json(load_json(path), str(path))


# --- constraints and composites --------------------------------------------

def constraint_from_json(d: Mapping, where: str = "") -> Constraint:
    _object(d, where, required=("leftOperand", "operator", "rightOperand"))
    operand = _string(d["leftOperand"], _at(where, "leftOperand"))
    try:
        op = Operator.parse(d["operator"])
    except (UnknownOperator, TypeError):
        raise ParseError(f"unknown operator {d['operator']!r}", _at(where, "operator")) from None
    rhs = d["rightOperand"]
    loc = _at(where, "rightOperand")
    if op.set_valued:
        value = _strings(rhs, loc)
        if not value:
            raise ParseError(f"{op.value} needs at least one value", loc)
        return Constraint(operand, op, tuple(value))
    return Constraint(operand, op, _string(rhs, loc))


def constraint_to_json(c: Constraint) -> dict:
    value = list(c.value) if isinstance(c.value, tuple) else c.value
    return {"leftOperand": c.left_operand, "operator": c.operator.value, "rightOperand": value}


def composite_from_json(d: Any, where: str = "") -> CompositeConstraint:
    if isinstance(d, dict) and len(d) == 1 and next(iter(d)) in ("and", "or", "xone"):
        mode, children = next(iter(d.items()))
        loc = _at(where, mode)
        if not isinstance(children, list) or not children:
            raise ParseError("expected a non-empty array of constraints", loc)
        return Composite(mode, tuple(composite_from_json(c, _at(loc, str(i))) for i, c in enumerate(children)))
    return constraint_from_json(d, where)


def composite_to_json(tree: CompositeConstraint) -> dict:
    if isinstance(tree, Constraint):
        return constraint_to_json(tree)
    return {tree.mode: [composite_to_json(c) for c in tree.children]}


def parse_policy_file(path: str | Path) -> CompositeConstraint:
    return composite_from_json(load_json(path), str(path))


# --- alignments and contexts -----------------------------------------------

def alignment_from_json(d: Mapping, where: str = "") -> Alignment:
    _object(d, where, required=("source", "target", "map"))
    pairs = _pairs(d["map"], _at(where, "map"))
    try:
        return Alignment(_string(d["source"], _at(where, "source")), _string(d["target"], _at(where, "target")),
                         tuple(pairs))
    except ValueError as exc:
        raise ParseError(str(exc), _at(where, "map")) from None


def alignment_to_json(a: Alignment) -> dict:
    return {"source": a.source, "target": a.target, "map": [list(p) for p in a.pairs]}


def parse_alignment_file(path: str | Path) -> Alignment:
    return alignment_from_json(load_json(path), str(path))


def context_from_json(d: Mapping, where: str = "") -> ExecutionContext:
    if not isinstance(d, dict):
        raise ParseError("expected an object mapping operands to values", where)
    return ExecutionContext({k: _string(v, _at(where, k)) for k, v in d.items()})


def context_to_json(ctx: ExecutionContext) -> dict:
    return dict(sorted(ctx.assignments.items()))


def parse_context_file(path: str | Path) -> ExecutionContext:
    return context_from_json(load_json(path), str(path))


def load_kbdir(kbdir: str | Path) -> dict[str, KnowledgeBase]:
    """Operand to KB map from ``manifest.json`` in ``kbdir``."""
    kbdir = Path(kbdir)
    manifest = kbdir / "manifest.json"
    d = _object(load_json(manifest), str(manifest), required=("operands",))
    ops = d["operands"]
    if not isinstance(ops, dict):
        raise ParseError("expected an object mapping operands to KB files", f"{manifest}.operands")
    cache: dict[str, KnowledgeBase] = {}
    out = {}
    for operand, rel in ops.items():
        rel = _string(rel, f"{manifest}.operands.{operand}")
        if rel not in cache:
            cache[rel] = parse_kb_file(kbdir / rel)
        out[operand] = cache[rel]
    return out
