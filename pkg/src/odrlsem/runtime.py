"""Runtime evaluation of concrete requests against constraints."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from .denotation import Constraint, Membership3, Mode, denote, grounded_indices, member3
from .errors import ConfigError, OperandMismatch
from .kb import BOTTOM, KnowledgeBase
from .verdict import CompositeConstraint, Verdict, check_composite, check_pair, operands

__all__ = [
    "ExecutionContext",
    "SoundnessReport",
    "context_for",
    "exhaustive_composite_check",
    "exhaustive_soundness_check",
    "satisfies",
    "satisfies_composite",
]


@dataclass(frozen=True)
class ExecutionContext:
    """Concrete request values, one value string per left operand."""

    assignments: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for k, v in dict(self.assignments).items():
            if not isinstance(k, str) or not isinstance(v, str):
                raise ValueError(f"context entries must map operand strings to value strings: {k!r}")
        object.__setattr__(self, "assignments", MappingProxyType(dict(self.assignments)))

    def get(self, operand: str):
        return self.assignments.get(operand)

    def __eq__(self, other):
        return isinstance(other, ExecutionContext) and dict(self.assignments) == dict(other.assignments)

    def __hash__(self):
        return hash(tuple(sorted(self.assignments.items())))


def satisfies(kbs: Mapping[str, KnowledgeBase], ctx: ExecutionContext, c: Constraint,
              mode: Mode | str = Mode.OPEN) -> bool:
    """Default-deny check of a single constraint against a request.

    Open mode admits only values that are members in every completion, so an
    undetermined membership denies.
    """
    kb = kbs.get(c.left_operand)
    if kb is None:
        raise ConfigError(f"no knowledge base configured for operand {c.left_operand!r}")
    value = ctx.get(c.left_operand)
    if value is None:
        return False
    x = kb.gamma.get(value, BOTTOM)
    if x is BOTTOM:
        return False
    if grounded_indices(kb, c) is None:
        return True
    if Mode(mode) is Mode.CLOSED:
        return x in denote(kb, c).concepts
    return member3(kb, x, c, mode) is Membership3.TRUE


def context_for(kb: KnowledgeBase, operand: str, concept: str) -> ExecutionContext:
    """A context whose value for ``operand`` grounds to ``concept``.

    Uses a gamma preimage when one exists; otherwise the caller must evaluate
    against :func:`_with_synthetic` so the synthetic value grounds.
    """
    for v, g in sorted(kb.gamma.items()):
        if g == concept:
            return ExecutionContext({operand: v})
    return ExecutionContext({operand: _synthetic(concept)})


def _synthetic(concept: str) -> str:
    return f"urn:concept:{concept}"


def _with_synthetic(kb: KnowledgeBase) -> KnowledgeBase:
    preimaged = set(kb.gamma.values())
    extra = {_synthetic(c): c for c in kb.concepts if c not in preimaged}
    if not extra:
        return kb
    return KnowledgeBase(kb.kb_id, kb.domain, kb.concepts, kb.leq, kb.disjoint, kb.not_leq,
                         {**extra, **kb.gamma}, kb.una)


@dataclass(frozen=True)
class SoundnessReport:
    verdict: Verdict
    witness: str | None
    satisfying: tuple[str, ...]
    violating: tuple[str, ...]

    @property
    def ok(self) -> bool:
        if self.violating:
            return False
        if self.verdict is Verdict.COMPATIBLE and self.witness is not None:
            return self.witness in self.satisfying
        return True


def exhaustive_soundness_check(kb: KnowledgeBase, c1: Constraint, c2: Constraint,
                               mode: Mode | str = Mode.OPEN) -> SoundnessReport:
    """Evaluate both constraints against a request for every concept of the KB.

    ``satisfying`` lists the concepts whose request passes both constraints;
    for a CONFLICT verdict all of them are counterexamples and are reported as
    ``violating`` as well.
    """
    if c1.left_operand != c2.left_operand:
        raise OperandMismatch(f"{c1.left_operand!r} vs {c2.left_operand!r}")
    op = c1.left_operand
    res = check_pair(kb, c1, c2, mode)
    probe = {op: _with_synthetic(kb)}
    sat = []
    for x in kb.concepts:
        ctx = context_for(kb, op, x)
        if satisfies(probe, ctx, c1, mode) and satisfies(probe, ctx, c2, mode):
            sat.append(x)
    violating = tuple(sat) if res.verdict is Verdict.CONFLICT else ()
    return SoundnessReport(res.verdict, res.witness, tuple(sat), violating)


def satisfies_composite(kbs: Mapping[str, KnowledgeBase], ctx: ExecutionContext, tree: CompositeConstraint,
                        mode: Mode | str = Mode.OPEN) -> bool:
    """Boolean reading of an and/or/xone tree over :func:`satisfies`."""
    if isinstance(tree, Constraint):
        return satisfies(kbs, ctx, tree, mode)
    hits = [satisfies_composite(kbs, ctx, child, mode) for child in tree.children]
    if tree.mode == "and":
        return all(hits)
    if tree.mode == "or":
        return any(hits)
    return hits.count(True) == 1


def exhaustive_composite_check(kbs: Mapping[str, KnowledgeBase], left: CompositeConstraint,
                               right: CompositeConstraint, mode: Mode | str = Mode.OPEN) -> SoundnessReport:
    """Try every combination of concepts over all operands either rule mentions.

    Reports the satisfying combinations (as ``operand=concept`` strings); for
    a CONFLICT verdict they are all violations.
    """
    res = check_composite(kbs, left, right, mode)
    ops = sorted(operands(left) | operands(right))
    missing = [op for op in ops if op not in kbs]
    if missing:
        raise ConfigError(f"no knowledge base configured for operand(s) {missing}")
    probe = {op: _with_synthetic(kbs[op]) for op in ops}
    sat = []
    for combo in itertools.product(*(kbs[op].concepts for op in ops)):
        values = {}
        for op, x in zip(ops, combo):
            values.update(context_for(kbs[op], op, x).assignments)
        ctx = ExecutionContext(values)
        if satisfies_composite(probe, ctx, left, mode) and satisfies_composite(probe, ctx, right, mode):
            sat.append(", ".join(f"{op}={x}" for op, x in zip(ops, combo)))
    violating = tuple(sat) if res.verdict is Verdict.CONFLICT else ()
    return SoundnessReport(res.verdict, None, tuple(sat), violating)
