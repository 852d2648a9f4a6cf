"""Three-valued conflict detection, subsumption and and/or/xone composition."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Mapping, Sequence, Union

from .denotation import (
    Constraint,
    Denotation,
    Mode,
    TOP,
    denote,
    dnf_and,
    dnf_realisable,
    grounded_indices,
    membership_dnf,
)
from .errors import ConfigError, OperandMismatch
from .kb import KnowledgeBase

__all__ = [
    "Composite",
    "CompositeConstraint",
    "CompositeResult",
    "OperandVerdict",
    "PairResult",
    "SubsumptionResult",
    "Verdict",
    "branch_exclusivity",
    "check_composite",
    "check_group",
    "check_pair",
    "compose",
    "flatten",
    "intersect_all",
    "operands",
    "subsumes",
]


class Verdict(str, Enum):
    CONFLICT = "CONFLICT"
    COMPATIBLE = "COMPATIBLE"
    UNKNOWN = "UNKNOWN"

    def __str__(self):
        return self.value


class SubsumptionResult(str, Enum):
    CONFIRMED = "CONFIRMED"
    REFUTED = "REFUTED"
    UNKNOWN = "UNKNOWN"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class PairResult:
    verdict: Verdict
    witness: str | None = None


_MODES = ("and", "or", "xone")


@dataclass(frozen=True)
class Composite:
    """An ``and``/``or``/``xone`` node over leaf constraints or nested nodes."""

    mode: str
    children: tuple["CompositeConstraint", ...]

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"composition mode must be one of {_MODES}, got {self.mode!r}")
        kids = tuple(self.children)
        if not kids:
            raise ValueError(f"{self.mode} node needs at least one child")
        for k in kids:
            if not isinstance(k, (Constraint, Composite)):
                raise TypeError(f"unexpected child {k!r}")
        object.__setattr__(self, "children", kids)


CompositeConstraint = Union[Constraint, Composite]


def operands(tree: CompositeConstraint) -> set[str]:
    if isinstance(tree, Constraint):
        return {tree.left_operand}
    out = set()
    for child in tree.children:
        out |= operands(child)
    return out


def flatten(tree: CompositeConstraint) -> dict[str, tuple[Constraint, ...]] | None:
    """Group a leaf or an ``and`` of leaves by operand; None for any other shape."""
    if isinstance(tree, Constraint):
        return {tree.left_operand: (tree,)}
    if tree.mode != "and" or not all(isinstance(c, Constraint) for c in tree.children):
        return None
    groups: dict[str, tuple[Constraint, ...]] = {}
    for c in tree.children:
        groups[c.left_operand] = groups.get(c.left_operand, ()) + (c,)
    return groups


# --- single operand -------------------------------------------------------

def check_group(
    kb: KnowledgeBase,
    left: Sequence[Constraint],
    right: Sequence[Constraint],
    mode: Mode | str = Mode.OPEN,
) -> PairResult:
    """Verdict for two conjunctions of constraints over one operand.

    Either side may contain :data:`TOP` in place of a constraint whose value
    could not be translated; it is treated like an unmapped value.

    Closed mode uses :func:`intersect_all` over all denotations. Open
    mode answers COMPATIBLE when one concept is a member of every constraint in
    every completion (that concept is the witness), CONFLICT when no concept can
    be a member of all of them in any completion, UNKNOWN otherwise. An
    unmapped value leaves its constraint unconstrained; it can still be part of
    a CONFLICT through a provably empty partner, never of a COMPATIBLE.
    """
    constraints = list(left) + list(right)
    ops = {c.left_operand for c in constraints if isinstance(c, Constraint)}
    if len(ops) > 1:
        raise OperandMismatch(f"constraints mix operands {sorted(ops)}")
    if Mode(mode) is Mode.CLOSED:
        d = intersect_all([_denote_or_top(kb, c) for c in constraints])
        if d.is_empty:
            return PairResult(Verdict.CONFLICT)
        if d.is_top:
            return PairResult(Verdict.UNKNOWN)
        return PairResult(Verdict.COMPATIBLE, min(d.concepts))

    grounded = []
    ungrounded = False
    for c in constraints:
        gs = None if c is TOP else grounded_indices(kb, c)
        if gs is None:
            ungrounded = True
        else:
            grounded.append((c.operator, gs))
    n = len(kb.concepts)
    if not ungrounded:
        for x in range(n):
            if all(_certain(kb, x, op, gs) for op, gs in grounded):
                return PairResult(Verdict.COMPATIBLE, kb.concepts[x])
    if grounded:
        for x in range(n):
            joint = dnf_and(*(membership_dnf(op, x, gs, True) for op, gs in grounded))
            if dnf_realisable(kb, joint):
                break
        else:
            return PairResult(Verdict.CONFLICT)
    return PairResult(Verdict.UNKNOWN)


def intersect_all(ds: Sequence[Denotation]) -> Denotation:
    """Conservative intersection of any number of denotations.

    Empty as soon as the concrete members already have an empty intersection,
    indeterminate if any member is, the plain intersection otherwise. For two
    arguments this is :func:`intersect`; unlike a left fold of it, the result
    does not depend on argument order.
    """
    concrete = [d.concepts for d in ds if not d.is_top]
    if concrete and not frozenset.intersection(*concrete):
        return Denotation(frozenset())
    if len(concrete) < len(ds):
        return TOP
    return Denotation(frozenset.intersection(*concrete))


def _denote_or_top(kb, c):
    return TOP if c is TOP else denote(kb, c)


def _certain(kb, x, op, gs):
    return not dnf_realisable(kb, membership_dnf(op, x, gs, False))


def _same_operand(c1: Constraint, c2: Constraint):
    if c1.left_operand != c2.left_operand:
        raise OperandMismatch(f"{c1.left_operand!r} vs {c2.left_operand!r}")


def check_pair(kb: KnowledgeBase, c1: Constraint, c2: Constraint, mode: Mode | str = Mode.OPEN) -> PairResult:
    _same_operand(c1, c2)
    return check_group(kb, [c1], [c2], mode)


def subsumes(kb: KnowledgeBase, c1: Constraint, c2: Constraint, mode: Mode | str = Mode.OPEN) -> SubsumptionResult:
    """Whether every value satisfying ``c1`` also satisfies ``c2``."""
    _same_operand(c1, c2)
    g1, g2 = grounded_indices(kb, c1), grounded_indices(kb, c2)
    if g1 is None or g2 is None:
        return SubsumptionResult.UNKNOWN
    if Mode(mode) is Mode.CLOSED:
        d1, d2 = denote(kb, c1), denote(kb, c2)
        return SubsumptionResult.CONFIRMED if d1.concepts <= d2.concepts else SubsumptionResult.REFUTED
    n = len(kb.concepts)
    escapes = False
    for x in range(n):
        joint = dnf_and(membership_dnf(c1.operator, x, g1, True), membership_dnf(c2.operator, x, g2, False))
        if dnf_realisable(kb, joint):
            escapes = True
            break
    if not escapes:
        return SubsumptionResult.CONFIRMED
    for x in range(n):
        if (_certain(kb, x, c1.operator, g1)
                and not dnf_realisable(kb, membership_dnf(c2.operator, x, g2, True))):
            return SubsumptionResult.REFUTED
    return SubsumptionResult.UNKNOWN


# --- composition ----------------------------------------------------------

def compose(mode: str, verdicts: Sequence[Verdict]) -> Verdict:
    verdicts = [Verdict(v) for v in verdicts]
    if not verdicts:
        raise ValueError("compose needs at least one verdict")
    n_compat = verdicts.count(Verdict.COMPATIBLE)
    n_conflict = verdicts.count(Verdict.CONFLICT)
    if mode == "and":
        if n_conflict:
            return Verdict.CONFLICT
        return Verdict.COMPATIBLE if n_compat == len(verdicts) else Verdict.UNKNOWN
    if mode == "or":
        if n_compat:
            return Verdict.COMPATIBLE
        return Verdict.CONFLICT if n_conflict == len(verdicts) else Verdict.UNKNOWN
    if mode == "xone":
        if n_conflict == len(verdicts):
            return Verdict.CONFLICT
        if n_compat == 1 and n_conflict == len(verdicts) - 1:
            return Verdict.COMPATIBLE
        return Verdict.UNKNOWN
    raise ValueError(f"unknown composition mode {mode!r}")


def _deciding(mode: str, verdicts: Sequence[Verdict], result: Verdict) -> list[int]:
    """Indices of the child verdicts that determined ``result``."""
    idx = range(len(verdicts))
    if mode == "and":
        if result is Verdict.COMPATIBLE:
            return list(idx)
        return [i for i in idx if verdicts[i] is result]
    if mode == "or":
        if result is Verdict.CONFLICT:
            return list(idx)
        return [i for i in idx if verdicts[i] is result]
    if result is not Verdict.UNKNOWN:
        return list(idx)
    unknown = [i for i in idx if verdicts[i] is Verdict.UNKNOWN]
    return unknown or [i for i in idx if verdicts[i] is Verdict.COMPATIBLE]


@dataclass(frozen=True)
class OperandVerdict:
    operand: str
    verdict: Verdict
    witness: str | None
    left: tuple[Constraint, ...]
    right: tuple[Constraint, ...]


@dataclass(frozen=True)
class CompositeResult:
    verdict: Verdict
    per_operand: tuple[OperandVerdict, ...] = ()
    blocking: tuple[str, ...] = field(default=())


@dataclass
class _Folded:
    verdict: Verdict
    deciding: set[str]


class _Folder:
    def __init__(self, kbs, mode, judge=None):
        self.kbs = kbs
        self.mode = Mode(mode)
        self.judge = judge or check_group
        self.records: list[OperandVerdict] = []

    def pair(self, operand, left, right, swapped):
        res = self.judge(self.kbs[operand], left, right, self.mode)
        if swapped:
            left, right = right, left
        self.records.append(OperandVerdict(operand, res.verdict, res.witness, tuple(left), tuple(right)))
        return _Folded(res.verdict, {operand})

    def fold(self, tree, groups, swapped=False):
        """Fold ``tree`` against per-operand constraint groups of the other side."""
        if isinstance(tree, Constraint):
            op = tree.left_operand
            return self.pair(op, (tree,), groups[op], swapped) if op in groups else None
        if tree.mode != "and":
            return self._combine(tree.mode, [self.fold(c, groups, swapped) for c in tree.children])
        by_op: dict[str, tuple] = {}
        subtrees = []
        for child in tree.children:
            if isinstance(child, Constraint):
                by_op[child.left_operand] = by_op.get(child.left_operand, ()) + (child,)
            else:
                subtrees.append(child)
        parts = [self.pair(op, unit, groups[op], swapped) for op, unit in by_op.items() if op in groups]
        parts += [self.fold(s, groups, swapped) for s in subtrees]
        return self._combine("and", parts)

    def _combine(self, mode, parts):
        parts = [p for p in parts if p is not None]
        if not parts:
            return None
        verdicts = [p.verdict for p in parts]
        result = compose(mode, verdicts)
        deciding = set()
        for i in _deciding(mode, verdicts, result):
            deciding |= parts[i].deciding
        return _Folded(result, deciding)

    def fold_nested(self, left, right):
        """Both sides structured: each left unit is folded against the whole right tree."""
        if isinstance(left, Constraint):
            return self.fold(right, {left.left_operand: (left,)}, swapped=True)
        if left.mode == "and":
            by_op: dict[str, tuple] = {}
            parts = []
            for child in left.children:
                if isinstance(child, Constraint):
                    by_op[child.left_operand] = by_op.get(child.left_operand, ()) + (child,)
                else:
                    parts.append(self.fold_nested(child, right))
            parts = [self.fold(right, {op: unit}, swapped=True) for op, unit in by_op.items()] + parts
            return self._combine("and", parts)
        return self._combine(left.mode, [self.fold_nested(child, right) for child in left.children])


def check_composite(
    kbs: Mapping[str, KnowledgeBase],
    left: CompositeConstraint,
    right: CompositeConstraint,
    mode: Mode | str = Mode.OPEN,
    judge: Callable[..., PairResult] | None = None,
) -> CompositeResult:
    """Verdict for two composite constraints, with a per-operand diagnostic.

    Leaves are paired by left operand; operands constrained on one side only
    take no part. Leaves sharing an operand under the same ``and`` are
    conjoined before pairing. When one side is a leaf or a flat ``and`` its
    groups are paired with the leaves of the other side's tree, which is then
    folded with :func:`compose`. When both sides are structured, every unit of
    the left tree is folded against the whole right tree.

    ``blocking`` names the operands whose verdicts decided the result.
    ``judge`` replaces :func:`check_group` for the per-operand verdicts, which
    lets reference oracles reuse the same pairing and folding.
    """
    shared = operands(left) & operands(right)
    if not shared:
        return CompositeResult(Verdict.UNKNOWN)
    missing = sorted(op for op in shared if op not in kbs)
    if missing:
        raise ConfigError(f"no knowledge base configured for operand(s) {missing}")
    folder = _Folder(kbs, mode, judge)
    rgroups, lgroups = flatten(right), flatten(left)
    if rgroups is not None:
        out = folder.fold(left, rgroups)
    elif lgroups is not None:
        out = folder.fold(right, lgroups, swapped=True)
    else:
        out = folder.fold_nested(left, right)
    return CompositeResult(out.verdict, tuple(folder.records), tuple(sorted(out.deciding)))


def branch_exclusivity(
    kbs: Mapping[str, KnowledgeBase],
    branch_j: CompositeConstraint,
    branch_k: CompositeConstraint,
    mode: Mode | str = Mode.OPEN,
) -> Verdict:
    """Conjunction of per-operand verdicts over the operands both branches constrain.

    CONFLICT means the branches are provably mutually exclusive. Branches with
    no shared operand give COMPATIBLE: exclusivity cannot be shown.
    """
    gj, gk = flatten(branch_j), flatten(branch_k)
    if gj is None or gk is None:
        raise ValueError("branch exclusivity needs leaf or and-composed branches")
    shared = sorted(set(gj) & set(gk))
    if not shared:
        return Verdict.COMPATIBLE
    missing = [op for op in shared if op not in kbs]
    if missing:
        raise ConfigError(f"no knowledge base configured for operand(s) {missing}")
    return compose("and", [check_group(kbs[op], gj[op], gk[op], mode).verdict for op in shared])
