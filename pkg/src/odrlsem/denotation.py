"""Constraint denotations.

Closed world: :func:`denote` returns the exact concept set a grounded
constraint picks out of a knowledge base, or :data:`TOP` when a value does not
ground. Open world: :func:`member3` answers whether a concept belongs to that
set in *every* admissible completion of the KB (``TRUE``), in *none*
(``FALSE``), or depends on facts the KB does not record (``UNKNOWN``).

A completion keeps the concept set fixed and may add order facts (and, without
the unique-name assumption, identifications between concepts) as long as the
result is still a preorder, respects the recorded negative-order facts and
admits a downward-closed irreflexive disjointness relation containing the
recorded one. Membership of ``x`` is expressed as a small DNF over order and
identity literals; a disjunct is realisable iff adding its positive literals
to the KB yields a consistent closure that does not entail any of its negative
literals (the minimal completion containing the positives is the best case for
the negatives).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .errors import UngroundedConstraint, UnknownOperator
from .kb import BOTTOM, KnowledgeBase, transpose_masks

__all__ = [
    "Constraint",
    "Denotation",
    "Membership3",
    "Mode",
    "Operator",
    "TOP",
    "denote",
    "grounded_indices",
    "intersect",
    "member3",
]


class Operator(str, Enum):
    EQ = "eq"
    NEQ = "neq"
    IS_A = "isA"
    IS_PART_OF = "isPartOf"
    HAS_PART = "hasPart"
    IS_ANY_OF = "isAnyOf"
    IS_ALL_OF = "isAllOf"
    IS_NONE_OF = "isNoneOf"

    @property
    def set_valued(self) -> bool:
        return self in _SET_OPS

    @classmethod
    def parse(cls, name: str) -> "Operator":
        try:
            return cls(name)
        except ValueError:
            raise UnknownOperator(f"unknown operator {name!r}") from None


_SET_OPS = frozenset({Operator.IS_ANY_OF, Operator.IS_ALL_OF, Operator.IS_NONE_OF})


class Mode(str, Enum):
    OPEN = "open"
    CLOSED = "closed"


@dataclass(frozen=True)
class Constraint:
    """A leaf constraint ``(left_operand, operator, value)``.

    ``value`` is a string for the single-valued operators and a non-empty
    tuple of strings for ``isAnyOf``/``isAllOf``/``isNoneOf``.
    """

    left_operand: str
    operator: Operator
    value: Union[str, tuple[str, ...]]

    def __post_init__(self):
        op = Operator.parse(self.operator) if not isinstance(self.operator, Operator) else self.operator
        object.__setattr__(self, "operator", op)
        if op.set_valued:
            if isinstance(self.value, str) or not isinstance(self.value, Iterable):
                raise ValueError(f"{op.value} takes a non-empty list of values")
            vals = tuple(self.value)
            if not vals or not all(isinstance(v, str) for v in vals):
                raise ValueError(f"{op.value} takes a non-empty list of value strings")
            object.__setattr__(self, "value", vals)
        elif not isinstance(self.value, str):
            raise ValueError(f"{op.value} takes exactly one value string")

    @property
    def values(self) -> tuple[str, ...]:
        return self.value if isinstance(self.value, tuple) else (self.value,)

    def __str__(self):
        v = "{" + ", ".join(self.value) + "}" if isinstance(self.value, tuple) else self.value
        return f"({self.left_operand} {self.operator.value} {v})"


class Membership3(Enum):
    TRUE = "TRUE"
    FALSE = "FALSE"
    UNKNOWN = "UNKNOWN"

    def __invert__(self):
        if self is Membership3.TRUE:
            return Membership3.FALSE
        if self is Membership3.FALSE:
            return Membership3.TRUE
        return self

    @staticmethod
    def all(items: Iterable["Membership3"]) -> "Membership3":
        items = list(items)
        if Membership3.FALSE in items:
            return Membership3.FALSE
        if Membership3.UNKNOWN in items:
            return Membership3.UNKNOWN
        return Membership3.TRUE

    @staticmethod
    def any(items: Iterable["Membership3"]) -> "Membership3":
        items = list(items)
        if Membership3.TRUE in items:
            return Membership3.TRUE
        if Membership3.UNKNOWN in items:
            return Membership3.UNKNOWN
        return Membership3.FALSE


@dataclass(frozen=True)
class Denotation:
    """A concrete concept set, or the indeterminate marker when ``concepts`` is None."""

    concepts: frozenset[str] | None

    @property
    def is_top(self) -> bool:
        return self.concepts is None

    @property
    def is_empty(self) -> bool:
        return self.concepts is not None and not self.concepts

    @classmethod
    def of(cls, concepts: Iterable[str]) -> "Denotation":
        return cls(frozenset(concepts))

    def __repr__(self):
        if self.is_top:
            return "TOP"
        return "{" + ", ".join(sorted(self.concepts)) + "}"


TOP = Denotation(None)


def grounded_indices(kb: KnowledgeBase, c: Constraint) -> tuple[int, ...] | None:
    """Concept indices of the constraint's values, deduplicated; None if any value is unmapped."""
    out = []
    for v in c.values:
        g = kb.gamma.get(v, BOTTOM)
        if g is BOTTOM:
            return None
        i = kb.index(g)
        if i not in out:
            out.append(i)
    return tuple(out)


def denotation_mask(kb: KnowledgeBase, op: Operator, gs: Sequence[int]) -> int:
    down, up, full = kb._down, kb._up, kb.full_mask
    if op is Operator.EQ:
        return 1 << gs[0]
    if op is Operator.NEQ:
        return full & ~(1 << gs[0])
    if op in (Operator.IS_A, Operator.IS_PART_OF):
        return down[gs[0]]
    if op is Operator.HAS_PART:
        return up[gs[0]]
    union = 0
    for g in gs:
        union |= down[g]
    if op is Operator.IS_ANY_OF:
        return union
    if op is Operator.IS_NONE_OF:
        return full & ~union
    inter = full
    for g in gs:
        inter &= down[g]
    return inter


def denote(kb: KnowledgeBase, c: Constraint) -> Denotation:
    gs = grounded_indices(kb, c)
    if gs is None:
        return TOP
    return Denotation(kb.unmask(denotation_mask(kb, c.operator, gs)))


def intersect(d1: Denotation, d2: Denotation) -> Denotation:
    """Conservative intersection: a provably empty side wins over an indeterminate one."""
    if d1.is_empty or d2.is_empty:
        return Denotation(frozenset())
    if d1.is_top or d2.is_top:
        return TOP
    return Denotation(d1.concepts & d2.concepts)


# --- open-world machinery -------------------------------------------------
#
# Literals: ("leq", i, j) for i <= j and ("same", i, j) with i <= j for an
# identification. A DNF is a tuple of (positive, negative) frozenset pairs;
# the empty tuple is false, ((∅, ∅),) is true.

_TRUE_DNF = ((frozenset(), frozenset()),)
_FALSE_DNF = ()


def _same(i, j):
    return ("same", i, j) if i <= j else ("same", j, i)


def _atom(lit, positive):
    return ((frozenset([lit]), frozenset()),) if positive else ((frozenset(), frozenset([lit])),)


def membership_dnf(op: Operator, x: int, gs: Sequence[int], positive: bool = True):
    """DNF over literals for ``x in [[c]]`` (or ``x not in [[c]]`` when ``positive`` is False)."""
    if op in (Operator.EQ, Operator.NEQ):
        g = gs[0]
        want = positive if op is Operator.EQ else not positive
        if x == g:
            return _TRUE_DNF if want else _FALSE_DNF
        return _atom(_same(x, g), want)
    if op in (Operator.IS_A, Operator.IS_PART_OF):
        return _atom(("leq", x, gs[0]), positive)
    if op is Operator.HAS_PART:
        return _atom(("leq", gs[0], x), positive)
    lits = [("leq", x, g) for g in gs]
    if op is Operator.IS_NONE_OF:
        positive = not positive
        op = Operator.IS_ANY_OF
    if op is Operator.IS_ANY_OF:
        if positive:
            return tuple((frozenset([l]), frozenset()) for l in lits)
        return ((frozenset(), frozenset(lits)),)
    # isAllOf
    if positive:
        return ((frozenset(lits), frozenset()),)
    return tuple((frozenset(), frozenset([l])) for l in lits)


def dnf_and(*dnfs):
    out = [(frozenset(), frozenset())]
    for dnf in dnfs:
        nxt = []
        for p1, n1 in out:
            for p2, n2 in dnf:
                p, n = p1 | p2, n1 | n2
                if not (p & n):
                    nxt.append((p, n))
        out = nxt
        if not out:
            break
    return tuple(out)


def _root(parent, i):
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


@lru_cache(maxsize=200_000)
def realisable(kb: KnowledgeBase, pos: frozenset, neg: frozenset) -> bool:
    """Whether some completion of ``kb`` makes every literal in ``pos`` true and every one in ``neg`` false."""
    n = len(kb.concepts)
    up = list(kb._up)
    parent = list(range(n))
    changed = False
    for kind, i, j in pos:
        if kind == "same":
            if i == j:
                continue
            if kb.una:
                return False
            up[i] |= 1 << j
            up[j] |= 1 << i
            parent[_root(parent, i)] = _root(parent, j)
            changed = True
        elif not up[i] >> j & 1:
            up[i] |= 1 << j
            changed = True
    if changed:
        for k in range(n):
            bit, row = 1 << k, up[k]
            for i in range(n):
                if up[i] & bit:
                    up[i] |= row
        for a, b in kb._nleq_idx:
            if up[a] >> b & 1:
                return False
        down = transpose_masks(n, up)
        for a, b in kb._disj_idx:
            if down[a] & down[b]:
                return False
    for kind, i, j in neg:
        if kind == "same":
            if i == j or _root(parent, i) == _root(parent, j):
                return False
        elif up[i] >> j & 1:
            return False
    return True


def dnf_realisable(kb: KnowledgeBase, dnf) -> bool:
    return any(realisable(kb, p, n) for p, n in dnf)


def _open_member(kb: KnowledgeBase, x: int, op: Operator, gs) -> Membership3:
    can_in = dnf_realisable(kb, membership_dnf(op, x, gs, True))
    if not can_in:
        return Membership3.FALSE
    can_out = dnf_realisable(kb, membership_dnf(op, x, gs, False))
    return Membership3.UNKNOWN if can_out else Membership3.TRUE


def member3(kb: KnowledgeBase, x: str, c: Constraint, mode: Mode | str = Mode.OPEN) -> Membership3:
    """Three-valued membership of concept ``x`` in the denotation of ``c``.

    Closed mode is crisp membership in :func:`denote`. Open mode is ``TRUE``
    (resp. ``FALSE``) only when ``x`` is (resp. is not) a member under every
    completion of the KB's relations, ``UNKNOWN`` otherwise.
    """
    gs = grounded_indices(kb, c)
    if gs is None:
        raise UngroundedConstraint(f"{c} does not ground in {kb.kb_id!r}")
    i = kb.index(x)
    if Mode(mode) is Mode.CLOSED:
        inside = denotation_mask(kb, c.operator, gs) >> i & 1
        return Membership3.TRUE if inside else Membership3.FALSE
    return _open_member(kb, i, c.operator, gs)
