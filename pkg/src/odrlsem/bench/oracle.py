"""Brute-force reference verdicts.

These deliberately share no code with the engine's bitmask and DNF machinery:
the closed-world oracle evaluates the operator definitions directly over the
stored relations, the completion oracle enumerates every admissible extension
of a small KB, and the prover oracle decides the emitted problem text by
ground SAT.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Sequence

from ..denotation import TOP, Operator
from ..encoder import Polarity, ProverStatus, emit_problem
from ..groundsat import ground_status
from ..kb import KnowledgeBase
from ..verdict import Verdict

__all__ = [
    "closed_denotation",
    "closed_oracle",
    "completions",
    "enumeration_oracle",
    "prover_oracle",
    "prover_statuses",
]


def _ground(kb, c):
    if c is TOP:
        return None
    out = []
    for v in c.values:
        if v not in kb.gamma:
            return None
        out.append(kb.gamma[v])
    return out


def closed_denotation(kb: KnowledgeBase, c) -> frozenset | None:
    """Concept set of ``c`` read straight off the operator definitions; None when ungrounded."""
    gs = _ground(kb, c)
    if gs is None:
        return None
    leq, C = kb.leq, kb.concepts
    op, g = c.operator, gs[0]
    if op is Operator.EQ:
        return frozenset([g])
    if op is Operator.NEQ:
        return frozenset(x for x in C if x != g)
    if op in (Operator.IS_A, Operator.IS_PART_OF):
        return frozenset(x for x in C if (x, g) in leq)
    if op is Operator.HAS_PART:
        return frozenset(x for x in C if (g, x) in leq)
    if op is Operator.IS_ANY_OF:
        return frozenset(x for x in C if any((x, h) in leq for h in gs))
    if op is Operator.IS_ALL_OF:
        return frozenset(x for x in C if all((x, h) in leq for h in gs))
    return frozenset(x for x in C if not any((x, h) in leq for h in gs))


def closed_oracle(kb: KnowledgeBase, constraints: Sequence) -> Verdict:
    sets = [closed_denotation(kb, c) for c in constraints]
    known = [s for s in sets if s is not None]
    common = set(kb.concepts)
    for s in known:
        common &= s
    if known and not common:
        return Verdict.CONFLICT
    if len(known) < len(sets):
        return Verdict.UNKNOWN
    return Verdict.COMPATIBLE


# --- completions -----------------------------------------------------------

def _transitive(rel, C):
    return all((x, z) in rel for x, y in rel for y2, z in rel if y == y2)


def _partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


@lru_cache(maxsize=4096)
def completions(kb: KnowledgeBase) -> tuple:
    """Every admissible completion as ``(leq pairs, identification map)``.

    A completion is a preorder containing the KB's order, avoiding its
    negative facts, under which the KB's disjointness can still be made
    symmetric, irreflexive and downward closed. Without unique names, concepts
    that are mutually ordered may additionally be identified.
    """
    C = kb.concepts
    if len(C) > 4:
        raise ValueError("completion enumeration is limited to small KBs")
    base = frozenset(kb.leq)
    free = [(x, y) for x in C for y in C if x != y and (x, y) not in base]
    out = []
    for bits in itertools.product((False, True), repeat=len(free)):
        rel = set(base) | {p for p, b in zip(free, bits) if b}
        if not _transitive(rel, C):
            continue
        if any(p in rel for p in kb.not_leq):
            continue
        if any((z, x) in rel and (z, y) in rel for x, y in kb.disjoint for z in C):
            continue
        rel = frozenset(rel)
        if kb.una:
            out.append((rel, {x: x for x in C}))
            continue
        # classes of mutually ordered concepts; any refinement may be identified
        classes, seen = [], set()
        for x in C:
            if x in seen:
                continue
            cls = [y for y in C if (x, y) in rel and (y, x) in rel]
            seen.update(cls)
            classes.append(cls)
        for choice in itertools.product(*(list(_partitions(cls)) for cls in classes)):
            ident = {}
            for part in choice:
                for block in part:
                    for y in block:
                        ident[y] = block[0]
            out.append((rel, ident))
    return tuple(out)


def _member(comp, x, c, kb) -> bool:
    rel, ident = comp
    gs = [kb.gamma[v] for v in c.values]
    op, g = c.operator, gs[0]
    if op is Operator.EQ:
        return ident[x] == ident[g]
    if op is Operator.NEQ:
        return ident[x] != ident[g]
    if op in (Operator.IS_A, Operator.IS_PART_OF):
        return (x, g) in rel
    if op is Operator.HAS_PART:
        return (g, x) in rel
    hits = [(x, h) in rel for h in gs]
    if op is Operator.IS_ANY_OF:
        return any(hits)
    if op is Operator.IS_ALL_OF:
        return all(hits)
    return not any(hits)


def enumeration_oracle(kb: KnowledgeBase, constraints: Sequence) -> Verdict:
    """Open-world verdict by quantifying over all completions.

    CONFLICT: in every completion no concept satisfies all grounded
    constraints. COMPATIBLE: some concept satisfies all of them in every
    completion (and none is ungrounded). UNKNOWN otherwise.
    """
    comps = completions(kb)
    grounded = [c for c in constraints if _ground(kb, c) is not None]
    some_ungrounded = len(grounded) < len(constraints)
    if grounded and all(
        not any(all(_member(comp, x, c, kb) for c in grounded) for x in kb.concepts) for comp in comps
    ):
        return Verdict.CONFLICT
    if not some_ungrounded and any(
        all(_member(comp, x, c, kb) for comp in comps for c in grounded) for x in kb.concepts
    ):
        return Verdict.COMPATIBLE
    return Verdict.UNKNOWN


# --- prover semantics ------------------------------------------------------

def prover_statuses(kb: KnowledgeBase, left: Sequence, right: Sequence) -> dict[Polarity, ProverStatus]:
    """Ground-SAT status of the emitted problem under both query polarities."""
    return {
        pol: ground_status(emit_problem(kb, tuple(left), tuple(right), pol, "oracle",
                                        expected=ProverStatus.COUNTER_SAT, allow_ungrounded=True))
        for pol in Polarity
    }


def prover_oracle(kb: KnowledgeBase, left: Sequence, right: Sequence) -> Verdict:
    st = prover_statuses(kb, left, right)
    compat = st[Polarity.COMPAT] is ProverStatus.THEOREM
    conflict = st[Polarity.CONFLICT] is ProverStatus.THEOREM
    if compat and conflict:
        raise ValueError(f"inconsistent theory for {kb.kb_id!r}")
    if conflict:
        return Verdict.CONFLICT
    return Verdict.COMPATIBLE if compat else Verdict.UNKNOWN
