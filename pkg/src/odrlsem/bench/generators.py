"""Seeded random knowledge bases, constraints, extensions and alignments for property checks."""

from __future__ import annotations

import random
from itertools import permutations

from ..alignment import Alignment, validate_alignment
from ..denotation import Constraint, Operator
from ..errors import ClosureContradiction
from ..kb import KnowledgeBase, build_kb

__all__ = ["random_alignment", "random_constraint", "random_extension", "random_kb", "UNMAPPED"]

UNMAPPED = "urn:unmapped"


def _sample(rng: random.Random, pool, at_most: int):
    return rng.sample(pool, rng.randint(0, min(at_most, len(pool))))


def random_kb(rng: random.Random, max_concepts: int = 6, *, min_concepts: int = 1, prefix: str = "k",
              una: bool | None = None, not_leq: bool = True, kb_id: str = "R") -> KnowledgeBase:
    """A consistent random KB; some concepts may lack a gamma preimage and one alias may exist."""
    while True:
        n = rng.randint(min_concepts, max_concepts)
        cs = [f"{prefix}{i}" for i in range(n)]
        pairs = list(permutations(cs, 2))
        gamma = {c: c for c in cs if rng.random() < 0.85}
        if gamma and rng.random() < 0.3:
            gamma[f"{prefix}-alias"] = rng.choice(cs)
        try:
            return build_kb(
                cs, _sample(rng, pairs, n), _sample(rng, pairs, 2), _sample(rng, pairs, 2) if not_leq else (),
                gamma, kb_id=kb_id, una=rng.random() < 0.6 if una is None else una,
            )
        except ClosureContradiction:
            continue


def random_constraint(rng: random.Random, kb: KnowledgeBase, operand: str = "l",
                      operators=tuple(Operator), ungrounded: float = 0.1) -> Constraint:
    values = list(kb.concepts)
    if rng.random() < ungrounded:
        values.append(UNMAPPED)
    op = Operator.parse(rng.choice(list(operators)))
    if op.set_valued:
        return Constraint(operand, op, tuple(rng.sample(values, rng.randint(1, min(3, len(values))))))
    return Constraint(operand, op, rng.choice(values))


def random_extension(rng: random.Random, kb: KnowledgeBase) -> KnowledgeBase:
    """Same concepts and order, strictly more gamma entries or disjointness when possible."""
    cs = list(kb.concepts)
    for _ in range(50):
        gamma = dict(kb.gamma)
        for c in cs:
            if c not in gamma and rng.random() < 0.5:
                gamma[c] = c
        if rng.random() < 0.3:
            gamma[f"ext-{rng.randrange(1000)}"] = rng.choice(cs)
        extra = [(x, y) for x, y in permutations(cs, 2) if (x, y) not in kb.disjoint]
        disjoint = set(kb.disjoint) | set(_sample(rng, extra, 2))
        try:
            return build_kb(cs, kb.leq, disjoint, kb.not_leq, gamma, kb_id=kb.kb_id, domain=kb.domain, una=kb.una)
        except ClosureContradiction:
            continue
    return kb


def random_alignment(rng: random.Random, kb_a: KnowledgeBase, *, extra_target: int = 2,
                     extra_disjoint: bool = True) -> tuple[KnowledgeBase, Alignment]:
    """A target KB and a valid alignment from ``kb_a`` into it.

    The domain is the downward closure of a random concept sample, so witness
    completeness holds. The target copies the source order and disjointness on
    the image, and may add unrelated concepts below the image and further
    disjointness, which validity permits.
    """
    cs = list(kb_a.concepts)
    seeds = rng.sample(cs, rng.randint(0, len(cs)))
    dom = set()
    for s in seeds:
        dom |= kb_a.downset(s)
    mapping = {x: f"t_{x}" for x in sorted(dom)}
    while True:
        extras = [f"e{i}" for i in range(rng.randint(0, extra_target))]
        targets = [*mapping.values(), *extras]
        leq = [(mapping[x], mapping[y]) for x, y in kb_a.leq if x in dom and y in dom and x != y]
        # extras only ever sit below image concepts or each other, never above an image concept
        leq += [(e, rng.choice(targets)) for e in extras if rng.random() < 0.5 and len(targets) > 1]
        leq = [(x, y) for x, y in leq if x != y]
        disj = [(mapping[x], mapping[y]) for x, y in kb_a.disjoint if x in dom and y in dom]
        if extra_disjoint:
            disj += _sample(rng, list(permutations(targets, 2)), 1)
        not_leq = [(mapping[x], mapping[y]) for x, y in kb_a.not_leq if x in dom and y in dom]
        try:
            kb_b = build_kb(targets, leq, disj, not_leq, {t: t for t in targets}, kb_id="T", una=kb_a.una)
        except ClosureContradiction:
            continue
        a = Alignment.from_mapping(kb_a.kb_id, kb_b.kb_id, mapping)
        if not validate_alignment(a, kb_a, kb_b):
            return kb_b, a
