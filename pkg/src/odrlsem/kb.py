"""Finite knowledge bases: a concept set with a preorder, a disjointness
relation, optional negative-order facts and a grounding map from right-operand
values to concepts.

Relations are closed eagerly by :func:`build_kb`; the resulting
:class:`KnowledgeBase` is immutable and every query reads precomputed data.
Internally each relation is also kept as a list of integer bitmasks indexed by
concept position, which keeps closure and consistency checks cheap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple

from .errors import ClosureContradiction, DomainViolation, UnknownConcept

__all__ = [
    "BOTTOM",
    "Domain",
    "KnowledgeBase",
    "Violation",
    "build_kb",
    "closure_masks",
    "ground",
    "kb_disjoint",
    "kb_leq",
    "validate_kb",
]


class Domain(str, Enum):
    TAXONOMIC = "taxonomic"
    MEREOLOGICAL = "mereological"
    NOMINAL = "nominal"


class _Bottom:
    """Result of grounding an unmapped value."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "BOTTOM"

    def __bool__(self):
        return False

    def __reduce__(self):
        return (_Bottom, ())


BOTTOM = _Bottom()


class Violation(NamedTuple):
    """One failed axiom together with the concepts that witness it."""

    axiom: str
    witness: tuple

    def __str__(self):
        return f"{self.axiom}({', '.join(map(str, self.witness))})"


Pair = tuple[str, str]


def closure_masks(n: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    """Reflexive-transitive closure as ``up[i]`` bitmasks (bit j set iff i <= j)."""
    up = [1 << i for i in range(n)]
    for i, j in edges:
        up[i] |= 1 << j
    for k in range(n):
        bit = 1 << k
        row = up[k]
        for i in range(n):
            if up[i] & bit:
                up[i] |= row
    return up


def transpose_masks(n: int, rows: list[int]) -> list[int]:
    cols = [0] * n
    for i, row in enumerate(rows):
        bit = 1 << i
        j = 0
        while row:
            if row & 1:
                cols[j] |= bit
            row >>= 1
            j += 1
    return cols


def _bits(mask: int):
    j = 0
    while mask:
        if mask & 1:
            yield j
        mask >>= 1
        j += 1


@dataclass(frozen=True)
class KnowledgeBase:
    """A finite knowledge base for one left operand.

    ``leq`` and ``disjoint`` hold the closed relations as sets of concept
    pairs. Instances built by :func:`build_kb` satisfy every structural axiom;
    instances assembled by hand may not, and :func:`validate_kb` reports what
    is wrong with them.
    """

    kb_id: str
    domain: Domain
    concepts: tuple[str, ...]
    leq: frozenset[Pair]
    disjoint: frozenset[Pair]
    not_leq: frozenset[Pair] = frozenset()
    gamma: Mapping[str, str] = field(default_factory=dict)
    una: bool = True

    _index: Mapping[str, int] = field(init=False, repr=False, compare=False)
    _up: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _down: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _disj: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _disj_idx: tuple[tuple[int, int], ...] = field(init=False, repr=False, compare=False)
    _nleq_idx: tuple[tuple[int, int], ...] = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "domain", Domain(self.domain))
        object.__setattr__(self, "concepts", tuple(self.concepts))
        object.__setattr__(self, "leq", frozenset(self.leq))
        object.__setattr__(self, "disjoint", frozenset(self.disjoint))
        object.__setattr__(self, "not_leq", frozenset(self.not_leq))
        object.__setattr__(self, "gamma", MappingProxyType(dict(self.gamma)))
        index = {c: i for i, c in enumerate(self.concepts)}
        n = len(self.concepts)
        up = [0] * n
        for x, y in self.leq:
            if x in index and y in index:
                up[index[x]] |= 1 << index[y]
        disj = [0] * n
        for x, y in self.disjoint:
            if x in index and y in index:
                disj[index[x]] |= 1 << index[y]
        object.__setattr__(self, "_index", MappingProxyType(index))
        object.__setattr__(self, "_up", tuple(up))
        object.__setattr__(self, "_down", tuple(transpose_masks(n, up)))
        object.__setattr__(self, "_disj", tuple(disj))
        object.__setattr__(self, "_disj_idx", tuple(
            (index[x], index[y]) for x, y in sorted(self.disjoint)
            if x in index and y in index and index[x] <= index[y]))
        object.__setattr__(self, "_nleq_idx", tuple(
            (index[x], index[y]) for x, y in sorted(self.not_leq) if x in index and y in index))
        object.__setattr__(self, "_hash", hash((
            self.kb_id, self.domain, self.concepts, self.leq, self.disjoint, self.not_leq,
            tuple(sorted(self.gamma.items())), self.una)))

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.concepts)

    def __contains__(self, concept):
        return concept in self._index

    def index(self, concept: str) -> int:
        try:
            return self._index[concept]
        except KeyError:
            raise UnknownConcept(concept, self.kb_id) from None

    def mask(self, concepts: Iterable[str]) -> int:
        m = 0
        for c in concepts:
            m |= 1 << self.index(c)
        return m

    def unmask(self, mask: int) -> frozenset[str]:
        return frozenset(self.concepts[j] for j in _bits(mask))

    @property
    def full_mask(self) -> int:
        return (1 << len(self.concepts)) - 1

    def downset(self, concept: str) -> frozenset[str]:
        """All ``x`` with ``x <= concept``."""
        return self.unmask(self._down[self.index(concept)])

    def upset(self, concept: str) -> frozenset[str]:
        """All ``x`` with ``concept <= x``."""
        return self.unmask(self._up[self.index(concept)])


def _check_pairs(pairs, known, what) -> set[Pair]:
    out = set()
    for pair in pairs:
        x, y = tuple(pair)
        for c in (x, y):
            if c not in known:
                raise UnknownConcept(c, what)
        out.add((x, y))
    return out


def build_kb(
    concepts: Iterable[str],
    leq: Iterable[Pair] = (),
    disjoint: Iterable[Pair] = (),
    not_leq: Iterable[Pair] = (),
    gamma: Mapping[str, str] | None = None,
    *,
    kb_id: str = "kb",
    domain: Domain | str = Domain.TAXONOMIC,
    una: bool = True,
    check: bool = True,
) -> KnowledgeBase:
    """Close the supplied relations and return a validated :class:`KnowledgeBase`.

    ``leq`` holds direct edges ``(x, y)`` meaning ``x <= y``. Disjointness is
    made symmetric and downward closed. For the nominal domain no edges are
    accepted and every pair of distinct concepts becomes disjoint.

    ``check=False`` skips the contradiction checks on the closed relations so
    that :func:`validate_kb` can report everything wrong with a bad input.
    Such a KB must not be handed to the reasoning functions.
    """
    domain = Domain(domain)
    names = []
    seen = set()
    for c in concepts:
        if not isinstance(c, str) or not c:
            raise ValueError(f"concept identifiers must be non-empty strings, got {c!r}")
        if c not in seen:
            seen.add(c)
            names.append(c)
    names.sort()
    edges = _check_pairs(leq, seen, "leq edge")
    disj_pairs = _check_pairs(disjoint, seen, "disjoint pair")
    nleq_pairs = _check_pairs(not_leq, seen, "not_leq pair")
    gamma = dict(gamma or {})
    for v, c in gamma.items():
        if c not in seen:
            raise UnknownConcept(c, f"gamma value {v!r}")

    if domain is Domain.NOMINAL:
        if edges:
            raise DomainViolation(f"nominal KB {kb_id!r} must not declare leq edges")
        disj_pairs |= {(x, y) for x in names for y in names if x != y}

    index = {c: i for i, c in enumerate(names)}
    n = len(names)
    up = closure_masks(n, [(index[x], index[y]) for x, y in edges])
    down = transpose_masks(n, up)

    disj = [0] * n
    for x, y in disj_pairs:
        i, j = index[x], index[y]
        # every x' <= x is disjoint from every y' <= y, and symmetrically
        for a in _bits(down[i]):
            disj[a] |= down[j]
        for a in _bits(down[j]):
            disj[a] |= down[i]

    leq_set = frozenset((names[i], names[j]) for i in range(n) for j in _bits(up[i]))
    disj_set = frozenset((names[i], names[j]) for i in range(n) for j in _bits(disj[i]))

    if check:
        for x, y in sorted(disj_set, key=lambda p: (p[0] == p[1], p)):
            if (x, y) in leq_set:
                raise ClosureContradiction("LemmaViolation" if x != y else "Irreflexivity", (x, y))
        for x, y in sorted(nleq_pairs):
            if (x, y) in leq_set:
                raise ClosureContradiction("NotLeqViolation", (x, y))

    return KnowledgeBase(
        kb_id=kb_id,
        domain=domain,
        concepts=tuple(names),
        leq=leq_set,
        disjoint=disj_set,
        not_leq=frozenset(nleq_pairs),
        gamma=gamma,
        una=una,
    )


def kb_leq(kb: KnowledgeBase, x: str, y: str) -> bool:
    i, j = kb.index(x), kb.index(y)
    return bool(kb._up[i] >> j & 1)


def kb_disjoint(kb: KnowledgeBase, x: str, y: str) -> bool:
    i, j = kb.index(x), kb.index(y)
    return bool(kb._disj[i] >> j & 1)


def ground(kb: KnowledgeBase, value: str):
    """Concept the value is mapped to, or ``BOTTOM``. Never raises."""
    return kb.gamma.get(value, BOTTOM)


def validate_kb(kb: KnowledgeBase) -> list[Violation]:
    """Report every structural axiom the knowledge base violates."""
    out: list[Violation] = []
    known = set(kb.concepts)
    for rel_name, rel in (("leq", kb.leq), ("disjoint", kb.disjoint), ("not_leq", kb.not_leq)):
        for x, y in sorted(rel):
            for c in (x, y):
                if c not in known:
                    out.append(Violation("UnknownConcept", (c, rel_name)))
    for v, c in sorted(kb.gamma.items()):
        if c not in known:
            out.append(Violation("GammaRange", (v, c)))
    if out:
        return out

    leq, disj = kb.leq, kb.disjoint
    cs = kb.concepts
    for x in cs:
        if (x, x) not in leq:
            out.append(Violation("Reflexivity", (x,)))
    for x, y, z in itertools.product(cs, repeat=3):
        if (x, y) in leq and (y, z) in leq and (x, z) not in leq:
            out.append(Violation("Transitivity", (x, y, z)))
    for x, y in sorted(disj):
        if x == y:
            out.append(Violation("Irreflexivity", (x,)))
        elif (y, x) not in disj:
            out.append(Violation("Symmetry", (x, y)))
    missing = set()
    for x, y in disj:
        for a in cs:
            if (a, x) not in leq:
                continue
            for b in cs:
                # a reflexive gap is reported as a lemma violation instead
                if a != b and (b, y) in leq and (a, b) not in disj:
                    missing.add((a, b))
    out.extend(Violation("DownwardClosure", p) for p in sorted(missing))
    for x, y in sorted(disj):
        if x != y and (x, y) in leq:
            out.append(Violation("LemmaViolation", (x, y)))
    for x, y in sorted(kb.not_leq):
        if (x, y) in leq:
            out.append(Violation("NotLeqViolation", (x, y)))
    if kb.domain is Domain.NOMINAL:
        for x, y in sorted(leq):
            if x != y:
                out.append(Violation("NominalOrder", (x, y)))
        for x, y in itertools.permutations(cs, 2):
            if (x, y) not in disj:
                out.append(Violation("NominalDisjointness", (x, y)))
    return out
