"""Cross-KB alignments: validation, constraint translation and restricted target KBs."""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, NamedTuple

from .denotation import TOP, Constraint, Membership3, Mode, denote, member3
from .errors import AlignmentInvalid
from .kb import BOTTOM, KnowledgeBase, Violation, kb_disjoint, kb_leq
from .verdict import Verdict, check_group, check_pair

__all__ = [
    "AlignedVerdict",
    "Alignment",
    "align_constraint",
    "align_pair",
    "aligned_verdict",
    "covered",
    "restrict_kb",
    "validate_alignment",
]


@dataclass(frozen=True)
class Alignment:
    """Partial concept mapping from the ``source`` KB into the ``target`` KB.

    ``pairs`` keeps the mapping as authored so that a non-injective file can
    still be represented and reported by :func:`validate_alignment`.
    """

    source: str
    target: str
    pairs: tuple[tuple[str, str], ...] = ()
    mapping: Mapping[str, str] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pairs = tuple(sorted({(str(s), str(t)) for s, t in self.pairs}))
        srcs = [s for s, _ in pairs]
        dup = {s for s in srcs if srcs.count(s) > 1}
        if dup:
            raise ValueError(f"alignment maps {sorted(dup)} to more than one target")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "mapping", MappingProxyType(dict(pairs)))

    @classmethod
    def from_mapping(cls, source: str, target: str, mapping: Mapping[str, str]) -> "Alignment":
        return cls(source, target, tuple(mapping.items()))

    @property
    def domain(self) -> frozenset[str]:
        return frozenset(self.mapping)

    def __call__(self, concept: str):
        return self.mapping.get(concept, BOTTOM)


def validate_alignment(a: Alignment, kb_a: KnowledgeBase, kb_b: KnowledgeBase) -> list[Violation]:
    """Every reason ``a`` is not an order embedding with witness completeness; empty if valid."""
    out: list[Violation] = []
    if a.source != kb_a.kb_id:
        out.append(Violation("SourceMismatch", (a.source, kb_a.kb_id)))
    if a.target != kb_b.kb_id:
        out.append(Violation("TargetMismatch", (a.target, kb_b.kb_id)))
    for s, t in a.pairs:
        if s not in kb_a:
            out.append(Violation("UnknownSourceConcept", (s,)))
        if t not in kb_b:
            out.append(Violation("UnknownTargetConcept", (t,)))
    if out:
        return out

    by_target: dict[str, list[str]] = {}
    for s, t in a.pairs:
        by_target.setdefault(t, []).append(s)
    for t, srcs in sorted(by_target.items()):
        if len(srcs) > 1:
            out.append(Violation("InjectivityViolation", (*sorted(srcs), t)))

    dom = sorted(a.mapping)
    m = a.mapping
    for x in dom:
        for y in dom:
            if kb_leq(kb_a, x, y) != kb_leq(kb_b, m[x], m[y]):
                out.append(Violation("OrderViolation", (x, y)))
            if kb_disjoint(kb_a, x, y) and not kb_disjoint(kb_b, m[x], m[y]):
                out.append(Violation("DisjointnessViolation", (x, y)))
    for g in sorted(set(kb_a.gamma.values())):
        if g in m:
            for missing in sorted(kb_a.downset(g) - a.domain):
                out.append(Violation("WitnessIncomplete", (g, missing)))
    return out


def align_constraint(a: Alignment, kb_a: KnowledgeBase, c: Constraint):
    """Re-ground ``c`` at the aligned target concepts, or return :data:`TOP`.

    Every value must ground in ``kb_a`` and its concept must be mapped;
    otherwise the aligned denotation is indeterminate.
    """
    targets = []
    for v in c.values:
        g = kb_a.gamma.get(v, BOTTOM)
        if g is BOTTOM or g not in a.mapping:
            return TOP
        t = a.mapping[g]
        if t not in targets:
            targets.append(t)
    value = tuple(targets) if c.operator.set_valued else targets[0]
    return Constraint(c.left_operand, c.operator, value)


def _possible_members(kb_a: KnowledgeBase, c: Constraint, mode: Mode) -> frozenset[str] | None:
    if mode is Mode.CLOSED:
        return denote(kb_a, c).concepts
    return frozenset(x for x in kb_a.concepts if member3(kb_a, x, c, mode) is not Membership3.FALSE)


def covered(a: Alignment, kb_a: KnowledgeBase, c: Constraint, mode: Mode | str = Mode.OPEN) -> bool:
    """Whether ``c``'s values and every concept that may satisfy it in the source lie in ``dom(a)``."""
    if any(kb_a.gamma.get(v) not in a.mapping for v in c.values):
        return False
    return _possible_members(kb_a, c, Mode(mode)) <= a.domain


def align_pair(a: Alignment, kb_a: KnowledgeBase, restricted: KnowledgeBase, c1: Constraint, c2: Constraint,
               mode: Mode | str = Mode.OPEN) -> tuple:
    """Both constraints aligned for evaluation in ``restricted``.

    Re-grounding is only faithful for a constraint whose source denotation
    lies inside ``dom(a)``. Witness completeness secures that for ``isA``-style
    operators in closed mode, but not for ``neq``, ``isNoneOf`` or ``hasPart``,
    nor in open mode where the source may leave membership of unmapped concepts
    open. The restricted KB then lacks candidate members and may report a
    conflict the source never had. So when the aligned pair conflicts, every
    side that is not covered is replaced by :data:`TOP`.
    """
    a1, a2 = align_constraint(a, kb_a, c1), align_constraint(a, kb_a, c2)
    if check_group(restricted, [a1], [a2], mode).verdict is not Verdict.CONFLICT:
        return a1, a2
    return tuple(x if covered(a, kb_a, c, mode) else TOP for x, c in ((a1, c1), (a2, c2)))


def restrict_kb(a: Alignment, kb_b: KnowledgeBase, source: KnowledgeBase | None = None,
                validate: bool = True) -> KnowledgeBase:
    """The target KB cut down to the image of the alignment.

    Target concept identifiers ground to themselves; when ``source`` is given,
    its grounding map is composed through the alignment as well and (unless
    ``validate`` is False) the alignment must pass :func:`validate_alignment`.
    """
    if source is not None and validate:
        problems = validate_alignment(a, source, kb_b)
        if problems:
            raise AlignmentInvalid(problems)
    image = sorted({t for t in a.mapping.values() if t in kb_b})
    keep = set(image)

    def cut(rel):
        return frozenset((x, y) for x, y in rel if x in keep and y in keep)

    gamma: dict[str, str] = {}
    if source is not None:
        for v, g in source.gamma.items():
            if g in a.mapping and a.mapping[g] in keep:
                gamma[v] = a.mapping[g]
    gamma.update({v: g for v, g in kb_b.gamma.items() if g in keep})
    gamma.update({t: t for t in image})
    return KnowledgeBase(
        kb_id=f"{kb_b.kb_id}|{a.source}",
        domain=kb_b.domain,
        concepts=tuple(image),
        leq=cut(kb_b.leq),
        disjoint=cut(kb_b.disjoint),
        not_leq=cut(kb_b.not_leq),
        gamma=gamma,
        una=kb_b.una,
    )


class AlignedVerdict(NamedTuple):
    source: Verdict
    aligned: Verdict


def aligned_verdict(a: Alignment, kb_a: KnowledgeBase, kb_b: KnowledgeBase,
                    c1: Constraint, c2: Constraint, mode: Mode | str = Mode.OPEN,
                    validate: bool = True) -> AlignedVerdict:
    """Verdict in the source KB next to the verdict of the aligned pair in the restricted target.

    The pair is aligned with :func:`align_pair`. ``validate=False`` skips the
    alignment checks and the coverage guard, evaluating the bare re-grounded
    pair; it exists to demonstrate what an invalid alignment would do and
    should not be used otherwise.
    """
    src = check_pair(kb_a, c1, c2, mode).verdict
    restricted = restrict_kb(a, kb_b, kb_a, validate=validate)
    if validate:
        a1, a2 = align_pair(a, kb_a, restricted, c1, c2, mode)
    else:
        a1, a2 = align_constraint(a, kb_a, c1), align_constraint(a, kb_a, c2)
    tgt = check_group(restricted, [a1], [a2], mode).verdict
    return AlignedVerdict(src, tgt)
