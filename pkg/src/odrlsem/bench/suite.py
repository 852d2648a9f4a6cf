"""Benchmark problems and their engine evaluation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Any, Callable, Mapping

from ..alignment import Alignment, align_pair, restrict_kb
from ..denotation import Constraint, Mode
from ..kb import KnowledgeBase
from ..runtime import ExecutionContext, satisfies
from ..verdict import (
    Composite, CompositeConstraint, PairResult, Verdict, check_composite, check_group, check_pair,
)
from . import fixtures

__all__ = [
    "CATEGORIES",
    "DEGRADATION_IDS",
    "BenchmarkProblem",
    "Outcome",
    "Unit",
    "build_builtin_suite",
    "evaluate",
    "load_goldens",
]

CATEGORIES = ("operator-coverage", "composition", "alignment", "runtime", "structural")

# alignment problems whose verdict must fall back to UNKNOWN with both conjectures countersatisfiable
DEGRADATION_IDS = ("ALN-190", "ALN-191", "ALN-192", "ALN-193", "ALN-197", "ALN-198", "ALN-199", "ALN-201")


@dataclass(frozen=True)
class BenchmarkProblem:
    """One benchmark check.

    ``kbs`` maps each operand to a KB id. For alignment problems the
    constraints are written against the source KB and evaluated, once aligned,
    in the restricted target KB. Runtime problems additionally carry a request
    context evaluated against both constraints.
    """

    id: str
    category: str
    title: str
    kbs: Mapping[str, str]
    left: CompositeConstraint
    right: CompositeConstraint
    alignment: str | None = None
    context: ExecutionContext | None = None
    expected: Mapping[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise ValueError(f"unknown category {self.category!r}")
        if self.alignment is not None and not (
            isinstance(self.left, Constraint) and isinstance(self.right, Constraint)
        ):
            raise ValueError("alignment problems take a single constraint on each side")


@dataclass(frozen=True)
class Unit:
    """One same-operand pairing that an encoder emission covers."""

    operand: str
    kb: KnowledgeBase
    left: tuple
    right: tuple
    verdict: Verdict


@dataclass(frozen=True)
class Outcome:
    verdict: Verdict
    units: tuple[Unit, ...]
    blocking: tuple[str, ...] = ()
    source_verdict: Verdict | None = None
    satisfied: tuple[bool, bool] | None = None


Judge = Callable[[KnowledgeBase, tuple, tuple, Mode], PairResult]


def resolve(problem: BenchmarkProblem, kbs=None, alignments=None, mode: Mode | str = Mode.OPEN):
    """KBs per operand (already restricted for alignment problems) and the constraints to compare."""
    kbs = kbs or fixtures.all_kbs()
    alignments = alignments or fixtures.all_alignments()
    by_operand = {op: kbs[k] for op, k in problem.kbs.items()}
    if problem.alignment is None:
        return by_operand, problem.left, problem.right
    a: Alignment = alignments[problem.alignment]
    operand = problem.left.left_operand
    src, tgt = by_operand[operand], kbs[a.target]
    restricted = restrict_kb(a, tgt, src)
    return {operand: restricted}, *align_pair(a, src, restricted, problem.left, problem.right, mode)


def evaluate(problem: BenchmarkProblem, mode: Mode | str = Mode.OPEN, judge: Judge | None = None,
             kbs=None, alignments=None) -> Outcome:
    """Engine verdict for a problem together with the per-operand units behind it."""
    mode = Mode(mode)
    judge = judge or check_group
    by_operand, left, right = resolve(problem, kbs, alignments, mode)
    source = None
    if problem.alignment is not None:
        op = problem.left.left_operand
        src_kb = (kbs or fixtures.all_kbs())[problem.kbs[op]]
        source = check_pair(src_kb, problem.left, problem.right, mode).verdict
    if not (isinstance(problem.left, Constraint) and isinstance(problem.right, Constraint)) or (
            problem.left.left_operand != problem.right.left_operand):
        res = check_composite(by_operand, left, right, mode, judge=judge)
        units = tuple(Unit(r.operand, by_operand[r.operand], r.left, r.right, r.verdict) for r in res.per_operand)
        return Outcome(res.verdict, units, res.blocking, source)
    operand = problem.left.left_operand
    kb = by_operand[operand]
    res = judge(kb, (left,), (right,), mode)
    unit = Unit(operand, kb, (left,), (right,), res.verdict)
    satisfied = None
    if problem.context is not None:
        satisfied = (satisfies(by_operand, problem.context, left, mode),
                     satisfies(by_operand, problem.context, right, mode))
    return Outcome(res.verdict, (unit,), (operand,), source, satisfied)


# --- problem definitions ---------------------------------------------------

def _c(operand, op, value):
    return Constraint(operand, op, tuple(value) if isinstance(value, list) else value)


def _and(*kids):
    return Composite("and", kids)


def _or(*kids):
    return Composite("or", kids)


def _xone(*kids):
    return Composite("xone", kids)


# per KB: operand, single-value anchors, set-valued anchors, partner constraints
_COVERAGE = {
    "GEO000": ("spatial", ["europe", "germany", "bavaria"], [["germany", "france"], ["bavaria", "europe"]], [
        ("eq", "france"), ("eq", "bavaria"), ("isPartOf", "germany"), ("hasPart", "bavaria"),
        ("isNoneOf", ["france"]),
    ]),
    "DPV000": ("purpose", ["NonCommercial", "ResearchAndDevelopment", "CommercialResearch"],
               [["Commercial", "ResearchAndDevelopment"], ["NonCommercial", "Commercial"]], [
        ("eq", "NonCommercialResearch"), ("eq", "ScientificResearch"), ("isA", "Commercial"),
        ("hasPart", "AcademicResearch"), ("isNoneOf", ["Commercial"]),
    ]),
    "LNG000": ("language", ["de", "fr", "de-AT"], [["de", "en"], ["fr", "fr-CA"]], [
        ("eq", "de-CH"), ("eq", "fr"), ("isA", "en"), ("hasPart", "de-DE"), ("isNoneOf", ["de", "fr"]),
    ]),
    "NOM000": ("protocol", ["sftp", "https", "scp"], [["sftp", "ftps"], ["https", "https"]], [
        ("eq", "sftp"), ("eq", "https"), ("isA", "ftps"), ("hasPart", "scp"), ("isNoneOf", ["sftp", "scp"]),
    ]),
}
_OPS = ["eq", "neq", "isA", "isPartOf", "hasPart", "isAnyOf", "isAllOf", "isNoneOf"]


def _coverage_problems():
    out = []
    for kb_id, (operand, singles, sets, partners) in _COVERAGE.items():
        for k, op in enumerate(_OPS):
            for j in range(3):
                value = sets[j % 2] if op in ("isAnyOf", "isAllOf", "isNoneOf") else singles[j]
                partner = partners[(k + j) % len(partners)]
                left, right = _c(operand, op, value), _c(operand, *partner)
                out.append(BenchmarkProblem(
                    f"OPC-{kb_id}-{op}-{j + 1}", "operator-coverage", f"{op} against {partner[0]} in {kb_id}",
                    {operand: kb_id}, left, right))
    return out


def _structural_problems():
    L = "level"

    def p(pid, kb_id, title, left, right):
        return BenchmarkProblem(pid, "structural", title, {"x": kb_id}, _c("x", *left), _c("x", *right))

    return [
        p("STR-CHN000-1", "CHN000", "bottom of a depth-5 chain lies under its top", ("isA", f"{L}4"), ("eq", f"{L}0")),
        p("STR-CHN000-2", "CHN000", "downset of an inner node vs upset of a higher one",
          ("isA", f"{L}1"), ("hasPart", f"{L}3")),
        p("STR-CHN000-3", "CHN000", "isAllOf along the chain", ("isAllOf", [f"{L}2", f"{L}4"]), ("eq", f"{L}0")),
        p("STR-CHN000-4", "CHN000", "complement of the whole chain", ("isNoneOf", [f"{L}4"]), ("eq", f"{L}2")),
        p("STR-DIA000-1", "DIA000", "diamond sides meet at the bottom", ("isA", "left"), ("isA", "right")),
        p("STR-DIA000-2", "DIA000", "both sides at once", ("isAllOf", ["left", "right"]), ("eq", "bottom")),
        p("STR-DIA000-3", "DIA000", "common upper bound", ("hasPart", "left"), ("hasPart", "right")),
        p("STR-DIA000-4", "DIA000", "right outside left's downset", ("isNoneOf", ["left"]), ("eq", "right")),
        p("STR-SNG000-1", "SNG000", "neq collapses to the empty set", ("eq", "only"), ("neq", "only")),
        p("STR-SNG000-2", "SNG000", "empty complement against isA", ("neq", "only"), ("isA", "only")),
        p("STR-SNG000-3", "SNG000", "single concept meets itself", ("isA", "only"), ("hasPart", "only")),
        p("STR-SNG000-4", "SNG000", "empty denotation beats an unmapped value",
          ("neq", "only"), ("eq", "urn:unmapped")),
        p("STR-NMS000-1", "NMS000", "overlap on exactly one concept", ("isA", "a"), ("isA", "b")),
        p("STR-NMS000-2", "NMS000", "near miss ruled out by disjointness", ("isA", "a_only"), ("isA", "b")),
        p("STR-NMS000-3", "NMS000", "shared concept outside the complement", ("isNoneOf", ["b"]), ("isA", "a")),
        p("STR-NMS000-4", "NMS000", "both branches reach the root", ("hasPart", "shared"), ("hasPart", "a_only")),
        p("STR-UNA000-1", "UNA000", "distinct labels without unique names", ("eq", "label_a"), ("eq", "label_b")),
        p("STR-UNA000-2", "UNA000", "known order still settles the verdict", ("isA", "label_c"), ("eq", "label_a")),
        p("STR-GEO000-U", "GEO000", "unmapped region", ("isPartOf", "https://example.org/atlantis"),
          ("eq", "france")),
    ]


_BSB = {"spatial": "GEO000", "purpose": "DPV000", "language": "LNG000"}


def _composition_problems():
    s, pu, la = "spatial", "purpose", "language"

    def p(pid, title, left, right, kbs=None):
        return BenchmarkProblem(pid, "composition", title, kbs or _BSB, left, right)

    bsb_policy = _and(_c(s, "isPartOf", "europe"), _c(pu, "isA", "NonCommercial"), _c(la, "isA", "de"))
    commercial_split = _xone(_c(pu, "isA", "Commercial"), _c(pu, "isA", "NonCommercial"))
    return [
        p("ODRL030", "library policy against a French research request", bsb_policy,
          _and(_c(s, "eq", "france"), _c(pu, "eq", "ScientificResearch"), _c(la, "eq", "fr"))),
        p("ODRL031", "two constraints on one operand are conjoined",
          _and(_c(la, "isA", "de"), _c(la, "neq", "de-CH")), _c(la, "eq", "de-AT")),
        p("ODRL032", "operand constrained on one side only takes no part",
          _and(_c(s, "isPartOf", "europe"), _c(pu, "isA", "Commercial")), _c(s, "eq", "bavaria")),
        p("ODRL033", "no shared operand", _c(s, "isPartOf", "europe"), _c(la, "eq", "de")),
        p("ODRL080", "or resolved by one compatible branch",
          _or(_c(la, "isA", "fr"), _c(la, "isA", "de")), _c(la, "eq", "de-DE")),
        p("ODRL081", "or with every branch in conflict",
          _or(_c(la, "isA", "fr"), _c(la, "isA", "en")), _c(la, "eq", "de-AT")),
        p("ODRL085", "xone with explicit disjointness for the other branch", commercial_split,
          _c(pu, "eq", "NonCommercialResearch")),
        p("ODRL086", "xone without disjointness for the other branch", commercial_split,
          _c(pu, "eq", "CommercialResearch")),
        p("ODRL087", "xone where the second branch is merely undetermined", commercial_split,
          _c(pu, "eq", "Marketing")),
        p("ODRL088", "xone across disjoint languages",
          _xone(_c(la, "isA", "de"), _c(la, "isA", "fr")), _c(la, "eq", "de-AT")),
        p("ODRL200", "three operands all compatible", bsb_policy,
          _and(_c(s, "eq", "germany"), _c(pu, "eq", "NonCommercialResearch"), _c(la, "eq", "de-DE"))),
        p("ODRL201", "a language conflict blocks an otherwise compatible request", bsb_policy,
          _and(_c(s, "eq", "germany"), _c(pu, "eq", "NonCommercialResearch"), _c(la, "eq", "fr-FR"))),
        p("ODRL202", "or with an undetermined and a compatible branch",
          _or(_c(pu, "isA", "NonCommercial"), _c(pu, "isA", "ResearchAndDevelopment")),
          _c(pu, "eq", "ScientificResearch")),
        p("ODRL203", "or with two undetermined branches",
          _or(_c(pu, "isA", "Commercial"), _c(pu, "isA", "NonCommercial")), _c(pu, "eq", "AcademicResearch")),
        p("ODRL204", "xone with every branch in conflict",
          _xone(_c(la, "isA", "de"), _c(la, "isA", "fr")), _c(la, "eq", "en-GB")),
        p("ODRL205", "xone with two compatible branches",
          _xone(_c(la, "isA", "de"), _c(la, "isA", "de-DE")), _c(la, "eq", "de-DE")),
        p("ODRL206", "nested spatial and or(purpose)",
          _and(_c(s, "isPartOf", "europe"),
               _or(_c(pu, "isA", "NonCommercial"), _c(pu, "isA", "ResearchAndDevelopment"))),
          _and(_c(s, "eq", "france"), _c(pu, "eq", "ScientificResearch"))),
        p("ODRL207", "alternatives on both sides",
          _or(_and(_c(s, "isPartOf", "germany"), _c(la, "isA", "de")),
              _and(_c(s, "eq", "france"), _c(la, "isA", "fr"))),
          _or(_and(_c(s, "eq", "bavaria"), _c(la, "eq", "de-DE")),
              _and(_c(s, "eq", "france"), _c(la, "eq", "en")))),
    ]


def _alignment_problems():
    def p(pid, title, a_id, operand, left, right):
        a = fixtures.alignment(a_id)
        return BenchmarkProblem(pid, "alignment", title, {operand: a.source},
                                _c(operand, *left), _c(operand, *right), alignment=a_id)

    g, lg, pu = "spatial", "language", "purpose"
    iso, geo = "GEO001-GEO000", "GEO000-GEO001"
    lng, dpv = "LNG001-LNG000", "DPV001-DPV000"
    return [
        p("ALN-057", "total alignment keeps a compatible pair", iso, g, ("eq", "iso:FR"), ("isPartOf", "iso:150")),
        p("ALN-058", "total alignment keeps a point conflict", iso, g, ("eq", "iso:FR"), ("eq", "iso:DE")),
        p("ALN-059", "total alignment keeps a disjointness conflict", iso, g,
          ("isPartOf", "iso:DE"), ("isPartOf", "iso:FR")),
        p("ALN-060", "upward closure through a total alignment", iso, g, ("hasPart", "iso:DE"), ("eq", "iso:150")),
        p("ALN-061", "complement through a total alignment", iso, g, ("neq", "iso:FR"), ("isPartOf", "iso:150")),
        p("ALN-062", "isAnyOf through a total alignment", iso, g, ("isAnyOf", ["iso:DE", "iso:FR"]), ("eq", "iso:FR")),
        p("ALN-063", "isNoneOf through a total alignment", iso, g, ("isNoneOf", ["iso:DE"]), ("eq", "iso:FR")),
        p("ALN-064", "language conflict survives alignment", lng, lg, ("eq", "fra"), ("eq", "deu")),
        p("ALN-065", "language compatibility survives alignment", lng, lg, ("isA", "deu"), ("eq", "deu")),
        p("ALN-066", "purpose compatibility survives alignment", dpv, pu,
          ("isA", "gdpr:CommercialInterest"), ("eq", "gdpr:DirectMarketing")),
        p("ALN-067", "mapped leaf purpose", dpv, pu,
          ("isA", "gdpr:ScientificResearch"), ("eq", "gdpr:ScientificResearch")),
        p("ALN-068", "witness-complete alignment keeps the shared witness", "WITA-WITB", "l",
          ("isA", "v_b"), ("isA", "v_c")),
        p("ALN-069", "witness-complete alignment keeps a point conflict", "WITA-WITB", "l",
          ("eq", "v_b"), ("eq", "v_c")),
        p("ALN-190", "unmapped region degrades", geo, g, ("isPartOf", "europe"), ("eq", "france")),
        p("ALN-191", "unmapped sub-region degrades", geo, g, ("eq", "bavaria"), ("isPartOf", "germany")),
        p("ALN-192", "source conflict through an unmapped concept degrades", geo, g,
          ("eq", "france"), ("isPartOf", "germany")),
        p("ALN-193", "isAnyOf with an unmapped member degrades", lng, lg, ("isAnyOf", ["deu", "gem"]), ("eq", "eng")),
        p("ALN-194", "isNoneOf through a partial alignment", lng, lg, ("isNoneOf", ["deu"]), ("eq", "eng")),
        p("ALN-195", "hasPart through a partial alignment", lng, lg, ("hasPart", "eng"), ("eq", "eng")),
        p("ALN-196", "neq through a partial alignment", lng, lg, ("neq", "deu"), ("eq", "fra")),
        p("ALN-197", "unmapped language family degrades", lng, lg, ("eq", "fra"), ("isA", "gem")),
        p("ALN-198", "unmapped purpose branch degrades", dpv, pu,
          ("isA", "gdpr:Research"), ("eq", "gdpr:ScientificResearch")),
        p("ALN-199", "both sides unmapped", dpv, pu, ("eq", "gdpr:StatisticalPurpose"), ("isA", "gdpr:Research")),
        p("ALN-200", "mapped point survives a partial alignment", geo, g, ("eq", "france"), ("eq", "france")),
        p("ALN-201", "upward closure leaving the alignment degrades", lng, lg, ("isNoneOf", ["deu"]), ("hasPart", "deu")),
    ]


def _runtime_problems():
    la, s = "language", "spatial"

    def p(pid, title, left, right, ctx, kbs=None):
        op = left[0]
        return BenchmarkProblem(pid, "runtime", title, kbs or {op: "LNG000"}, _c(*left), _c(*right),
                                context=ExecutionContext(ctx))

    geo = {s: "GEO000"}
    france = fixtures.GEONAMES + "3017382/"
    return [
        p("RUN-070", "the witness request satisfies both constraints",
          (la, "isA", "de"), (la, "eq", "de-AT"), {la: "de-AT"}),
        p("RUN-071", "a conflict pair rejects the request pointwise",
          (la, "eq", "fr"), (la, "isA", "de"), {la: "fr"}),
        p("RUN-072", "a request without the operand is denied", (la, "isA", "de"), (la, "eq", "de-AT"),
          {s: "france"}),
        p("RUN-073", "no language satisfies both sides of a conflict",
          (la, "isA", "de"), (la, "isA", "fr"), {la: "de-DE"}),
        p("RUN-074", "an unmapped request value is denied", (la, "isA", "de"), (la, "hasPart", "de-CH"),
          {la: "tlh"}),
        p("RUN-075", "an IRI request value grounds before the check",
          (s, "isPartOf", "europe"), (s, "eq", "france"), {s: france}, geo),
        p("RUN-076", "an unmapped constraint value admits any grounded request",
          (s, "isPartOf", "https://example.org/atlantis"), (s, "hasPart", "bavaria"), {s: "germany"}, geo),
    ]


def _with_goldens(problems):
    goldens = load_goldens()
    return [BenchmarkProblem(p.id, p.category, p.title, p.kbs, p.left, p.right, p.alignment, p.context,
                             goldens.get(p.id, {})) for p in problems]


def build_builtin_suite(with_expected: bool = True) -> list[BenchmarkProblem]:
    """Every built-in problem, sorted by id, with frozen expectations attached."""
    problems = (_coverage_problems() + _structural_problems() + _composition_problems()
                + _alignment_problems() + _runtime_problems())
    ids = [p.id for p in problems]
    if len(set(ids)) != len(ids):
        raise AssertionError("duplicate problem ids")
    problems.sort(key=lambda p: p.id)
    return _with_goldens(problems) if with_expected else problems


@lru_cache(maxsize=1)
def load_goldens() -> dict:
    try:
        text = resources.files(__package__).joinpath("goldens.json").read_text(encoding="utf-8")
    except FileNotFoundError:
        return {}
    return json.loads(text)
