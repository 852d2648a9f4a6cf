"""Run benchmark problems through the engine and the encoder, and move suites to and from disk."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from ..alignment import Alignment
from ..denotation import Constraint, Mode
from ..encoder import Polarity, emit_problem, epr_check, expected_status, write_problem
from ..groundsat import ground_status
from ..kb import KnowledgeBase
from ..policy_io import (
    alignment_from_json, alignment_to_json, composite_from_json, composite_to_json, context_from_json,
    context_to_json, dump_json, kb_from_json, kb_to_json, load_json,
)
from ..runtime import SoundnessReport, exhaustive_composite_check, exhaustive_soundness_check
from ..verdict import Verdict
from . import fixtures
from .suite import BenchmarkProblem, evaluate, resolve

__all__ = [
    "Emission",
    "ProblemReport",
    "SuiteReport",
    "export_suite",
    "load_suite",
    "run_suite",
    "soundness_check",
]


@dataclass(frozen=True)
class Emission:
    """One encoder emission of one unit, checked against the ground oracle."""

    name: str
    operand: str
    polarity: Polarity
    engine_status: str
    oracle_status: str
    golden_status: str | None
    epr_ok: bool

    @property
    def concordant(self) -> bool:
        return self.engine_status == self.oracle_status and self.golden_status in (None, self.oracle_status)


@dataclass(frozen=True)
class ProblemReport:
    problem_id: str
    category: str
    verdict: Verdict
    expected: Verdict | None
    blocking: tuple[str, ...] = ()
    emissions: tuple[Emission, ...] = ()
    error: str | None = None

    @property
    def passed(self) -> bool:
        if self.error is not None:
            return False
        if self.expected is not None and self.verdict is not self.expected:
            return False
        return all(e.concordant and e.epr_ok for e in self.emissions)

    def to_json(self) -> dict:
        return {
            "id": self.problem_id,
            "category": self.category,
            "verdict": self.verdict.value if self.verdict else None,
            "expected": self.expected.value if self.expected else None,
            "passed": self.passed,
            "blocking": list(self.blocking),
            "emissions": [
                {"name": e.name, "operand": e.operand, "polarity": e.polarity.value,
                 "engine": e.engine_status, "oracle": e.oracle_status, "epr": e.epr_ok}
                for e in self.emissions
            ],
            **({"error": self.error} if self.error else {}),
        }


@dataclass(frozen=True)
class SuiteReport:
    mode: Mode
    problems: tuple[ProblemReport, ...] = field(default_factory=tuple)

    @property
    def mismatches(self) -> list[ProblemReport]:
        return [p for p in self.problems if not p.passed]

    @property
    def emissions(self) -> list[Emission]:
        return [e for p in self.problems for e in p.emissions]

    def stats(self) -> dict:
        ems = self.emissions
        verdicts = {v.value: sum(p.verdict is v for p in self.problems) for v in Verdict}
        return {
            "mode": self.mode.value,
            "problems": len(self.problems),
            "passed": sum(p.passed for p in self.problems),
            "verdict_mismatches": sum(p.expected is not None and p.verdict is not p.expected
                                      for p in self.problems),
            "verdicts": verdicts,
            "emissions": len(ems),
            "files": 2 * len(ems),
            "epr_failures": sum(not e.epr_ok for e in ems),
            "concordant": sum(e.concordant for e in ems),
            "discordant": sum(not e.concordant for e in ems),
        }

    def to_json(self) -> dict:
        return {"summary": self.stats(), "problems": [p.to_json() for p in self.problems]}


def _expected(problem: BenchmarkProblem, mode: Mode) -> Verdict | None:
    v = problem.expected.get(mode.value)
    return Verdict(v) if v else None


def _emit_units(problem: BenchmarkProblem, outcome, out_dir: Path | None) -> list[Emission]:
    goldens = problem.expected.get("statuses") or []
    out = []
    for k, unit in enumerate(outcome.units):
        golden = goldens[k] if k < len(goldens) and goldens[k].get("operand") == unit.operand else {}
        for pol in Polarity:
            name = f"{problem.id}_{k}_{pol.value.split('-')[0]}"
            enc = emit_problem(unit.kb, unit.left, unit.right, pol, name,
                               expected=expected_status(unit.verdict, pol), allow_ungrounded=True)
            if out_dir is not None:
                write_problem(enc, out_dir)
            out.append(Emission(
                name=name,
                operand=unit.operand,
                polarity=pol,
                engine_status=enc.expected.value,
                oracle_status=ground_status(enc).value,
                golden_status=golden.get(pol.value),
                epr_ok=epr_check(enc).ok,
            ))
    return out


def run_problem(problem: BenchmarkProblem, mode: Mode | str = Mode.OPEN, emit: bool = False,
                out_dir: str | Path | None = None, kbs=None, alignments=None) -> ProblemReport:
    mode = Mode(mode)
    pdir = Path(out_dir) / problem.id if out_dir is not None else None
    if pdir is not None:
        pdir.mkdir(parents=True, exist_ok=True)
        (pdir / "problem.json").write_text(dump_json(problem_to_json(problem)), encoding="utf-8")
    try:
        outcome = evaluate(problem, mode, kbs=kbs, alignments=alignments)
        # emissions encode the open-world theory, so they are only compared in open mode
        emissions = _emit_units(problem, outcome, pdir) if emit and mode is Mode.OPEN else []
        report = ProblemReport(problem.id, problem.category, outcome.verdict, _expected(problem, mode),
                               tuple(outcome.blocking), tuple(emissions))
    except Exception as exc:  # a broken problem is a failed row, not a crashed run
        report = ProblemReport(problem.id, problem.category, None, _expected(problem, mode),
                               error=f"{type(exc).__name__}: {exc}")
    if pdir is not None:
        (pdir / "result.json").write_text(dump_json(report.to_json()), encoding="utf-8")
    return report


def run_suite(problems: Iterable[BenchmarkProblem], mode: Mode | str = Mode.OPEN, emit: bool = False,
              out_dir: str | Path | None = None, kbs=None, alignments=None) -> SuiteReport:
    """Evaluate every problem; with ``emit`` also encode, EPR-check and ground-decide each unit."""
    mode = Mode(mode)
    reports = [run_problem(p, mode, emit, out_dir, kbs, alignments)
               for p in sorted(problems, key=lambda p: p.id)]
    return SuiteReport(mode, tuple(reports))


def soundness_check(problem: BenchmarkProblem, mode: Mode | str = Mode.OPEN,
                    kbs=None, alignments=None) -> SoundnessReport:
    """Enumerate every request over the problem's KBs and evaluate both sides at runtime."""
    by_operand, left, right = resolve(problem, kbs, alignments, mode)
    if isinstance(left, Constraint) and isinstance(right, Constraint) and left.left_operand == right.left_operand:
        return exhaustive_soundness_check(by_operand[left.left_operand], left, right, mode)
    return exhaustive_composite_check(by_operand, left, right, mode)


# --- on-disk suites ------------------------------------------------------------

def problem_to_json(p: BenchmarkProblem) -> dict:
    d = {
        "id": p.id,
        "category": p.category,
        "title": p.title,
        "kbs": dict(p.kbs),
        "left": composite_to_json(p.left),
        "right": composite_to_json(p.right),
    }
    if p.alignment is not None:
        d["alignment"] = p.alignment
    if p.context is not None:
        d["context"] = context_to_json(p.context)
    if p.expected:
        d["expected"] = dict(p.expected)
    return d


def problem_from_json(d: Mapping, where: str = "") -> BenchmarkProblem:
    ctx = d.get("context")
    return BenchmarkProblem(
        id=d["id"],
        category=d["category"],
        title=d.get("title", ""),
        kbs=dict(d["kbs"]),
        left=composite_from_json(d["left"], f"{where}.left"),
        right=composite_from_json(d["right"], f"{where}.right"),
        alignment=d.get("alignment"),
        context=context_from_json(ctx, f"{where}.context") if ctx is not None else None,
        expected=d.get("expected", {}),
    )


def export_suite(problems: Sequence[BenchmarkProblem], out_dir: str | Path,
                 kbs: Mapping[str, KnowledgeBase] | None = None,
                 alignments: Mapping[str, Alignment] | None = None) -> Path:
    """Write KBs, alignments and one ``problem.json`` per problem directory."""
    out = Path(out_dir)
    kbs = kbs or fixtures.all_kbs()
    alignments = alignments or fixtures.all_alignments()
    (out / "kbs").mkdir(parents=True, exist_ok=True)
    (out / "alignments").mkdir(exist_ok=True)
    for kb_id, kb in sorted(kbs.items()):
        (out / "kbs" / f"{kb_id}.json").write_text(dump_json(kb_to_json(kb)), encoding="utf-8")
    for a_id, a in sorted(alignments.items()):
        (out / "alignments" / f"{a_id}.json").write_text(dump_json(alignment_to_json(a)), encoding="utf-8")
    for p in problems:
        pdir = out / p.id
        pdir.mkdir(exist_ok=True)
        (pdir / "problem.json").write_text(dump_json(problem_to_json(p)), encoding="utf-8")
    return out


def load_suite(suite_dir: str | Path):
    """Inverse of :func:`export_suite`: ``(problems, kbs, alignments)``."""
    root = Path(suite_dir)
    kbs = {f.stem: kb_from_json(load_json(f), str(f)) for f in sorted((root / "kbs").glob("*.json"))}
    alignments = {f.stem: alignment_from_json(load_json(f), str(f))
                  for f in sorted((root / "alignments").glob("*.json"))}
    problems = [problem_from_json(load_json(f), str(f)) for f in sorted(root.glob("*/problem.json"))]
    return sorted(problems, key=lambda p: p.id), kbs, alignments


def write_report(report: SuiteReport, path: str | Path) -> None:
    Path(path).write_text(json.dumps(report.to_json(), indent=2) + "\n", encoding="utf-8")
