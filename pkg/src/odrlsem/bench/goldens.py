"""Compute the frozen expectations of the built-in suite from the reference oracles.

Run ``python -m odrlsem.bench.goldens`` to rewrite ``goldens.json``. The
engine is not consulted: per-operand verdicts come from the ground-SAT prover
oracle (cross-checked by completion enumeration on KBs of at most four
concepts) and the closed-world set oracle, and are folded through the same
composite pairing as the engine.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from ..denotation import Constraint, Mode, Operator
from ..encoder import Polarity
from ..verdict import PairResult
from . import fixtures, oracle
from .suite import BenchmarkProblem, build_builtin_suite, evaluate, resolve

__all__ = ["compute_golden", "compute_goldens", "main"]


def open_judge(kb, left, right, mode=Mode.OPEN) -> PairResult:
    group = tuple(left) + tuple(right)
    verdict = oracle.prover_oracle(kb, left, right)
    if len(kb.concepts) <= 4:
        enumerated = oracle.enumeration_oracle(kb, group)
        if enumerated is not verdict:
            raise AssertionError(f"oracles disagree on {kb.kb_id}: {verdict} vs {enumerated}")
    return PairResult(verdict)


def closed_judge(kb, left, right, mode=Mode.CLOSED) -> PairResult:
    return PairResult(oracle.closed_oracle(kb, tuple(left) + tuple(right)))


def _oracle_satisfies(kbs, ctx, c, closed: bool) -> bool:
    kb = kbs[c.left_operand]
    value = ctx.get(c.left_operand)
    if value is None or value not in kb.gamma:
        return False
    x = kb.gamma[value]
    if oracle.closed_denotation(kb, c) is None:
        return True
    if closed:
        return x in oracle.closed_denotation(kb, c)
    # x is certainly a member iff "some X equal to x is in c" is entailed
    probe = Constraint(c.left_operand, Operator.EQ, value)
    return oracle.prover_oracle(kb, (c,), (probe,)).value == "COMPATIBLE"


def compute_golden(problem: BenchmarkProblem) -> dict:
    opened = evaluate(problem, Mode.OPEN, judge=open_judge)
    closed = evaluate(problem, Mode.CLOSED, judge=closed_judge)
    g = {"open": opened.verdict.value, "closed": closed.verdict.value, "blocking": list(opened.blocking)}
    statuses = []
    for unit in opened.units:
        st = oracle.prover_statuses(unit.kb, unit.left, unit.right)
        statuses.append({"operand": unit.operand, **{pol.value: st[pol].value for pol in Polarity}})
    g["statuses"] = statuses
    if problem.alignment is not None:
        src = fixtures.kb(problem.kbs[problem.left.left_operand])
        g["source_open"] = open_judge(src, (problem.left,), (problem.right,)).verdict.value
        g["source_closed"] = closed_judge(src, (problem.left,), (problem.right,)).verdict.value
    if problem.context is not None:
        by_operand, left, right = resolve(problem)
        g["satisfies"] = {
            "open": [_oracle_satisfies(by_operand, problem.context, c, False) for c in (left, right)],
            "closed": [_oracle_satisfies(by_operand, problem.context, c, True) for c in (left, right)],
        }
    return g


def compute_goldens(problems=None) -> dict:
    problems = problems if problems is not None else build_builtin_suite(with_expected=False)
    return {p.id: compute_golden(p) for p in problems}


def main(argv=None) -> int:
    out = Path(__file__).with_name("goldens.json")
    goldens = compute_goldens()
    out.write_text(json.dumps(goldens, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {len(goldens)} expectations to {out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
