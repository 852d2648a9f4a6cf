"""Command-line front end.

Exit status reports whether the analysis ran, not what it found: 0 after a
completed analysis of any verdict, 2 on unusable input (bad files, invalid KBs
or alignments, usage errors). ``bench run`` exits 1 when the suite misses its
expectations.
"""

from __future__ import annotations

import argparse
import json
import shlex
import subprocess
import sys
from pathlib import Path
from typing import Sequence

from .alignment import aligned_verdict, validate_alignment
from .denotation import Constraint, Membership3, Mode, denote, member3
from .encoder import Polarity, emit_problem, interpret_result, write_problem
from .errors import OdrlSemError, ParseError
from .kb import KnowledgeBase, build_kb, validate_kb
from .policy_io import (
    composite_from_json, constraint_from_json, load_json, load_kbdir, parse_alignment_file, parse_context_file,
    parse_kb_file, raw_kb_from_json,
)
from .runtime import satisfies, satisfies_composite
from .verdict import Verdict, check_composite, flatten, operands

__all__ = ["main", "run_cli"]


class _InputError(Exception):
    pass


def _json_arg(text: str, what: str):
    """Inline JSON, or the path of a JSON file."""
    if text.lstrip().startswith(("{", "[")):
        try:
            return json.loads(text), f"<{what}>"
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, f"<{what}>:{exc.lineno}:{exc.colno}") from None
    return load_json(text), text


def _constraint(text: str, what: str) -> Constraint:
    d, where = _json_arg(text, what)
    return constraint_from_json(d, where)


def _policy(text: str, what: str):
    d, where = _json_arg(text, what)
    return composite_from_json(d, where)


def _group(text: str, what: str) -> tuple[Constraint, ...]:
    """A constraint, or a flat ``and`` of constraints over one operand."""
    tree = _policy(text, what)
    groups = flatten(tree)
    if groups is None or len(groups) != 1:
        raise _InputError(f"{what}: expected one constraint or a flat 'and' over a single operand")
    return next(iter(groups.values()))


def _kb(ref: str) -> KnowledgeBase:
    """A KB file, or the id of a built-in fixture."""
    if not Path(ref).exists():
        from .bench import fixtures

        if ref in fixtures.KB_IDS:
            return fixtures.kb(ref)
    return parse_kb_file(ref)


def _emit(args, payload: dict, lines: Sequence[str]) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


def _operand_rows(res) -> list[dict]:
    return [{"operand": r.operand, "verdict": r.verdict.value, "witness": r.witness} for r in res.per_operand]


# --- subcommands ---------------------------------------------------------------

def cmd_validate_kb(args) -> int:
    raw = raw_kb_from_json(load_json(args.kb), args.kb)
    kb = build_kb(**raw, check=False)
    problems = validate_kb(kb)
    payload = {"kb": kb.kb_id, "valid": not problems, "violations": [str(v) for v in problems]}
    if problems:
        lines = [f"{kb.kb_id}: {len(problems)} violation(s)"] + [f"  {v}" for v in problems]
    else:
        lines = [f"{kb.kb_id}: OK ({len(kb.concepts)} concepts, {kb.domain.value})"]
    _emit(args, payload, lines)
    return 0 if not problems else 2


def cmd_denote(args) -> int:
    kb = _kb(args.kb)
    c = _constraint(args.constraint, "constraint")
    mode = Mode(args.mode)
    d = denote(kb, c)
    payload = {"mode": mode.value, "constraint": str(c), "top": d.is_top,
               "denotation": None if d.is_top else sorted(d.concepts)}
    lines = ["TOP (ungrounded)" if d.is_top else "{" + ", ".join(sorted(d.concepts)) + "}"]
    if mode is Mode.OPEN and not d.is_top:
        m = {x: member3(kb, x, c, mode).value for x in kb.concepts}
        payload["membership"] = m
        lines += [f"  {x}: {v}" for x, v in m.items() if v != Membership3.FALSE.value]
    _emit(args, payload, lines)
    return 0


def _verdict_report(args, res, mode: Mode) -> int:
    witness = next((r.witness for r in res.per_operand if r.witness), None)
    payload = {"verdict": res.verdict.value, "mode": mode.value, "per_operand": _operand_rows(res),
               "witness": witness, "blocking": list(res.blocking)}
    lines = [res.verdict.value]
    for r in res.per_operand:
        extra = f" (witness {r.witness})" if r.witness else ""
        lines.append(f"  {r.operand}: {r.verdict.value}{extra}")
    if res.blocking and res.verdict is not Verdict.COMPATIBLE:
        lines.append(f"  blocking: {', '.join(res.blocking)}")
    _emit(args, payload, lines)
    return 0


def cmd_check(args) -> int:
    kb = _kb(args.kb)
    left, right = _policy(args.left, "left"), _policy(args.right, "right")
    ops = operands(left) | operands(right)
    if len(ops) != 1:
        raise _InputError(f"check takes constraints over one operand, got {sorted(ops)}; use check-policy")
    mode = Mode(args.mode)
    return _verdict_report(args, check_composite({ops.pop(): kb}, left, right, mode), mode)


def cmd_check_policy(args) -> int:
    kbs = load_kbdir(args.kbdir)
    mode = Mode(args.mode)
    res = check_composite(kbs, _policy(args.left, "left"), _policy(args.right, "right"), mode)
    return _verdict_report(args, res, mode)


def _alignment_inputs(args):
    return parse_alignment_file(args.alignment), _kb(args.source), _kb(args.target)


def cmd_align_validate(args) -> int:
    a, src, tgt = _alignment_inputs(args)
    problems = validate_alignment(a, src, tgt)
    payload = {"valid": not problems, "violations": [str(v) for v in problems]}
    lines = ["VALID"] if not problems else ["INVALID"] + [f"  {v}" for v in problems]
    _emit(args, payload, lines)
    return 0 if not problems else 2


def cmd_align_check(args) -> int:
    a, src, tgt = _alignment_inputs(args)
    mode = Mode(args.mode)
    c1, c2 = _constraint(args.left, "left"), _constraint(args.right, "right")
    res = aligned_verdict(a, src, tgt, c1, c2, mode)
    payload = {"mode": mode.value, "source": res.source.value, "aligned": res.aligned.value}
    _emit(args, payload, [f"source: {res.source.value}", f"aligned: {res.aligned.value}"])
    return 0


def cmd_satisfies(args) -> int:
    kbs = load_kbdir(args.kbdir)
    ctx = parse_context_file(args.context)
    tree = _policy(args.constraint, "constraint")
    mode = Mode(args.mode)
    ok = satisfies(kbs, ctx, tree, mode) if isinstance(tree, Constraint) else satisfies_composite(kbs, ctx, tree, mode)
    _emit(args, {"mode": mode.value, "satisfied": ok}, ["SATISFIED" if ok else "NOT SATISFIED"])
    return 0


def _run_prover(cmd: str, path: Path) -> str:
    out = subprocess.run([*shlex.split(cmd), str(path)], capture_output=True, text=True, check=False).stdout
    for token in ("CounterSatisfiable", "Theorem", "unsat", "sat"):
        if f"SZS status {token}" in out or token in out.split():
            return token
    return out.strip().splitlines()[-1] if out.strip() else ""


def cmd_encode(args) -> int:
    kb = _kb(args.kb)
    c1, c2 = _group(args.left, "left"), _group(args.right, "right")
    pols = list(Polarity) if args.polarity == "both" else [Polarity.parse(args.polarity)]
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for pol in pols:
        pid = args.id if len(pols) == 1 else f"{args.id}_{pol.value.split('-')[0]}"
        enc = emit_problem(kb, c1, c2, pol, pid)
        tptp, smt = write_problem(enc, out_dir)
        files = {"tptp": [tptp], "smt2": [smt], "both": [tptp, smt]}[args.format]
        for f in {tptp, smt} - set(files):
            f.unlink()
        row = {"id": pid, "polarity": pol.value, "expected": enc.expected.value, "files": [str(f) for f in files]}
        if args.prover_cmd:
            token = _run_prover(args.prover_cmd, files[0])
            row["prover"] = token
            row["prover_verdict"] = interpret_result(token, pol).value
        rows.append(row)
    lines = []
    for r in rows:
        lines.append(f"{r['id']}: {r['polarity']}, expected {r['expected']}")
        lines += [f"  wrote {f}" for f in r["files"]]
        if "prover" in r:
            lines.append(f"  prover: {r['prover']} -> {r['prover_verdict']}")
    _emit(args, {"problems": rows}, lines)
    return 0


def cmd_bench_run(args) -> int:
    from .bench.runner import load_suite, run_suite
    from .bench.suite import build_builtin_suite

    if args.suite:
        problems, kbs, alignments = load_suite(args.suite)
        if not problems:
            raise _InputError(f"no problems found under {args.suite}")
    else:
        problems, kbs, alignments = build_builtin_suite(), None, None
    report = run_suite(problems, args.mode, emit=not args.no_emit, out_dir=args.out, kbs=kbs,
                       alignments=alignments)
    s = report.stats()
    lines = [f"{p.problem_id:<12} {p.category:<18} {str(p.verdict):<11} {'ok' if p.passed else 'FAIL'}"
             for p in report.problems] if args.verbose else []
    lines += [
        f"{s['passed']}/{s['problems']} problems passed ({s['mode']} mode)",
        "verdicts: " + ", ".join(f"{k} {v}" for k, v in s["verdicts"].items()),
        f"emissions: {s['emissions']} units, {s['files']} files, {s['epr_failures']} EPR failures, "
        f"{s['concordant']} concordant, {s['discordant']} discordant",
    ]
    lines += [f"FAIL {p.problem_id}: {p.error or f'{p.verdict} expected {p.expected}'}" for p in report.mismatches]
    _emit(args, report.to_json(), lines)
    return 0 if not report.mismatches else 1


def cmd_bench_export(args) -> int:
    from .bench.runner import export_suite
    from .bench.suite import build_builtin_suite

    problems = build_builtin_suite()
    out = export_suite(problems, args.out)
    _emit(args, {"problems": len(problems), "out": str(out)}, [f"exported {len(problems)} problems to {out}"])
    return 0


# --- wiring ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="odrlsem", description="KB-grounded conflict detection for ODRL constraints.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(fn=fn)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        return sp

    def mode(sp):
        sp.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.OPEN.value)

    sp = add("validate-kb", cmd_validate_kb, "check a KB file against the structural axioms")
    sp.add_argument("kb")

    sp = add("denote", cmd_denote, "print the denotation of a constraint")
    sp.add_argument("--kb", required=True)
    sp.add_argument("--constraint", required=True, help="constraint JSON or file")
    mode(sp)

    sp = add("check", cmd_check, "verdict for two constraints over one KB")
    sp.add_argument("--kb", required=True, help="KB file or built-in fixture id")
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    mode(sp)

    sp = add("check-policy", cmd_check_policy, "verdict for two composite rules")
    sp.add_argument("--kbdir", required=True, help="directory with manifest.json")
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    mode(sp)

    for name, fn, text in (("align-validate", cmd_align_validate, "validate an alignment"),
                           ("align-check", cmd_align_check, "verdict before and after alignment")):
        sp = add(name, fn, text)
        sp.add_argument("--alignment", required=True)
        sp.add_argument("--source", required=True)
        sp.add_argument("--target", required=True)
        if fn is cmd_align_check:
            sp.add_argument("--left", required=True)
            sp.add_argument("--right", required=True)
            mode(sp)

    sp = add("satisfies", cmd_satisfies, "evaluate a request context against a constraint")
    sp.add_argument("--kbdir", required=True)
    sp.add_argument("--context", required=True)
    sp.add_argument("--constraint", required=True)
    mode(sp)

    sp = add("encode", cmd_encode, "emit TPTP / SMT-LIB2 problems")
    sp.add_argument("--kb", required=True)
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.add_argument("--format", choices=["tptp", "smt2", "both"], default="both")
    sp.add_argument("--polarity", choices=["compat", "conflict", "both"], default="both")
    sp.add_argument("--out", required=True)
    sp.add_argument("--id", default="problem")
    sp.add_argument("--prover-cmd", help="run this command on the first emitted file and read its status")

    bench = sub.add_parser("bench", help="benchmark suite")
    bsub = bench.add_subparsers(dest="bench_command", required=True)
    sp = bsub.add_parser("run", help="run the suite")
    sp.set_defaults(fn=cmd_bench_run)
    sp.add_argument("--suite", help="suite directory (default: built-in suite)")
    sp.add_argument("--out", help="write emissions and result.json files here")
    sp.add_argument("--no-emit", action="store_true", help="skip encoder emission and concordance")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("-v", "--verbose", action="store_true")
    mode(sp)
    sp = bsub.add_parser("export", help="write the built-in suite to a directory")
    sp.set_defaults(fn=cmd_bench_export)
    sp.add_argument("out")
    sp.add_argument("--json", action="store_true")
    return p


def run_cli(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (OdrlSemError, _InputError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    raise SystemExit(run_cli())
