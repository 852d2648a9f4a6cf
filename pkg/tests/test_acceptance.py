"""Acceptance criteria 1-10.

Each check returns ``(passed, detail)``. Under pytest the result is recorded for
the terminal summary and asserted; ``python tests/test_acceptance.py`` prints
one line per criterion without pytest.
"""

import itertools
import random
import sys
import tempfile
import time
from pathlib import Path

if __name__ == "__main__":
    sys.path.insert(0, str(Path(__file__).resolve().parent))

import pytest

from conftest import ACCEPTANCE
from odrlsem.alignment import aligned_verdict, covered, validate_alignment
from odrlsem.bench import fixtures, oracle
from odrlsem.bench.generators import random_alignment, random_constraint, random_extension, random_kb
from odrlsem.bench.runner import run_suite, soundness_check
from odrlsem.bench.suite import DEGRADATION_IDS, build_builtin_suite, evaluate
from odrlsem.denotation import Constraint, Mode, denote
from odrlsem.encoder import ProverStatus
from odrlsem.verdict import Composite, Verdict, check_composite, check_group, check_pair, compose

CON, COM, UNK = Verdict.CONFLICT, Verdict.COMPATIBLE, Verdict.UNKNOWN
DPV = "https://w3id.org/dpv#"
GEO = "https://sws.geonames.org/"


def c(operand, op, value):
    return Constraint(operand, op, tuple(value) if isinstance(value, list) else value)


def _bsb():
    return {"spatial": fixtures.kb("GEO000"), "purpose": fixtures.kb("DPV000"), "language": fixtures.kb("LNG000")}


def criterion_1():
    offer = Composite("and", (c("spatial", "isPartOf", GEO + "6255148/"),
                              c("purpose", "isA", DPV + "NonCommercial"), c("language", "isA", "de")))
    request = Composite("and", (c("spatial", "eq", GEO + "3017382/"),
                                c("purpose", "eq", DPV + "ScientificResearch"), c("language", "eq", "fr")))
    t0 = time.perf_counter()
    res = check_composite(_bsb(), offer, request, Mode.OPEN)
    elapsed = time.perf_counter() - t0
    per = {r.operand: r.verdict for r in res.per_operand}
    ok = (per == {"spatial": COM, "purpose": UNK, "language": CON} and res.verdict is CON
          and res.blocking == ("language",) and elapsed < 1.0)
    return ok, f"per-operand {', '.join(f'{k}={v}' for k, v in per.items())}; " \
               f"composite {res.verdict}, blocking {list(res.blocking)}; {elapsed * 1000:.1f} ms"


def criterion_2():
    kbs = _bsb()
    split = Composite("xone", (c("purpose", "isA", "Commercial"), c("purpose", "isA", "NonCommercial")))
    explicit = check_composite(kbs, split, c("purpose", "eq", "NonCommercialResearch")).verdict
    absent = check_composite(kbs, split, c("purpose", "eq", "CommercialResearch")).verdict
    return (explicit is COM and absent is UNK), f"explicit disjointness {explicit}, absent {absent}"


def criterion_3():
    src, tgt = fixtures.kb("WITA"), fixtures.kb("WITB")
    lossy, full = fixtures.alignment("WITA-WITB-lossy"), fixtures.alignment("WITA-WITB")
    rejected = [str(v) for v in validate_alignment(lossy, src, tgt)]
    restored = {m.value: tuple(aligned_verdict(full, src, tgt, c("l", "isA", "v_b"), c("l", "isA", "v_c"), m))
                for m in Mode}
    ok = bool(rejected) and all(v == (COM, COM) for v in restored.values())
    shown = "; ".join(f"{m}: ({s}, {t})" for m, (s, t) in restored.items())
    return ok, f"dom={{b,c}} rejected ({', '.join(rejected)}); dom={{a,b,c}} {shown}"


def criterion_4():
    chain = fixtures.kb("CHN000")
    chain_v = {m: check_pair(chain, c("x", "isA", "level4"), c("x", "eq", "level0"), m).verdict for m in Mode}
    sng = fixtures.kb("SNG000")
    empty = denote(sng, c("x", "neq", "only"))
    sng_v = {m: check_pair(sng, c("x", "eq", "only"), c("x", "neq", "only"), m).verdict for m in Mode}
    nom = fixtures.kb("NOM000")
    nominal = all(denote(nom, c("x", "isA", v)) == denote(nom, c("x", "eq", v)) for v in nom.gamma)
    ok = (set(chain_v.values()) == {COM} and empty.is_empty and not empty.is_top
          and set(sng_v.values()) == {CON} and nominal)
    return ok, (f"chain {sorted({str(v) for v in chain_v.values()})}, neq on single concept "
                f"{'empty' if empty.is_empty else empty}, eq/neq {sorted({str(v) for v in sng_v.values()})}, "
                f"nominal isA==eq for {len(nom.gamma)} values: {nominal}")


def criterion_5(n=10_000, seed=5):
    rng = random.Random(seed)
    t0 = time.perf_counter()
    mismatches = {"open": 0, "closed": 0}
    ops_seen = set()
    for mode, max_c in (("open", 4), ("closed", 6)):
        for _ in range(n):
            kb = random_kb(rng, max_c)
            cs = [random_constraint(rng, kb) for _ in range(rng.randint(2, 3))]
            ops_seen |= {k.operator for k in cs}
            engine = check_group(kb, cs[:1], cs[1:], mode).verdict
            ref = oracle.enumeration_oracle(kb, cs) if mode == "open" else oracle.closed_oracle(kb, cs)
            mismatches[mode] += engine is not ref
    elapsed = time.perf_counter() - t0
    ok = not any(mismatches.values()) and len(ops_seen) == 8 and elapsed < 300
    return ok, (f"{n} open (|C|<=4, completions) + {n} closed (|C|<=6, set intersection) cases, "
                f"{len(ops_seen)} operators; mismatches open={mismatches['open']} closed={mismatches['closed']}; "
                f"{elapsed:.1f} s")


def _table(mode, vs):
    k_com, k_con, n = vs.count(COM), vs.count(CON), len(vs)
    if mode == "and":
        return COM if k_com == n else CON if k_con else UNK
    if mode == "or":
        return COM if k_com else CON if k_con == n else UNK
    return COM if k_com == 1 and k_con == n - 1 else CON if k_con == n else UNK


def criterion_6():
    cases = mismatches = 0
    for mode in ("and", "or", "xone"):
        for n in range(1, 5):
            for vs in itertools.product(list(Verdict), repeat=n):
                cases += 1
                mismatches += compose(mode, vs) is not _table(mode, list(vs))
    return mismatches == 0, f"{cases} verdict vectors (lengths 1-4, and/or/xone), {mismatches} mismatches"


def criterion_7(n=1_000, seed=7):
    rng = random.Random(seed)
    flips = checks = 0
    for _ in range(n):
        kb = random_kb(rng, 6)
        ext = random_extension(rng, kb)
        for _ in range(3):
            c1, c2 = random_constraint(rng, kb), random_constraint(rng, kb)
            for mode in Mode:
                before = check_pair(kb, c1, c2, mode).verdict
                checks += 1
                if before is not UNK and check_pair(ext, c1, c2, mode).verdict is not before:
                    flips += 1
    return flips == 0, f"{n} extensions, {checks} definite-or-not verdict checks, {flips} flips"


def criterion_8(n=1_000, seed=8):
    rng = random.Random(seed)
    into = {m: 0 for m in Mode}
    lost = {m: 0 for m in Mode}
    kept = {m: 0 for m in Mode}
    pairs = 0
    for _ in range(n):
        kb_a = random_kb(rng, 5, kb_id="S")
        kb_b, a = random_alignment(rng, kb_a)
        for _ in range(3):
            c1, c2 = random_constraint(rng, kb_a), random_constraint(rng, kb_a)
            pairs += 1
            for m in Mode:
                src, tgt = aligned_verdict(a, kb_a, kb_b, c1, c2, m)
                if tgt is CON and src is not CON:
                    into[m] += 1
                if src is CON and covered(a, kb_a, c1, m) and covered(a, kb_a, c2, m):
                    kept[m] += tgt is CON
                    lost[m] += tgt is not CON
    ok = not any(into.values()) and not any(lost.values())
    per = "; ".join(f"{m.value}: {into[m]} into CONFLICT, {kept[m]} covered conflicts kept, {lost[m]} lost"
                    for m in Mode)
    return ok, f"{n} valid alignments, {pairs} pairs; {per}"


def criterion_9():
    suite = build_builtin_suite()
    checked = bad = 0
    for p in suite:
        for m in Mode:
            if evaluate(p, m).verdict is CON:
                checked += 1
                bad += not soundness_check(p, m).ok
    return bad == 0, f"{checked} CONFLICT (problem, mode) cases enumerated, {bad} with a satisfying context"


def criterion_10():
    suite = build_builtin_suite()
    with tempfile.TemporaryDirectory() as tmp:
        report = run_suite(suite, Mode.OPEN, emit=True, out_dir=tmp)
        files = sum(1 for f in Path(tmp).rglob("*") if f.suffix in (".p", ".smt2"))
    s = report.stats()
    csa = ProverStatus.COUNTER_SAT.value
    degraded = [p for p in report.problems if p.problem_id in DEGRADATION_IDS]
    deg_ok = len(degraded) == len(DEGRADATION_IDS) and all(
        e.oracle_status == csa for p in degraded for e in p.emissions)
    ok = (len(suite) >= 150 and files >= 2 * len(suite) and s["epr_failures"] == 0
          and s["discordant"] == 0 and deg_ok)
    return ok, (f"{len(suite)} problems, {s['emissions']} units, {files} files written, "
                f"{s['epr_failures']} EPR failures, {s['concordant']}/{s['emissions']} concordant, "
                f"{len(degraded)} degradation problems countersatisfiable both ways: {deg_ok}")


CHECKS = {i: globals()[f"criterion_{i}"] for i in range(1, 11)}


@pytest.mark.parametrize("n", sorted(CHECKS))
def test_criterion(n):
    ok, detail = CHECKS[n]()
    ACCEPTANCE[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for n, check in CHECKS.items():
        ok, detail = check()
        failed += not ok
        print(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}", flush=True)
    raise SystemExit(1 if failed else 0)
