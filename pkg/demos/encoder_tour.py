"""Emit a constraint pair as first-order problems and decide them locally.

Each verdict corresponds to a pair of queries: "some value satisfies both"
and "no value satisfies both". Whichever is provable settles the verdict;
if neither is, the answer is UNKNOWN.

    python demos/encoder_tour.py [OUT_DIR]
"""

import sys
import tempfile
from pathlib import Path

from odrlsem.bench import fixtures
from odrlsem.denotation import Constraint
from odrlsem.encoder import Polarity, emit_problem, epr_check, interpret_result, write_problem
from odrlsem.groundsat import ground_status
from odrlsem.verdict import check_pair

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="odrlsem-"))
cases = [
    ("LNG000", Constraint("l", "isA", "de"), Constraint("l", "eq", "fr")),
    ("LNG000", Constraint("l", "isA", "de"), Constraint("l", "eq", "de-AT")),
    ("DPV000", Constraint("p", "isA", "NonCommercial"), Constraint("p", "eq", "ScientificResearch")),
]

for kb_id, left, right in cases:
    kb = fixtures.kb(kb_id)
    print(f"{kb_id}: {left}  vs  {right}  -> engine {check_pair(kb, left, right).verdict}")
    for pol in Polarity:
        pid = f"{kb_id}_{left.values[0]}_{right.values[0]}_{pol.name.lower()}"
        problem = emit_problem(kb, left, right, pol, pid)
        tptp, _ = write_problem(problem, out)
        status = ground_status(problem)
        print(f"  {pol.value:<15} EPR {'ok' if epr_check(problem).ok else 'VIOLATED'}, "
              f"{status} -> {interpret_result(status.value, pol)}   ({tptp.name})")

print(f"\nTPTP and SMT-LIB files in {out}")
lines = (out / "LNG000_de_fr_conflict.p").read_text().splitlines()
facts = [ln for ln in lines if ln.startswith("fof(") and "[X" not in ln and "conjecture" not in ln]
print(f"LNG000_de_fr_conflict.p without its {len(facts)} ground facts:\n")
print("\n".join(ln for ln in lines if ln not in facts))
