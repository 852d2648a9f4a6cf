"""Exactly-one composition needs negative knowledge.

An offer allows either commercial or non-commercial purposes, but not both
at once. A request for NonCommercialResearch satisfies one branch; whether
it provably misses the other depends on an explicit disjointness axiom.

    python demos/xone_asymmetry.py
"""

from odrlsem.bench import fixtures
from odrlsem.denotation import Constraint
from odrlsem.verdict import Composite, check_composite

kbs = {"purpose": fixtures.kb("DPV000")}
split = Composite("xone", (
    Constraint("purpose", "isA", "Commercial"),
    Constraint("purpose", "isA", "NonCommercial"),
))

for requested in ("NonCommercialResearch", "CommercialResearch"):
    res = check_composite(kbs, split, Constraint("purpose", "eq", requested))
    branches = ", ".join(str(r.verdict) for r in res.per_operand)
    print(f"{requested:<22} branches [{branches}] -> {res.verdict}")

# NonCommercialResearch is declared disjoint from Commercial, so the first
# branch is a definite CONFLICT and exactly one branch holds. Nothing rules
# CommercialResearch out of NonCommercial, so that branch stays UNKNOWN and
# the exactly-one reading cannot be confirmed.
