"""A library offers a dataset for non-commercial use in Europe, in German.

A French research group asks for it. Which dimension blocks the request,
and does the answer change when the knowledge bases are read as complete?

    python demos/library_request.py
"""

from pathlib import Path

from odrlsem.denotation import Mode
from odrlsem.policy_io import load_kbdir, parse_context_file, parse_policy_file
from odrlsem.runtime import satisfies_composite
from odrlsem.verdict import check_composite

DATA = Path(__file__).parent / "data"

kbs = load_kbdir(DATA)
offer = parse_policy_file(DATA / "library_offer.json")
request = parse_policy_file(DATA / "research_request.json")

for mode in Mode:
    res = check_composite(kbs, offer, request, mode)
    print(f"{mode.value} world: {res.verdict}, blocked by {', '.join(res.blocking)}")
    for row in res.per_operand:
        note = f" (e.g. {row.witness})" if row.witness else ""
        print(f"  {row.operand:<9} {row.verdict}{note}")

# The purpose KB never states that scientific research is commercial or not.
# Open mode keeps that question open, closed mode treats the silence as "no".
# Either way the language dimension alone rules the request out.

ctx = parse_context_file(DATA / "context.json")
print("\na Bavarian non-commercial research request in Austrian German:",
      "admitted" if satisfies_composite(kbs, ctx, offer) else "denied")
