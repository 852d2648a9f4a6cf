"""Why an alignment must map everything below a mapped grounding value.

Source KB WITA: a sits below both b and c. Target WITB mirrors it with x, y, z.
Mapping only b and c drops a, the one concept both constraints share.

    python demos/witness_loss.py
"""

from odrlsem.alignment import aligned_verdict, validate_alignment
from odrlsem.bench import fixtures
from odrlsem.denotation import Constraint, Mode

src, tgt = fixtures.kb("WITA"), fixtures.kb("WITB")
left, right = Constraint("l", "isA", "v_b"), Constraint("l", "isA", "v_c")

lossy = fixtures.alignment("WITA-WITB-lossy")
print("lossy alignment:", [str(v) for v in validate_alignment(lossy, src, tgt)])
src_v, tgt_v = aligned_verdict(lossy, src, tgt, left, right, Mode.CLOSED, validate=False)
print(f"  forced through anyway: source {src_v}, aligned {tgt_v}   <- a fabricated conflict")

full = fixtures.alignment("WITA-WITB")
print("full alignment:", validate_alignment(full, src, tgt) or "valid")
for mode in Mode:
    src_v, tgt_v = aligned_verdict(full, src, tgt, left, right, mode)
    print(f"  {mode.value:<6} source {src_v}, aligned {tgt_v}")

# Partial alignments stay usable: constraints reaching outside the mapped
# region fall back to UNKNOWN instead of inventing a conflict.
lng_a = fixtures.alignment("LNG001-LNG000")
v = aligned_verdict(lng_a, fixtures.kb("LNG001"), fixtures.kb("LNG000"),
                    Constraint("l", "eq", "fra"), Constraint("l", "isA", "gem"))
print(f"\nfra vs isA gem through a partial alignment: source {v.source}, aligned {v.aligned}")
