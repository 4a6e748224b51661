"""The truncated counterexample and diagonalizable group demos."""

from fiberflat import (
    TruncatedExample,
    audit_truncation,
    verify_claim_a,
    verify_claim_b,
    verify_claim_c_boundary,
    verify_claim_d,
)
from fiberflat.gallery import doubling_demo, torsion_quotient_demo

for d in (3, 4, 5):
    ex = TruncatedExample(d)
    claims = [verify_claim_a(d), verify_claim_b(d), verify_claim_c_boundary(d), verify_claim_d(d)]
    print(ex, {c.claim: c.verdict for c in claims},
          "boundary discrepancy", claims[2].details["discrepancy"])

rep = audit_truncation(4)
print("audit at d = 4, failing conditions:", [(h.prime, h.name) for h in rep.failures()])

print("Z -> Z, n -> 2n:", doubling_demo().consistency["clauses"])
print("Z -> Z/2:", torsion_quotient_demo().consistency["clauses"])
