"""Primes of small base rings, residue fields and fibers."""

from fiberflat import PolyRing, PrimeField, QuotientRing, RingMap, enumerate_primes, fiber, residue_field

F = PrimeField(101)
R = QuotientRing(PolyRing(F, ["t"]))
primes = enumerate_primes(R, 2)
print(f"primes of F_101[t] up to degree 2: {len(primes)} (complete: {primes.complete})")
print("first few:", [p.describe() for p in primes[:4]])

# a reducible modulus gives a finite, complete spectrum
S = QuotientRing(PolyRing(F, ["t"]), [PolyRing(F, ["t"])("t^2 - 1")])
print("Spec F_101[t]/(t^2 - 1):", [p.describe() for p in enumerate_primes(S)])

# residue field at an irreducible quadratic, and the fiber of k[t] -> k[t, x]/(x^2 - t)
p = next(q for q in primes if q.describe() == "(t^2 + 2)")
print("residue field at (t^2 + 2):", residue_field(p).field)
B = PolyRing(F, ["t", "x"])
f = RingMap(R, QuotientRing(B, [B("x^2 - t")]), ["t"])
print("fiber over (t):", fiber(f, primes[1]).ring)
