"""Tor and torsion submodules."""

from fiberflat import PolyRing, PresentedModule, PrimeField, QuotientRing, RingMap, tor, torsion_decompose
from fiberflat.homology import torsion_localizes

F = PrimeField(101)
A = QuotientRing(PolyRing(F, ["x"]))
k = PresentedModule.cyclic(A, ["x"])
for i in range(3):
    print(f"Tor_{i}(k, k) over k[x] is zero:", tor(i, k, k).is_zero)

# torsion of k[t, x]/(t*x) over k[t]: x is killed by t
R = QuotientRing(PolyRing(F, ["t"]))
B = PolyRing(F, ["t", "x"])
A2 = QuotientRing(B, [B("t*x")])
f = RingMap(R, A2, ["t"])
d = torsion_decompose(PresentedModule.free(A2, 1), f)
print("torsion generators:", [str(v[0]) for v in d.generators], "killed by", d.witness)
print("torsionfree part:", d.torsionfree)

# torsion commutes with inverting an element of A
print("t(A)_g = t(A_g) for g = x + 1:", torsion_localizes(f, B("x + 1")).holds)
