"""Finitely presented modules: presentations, kernels, tensor products, resolutions."""

from fiberflat import (
    ModuleMap,
    PolyRing,
    PresentedModule,
    PrimeField,
    QuotientRing,
    RingMap,
    base_change,
    free_resolution,
    kernel,
    tensor,
)

F = PrimeField(101)
A = QuotientRing(PolyRing(F, ["x", "y"]))
P = A.ambient

M = PresentedModule.cyclic(A, ["x", "y"])
print("M = A/(x, y):", M)
print("M (x) M:", tensor(M, M).pruned())

# multiplication by x on A as a map of free modules
mult = ModuleMap(PresentedModule.free(A, 1), PresentedModule.free(A, 1), [[P("x")]])
K, inclusion = kernel(mult)
print("kernel of x on A has rank", K.rank, "(x is a nonzerodivisor)")

# over the dual numbers A/(x^2) the resolution of A/(x) is periodic
D = QuotientRing(PolyRing(F, ["x"]), [PolyRing(F, ["x"])("x^2")])
res = free_resolution(PresentedModule.cyclic(D, ["x"]), 4)
print("ranks of the resolution of k over k[x]/(x^2):", res.ranks)

# base change along A -> A/(y)
B = QuotientRing(P, [P("y")])
f = RingMap(A, B, ["x", "0"])
print("M base changed to A/(y):", base_change(M, f).pruned())
