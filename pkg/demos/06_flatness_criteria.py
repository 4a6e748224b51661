"""Flatness testing and the fiber criteria, with reports."""

from fiberflat import (
    Ideal,
    ModuleMap,
    PolyRing,
    PresentedModule,
    PrimeField,
    QuotientRing,
    RingMap,
    check_fiber_flatness,
    check_local_criterion,
    check_pointwise_purity,
    check_tor_fiber_criterion,
    enumerate_primes,
    is_flat,
)

F = PrimeField(101)
B = PolyRing(F, ["t", "x"])
A = QuotientRing(B, [B("x^2 - x")])
R = QuotientRing(PolyRing(F, ["t"]))
f = RingMap(R, A, ["t"])

# A/(x) is a direct summand of A, so it is flat: its Fitting ideal is idempotent
M = PresentedModule.cyclic(A, ["x"])
print("A/(x) flat:", bool(is_flat(M)))
print("A/(t) flat:", bool(is_flat(PresentedModule.cyclic(A, ["t"]))))

primes = enumerate_primes(R, 1)
rep = check_fiber_flatness(f, M, primes)
print("fiber criterion: conclusion", rep.conclusion["verdict"], "consistency", rep.consistency["status"])

# a failing instance reports the first prime where a hypothesis breaks
N = PresentedModule.cyclic(A, ["t*x"])
rep = check_tor_fiber_criterion(f, N, primes)
bad = rep.failures()[0]
print(f"A/(tx): '{bad.name}' fails at {bad.prime}")

# local criterion over the dual numbers
D = QuotientRing(PolyRing(F, ["e", "y"]), [PolyRing(F, ["e", "y"])("e^2")])
rep = check_local_criterion(D, Ideal(D, ["e"]), PresentedModule.free(D, 1))
print("local criterion on a free module:", rep.conclusion["verdict"])

# pointwise purity of multiplication by e over k[e]/(e^2)
E = QuotientRing(PolyRing(F, ["e"]), [PolyRing(F, ["e"])("e^2")])
phi = ModuleMap(PresentedModule.free(E, 1), PresentedModule.free(E, 1), [[E.ambient("e")]])
print("e: E -> E pure:", check_pointwise_purity(phi).all_hold())
