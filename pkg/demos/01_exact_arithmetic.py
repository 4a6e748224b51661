"""Exact coefficient fields and sparse polynomials.

Everything downstream runs over one of these fields, so no floating point
ever enters a Groebner basis.
"""

from fractions import Fraction

from fiberflat import FieldElem, PolyRing, PrimeField, RationalFunctions, Rationals, SimpleExtension

F101 = PrimeField(101)
a = FieldElem(F101, F101.coerce(3))
print("1/3 in F_101 =", 1 / a)

Q = Rationals()
print("1/3 + 1/6 over QQ =", FieldElem(Q, Fraction(1, 3)) + FieldElem(Q, Fraction(1, 6)))

# F_9 as F_3[a]/(a^2 + 1)
F9 = SimpleExtension(PrimeField(3), "a", (1, 0, 1))
g = FieldElem(F9, F9.generator("a"))
print("in F_9, a^2 =", g * g, " and (a + 2)^-1 =", 1 / (g + 2))

# k(t): fractions are kept in lowest terms
K = RationalFunctions(Q, "t")
num = FieldElem(K, K.from_polys([-1, 0, 1]))
den = FieldElem(K, K.from_polys([-1, 1]))
print("(t^2 - 1)/(t - 1) =", num / den)

P = PolyRing(F101, ["x", "y"], "grevlex")
f = P("(x + y)^3 - x*y")
print("f =", f, "  total degree", f.total_degree())
