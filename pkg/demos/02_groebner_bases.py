"""Groebner bases, ideal operations and syzygies."""

from fiberflat import Ideal, PolyRing, PrimeField, QuotientRing, SubmoduleGens, reduced_gb

F = PrimeField(101)
P = PolyRing(F, ["x", "y"], "lex")
I = Ideal(P, [P("x - y^2"), P("y^3")])
print("lex GB of (x - y^2, y^3):", [str(g) for g in reduced_gb(I)])
print("x^2 reduces to", I.normal_form(P("x^2")))

# colon, saturation and elimination
P2 = PolyRing(F, ["t", "x"], "grevlex")
J = Ideal(P2, [P2("t*x"), P2("x^2")])
print("(tx, x^2) : t =", J.colon(Ideal(P2, [P2("t")])))
print("saturation by t:", J.saturate(P2("t")))
print("eliminate t from (x - t^2, t^3 - 1):", Ideal(P2, [P2("x - t^2"), P2("t^3 - 1")]).eliminate(["t"]))

# computing in a quotient ring
A = QuotientRing(P2, [P2("x^2 - x")])
print("x^3 in", A, "is", A.reduce(P2("x^3")))

# syzygies of (x, t) in A
S = SubmoduleGens(A, 1, [(P2("x"),), (P2("t"),)])
print("syzygies of (x, t):", [tuple(str(p) for p in v) for v in S.syzygies().reduced_generators()])
