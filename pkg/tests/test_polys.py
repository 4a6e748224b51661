from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fiberflat import ParseError, PolyRing, PrimeField, Rationals, parse_polynomial, poly_arith
from fiberflat.polys import BlockOrder, GRevLex, Lex

F101 = PrimeField(101)
Q = Rationals()


def test_cancellation_over_rationals():
    P = PolyRing(Q, ["x", "y"])
    assert poly_arith(P("x + y"), P("x - y"), "add") == P("2*x")


def test_zero_absorbs():
    P = PolyRing(F101, ["x", "y"])
    assert poly_arith(P("x^3 - 7*y"), P.zero, "mul").is_zero()


def test_hand_expansion():
    P = PolyRing(F101, ["t", "x1", "x2"])
    got = poly_arith(P("x1 - t*x2"), P("t"), "mul")
    assert got == P("t*x1 - t^2*x2")


def test_ring_mismatch():
    P = PolyRing(F101, ["x"])
    S = PolyRing(F101, ["y"])
    with pytest.raises(ValueError):
        poly_arith(P("x"), S("y"), "add")


@pytest.mark.parametrize(
    "text, message",
    [
        ("2x", "implicit multiplication"),
        ("x y", "implicit multiplication"),
        ("x**2", "unexpected token"),
        ("x^y", "exponent"),
        ("(x + 1", "expected ')'"),
        ("z + 1", "unknown variable"),
        ("", "empty"),
        ("x / y", "division"),
    ],
)
def test_parse_errors(text, message):
    P = PolyRing(F101, ["x", "y"])
    with pytest.raises(ParseError) as info:
        parse_polynomial(text, P)
    assert message in str(info.value)


def test_parse_error_location():
    P = PolyRing(F101, ["x", "y"])
    with pytest.raises(ParseError) as info:
        parse_polynomial("x + 3 z", P)
    assert (info.value.line, info.value.column) == (1, 7)


def test_division_by_constant():
    P = PolyRing(Q, ["x"])
    assert P("x/2").lead_coeff == Fraction(1, 2)
    assert PolyRing(F101, ["x"])("x/2") == PolyRing(F101, ["x"])("51*x")


def test_printing():
    P = PolyRing(F101, ["t", "x"])
    assert str(P("t^2*x - 3*x + 1")) == "t^2*x - 3*x + 1"
    assert str(P("0")) == "0"


def test_duplicate_variables_rejected():
    with pytest.raises(ValueError):
        PolyRing(F101, ["x", "x"])


def test_terms_strictly_descending():
    P = PolyRing(F101, ["x", "y", "z"], "lex")
    keys = [P.order.key(e) for e, _ in P("z^5 + x*y + y^3 + x").sorted_terms()]
    assert keys == sorted(keys, reverse=True) and len(set(keys)) == len(keys)


exps = st.tuples(*[st.integers(0, 4)] * 3)
orders = st.sampled_from([Lex(), GRevLex(), BlockOrder((1, 2)), BlockOrder((2, 1))])


@given(orders, exps, exps, exps)
def test_order_is_multiplicative(order, a, b, m):
    if a == b:
        return
    lo, hi = sorted([a, b], key=order.key)
    shift = lambda e: tuple(x + y for x, y in zip(e, m))
    assert order.key(shift(lo)) < order.key(shift(hi))


@given(orders, exps, exps)
def test_order_is_total(order, a, b):
    ka, kb = order.key(a), order.key(b)
    assert (ka == kb) == (a == b)


monomial = st.tuples(st.integers(-50, 50), st.integers(0, 3), st.integers(0, 3))
polys = st.lists(monomial, max_size=5)


def build(P, spec):
    out = P.zero
    for c, i, j in spec:
        out = out + P(c) * P.gen(0) ** i * P.gen(1) ** j
    return out


@given(polys, polys)
def test_canonical_structure(a, b):
    P = PolyRing(F101, ["x", "y"])
    p, q = build(P, a), build(P, b)
    r = p + q - q
    assert r == p
    assert r.terms == p.terms
    assert all(c != 0 for c in r.terms.values())


@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    P = PolyRing(F101, ["x", "y"])
    p, q, r = build(P, a), build(P, b), build(P, c)
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p


@given(polys)
def test_print_parse_round_trip(a):
    P = PolyRing(F101, ["x", "y"])
    p = build(P, a)
    assert P(str(p)) == p
