from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fiberflat import FieldElem, PrimeField, RationalFunctions, Rationals, SimpleExtension, field_arith
from fiberflat.fields import is_irreducible, monic_irreducibles, necklace_count

F7 = PrimeField(7)
F101 = PrimeField(101)


def el(F, raw):
    return FieldElem(F, F.coerce(raw))


@pytest.mark.parametrize("n", [0, 1, 4, 100, 2**31 + 11])
def test_prime_field_rejects_bad_moduli(n):
    with pytest.raises(ValueError):
        PrimeField(n)


def test_prime_field_division():
    # 5 * 2 = 10 = 3 mod 7
    assert field_arith(el(F7, 3), el(F7, 5), "div") == 2


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        field_arith(el(F7, 3), el(F7, 0), "div")
    Q = Rationals()
    with pytest.raises(ZeroDivisionError):
        el(Q, 1) / el(Q, 0)


def test_field_mismatch():
    with pytest.raises(ValueError):
        field_arith(el(F7, 1), el(F101, 1), "add")


def test_rationals_exact():
    Q = Rationals()
    a = FieldElem(Q, Fraction(1, 3))
    b = FieldElem(Q, Fraction(1, 6))
    assert (a + b).raw == Fraction(1, 2)
    assert str(a - b) == "1/6"


def test_rational_function_cancellation():
    Q = Rationals()
    K = RationalFunctions(Q, "t")
    num = FieldElem(K, K.from_polys([-1, 0, 1]))  # t^2 - 1
    den = FieldElem(K, K.from_polys([-1, 1]))  # t - 1
    q = num / den
    assert q == FieldElem(K, K.from_polys([1, 1]))
    assert q.raw[1] == (Fraction(1),)


def test_rational_function_denominator_normalized():
    K = RationalFunctions(F101, "t")
    a = FieldElem(K, K.from_polys([2], [0, 4]))  # 2 / (4t)
    num, den = a.raw
    assert den[-1] == 1
    assert FieldElem(K, K.from_polys([1], [0, 2])) == a


def test_simple_extension_reduction():
    F5 = PrimeField(5)
    K = SimpleExtension(F5, "a", (2, 0, 1))  # a^2 + 2
    a = FieldElem(K, K.generator("a"))
    assert a * a == 3


def test_simple_extension_division_round_trip():
    K = SimpleExtension(PrimeField(3), "a", (1, 0, 1))  # F_9
    a = FieldElem(K, K.generator("a"))
    x = a + 2
    assert (1 / x) * x == 1


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        SimpleExtension(F101, "a", (-1, 0, 1))


def test_nesting_depth_capped():
    K1 = RationalFunctions(F101, "s")
    K2 = RationalFunctions(K1, "u")
    with pytest.raises(Exception):
        RationalFunctions(K2, "w")


@pytest.mark.parametrize("p, n", [(2, 1), (2, 2), (2, 3), (3, 2), (5, 3), (7, 4)])
def test_irreducible_count_matches_necklace_formula(p, n):
    assert len(list(monic_irreducibles(PrimeField(p), n))) == necklace_count(p, n)


def test_irreducibility_over_rationals():
    Q = Rationals()
    assert is_irreducible(Q, [Fraction(-2), 0, 1])
    assert not is_irreducible(Q, [Fraction(-4), 0, 1])


elements = st.integers(min_value=0, max_value=100)


@given(elements, elements, elements)
def test_prime_field_laws(a, b, c):
    x, y, z = el(F101, a), el(F101, b), el(F101, c)
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    if b:
        assert (x / y) * y == x


coeffs = st.lists(st.integers(-5, 5), min_size=1, max_size=4)


@given(coeffs, coeffs, coeffs)
def test_rational_functions_canonical(n1, d1, n2):
    K = RationalFunctions(F101, "t")
    if not any(c % 101 for c in d1):
        d1 = [1]
    a = FieldElem(K, K.from_polys(n1, d1))
    b = FieldElem(K, K.from_polys(n2))
    s = a + b - b
    assert s == a
    num, den = s.raw
    assert den[-1] == 1
