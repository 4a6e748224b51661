import pytest
import sympy
from hypothesis import given, settings, strategies as st

from fiberflat import PresentedModule, PrimeField, RingMap, UnsupportedError, enumerate_primes, fiber, residue_field
from fiberflat.fields import RationalFunctions, SimpleExtension
from fiberflat.spectra import (
    base_shape,
    maximal_linear,
    principal_prime,
    user_prime,
    verify_certificate,
    zero_prime,
)

from conftest import ring


def necklace(q, n):
    # independent oracle: Moebius inversion via sympy
    return sum(sympy.mobius(d) * q ** (n // d) for d in sympy.divisors(n)) // n


def test_F2_primes_to_degree_two():
    R = ring(["t"], field=PrimeField(2))
    primes = enumerate_primes(R, 2)
    assert [p.describe() for p in primes] == ["(0)", "(t)", "(t + 1)", "(t^2 + t + 1)"]
    assert not primes.complete


def test_artinian_and_field_spectra():
    D = ring(["e"], ["e^2"])
    primes = enumerate_primes(D)
    assert primes.complete and [p.describe() for p in primes] == ["(e)"]
    k = ring([])
    primes = enumerate_primes(k)
    assert primes.complete and [p.describe() for p in primes] == ["(0)"]
    # t^2 - 1 = (t - 1)(t + 1) splits the artinian base into two points
    S = ring(["t"], ["t^2 - 1"])
    assert sorted(p.describe() for p in enumerate_primes(S)) == ["(t + 1)", "(t - 1)"]


def test_base_shapes():
    assert base_shape(ring([])) == "field"
    assert base_shape(ring(["t"])) == "pid"
    # -2 is a non-square mod 101 while -1 is a square
    assert base_shape(ring(["t"], ["t^2 + 2"])) == "field-ext"
    assert base_shape(ring(["t"], ["t^2 + 1"])) == "artinian"
    assert base_shape(ring(["t"], ["t^3"])) == "artinian"
    assert base_shape(ring(["s", "t"])) == "polynomial"
    assert base_shape(ring(["t"], ["1"])) == "zero"


def test_unsupported_enumeration():
    with pytest.raises(UnsupportedError):
        enumerate_primes(ring(["s", "t"]))


@pytest.mark.parametrize("p,d", [(2, 5), (3, 4), (5, 3), (101, 2)])
def test_counts_match_necklace_formula(p, d):
    R = ring(["t"], field=PrimeField(p))
    primes = enumerate_primes(R, d)
    for k in range(1, d + 1):
        got = sum(1 for q in primes if q.generators() and q.generators()[0].total_degree() == k)
        assert got == necklace(p, k)


def test_F101_degree_two_count():
    # (0) plus 101 linear plus 5050 quadratic
    assert len(enumerate_primes(ring(["t"]), 2)) == 5152


def test_every_enumerated_prime_certifies():
    R = ring(["t"], field=PrimeField(3))
    for p in enumerate_primes(R, 3):
        assert p.checked and verify_certificate(p)


def test_certificates_reject_bad_data():
    R = ring(["t"])
    with pytest.raises(ValueError):
        principal_prime(R, "t^2 - 1")
    with pytest.raises(ValueError):
        zero_prime(ring(["t"], ["t^2"]))
    assert maximal_linear(ring(["x", "y"]), (1, 2)).is_maximal()
    q = user_prime(ring(["x", "y"]), ["x"])
    assert q.user_asserted and not q.checked


def test_residue_fields():
    R = ring(["t"])
    rf = residue_field(zero_prime(R))
    assert isinstance(rf.field, RationalFunctions)
    rf = residue_field(principal_prime(R, "t - 3"))
    assert rf.field == R.field
    assert rf.projection.images[0].constant_coeff() == R.field.coerce(3)
    assert rf.spot_check([R.ambient("t^5 + 7*t"), R.ambient("t - 3")])


def test_residue_field_F9():
    F3 = PrimeField(3)
    R = ring(["t"], field=F3)
    rf = residue_field(principal_prime(R, "t^2 + 1"))
    K = rf.field
    assert isinstance(K, SimpleExtension) and K.degree == 2
    a = K.generator("t")
    assert K.mul(a, a) == K.coerce(2)
    # nine elements, every nonzero one invertible
    elems = [K.add(K.coerce(i), K.mul(K.coerce(j), a)) for i in range(3) for j in range(3)]
    assert len(set(elems)) == 9
    assert all(K.mul(x, K.inv(x)) == K.one for x in elems if not K.is_zero(x))


def test_residue_field_of_user_prime_is_unavailable():
    with pytest.raises(UnsupportedError):
        residue_field(user_prime(ring(["x", "y"]), ["x"]))


def test_fiber_routes():
    R = ring(["t"])
    A = ring(["t", "x"], ["t*x - 1"])
    f = RingMap(R, A, ["t"])
    special = fiber(f, principal_prime(R, "t"))
    assert special.route == "quotient" and special.ring.modulus.is_unit()
    generic = fiber(f, zero_prime(R))
    assert generic.route == "residue" and not generic.ring.modulus.is_unit()
    M = generic.module(PresentedModule.free(A, 1))
    assert M.rank == 1


@settings(max_examples=30)
@given(st.integers(0, 100), st.lists(st.integers(0, 100), min_size=1, max_size=4))
def test_projection_respects_normal_forms(a, coeffs):
    R = ring(["t"])
    P = R.ambient
    rf = residue_field(principal_prime(R, P("t") - P(a)))
    poly = sum((P(c) * P("t") ** i for i, c in enumerate(coeffs)), P.zero)
    assert rf.spot_check([poly])
    # evaluation at t = a
    val = sum(c * a ** i for i, c in enumerate(coeffs)) % 101
    assert rf.projection(poly).constant_coeff() == R.field.coerce(val)
