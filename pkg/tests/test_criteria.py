import pytest
from hypothesis import given, settings, strategies as st

from fiberflat import (
    CriterionInapplicable,
    ModuleMap,
    PresentedModule,
    RingMap,
    check_fiber_faithful_flatness,
    check_fiber_flatness,
    check_fiber_purity,
    check_local_criterion,
    check_local_flatness_consequences,
    check_nzd_reduction,
    check_pointwise_purity,
    check_pure_subalgebra,
    check_tor_fiber_criterion,
    check_tor_fiber_criterion_ideals,
    enumerate_primes,
    is_faithfully_flat,
    is_flat,
    is_pure_into_flat,
)
from fiberflat.criteria import (
    FAILS,
    FIBER_FLAT,
    LOCAL_FLAT,
    LOCAL_TOR,
    NZD_TOR,
    POINT_INJ,
    PURE_I,
    SUB_PURE,
    TOR_IDEAL,
    TOR_PRIME,
    TOR_TF,
    fitting_ideal,
)
from fiberflat.groebner import Ideal
from fiberflat.homology import tor
from fiberflat.spectra import principal_prime, zero_prime

from conftest import ring


def failing_rechecks(report):
    return all(h.recheck() == FAILS for h in report.failures() if h.recheck is not None)


# oracle ---------------------------------------------------------------------


def test_free_module_is_flat():
    A = ring(["x", "y"])
    assert is_flat(PresentedModule.free(A, 3))


def test_cyclic_module_is_not_flat():
    A = ring(["x"])
    cert = is_flat(PresentedModule.cyclic(A, ["x"]))
    assert not cert
    assert cert.failing_index == 0 and str(cert.witness) == "x"
    assert cert.recheck() is False
    assert str(fitting_ideal(PresentedModule.cyclic(A, ["x"]), 0).reduced_generators()[0]) == "x"


def test_M4_is_not_flat():
    from fiberflat import TruncatedExample

    ex = TruncatedExample(4)
    assert not is_flat(ex.M)


def test_idempotent_quotient_is_flat():
    # A/(e) with e idempotent is projective
    A = ring(["x"], ["x^2 - x"])
    assert is_flat(PresentedModule.cyclic(A, ["x"]))
    assert not is_faithfully_flat(PresentedModule.cyclic(A, ["x"]))


def test_faithful_flatness():
    A = ring(["x"])
    assert is_faithfully_flat(PresentedModule.free(A, 1))
    # A ⊕ A/(1) is A
    P = A.ambient
    M = PresentedModule(A, 2, [(P.zero, P.one)])
    assert is_faithfully_flat(M)
    zero = PresentedModule(A, 1, [(P.one,)])
    assert is_flat(zero) and not is_faithfully_flat(zero)


def test_laurent_doubling_is_faithfully_flat():
    from fiberflat import pushforward

    R = ring(["v", "vi"], ["v*vi - 1"])
    B = ring(["u", "ui"], ["u*ui - 1"])
    M, _ = pushforward(RingMap(R, B, ["u^2", "ui^2"]))
    assert is_faithfully_flat(M)


# local criterion -------------------------------------------------------------


def test_local_criterion_free():
    A = ring(["x"])
    rep = check_local_criterion(A, Ideal(A, ["x"]), PresentedModule.free(A, 1))
    assert rep.conditions(LOCAL_FLAT)[0].holds and rep.conditions(LOCAL_TOR)[0].holds


def test_local_criterion_detects_tor():
    A = ring(["x"])
    rep = check_local_criterion(A, Ideal(A, ["x"]), PresentedModule.cyclic(A, ["x"]))
    assert rep.conditions(LOCAL_TOR)[0].fails
    assert failing_rechecks(rep)


def test_local_criterion_over_dual_numbers():
    A = ring(["e"], ["e^2"])
    rep = check_local_criterion(A, Ideal(A, ["e"]), PresentedModule.cyclic(A, ["e"]))
    assert rep.conditions(LOCAL_TOR)[0].fails
    assert rep.conditions(LOCAL_FLAT)[0].fails
    assert rep.consistency["status"] == "consistent"


@pytest.mark.parametrize(
    "names,rels,gens",
    [(["x", "y"], [], ["x"]), (["x"], [], None)],
)
def test_local_flatness_consequences(names, rels, gens):
    A = ring(names, rels)
    M = PresentedModule.free(A, 1 if gens else 2)
    samples = [PresentedModule.cyclic(A, ["x^2"]), PresentedModule.cyclic(A, ["x"])]
    rep = check_local_flatness_consequences(A, Ideal(A, ["x"]), M, 3, samples)
    assert rep.conclusion_holds and rep.all_hold()


def test_local_flatness_consequences_skip_on_failed_hypotheses():
    A = ring(["x"])
    rep = check_local_flatness_consequences(A, Ideal(A, ["x"]), PresentedModule.cyclic(A, ["x"]))
    assert rep.conclusion["verdict"] == "not-checkable"


# fiber flatness --------------------------------------------------------------


def base_and_polynomial():
    R = ring(["t"])
    A = ring(["t", "x"])
    return R, A, RingMap(R, A, ["t"])


def test_fiber_flatness_free():
    R, A, f = base_and_polynomial()
    rep = check_fiber_flatness(f, PresentedModule.free(A, 1))
    assert rep.all_hold() and rep.conclusion_holds


def test_fiber_flatness_fails_for_graph_module():
    R, A, f = base_and_polynomial()
    rep = check_fiber_flatness(f, PresentedModule.cyclic(A, ["x - t"]))
    fibers = rep.conditions(FIBER_FLAT)
    assert fibers and all(h.fails for h in fibers)
    assert not rep.conclusion_holds
    assert failing_rechecks(rep)


def test_fiber_flatness_over_artinian_base_is_complete():
    R = ring(["e"], ["e^2"])
    A = ring(["e", "x"], ["e^2"])
    f = RingMap(R, A, ["e"])
    rep = check_fiber_flatness(f, PresentedModule.free(A, 1))
    assert rep.complete and rep.consistency["sufficiency"] == "verified"
    rep = check_fiber_flatness(f, PresentedModule.cyclic(A, ["e"]))
    assert not rep.conclusion_holds and not rep.all_hold()


def test_fiber_faithful_flatness():
    R, A, f = base_and_polynomial()
    assert check_fiber_faithful_flatness(f, PresentedModule.free(A, 1)).all_hold()


def test_tor_fiber_criterion_free():
    R, A, f = base_and_polynomial()
    rep = check_tor_fiber_criterion(f, PresentedModule.free(A, 2))
    assert rep.all_hold() and rep.conclusion_holds


def test_tor_fiber_criterion_on_truncation():
    from fiberflat import TruncatedExample

    ex = TruncatedExample(4)
    R = ex.f.source
    primes = [zero_prime(R), principal_prime(R, "t"), principal_prime(R, "t - 1")]
    rep = check_tor_fiber_criterion(ex.f, ex.M, primes)
    # the special fiber is not flat, and Tor_1(A_tf, M) survives at the generic point
    assert [(h.prime, h.name) for h in rep.failures()] == [("(0)", TOR_TF), ("(t)", FIBER_FLAT)]
    assert failing_rechecks(rep)
    assert not rep.conclusion_holds


def test_tor_fiber_criterion_ideals():
    R, A, f = base_and_polynomial()
    corpus = [Ideal(R, ["t^2"]), Ideal(R, ["t*(t - 1)"])]
    rep = check_tor_fiber_criterion_ideals(f, PresentedModule.free(A, 1), corpus)
    assert rep.all_hold()
    rep = check_tor_fiber_criterion_ideals(f, PresentedModule.cyclic(A, ["t^2 + 1"]), [Ideal(R, ["t^2 + 1"])], [])
    bad = [h for h in rep.conditions(TOR_IDEAL) if h.fails]
    assert bad and bad[0].prime == "(t^2 + 1)"


def test_nzd_reduction():
    A = ring(["x", "y"])
    samples = [PresentedModule.cyclic(A, ["x", "y^2"]), PresentedModule.cyclic(A, ["x"])]
    rep = check_nzd_reduction(A, "x", PresentedModule.free(A, 1), samples)
    assert rep.conclusion_holds
    B = ring(["x"])
    rep = check_nzd_reduction(B, "x", PresentedModule.cyclic(B, ["x"]))
    assert rep.conditions(NZD_TOR)[0].fails
    assert rep.conclusion["verdict"] == "not-checkable"


# purity ---------------------------------------------------------------------


def test_purity_examples():
    R = ring(["t"])
    F1 = PresentedModule.free(R, 1)
    assert is_pure_into_flat(ModuleMap.identity(F1))
    v = is_pure_into_flat(ModuleMap.multiplication(F1, "t"))
    assert v.injective and not v
    P = R.ambient
    inc = ModuleMap(F1, PresentedModule.free(R, 2), [[P.one], [P.zero]])
    assert is_pure_into_flat(inc)


def test_purity_needs_flat_target():
    A = ring(["x"])
    M = PresentedModule.cyclic(A, ["x"])
    with pytest.raises(CriterionInapplicable):
        is_pure_into_flat(ModuleMap.identity(M))


def test_fiber_purity_of_multiplication_by_nilpotent():
    A = ring(["e"], ["e^2"])
    F1 = PresentedModule.free(A, 1)
    rep = check_fiber_purity(RingMap.identity(A), ModuleMap.multiplication(F1, "e"))
    assert rep.conditions(PURE_I)[0].fails
    assert not rep.conclusion_holds
    assert failing_rechecks(rep)


def test_pointwise_purity():
    R = ring(["t"])
    P = R.ambient
    F1 = PresentedModule.free(R, 1)
    inc = ModuleMap(F1, PresentedModule.free(R, 2), [[P.one], [P.zero]])
    rep = check_pointwise_purity(inc)
    assert rep.all_hold() and rep.conclusion_holds
    rep = check_pointwise_purity(ModuleMap.multiplication(F1, "t"))
    bad = [h.prime for h in rep.failures()]
    assert bad == ["(t)"] and rep.failures()[0].name == POINT_INJ


# pure subalgebras ------------------------------------------------------------


def test_doubling_subalgebra():
    R = ring(["v", "vi"], ["v*vi - 1"])
    B = ring(["u", "ui"], ["u*ui - 1"])
    rep = check_pure_subalgebra(RingMap(R, B, ["u^2", "ui^2"]))
    clauses = rep.consistency["clauses"]
    assert set(clauses.values()) == {"holds"}


def test_non_injective_quotient_is_not_pure():
    R = ring(["u", "ui"], ["u*ui - 1"])
    S = ring(["s"], ["s^2 - 1"])
    rep = check_pure_subalgebra(RingMap(R, S, ["s", "s"]))
    assert rep.consistency["clauses"][SUB_PURE] == FAILS


def test_identity_subalgebra():
    R = ring(["u", "ui"], ["u*ui - 1"])
    rep = check_pure_subalgebra(RingMap.identity(R))
    assert all(v == "holds" for v in rep.consistency["clauses"].values())
    assert rep.consistency["equivalence"] == "verified"


# properties ------------------------------------------------------------------

# zero coefficients are common so that non-unit ideals show up
c = st.one_of(st.just(0), st.integers(0, 100))


def rand_poly(P, names, coeffs):
    mons = ["1"] + names + [f"{a}*{b}" for a in names for b in names if a <= b]
    return sum((P(k) * P(m) for k, m in zip(coeffs, mons)), P.zero)


@settings(max_examples=25)
@given(st.lists(st.lists(c, min_size=1, max_size=3), min_size=1, max_size=2))
def test_fitting_oracle_matches_idempotence_and_tor(data):
    A = ring(["e"], ["e^3"])
    P = A.ambient
    J = [rand_poly(P, ["e"], cs) for cs in data]
    M = PresentedModule.cyclic(A, J)
    I = Ideal(A, J)
    square = Ideal(A, [a * b for a in J for b in J])
    flat = bool(is_flat(M))
    assert flat == (square == I)
    kk = PresentedModule.cyclic(A, ["e"])
    assert flat == tor(1, kk, M).is_zero


@settings(max_examples=20)
@given(st.lists(st.lists(c, min_size=1, max_size=3), min_size=1, max_size=2))
def test_necessity_of_fiber_conditions(data):
    R, A, f = base_and_polynomial()
    P = A.ambient
    J = [rand_poly(P, ["t", "x"], cs) for cs in data]
    M = PresentedModule.cyclic(A, J)
    # raises ConsistencyViolation if a necessary condition fails on a flat module
    rep = check_tor_fiber_criterion(f, M, enumerate_primes(R, 1).primes[:4])
    if rep.conclusion_holds:
        assert rep.all_hold([TOR_PRIME, FIBER_FLAT])
    assert failing_rechecks(rep)


@settings(max_examples=20)
@given(st.lists(st.lists(c, min_size=1, max_size=3), min_size=1, max_size=2))
def test_artinian_equivalence(data):
    R = ring(["e"], ["e^2"])
    A = ring(["e", "x"], ["e^2"])
    f = RingMap(R, A, ["e"])
    P = A.ambient
    M = PresentedModule.cyclic(A, [rand_poly(P, ["e", "x"], cs) for cs in data])
    rep = check_tor_fiber_criterion(f, M)
    assert rep.complete
    assert rep.all_hold([TOR_PRIME, FIBER_FLAT]) == bool(is_flat(M))


@settings(max_examples=20)
@given(st.lists(c, min_size=2, max_size=2), st.lists(c, min_size=2, max_size=2))
def test_purity_oracle_coherence(a, b):
    R = ring(["e"], ["e^2"])
    P = R.ambient
    F1 = PresentedModule.free(R, 1)
    col = [[P(a[0]) + P(a[1]) * P("e")], [P(b[0]) + P(b[1]) * P("e")]]
    phi = ModuleMap(F1, PresentedModule.free(R, 2), col)
    rep = check_pointwise_purity(phi)
    assert rep.all_hold() == bool(is_pure_into_flat(phi))
