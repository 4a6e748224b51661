import pytest
from hypothesis import given, settings, strategies as st

from fiberflat import (
    ModuleMap,
    NotWellDefinedError,
    PresentedModule,
    PrimeField,
    RingMap,
    UnsupportedError,
    base_change,
    coker_image,
    direct_sum,
    free_resolution,
    kernel,
    pushforward,
    tensor,
)
from fiberflat.fpmod import presentations_equivalent

from conftest import ring

F101 = PrimeField(101)


def test_kernel_of_multiplication_on_domain():
    A = ring(["x"])
    K, inc = kernel(ModuleMap.multiplication(PresentedModule.free(A, 1), "x"))
    assert K.is_zero()


def test_kernel_of_multiplication_by_nilpotent():
    A = ring(["x"], ["x^2"])
    K, inc = kernel(ModuleMap.multiplication(PresentedModule.free(A, 1), "x"))
    assert not K.is_zero()
    # the kernel is generated by x
    assert [tuple(map(str, c)) for c in inc.columns()] == [("x",)]


def test_kernel_of_identity():
    A = ring(["x", "y"])
    M = PresentedModule(A, 2, [(A.ambient("x"), A.ambient("y"))])
    K, _ = kernel(ModuleMap.identity(M))
    assert K.is_zero()


def test_cokernel_and_image():
    R = ring(["t"])
    coker, image = coker_image(ModuleMap.multiplication(PresentedModule.free(R, 1), "t"))
    assert presentations_equivalent(coker, PresentedModule.cyclic(R, ["t"]))
    F = PresentedModule.free(R, 2)
    zero = ModuleMap(F, F, [[0, 0], [0, 0]])
    assert coker_image(zero)[1].is_zero()


def test_cokernel_of_inclusion_I3():
    S = ring(["t", "x1", "x2", "x3"])
    P = S.ambient
    I = [P("x1 - t*x2"), P("x2 - t*x3")]
    B = PresentedModule.free(S, 1)
    Ifree = PresentedModule.free(S, 2)
    coker, _ = coker_image(ModuleMap(Ifree, B, [I]))
    assert presentations_equivalent(coker, PresentedModule.cyclic(S, I))


def test_module_map_certified():
    A = ring(["x"])
    M = PresentedModule.cyclic(A, ["x"])
    with pytest.raises(NotWellDefinedError):
        ModuleMap(M, PresentedModule.free(A, 1), [[1]])


def test_ring_map_certified():
    R = ring(["e"], ["e^2"])
    A = ring(["x"])
    with pytest.raises(NotWellDefinedError):
        RingMap(R, A, ["x"])
    assert RingMap(R, ring(["x"], ["x^3"]), ["x^2"])("e") == A.ambient("x^2")


def test_tensor_examples():
    A = ring(["x", "y"])
    N = PresentedModule(A, 2, [(A.ambient("x"), A.ambient("y^2"))])
    assert presentations_equivalent(tensor(PresentedModule.free(A, 1), N), N)
    got = tensor(PresentedModule.cyclic(A, ["x"]), PresentedModule.cyclic(A, ["y"]))
    assert presentations_equivalent(got, PresentedModule.cyclic(A, ["x", "y"]))
    B = ring(["x"])
    Mx = PresentedModule.cyclic(B, ["x"])
    assert presentations_equivalent(tensor(Mx, Mx), Mx)


def test_base_change_examples():
    R = ring(["t"])
    Rt = ring(["t"], ["t"])
    proj = RingMap(R, Rt, ["t"])
    assert base_change(PresentedModule.free(R, 1), proj) == PresentedModule.free(Rt, 1)
    M = PresentedModule(R, 2, [(R.ambient("t^2"), R.ambient("t + 1"))])
    assert base_change(M, RingMap.identity(R)) == M


def test_base_change_of_M3_to_the_special_fiber():
    S = ring(["t", "x1", "x2", "x3"])
    P = S.ambient
    M3 = PresentedModule.cyclic(S, [P("x1 - t*x2"), P("x2 - t*x3")])
    S0 = ring(["t", "x1", "x2", "x3"], ["t"])
    fib = base_change(M3, RingMap(S, S0, list(P.gens())))
    assert presentations_equivalent(fib, PresentedModule.cyclic(S0, ["x1", "x2"]))


def test_resolutions():
    A = ring(["x"])
    res = free_resolution(PresentedModule.cyclic(A, ["x"]), 3)
    assert res.length == 1 and res.ranks == [1, 1] and res.certify()
    D = ring(["x"], ["x^2"])
    res = free_resolution(PresentedModule.cyclic(D, ["x"]), 3)
    assert res.ranks == [1, 1, 1, 1]
    assert all(str(d[0][0]) == "x" for d in res.differentials)
    assert res.certify()
    assert free_resolution(PresentedModule.free(A, 2), 2).length == 0


def test_pushforward_of_a_finite_map():
    R = ring(["v", "vi"], ["v*vi - 1"])
    B = ring(["u", "ui"], ["u*ui - 1"])
    f = RingMap(R, B, ["u^2", "ui^2"])
    M, basis = pushforward(f)
    assert M.pruned().rank == 2 and M.pruned().is_free_presentation()
    # basis entries are (exponent vector in (u, ui), component)
    assert sorted(basis) == [((0, 0), 0), ((0, 1), 0)]


def test_pushforward_detects_non_finite_maps():
    R = ring(["w"])
    B = ring(["u", "v"], ["u*v - 1"])
    assert pushforward(RingMap(R, B, ["u^2"])) is None


def test_presentation_equivalence_is_restricted():
    A = ring(["x", "y"])
    M = PresentedModule(A, 2, [(A.ambient("x"), A.ambient("y"))])
    N = PresentedModule(A, 2, [(A.ambient("y"), A.ambient("x"))])
    with pytest.raises(UnsupportedError):
        presentations_equivalent(M, N)


def test_pruning_removes_unit_relations():
    A = ring(["x"])
    P = A.ambient
    M = PresentedModule(A, 2, [(P.one, P("x")), (P.zero, P("x^2"))])
    assert M.pruned().rank == 1
    assert presentations_equivalent(M, PresentedModule.cyclic(A, ["x^2"]))


def test_direct_sum_rank():
    A = ring(["x"])
    S = direct_sum(PresentedModule.cyclic(A, ["x"]), PresentedModule.free(A, 2))
    assert S.rank == 3 and len(S.relations.reduced_generators()) == 1


# properties ----------------------------------------------------------------

coef = st.integers(0, 100)
small_poly = st.tuples(coef, coef, coef)  # a + b*x + c*y


def lin(P, abc):
    a, b, c = abc
    return P(a) + P(b) * P("x") + P(c) * P("y")


@settings(max_examples=25)
@given(st.lists(st.tuples(small_poly, small_poly), max_size=3))
def test_resolution_exactness(rels):
    A = ring(["x", "y"])
    P = A.ambient
    M = PresentedModule(A, 2, [(lin(P, a), lin(P, b)) for a, b in rels])
    assert free_resolution(M, 3).certify()


@settings(max_examples=25)
@given(st.lists(st.tuples(small_poly, small_poly), max_size=3))
def test_tensor_with_free_rank_one(rels):
    A = ring(["x", "y"])
    P = A.ambient
    M = PresentedModule(A, 2, [(lin(P, a), lin(P, b)) for a, b in rels])
    assert tensor(PresentedModule.free(A, 1), M) == M
    assert tensor(M, PresentedModule.free(A, 1)) == M


@settings(max_examples=25)
@given(small_poly, small_poly, small_poly, st.lists(small_poly, max_size=2))
def test_base_change_functorial(ax, ay, bz, rels):
    R = ring(["x", "y"])
    S = ring(["z", "w"])
    T = ring(["s"])
    Ps, Pt = S.ambient, T.ambient
    f = RingMap(R, S, [Ps(f"{ax[0]}*z + {ax[1]}*w + {ax[2]}"), Ps(f"{ay[0]}*z*w + {ay[1]}")])
    g = RingMap(S, T, [Pt(f"{bz[0]}*s + {bz[1]}"), Pt(f"{bz[2]}*s^2")])
    m = PresentedModule(R, 1, [(lin(R.ambient, r),) for r in rels])
    assert base_change(base_change(m, f), g) == base_change(m, g.compose(f))
