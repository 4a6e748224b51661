"""Prime ideals of small base rings, residue fields and fibers."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import univariate as up
from .errors import UnsupportedError
from .fields import (
    PrimeField,
    RationalFunctions,
    SimpleExtension,
    is_irreducible,
    monic_irreducibles,
)
from .fpmod import ModuleMap, PresentedModule, RingMap, base_change, base_change_map
from .groebner.ideals import Ideal, QuotientRing
from .polys import Polynomial, PolyRing

ZERO_IDEAL = "ZeroIdealOfDomain"
PRINCIPAL = "PrincipalIrreducible"
MAXIMAL_LINEAR = "MaximalLinear"
USER = "UserAsserted"


# ---------------------------------------------------------------------------
# base shapes


def _univariate(p: Polynomial):
    """Dense coefficient tuple of a polynomial in a one-variable ring."""
    F = p.ring.field
    deg = p.total_degree()
    coeffs = [F.zero] * (deg + 1) if deg >= 0 else []
    for e, c in p.terms.items():
        coeffs[e[0]] = c
    return up.trim(F, coeffs)


def _from_univariate(coeffs, ring: PolyRing) -> Polynomial:
    return Polynomial(ring, {(i,): c for i, c in enumerate(coeffs) if not ring.field.is_zero(c)})


def base_shape(R) -> str:
    """One of ``field``, ``pid`` (k[t]), ``field-ext`` (k[t]/(irreducible)),
    ``artinian`` (k[t]/(g), g reducible), ``polynomial`` (several variables,
    no relations) or ``other``."""
    R = QuotientRing.of(R)
    gb = R.modulus_gb
    if R.nvars == 0:
        return "zero" if gb else "field"
    if R.nvars == 1:
        if not gb:
            return "pid"
        if len(gb) == 1 and not gb[0].is_constant():
            g = _univariate(gb[0])
            if is_irreducible(R.field, g):
                return "field-ext"
            return "artinian"
        return "zero"
    if not gb:
        return "polynomial"
    return "other"


def is_domain(R) -> bool:
    return base_shape(R) in ("field", "pid", "field-ext", "polynomial")


# ---------------------------------------------------------------------------
# prime ideals


@dataclass(frozen=True)
class PrimeIdeal:
    ring: QuotientRing
    ideal: Ideal
    certificate: str
    data: object = None
    checked: bool = dc_field(default=False, compare=False)

    def __post_init__(self):
        if self.certificate != USER and not verify_certificate(self):
            raise ValueError(f"certificate {self.certificate} does not verify for {self.ideal}")
        object.__setattr__(self, "checked", self.certificate != USER)

    @property
    def user_asserted(self) -> bool:
        return self.certificate == USER

    def is_maximal(self) -> bool:
        if self.certificate in (PRINCIPAL, MAXIMAL_LINEAR):
            return True
        return base_shape(self.ring) in ("field", "field-ext")

    def generators(self):
        return self.ideal.reduced_generators()

    def describe(self) -> str:
        gens = self.generators()
        return "(" + ", ".join(str(g) for g in gens) + ")" if gens else "(0)"

    def certificate_text(self) -> str:
        if self.certificate == PRINCIPAL:
            return f"{PRINCIPAL}({self.data})"
        if self.certificate == MAXIMAL_LINEAR:
            return f"{MAXIMAL_LINEAR}({', '.join(str(x) for x in self.data)})"
        return self.certificate

    def __str__(self):
        return self.describe()

    __repr__ = __str__


def verify_certificate(p: PrimeIdeal) -> bool:
    R = p.ring
    if p.certificate == ZERO_IDEAL:
        return is_domain(R) and p.ideal.contains_ideal(Ideal(R, [])) and not p.ideal.reduced_generators()
    if p.certificate == PRINCIPAL:
        if R.nvars != 1:
            return False
        f = R.ambient(p.data)
        coeffs = _univariate(f)
        if len(coeffs) < 2 or not is_irreducible(R.field, coeffs):
            return False
        # (f) + modulus must be a proper ideal equal to the given one
        mine = Ideal(R, [f])
        if mine != p.ideal or mine.is_unit():
            return False
        return True
    if p.certificate == MAXIMAL_LINEAR:
        point = p.data
        if len(point) != R.nvars:
            return False
        P = R.ambient
        lin = Ideal(R, [P.gen(i) - P.constant(R.field.coerce(a)) for i, a in enumerate(point)])
        return lin == p.ideal and not lin.is_unit()
    if p.certificate == USER:
        return True
    return False


def zero_prime(R) -> PrimeIdeal:
    R = QuotientRing.of(R)
    return PrimeIdeal(R, Ideal(R, []), ZERO_IDEAL)


def principal_prime(R, f) -> PrimeIdeal:
    R = QuotientRing.of(R)
    f = R.ambient(f).monic()
    return PrimeIdeal(R, Ideal(R, [f]), PRINCIPAL, f)


def maximal_linear(R, point) -> PrimeIdeal:
    R = QuotientRing.of(R)
    P = R.ambient
    F = R.field
    point = tuple(F.coerce(a) for a in point)
    ideal = Ideal(R, [P.gen(i) - P.constant(a) for i, a in enumerate(point)])
    return PrimeIdeal(R, ideal, MAXIMAL_LINEAR, point)


def user_prime(R, generators) -> PrimeIdeal:
    R = QuotientRing.of(R)
    return PrimeIdeal(R, Ideal(R, generators), USER)


def _irreducible_factors_by_trial(F, g, degree_cap=None):
    """Distinct monic irreducible factors of ``g`` over a prime field, by trial.

    Returns ``(factors, complete)``.
    """
    g = up.monic(F, g)
    factors = []
    rest = g
    deg = len(g) - 1
    cap = deg if degree_cap is None else min(deg, degree_cap)
    d = 1
    while d <= cap and len(rest) - 1 >= 2 * d:
        for q in monic_irreducibles(F, d):
            if not up.rem(F, rest, q):
                factors.append(q)
                while not up.rem(F, rest, q):
                    rest = up.divmod_(F, rest, q)[0]
        d += 1
    if len(rest) > 1:
        if is_irreducible(F, rest):
            factors.append(rest)
            return factors, True
        return factors, False
    return factors, True


@dataclass
class PrimeList:
    primes: list
    complete: bool

    def __iter__(self):
        return iter(self.primes)

    def __len__(self):
        return len(self.primes)

    def __getitem__(self, i):
        return self.primes[i]


def enumerate_primes(R, degree_bound: int = 1) -> PrimeList:
    """Primes of a small base ring.

    ``F_p[t]``: ``(0)`` and all monic irreducibles up to ``degree_bound``
    (incomplete).  Fields, ``k[t]/(g)``: the complete spectrum.
    """
    R = QuotientRing.of(R)
    shape = base_shape(R)
    F = R.field
    if shape == "field":
        return PrimeList([zero_prime(R)], True)
    if shape == "field-ext":
        return PrimeList([principal_prime(R, R.modulus_gb[0])], True)
    if shape == "pid":
        if not isinstance(F, PrimeField):
            raise UnsupportedError("prime enumeration over k[t] needs a prime field k")
        out = [zero_prime(R)]
        P = R.ambient
        for d in range(1, degree_bound + 1):
            for q in monic_irreducibles(F, d):
                f = _from_univariate(q, P)
                ideal = Ideal(R, [f])
                out.append(PrimeIdeal(R, ideal, PRINCIPAL, f))
        return PrimeList(out, False)
    if shape == "artinian":
        g = _univariate(R.modulus_gb[0])
        gm = up.monic(F, g)
        if all(F.is_zero(c) for c in gm[:-1]):
            factors, complete = [(F.zero, F.one)], True
        elif isinstance(F, PrimeField):
            factors, complete = _irreducible_factors_by_trial(F, g)
        else:
            factors, complete = [], False
        if not complete:
            raise UnsupportedError(f"could not split {g} into irreducible factors")
        P = R.ambient
        return PrimeList([principal_prime(R, _from_univariate(q, P)) for q in factors], True)
    raise UnsupportedError(f"prime enumeration is not supported for {R} (shape {shape})")


def maximal_ideals(primes: PrimeList):
    return [p for p in primes if p.is_maximal()]


# ---------------------------------------------------------------------------
# residue fields


@dataclass
class ResidueField:
    prime: PrimeIdeal
    field: object
    projection: RingMap

    def spot_check(self, samples=()) -> bool:
        """Projection kills the prime's generators and agrees on normal forms."""
        for g in self.prime.ideal.gb():
            if self.projection(g):
                return False
        for a in samples:
            if self.projection(a) != self.projection(self.prime.ideal.normal_form(a)):
                return False
        return True


def residue_field(p: PrimeIdeal, name=None) -> ResidueField:
    R = p.ring
    shape = base_shape(R)
    k = R.field
    if p.user_asserted:
        raise UnsupportedError("residue field of a user-asserted prime is not available")
    if shape == "field":
        K = k
        point = PolyRing(K, ())
        return ResidueField(p, K, RingMap(R, point, []))
    if p.certificate == MAXIMAL_LINEAR:
        point = PolyRing(k, ())
        return ResidueField(p, k, RingMap(R, point, [point.constant(a) for a in p.data]))
    if p.certificate == ZERO_IDEAL and shape == "pid":
        var = name or R.variables[0]
        K = RationalFunctions(k, var)
        point = PolyRing(K, ())
        return ResidueField(p, K, RingMap(R, point, [point.constant(K.generator(var))]))
    if p.certificate == PRINCIPAL:
        q = _univariate(R.ambient(p.data))
        if len(q) == 2:
            a = k.neg(k.div(q[0], q[1]))
            point = PolyRing(k, ())
            return ResidueField(p, k, RingMap(R, point, [point.constant(a)]))
        var = name or R.variables[0]
        K = SimpleExtension(k, var, q)
        point = PolyRing(K, ())
        return ResidueField(p, K, RingMap(R, point, [point.constant(K.generator(var))]))
    raise UnsupportedError(f"residue field not supported for {p} over {R}")


# ---------------------------------------------------------------------------
# fibers


@dataclass
class Fiber:
    """A base change ``A -> A'`` attached to a prime, with its ring map."""

    prime: PrimeIdeal
    ring: QuotientRing
    to_fiber: RingMap
    route: str = "quotient"
    base_map: RingMap = None

    def module(self, m: PresentedModule) -> PresentedModule:
        return base_change(m, self.to_fiber)

    def map(self, phi: ModuleMap) -> ModuleMap:
        return base_change_map(phi, self.to_fiber)


def quotient_fiber(f: RingMap, p: PrimeIdeal) -> Fiber:
    """``A/pA`` (a ring over ``k``); equal to the fiber when ``p`` is maximal."""
    A = f.target
    R = f.source
    P = A.ambient
    extra = [f(g) for g in p.ideal.gb()]
    ring = QuotientRing(P, list(A.modulus_gb) + [g for g in extra if g])
    to = RingMap(A, ring, list(P.gens()), certify=False)
    base_ring = QuotientRing(R.ambient, p.ideal.gb())
    base = RingMap(base_ring, ring, list(f.images), certify=False)
    return Fiber(p, ring, to, "quotient", base)


def residue_fiber(f: RingMap, p: PrimeIdeal) -> Fiber:
    """``A ⊗_R k(p)`` presented over the residue field ``k(p)``."""
    A = f.target
    R = f.source
    P = A.ambient
    rvar = R.variables[0] if R.nvars else "t"
    name = rvar
    while name in P.variables:
        name += "_"
    rf = residue_field(p, name=name)
    K = rf.field
    Q = PolyRing(K, P.variables, P.order)

    def to_K(poly):
        return Q.coerce_by_name(poly) if P.nvars else Q.constant(K.embed(poly.constant_coeff(), P.field))

    mods = [to_K(g) for g in A.modulus_gb]
    for i in range(R.nvars):
        img = rf.projection.images[i]
        mods.append(to_K(f.images[i]) - Q.constant(img.constant_coeff()))
    ring = QuotientRing(Q, mods)
    to = RingMap(A, ring, [ring(to_K(g)) for g in P.gens()] if P.nvars else [], certify=False)
    point = PolyRing(K, ())
    base = RingMap(point, ring, [], certify=False)
    return Fiber(p, ring, to, "residue", base)


def fiber(f: RingMap, p: PrimeIdeal, route="auto") -> Fiber:
    """Fiber of ``f`` at ``p``.

    ``auto`` uses ``A/pA`` over ``k`` at maximal primes and over field bases,
    and ``A ⊗ k(t)`` at the generic point of ``k[t]``.
    """
    shape = base_shape(f.source)
    if route == "residue":
        return residue_fiber(f, p)
    if route == "quotient" or p.is_maximal() or shape == "field":
        return quotient_fiber(f, p)
    return residue_fiber(f, p)
