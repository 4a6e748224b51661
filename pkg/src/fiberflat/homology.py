"""Tor modules, associated graded pieces and torsion submodules."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import CriterionInapplicable, UnsupportedError
from .fpmod import PresentedModule, RingMap, free_resolution, subquotient
from .groebner.ideals import Ideal, QuotientRing, SubmoduleGens, _kernel_mod
from .polys import IndexBlockOrder, Polynomial, PolyRing


# ---------------------------------------------------------------------------
# Tor


class TorResult:
    """``Tor_i(M, N)`` as the subquotient ``cycles / boundaries`` of ``A^(rank)``."""

    def __init__(self, index, ring, rank, cycles, boundaries):
        self.index = index
        self.ring = ring
        self.rank = rank
        self.cycles = cycles
        self.boundaries = boundaries
        self._zero = None

    @property
    def is_zero(self) -> bool:
        if self._zero is None:
            span = SubmoduleGens(self.ring, self.rank, self.boundaries)
            self._zero = all(span.contains(w) for w in self.cycles)
        return self._zero

    def nonzero_witness(self):
        """A cycle that is not a boundary, or ``None``."""
        span = SubmoduleGens(self.ring, self.rank, self.boundaries)
        for w in self.cycles:
            if not span.contains(w):
                return w
        return None

    @cached_property
    def module(self) -> PresentedModule:
        return subquotient(self.ring, self.cycles, self.boundaries, rank=self.rank)

    def __repr__(self):
        return f"TorResult(index={self.index}, is_zero={self.is_zero})"


def _tensor_columns(d, n, nrows):
    """Columns of ``d ⊗ id_n`` where ``d`` has ``nrows`` rows."""
    ncols = len(d[0]) if d else 0
    cols = []
    for b in range(ncols):
        for c in range(n):
            v = [None] * (nrows * n)
            for a in range(nrows):
                v[a * n + c] = d[a][b]
            cols.append(v)
    return cols


def _homology(ring, d_in, r_prev, r_cur, d_out, N: PresentedModule, index):
    """Homology at ``F_i ⊗ N`` given ``d_in = d_i`` and ``d_out = d_{i+1}``."""
    P = ring.ambient
    n = N.rank
    zero = P.zero

    def fill(v):
        return tuple(zero if x is None else x for x in v)

    def rel_blocks(blocks):
        out = []
        for rel in N.relations.generators:
            for b in range(blocks):
                v = [zero] * (blocks * n)
                v[b * n:(b + 1) * n] = rel
                out.append(tuple(v))
        return out

    size = r_cur * n
    if size == 0:
        return TorResult(index, ring, 0, [], [])
    if d_in is None or r_prev == 0:
        cycles = [tuple(P.one if j == k else zero for j in range(size)) for k in range(size)]
    else:
        cols = [fill(v) for v in _tensor_columns(d_in, n, r_prev)]
        cycles = _kernel_mod(P, r_prev * n, cols, rel_blocks(r_prev), "tor cycles", ring.modulus_gb)
    boundaries = rel_blocks(r_cur)
    if d_out is not None:
        boundaries += [fill(v) for v in _tensor_columns(d_out, n, r_cur)]
    return TorResult(index, ring, size, cycles, boundaries)


def tor(i: int, m: PresentedModule, n: PresentedModule) -> TorResult:
    """``Tor_i^A(m, n)`` from a free resolution of ``m``."""
    if m.ring != n.ring:
        raise ValueError("Tor of modules over different rings")
    if i < 0:
        raise ValueError("Tor index must be non-negative")
    res = free_resolution(m, i + 1)
    d_in = res.differential(i) if i >= 1 and i <= res.length else None
    d_out = res.differential(i + 1) if i + 1 <= res.length else None
    r_prev = res.rank(i - 1) if i >= 1 else 0
    return _homology(m.ring, d_in, r_prev, res.rank(i), d_out, n, i)


def tor_over_base(i: int, k: PresentedModule, f: RingMap, m: PresentedModule) -> TorResult:
    """``Tor_i^R(k, m)`` for an ``R``-module ``k`` and an ``A``-module ``m`` via ``f: R -> A``.

    Resolves ``k`` over ``R`` and tensors the base-changed complex with ``m``.
    """
    if k.ring != f.source or m.ring != f.target:
        raise ValueError("modules do not match the ring map")
    res = free_resolution(k, i + 1)

    def mapped(d):
        return [[f(x) for x in row] for row in d]

    d_in = mapped(res.differential(i)) if 1 <= i <= res.length else None
    d_out = mapped(res.differential(i + 1)) if i + 1 <= res.length else None
    r_prev = res.rank(i - 1) if i >= 1 else 0
    return _homology(f.target, d_in, r_prev, res.rank(i), d_out, m, i)


# ---------------------------------------------------------------------------
# associated graded pieces


def graded_piece(a: Ideal, n: int, m: PresentedModule) -> PresentedModule:
    """``a^n M / a^{n+1} M``."""
    if n < 0:
        raise ValueError("graded index must be non-negative")
    ring = m.ring
    P = ring.ambient
    lo = a.power(n).reduced_generators() if n else [P.one]
    hi = a.power(n + 1).reduced_generators()

    def spread(gens):
        out = []
        for g in gens:
            for k in range(m.rank):
                out.append(tuple(g if j == k else P.zero for j in range(m.rank)))
        return out

    return subquotient(ring, spread(lo), spread(hi) + m.relations.generators, rank=m.rank)


# ---------------------------------------------------------------------------
# torsion


@dataclass
class TorsionDecomposition:
    torsion: PresentedModule
    torsionfree: PresentedModule
    witness: Polynomial
    generators: list = field(default_factory=list)
    saturated: SubmoduleGens = None
    module: PresentedModule = None

    @property
    def is_torsionfree(self) -> bool:
        rel = self.module.relations
        return all(rel.contains(g) for g in self.generators)

    def certify(self, f: RingMap) -> bool:
        """``witness != 0`` and it kills every torsion generator."""
        if not self.witness:
            return False
        w = f(self.witness)
        rel = self.module.relations
        return all(rel.contains(tuple(w * p for p in g)) for g in self.generators)


def _lead_coefficients(gb_vectors, n, T_index):
    """Coefficient polynomials (in ``T``) of the leading x-monomials."""
    out = []
    for vec in gb_vectors:
        comp = None
        lead = None
        coeffs = {}
        for k, p in enumerate(vec):
            if p:
                comp = k
                break
        if comp is None:
            continue
        p = vec[comp]
        lead = p.lead_exp[:n]
        for e, c in p.terms.items():
            if e[:n] == lead:
                coeffs[e[T_index]] = c
        out.append(coeffs)
    return out


def torsion_decompose(n_mod: PresentedModule, f: RingMap) -> TorsionDecomposition:
    """Torsion submodule of an ``A``-module relative to ``f: R -> A``.

    Supported bases: a field, ``k[t]``, and ``k[t]/(irreducible)``.  For
    ``k[t]`` the torsion is ``Rel : h^inf`` where ``h`` is the product of the
    lead coefficients of a Gröbner basis in an order eliminating the
    ``A``-variables over ``T = f(t)``.
    """
    from .spectra import base_shape

    R = f.source
    A = f.target
    if n_mod.ring != A:
        raise ValueError("module does not live over the target of the ring map")
    shape = base_shape(R)
    P = A.ambient
    if shape in ("field", "field-ext"):
        return TorsionDecomposition(
            torsion=PresentedModule(A, 0, []),
            torsionfree=n_mod,
            witness=R.one,
            generators=[],
            saturated=n_mod.relations,
            module=n_mod,
        )
    if shape != "pid":
        raise UnsupportedError(f"torsion over base {R} is not supported (shape {shape})")

    nv = P.nvars
    tname = "T"
    taken = set(P.variables) | set(P.field.generator_names())
    while tname in taken:
        tname += "_"
    S = PolyRing(P.field, P.variables + (tname,), IndexBlockOrder((tuple(range(nv)), (nv,))))
    T = S.gen(nv)
    lift = lambda p: Polynomial(S, {e + (0,): c for e, c in p.terms.items()})  # noqa: E731
    ft = f.images[0]
    modulus = [lift(g) for g in A.modulus_gb] + [T - lift(ft)]
    SQ = QuotientRing(S, modulus)
    rank = n_mod.rank
    U = SubmoduleGens(SQ, rank, [tuple(lift(p) for p in v) for v in n_mod.relations.generators])
    F = P.field
    lcs = _lead_coefficients(U.gb(), nv, nv)
    h = S.one
    seen = set()
    for coeffs in lcs:
        deg = max(coeffs)
        if deg == 0:
            continue
        inv = F.inv(coeffs[deg])
        key = tuple(sorted((k, F.mul(inv, c)) for k, c in coeffs.items()))
        if key in seen:
            continue
        seen.add(key)
        g = Polynomial(S, {(0,) * nv + (k,): F.mul(inv, c) for k, c in coeffs.items()})
        h = h * g
    if h.is_constant():
        sat, e = U, 0
    else:
        sat, e = U.saturate(h, with_exponent=True)
    back = P.gens() + (ft,)
    to_A = lambda p: A.reduce(p.substitute(list(back), P)) if p else P.zero  # noqa: E731
    sat_gens = [tuple(to_A(p) for p in v) for v in sat.reduced_generators()]
    rel = n_mod.relations
    tors_gens = [v for v in sat_gens if not rel.contains(v)]
    Rp = R.ambient
    hw = Polynomial(Rp, {(k[nv],): c for k, c in h.terms.items()}) if not h.is_constant() else Rp.one
    witness = hw ** e if e else Rp.one
    torsion = subquotient(A, tors_gens, rel.generators, rank=rank) if tors_gens else PresentedModule(A, 0, [])
    tf = PresentedModule(A, rank, rel.generators + tors_gens)
    return TorsionDecomposition(
        torsion=torsion,
        torsionfree=tf,
        witness=witness,
        generators=tors_gens,
        saturated=SubmoduleGens(A, rank, rel.generators + tors_gens),
        module=n_mod,
    )


def torsion_via_fraction_field(n_mod: PresentedModule, f: RingMap):
    """Cross-check route: relations recomputed over ``k(t)`` and pulled back.

    Returns the generators of ``t(N)`` (as vectors over ``A``) obtained by
    clearing denominators of the ``k(t)`` Gröbner basis and saturating by the
    cleared denominators.  Only ``A = k[t, x...]`` polynomial targets with
    ``f(t) = t`` are supported.
    """
    from .fields import RationalFunctions
    from . import univariate as up

    A = f.target
    P = A.ambient
    R = f.source
    tname = R.variables[0]
    if not P.variables or f.images[0] != P.gen(tname):
        raise CriterionInapplicable("fraction-field route needs f(t) = t")
    k = P.field
    K = RationalFunctions(k, tname + "_K")
    others = tuple(v for v in P.variables if v != tname)
    ti = P.index(tname)
    Q = PolyRing(K, others, "grevlex")

    def to_K(p):
        out = {}
        for e, c in p.terms.items():
            tdeg = e[ti]
            rest = tuple(x for j, x in enumerate(e) if j != ti)
            coeff = K.from_polys(tuple([k.zero] * tdeg + [c]))
            out[rest] = K.add(out[rest], coeff) if rest in out else coeff
        return Polynomial(Q, {e: c for e, c in out.items() if not K.is_zero(c)})

    mods = [to_K(g) for g in A.modulus_gb]
    QR = QuotientRing(Q, mods)
    rank = n_mod.rank
    U = SubmoduleGens(QR, rank, [tuple(to_K(p) for p in v) for v in n_mod.relations.generators])
    cleared = []
    denominators = P.one
    for v in U.gb():
        den = (k.one,)
        for p in v:
            for c in p.terms.values():
                den = up.mul(k, den, up.divmod_(k, c[1], up.gcd(k, den, c[1]))[0])
        dpoly = Polynomial(P, {tuple(i if j == ti else 0 for j in range(P.nvars)): a for i, a in enumerate(den) if a})
        denominators = denominators * dpoly
        vec = []
        for p in v:
            out = {}
            for e, c in p.terms.items():
                num = up.mul(k, c[0], up.divmod_(k, den, c[1])[0])
                for i, a in enumerate(num):
                    if k.is_zero(a):
                        continue
                    full = list(e)
                    full.insert(ti, i)
                    full = tuple(full)
                    out[full] = k.add(out.get(full, k.zero), a)
            vec.append(A.reduce(Polynomial(P, {e: c for e, c in out.items() if not k.is_zero(c)})))
        cleared.append(tuple(vec))
    W = SubmoduleGens(A, rank, n_mod.relations.generators + cleared)
    sat = W.saturate(denominators) if not denominators.is_constant() else W
    rel = n_mod.relations
    return [v for v in sat.reduced_generators() if not rel.contains(v)], sat


# ---------------------------------------------------------------------------
# element localizations


def localize_at_element(A, g):
    """``A_g`` modeled as ``A[y]/(y*g - 1)`` together with the map ``A -> A_g``."""
    A = QuotientRing.of(A)
    P = A.ambient
    yname = "y"
    taken = set(P.variables) | set(P.field.generator_names())
    while yname in taken:
        yname += "_"
    S = PolyRing(P.field, P.variables + (yname,), "grevlex")
    lift = lambda p: Polynomial(S, {e + (0,): c for e, c in P(p).terms.items()})  # noqa: E731
    y = S.gen(P.nvars)
    Ag = QuotientRing(S, [lift(m) for m in A.modulus.generators] + [y * lift(g) - S.one])
    return Ag, RingMap(A, Ag, [lift(x) for x in P.gens()])


@dataclass
class LocalizationCheck:
    element: Polynomial
    forward: bool  # t(A)_g inside t(A_g)
    backward: bool  # t(A_g) inside t(A)_g

    @property
    def holds(self) -> bool:
        return self.forward and self.backward


def torsion_localizes(f: RingMap, g) -> LocalizationCheck:
    """Compare ``t(A_g)`` with ``t(A)_g`` as ideals of ``A_g`` for ``f: R -> A``.

    Both sides are computed with :func:`torsion_decompose`; equality is
    mutual membership of generators.
    """
    A = f.target
    Ag, loc = localize_at_element(A, g)
    fg = loc.compose(f)
    t_A = torsion_decompose(PresentedModule.free(A, 1), f)
    t_Ag = torsion_decompose(PresentedModule.free(Ag, 1), fg)
    # t(A)_g is generated by the images of the generators of t(A)
    pushed = [(loc(v[0]),) for v in t_A.generators]
    lhs = SubmoduleGens(Ag, 1, pushed)
    rhs = SubmoduleGens(Ag, 1, [tuple(v) for v in t_Ag.generators])
    forward = all(rhs.contains(v) for v in pushed)
    backward = all(lhs.contains(tuple(v)) for v in t_Ag.generators)
    return LocalizationCheck(A.ambient(g), forward, backward)
