"""Ideals, quotient rings and submodules of free modules.

Everything over a quotient ring ``A = P/J`` is computed in the ambient
polynomial ring ``P``: an ideal of ``A`` is represented by its preimage in
``P`` and a submodule ``U`` of ``A^r`` by its preimage ``U + J*P^r``.
"""

from __future__ import annotations

from collections import OrderedDict
from functools import lru_cache
from operator import le

from ..errors import ResourceBudgetError
from ..polys import IndexBlockOrder, Polynomial, PolyRing
from .engine import TermOrder, buchberger, make_vector, normal_form as _nf

_GB_CACHE: "OrderedDict" = OrderedDict()
_GB_CACHE_SIZE = 4096


@lru_cache(maxsize=256)
def term_order(ring: PolyRing, layout="pot") -> TermOrder:
    return TermOrder(ring.order.key, ring.nvars, layout)


def _freeze(vec):
    return tuple((c, e, a) for _, c, e, a in vec)


def cached_gb(ring: PolyRing, vectors, layout="pot", label="groebner basis"):
    """Reduced GB of raw engine vectors, memoized on the generating set."""
    vectors = [v for v in vectors if v]
    key = (ring, layout, frozenset(_freeze(v) for v in vectors))
    hit = _GB_CACHE.get(key)
    if hit is not None:
        _GB_CACHE.move_to_end(key)
        return hit
    order = term_order(ring, layout)
    vectors = sorted(vectors, key=lambda v: v[0][0])
    gb = buchberger(vectors, ring.field, order, label)
    _GB_CACHE[key] = gb
    if len(_GB_CACHE) > _GB_CACHE_SIZE:
        _GB_CACHE.popitem(last=False)
    return gb


def clear_cache():
    _GB_CACHE.clear()


# conversions ---------------------------------------------------------------


def poly_to_vec(p: Polynomial, order: TermOrder, comp=0):
    return make_vector(order, p.ring.field, {(comp, e): c for e, c in p.terms.items()})


def vector_to_vec(v, order: TermOrder, offset=0):
    entries = {}
    F = None
    for k, p in enumerate(v):
        F = p.ring.field
        for e, c in p.terms.items():
            entries[(k + offset, e)] = c
    if F is None:
        return []
    return make_vector(order, F, entries)


def vec_to_poly(vec, ring: PolyRing) -> Polynomial:
    return Polynomial(ring, {e: a for _, _, e, a in vec})


def vec_to_vector(vec, ring: PolyRing, rank: int, offset=0):
    parts = [dict() for _ in range(rank)]
    for _, c, e, a in vec:
        parts[c - offset][e] = a
    return tuple(Polynomial(ring, d) for d in parts)


# rings ---------------------------------------------------------------------


class QuotientRing:
    """``ambient / modulus``; elements are ambient polynomials in normal form."""

    def __init__(self, ambient: PolyRing, modulus=None):
        self.ambient = ambient
        gens = [] if modulus is None else (modulus.generators if isinstance(modulus, Ideal) else modulus)
        self.modulus = Ideal(ambient, [ambient(g) for g in gens])
        self._hash = None

    @classmethod
    def of(cls, ring) -> "QuotientRing":
        if isinstance(ring, QuotientRing):
            return ring
        return cls(ring)

    @property
    def field(self):
        return self.ambient.field

    @property
    def variables(self):
        return self.ambient.variables

    @property
    def nvars(self):
        return self.ambient.nvars

    @property
    def modulus_gb(self):
        return self.modulus.gb()

    def is_polynomial_ring(self):
        return not self.modulus_gb

    def key(self):
        return (self.ambient, tuple(self.modulus_gb))

    def __eq__(self, other):
        if isinstance(other, PolyRing):
            other = QuotientRing(other)
        return isinstance(other, QuotientRing) and self.key() == other.key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __str__(self):
        if not self.modulus_gb:
            return str(self.ambient)
        rel = ", ".join(str(g) for g in self.modulus_gb)
        return f"{self.ambient}/({rel})"

    __repr__ = __str__

    def reduce(self, p: Polynomial) -> Polynomial:
        if not self.modulus_gb:
            return p
        return self.modulus.normal_form(p)

    def __call__(self, value) -> Polynomial:
        return self.reduce(self.ambient(value))

    def is_zero(self, p) -> bool:
        return not self.reduce(self.ambient(p))

    def mul(self, a, b):
        return self.reduce(a * b)

    @property
    def zero(self):
        return self.ambient.zero

    @property
    def one(self):
        return self.reduce(self.ambient.one)

    def gens(self):
        return tuple(self.reduce(g) for g in self.ambient.gens())

    def is_zero_ring(self):
        return self.modulus.is_unit()


def base_poly_ring(ring) -> PolyRing:
    return ring.ambient if isinstance(ring, QuotientRing) else ring


def modulus_of(ring):
    return ring.modulus_gb if isinstance(ring, QuotientRing) else []


# ideals --------------------------------------------------------------------


class Ideal:
    """Ideal of a polynomial ring or quotient ring.

    ``generators`` are ambient polynomials; ``gb()`` is the reduced Gröbner
    basis of the preimage in the ambient ring (canonical).
    """

    def __init__(self, ring, generators=()):
        self.ring = ring
        P = base_poly_ring(ring)
        self.P = P
        gens = [P(g) for g in generators]
        self.generators = [g for g in gens if g]
        self._gb = None
        self._gb_vecs_cache = None
        self._leads = None

    def _preimage_gens(self):
        return self.generators + list(modulus_of(self.ring))

    def gb(self):
        if self._gb is None:
            order = term_order(self.P, "pot")
            vecs = [poly_to_vec(g, order) for g in self._preimage_gens()]
            gb = cached_gb(self.P, vecs, "pot", "ideal groebner basis")
            self._gb = [vec_to_poly(v, self.P) for v in gb]
        return self._gb

    def _gb_vecs(self):
        if self._gb_vecs_cache is None:
            order = term_order(self.P, "pot")
            self._gb_vecs_cache = [poly_to_vec(g, order) for g in self.gb()]
        return self._gb_vecs_cache

    def _lead_exps(self):
        if self._leads is None:
            self._leads = [g.lead_exp for g in self.gb()]
        return self._leads

    def normal_form(self, f) -> Polynomial:
        f = self.P(f)
        leads = self._lead_exps()
        # fast path: no term is divisible by a leading monomial
        if not any(all(map(le, l, e)) for e in f.terms for l in leads):
            return f
        order = term_order(self.P, "pot")
        return vec_to_poly(_nf(poly_to_vec(f, order), self._gb_vecs(), self.P.field, order), self.P)

    def contains(self, f) -> bool:
        return not self.normal_form(f)

    __contains__ = contains

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.generators)

    def is_unit(self):
        gb = self.gb()
        return len(gb) == 1 and gb[0].is_constant()

    def is_zero(self):
        return not self.reduced_generators()

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.P == other.P and self.gb() == other.gb()

    def __hash__(self):
        return hash((self.P, tuple(self.gb())))

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.reduced_generators()) + ")"

    __repr__ = __str__

    def reduced_generators(self):
        """GB elements not already in the ring's modulus."""
        if not modulus_of(self.ring):
            return list(self.gb())
        J = self.ring.modulus
        return [g for g in self.gb() if not J.contains(g)]

    # operations

    def _same(self, other):
        if isinstance(other, Polynomial) or isinstance(other, (str, int)):
            return Ideal(self.ring, [other])
        if other.P != self.P:
            raise ValueError("ideals live in different rings")
        return other

    def __add__(self, other):
        other = self._same(other)
        return Ideal(self.ring, self.generators + other.generators)

    def __mul__(self, other):
        other = self._same(other)
        return Ideal(self.ring, [a * b for a in self.generators for b in other.generators])

    def power(self, n: int) -> "Ideal":
        result = Ideal(self.ring, [self.P.one])
        for _ in range(n):
            result = result * self
            result = Ideal(self.ring, result.reduced_generators())
        return result

    def intersect(self, other) -> "Ideal":
        """Intersection via an auxiliary variable ``T`` eliminated first."""
        other = self._same(other)
        P = self.P
        name = _fresh_name(P, "T")
        S = PolyRing(P.field, (name,) + P.variables, IndexBlockOrder(((0,), tuple(range(1, P.nvars + 1)))))
        T = S.gen(0)
        lift = lambda g: S.coerce_by_name(g)  # noqa: E731
        gens = [T * lift(g) for g in self._preimage_gens()]
        gens += [(S.one - T) * lift(g) for g in other._preimage_gens()]
        order = term_order(S, "pot")
        gb = cached_gb(S, [poly_to_vec(g, order) for g in gens], "pot", "ideal intersection")
        out = [vec_to_poly(v, S) for v in gb if v[0][2][0] == 0]
        return Ideal(self.ring, [P.coerce_by_name(g) for g in out])

    def quotient(self, g) -> "Ideal":
        """The colon ideal ``(self : g)`` for a single element ``g``."""
        g = self.P(g)
        P = self.P
        rows = _kernel_mod(P, 1, [(g,)], [(h,) for h in self._preimage_gens()], label="ideal colon")
        return Ideal(self.ring, [r[0] for r in rows])

    def colon(self, other) -> "Ideal":
        if isinstance(other, (Polynomial, str, int)):
            return self.quotient(other)
        result = None
        for g in other.generators:
            q = self.quotient(g)
            result = q if result is None else result.intersect(q)
        if result is None:
            return Ideal(self.ring, [self.P.one])
        return result

    def saturate(self, f, with_exponent=False):
        """``(self : f^inf)`` by iterated colon; optionally return the stabilizing exponent."""
        current = self
        e = 0
        while True:
            nxt = current.quotient(f)
            if nxt.gb() == current.gb():
                break
            current = nxt
            e += 1
        current = Ideal(self.ring, current.reduced_generators())
        return (current, e) if with_exponent else current

    def eliminate(self, names, keep_ring=False) -> "Ideal":
        """Eliminate the named variables (block order, eliminated block first)."""
        P = self.P
        names = [names] if isinstance(names, str) else list(names)
        elim = tuple(P.index(n) for n in names)
        rest = tuple(i for i in range(P.nvars) if i not in elim)
        S = PolyRing(P.field, P.variables, IndexBlockOrder((elim, rest)))
        order = term_order(S, "pot")
        gens = [S.coerce_by_name(g) for g in self._preimage_gens()]
        gb = cached_gb(S, [poly_to_vec(g, order) for g in gens], "pot", "elimination")
        kept = [vec_to_poly(v, S) for v in gb if not any(v[0][2][i] for i in elim)]
        if keep_ring:
            return Ideal(P, [P.coerce_by_name(g) for g in kept])
        sub = PolyRing(P.field, [P.variables[i] for i in rest], P.order if not hasattr(P.order, "sizes") else "grevlex")
        return Ideal(sub, [sub.coerce_by_name(g) for g in kept])

    def radical_contains(self, f) -> bool:
        """Rabinowitsch: ``f`` in rad(I) iff ``1`` in ``I + (1 - y f)``."""
        f = self.P(f)
        if not f:
            return True
        P = self.P
        name = _fresh_name(P, "y")
        S = PolyRing(P.field, P.variables + (name,), "grevlex")
        y = S.gen(name)
        gens = [S.coerce_by_name(g) for g in self._preimage_gens()] + [S.one - y * S.coerce_by_name(f)]
        return Ideal(S, gens).is_unit()


def _fresh_name(P, stem):
    taken = set(P.variables) | set(P.field.generator_names())
    name = stem
    k = 0
    while name in taken:
        k += 1
        name = f"{stem}{k}"
    return name


# submodules ----------------------------------------------------------------


def _kernel_mod(P: PolyRing, r: int, images, denominators, label="kernel", modulus=()):
    """Generators of ``{c in P^s : sum c_i * images[i] in span(denominators) + J*P^r}``.

    ``images`` and ``denominators`` are vectors of length ``r``.  Computed
    from one POT Gröbner basis of the stacked module ``(image_i, e_i)``.
    """
    s = len(images)
    order = term_order(P, "pot")
    F = P.field
    vecs = []
    for i, w in enumerate(images):
        v = vector_to_vec(w, order)
        v += [(order.nkey(r + i, P.one.lead_exp), r + i, (0,) * P.nvars, F.one)]
        v.sort(key=lambda t: t[0])
        vecs.append(v)
    for d in denominators:
        vecs.append(vector_to_vec(d, order))
    for g in modulus:
        for k in range(r):
            vecs.append(poly_to_vec(g, order, k))
        for k in range(s):
            vecs.append(poly_to_vec(g, order, r + k))
    gb = cached_gb(P, vecs, "pot", label)
    rows = []
    for v in gb:
        if v[0][1] >= r:
            rows.append(vec_to_vector(v, P, s, offset=r))
    return rows


class SubmoduleGens:
    """Submodule of ``ring^rank`` spanned by ``generators`` (tuples of polynomials)."""

    def __init__(self, ring, rank: int, generators=()):
        self.ring = ring
        self.P = base_poly_ring(ring)
        self.rank = rank
        gens = []
        for v in generators:
            v = tuple(self.P(p) for p in v)
            if len(v) != rank:
                raise ValueError(f"vector of length {len(v)} in a submodule of rank {rank}")
            if any(v):
                gens.append(v)
        self.generators = gens
        self._gb = None

    @property
    def modulus(self):
        return list(modulus_of(self.ring))

    def _preimage_vecs(self, order):
        vecs = [vector_to_vec(v, order) for v in self.generators]
        for g in self.modulus:
            for k in range(self.rank):
                vecs.append(poly_to_vec(g, order, k))
        return vecs

    def _gb_raw(self):
        if self._gb is None:
            order = term_order(self.P, "pot")
            self._gb = cached_gb(self.P, self._preimage_vecs(order), "pot", "module groebner basis")
        return self._gb

    def gb(self):
        return [vec_to_vector(v, self.P, self.rank) for v in self._gb_raw()]

    def normal_form(self, vector):
        order = term_order(self.P, "pot")
        vec = vector_to_vec(tuple(self.P(p) for p in vector), order)
        out = _nf(vec, self._gb_raw(), self.P.field, order)
        return vec_to_vector(out, self.P, self.rank)

    def contains(self, vector) -> bool:
        return not any(self.normal_form(vector))

    def contains_module(self, other: "SubmoduleGens") -> bool:
        return all(self.contains(v) for v in other.generators)

    def is_full(self) -> bool:
        """True when the submodule is the whole free module."""
        leads = {(v[0][1], v[0][2]) for v in self._gb_raw()}
        zero = (0,) * self.P.nvars
        return all((k, zero) in leads for k in range(self.rank))

    def is_zero(self) -> bool:
        return all(not any(self.normal_form_mod_ring(v)) for v in self.generators)

    def normal_form_mod_ring(self, vector):
        if not self.modulus:
            return tuple(vector)
        J = self.ring.modulus
        return tuple(J.normal_form(p) if p else p for p in vector)

    def reduced_generators(self):
        """GB elements that are nonzero modulo the ring's modulus."""
        return [v for v in self.gb() if any(self.normal_form_mod_ring(v))]

    def __eq__(self, other):
        if not isinstance(other, SubmoduleGens):
            return NotImplemented
        return self.P == other.P and self.rank == other.rank and self._gb_raw() == other._gb_raw()

    def __hash__(self):
        return hash((self.P, self.rank, tuple(_freeze(v) for v in self._gb_raw())))

    def __str__(self):
        rows = ["(" + ", ".join(str(p) for p in v) + ")" for v in self.reduced_generators()]
        return "<" + ", ".join(rows) + ">"

    __repr__ = __str__

    def _check(self, other):
        if other.rank != self.rank or other.P != self.P:
            raise ValueError("submodules live in different free modules")

    # operations

    def __add__(self, other):
        self._check(other)
        return SubmoduleGens(self.ring, self.rank, self.generators + other.generators)

    def scale_by_ideal(self, ideal: Ideal) -> "SubmoduleGens":
        return SubmoduleGens(
            self.ring, self.rank, [tuple(g * p for p in v) for g in ideal.generators for v in self.generators]
        )

    def intersect(self, other) -> "SubmoduleGens":
        if isinstance(other, Ideal):
            other = SubmoduleGens.from_ideal(other, self.rank)
        self._check(other)
        r = self.rank
        zero = (self.P.zero,) * r
        # (u, u) for u in U, (v, 0) for v in V: read off the second half
        stacked = [tuple(u) + tuple(u) for u in self.generators] + [tuple(v) + zero for v in other.generators]
        order = term_order(self.P, "pot")
        vecs = [vector_to_vec(w, order) for w in stacked]
        for g in self.modulus:
            for k in range(2 * r):
                vecs.append(poly_to_vec(g, order, k))
        gb = cached_gb(self.P, vecs, "pot", "module intersection")
        rows = [vec_to_vector(v, self.P, r, offset=r) for v in gb if v[0][1] >= r]
        return SubmoduleGens(self.ring, r, rows)

    def quotient_by_element(self, g) -> "SubmoduleGens":
        """``(U : g) = {v : g v in U}``."""
        g = self.P(g)
        r = self.rank
        images = []
        for k in range(r):
            images.append(tuple(g if j == k else self.P.zero for j in range(r)))
        rows = _kernel_mod(self.P, r, images, self.generators, "module colon", self.modulus)
        return SubmoduleGens(self.ring, r, rows)

    def colon_by_ideal(self, ideal) -> "SubmoduleGens":
        result = None
        gens = ideal.generators if isinstance(ideal, Ideal) else [ideal]
        for g in gens:
            q = self.quotient_by_element(g)
            result = q if result is None else result.intersect(q)
        if result is None:
            return SubmoduleGens.full(self.ring, self.rank)
        return result

    def saturate(self, f, with_exponent=False):
        current = self
        e = 0
        while True:
            nxt = current.quotient_by_element(f)
            if nxt == current:
                break
            current = nxt
            e += 1
        current = SubmoduleGens(self.ring, self.rank, current.reduced_generators())
        return (current, e) if with_exponent else current

    def syzygies(self) -> "SubmoduleGens":
        """Relations ``c`` with ``sum c_i g_i = 0`` in ``ring^rank`` (over the quotient)."""
        s = len(self.generators)
        if s == 0:
            return SubmoduleGens(self.ring, 0, [])
        rows = _kernel_mod(self.P, self.rank, self.generators, [], "syzygies", self.modulus)
        sub = SubmoduleGens(self.ring, s, rows)
        return SubmoduleGens(self.ring, s, sub.reduced_generators()) if self.modulus else sub

    @classmethod
    def from_ideal(cls, ideal: Ideal, rank: int = 1):
        z = ideal.P.zero
        gens = []
        for g in ideal.generators:
            for k in range(rank):
                gens.append(tuple(g if j == k else z for j in range(rank)))
        return cls(ideal.ring, rank, gens)

    @classmethod
    def full(cls, ring, rank):
        P = base_poly_ring(ring)
        return cls(ring, rank, [tuple(P.one if j == k else P.zero for j in range(rank)) for k in range(rank)])

    @classmethod
    def zero_module(cls, ring, rank):
        return cls(ring, rank, [])


# spec-facing functional API ---------------------------------------------------


def reduced_gb(g):
    """Reduced Gröbner basis of an :class:`Ideal` or :class:`SubmoduleGens`."""
    return g.gb()


def normal_form(f, g):
    return g.normal_form(f)


def ideal_ops(a: Ideal, b, op: str):
    if op == "sum":
        return a + b
    if op == "product":
        return a * b
    if op == "intersection":
        return a.intersect(b)
    if op == "colon":
        return a.colon(b)
    if op == "saturation":
        return a.saturate(b)
    if op == "eliminate":
        return a.eliminate(b)
    raise ValueError(f"unknown ideal operation {op!r}")


def module_ops(u: SubmoduleGens, v, op: str):
    if op == "sum":
        return u + v
    if op == "intersection":
        return u.intersect(v)
    if op == "colon_by_ideal":
        return u.colon_by_ideal(v)
    if op == "saturation_by_elt":
        return u.saturate(v)
    raise ValueError(f"unknown module operation {op!r}")


def syzygies(u: SubmoduleGens) -> SubmoduleGens:
    return u.syzygies()


__all__ = [
    "Ideal",
    "QuotientRing",
    "SubmoduleGens",
    "ResourceBudgetError",
    "reduced_gb",
    "normal_form",
    "ideal_ops",
    "module_ops",
    "syzygies",
    "cached_gb",
    "clear_cache",
]
