"""Finitely presented modules over quotient rings and maps between them."""

from __future__ import annotations

from .errors import NotWellDefinedError, UnsupportedError
from .groebner.engine import TermOrder, buchberger, make_vector
from .groebner.ideals import (
    Ideal,
    QuotientRing,
    SubmoduleGens,
    _kernel_mod,
    poly_to_vec,
    vec_to_vector,
    vector_to_vec,
)
from .polys import IndexBlockOrder, Polynomial, PolyRing


# ---------------------------------------------------------------------------
# ring maps


class RingMap:
    """``f: source -> target`` given by the images of the source variables.

    Coefficients are carried along the field embedding ``source.field ->
    target.field``.  Construction certifies that every generator of the
    source modulus maps into the target modulus.
    """

    def __init__(self, source, target, images, certify=True):
        self.source = QuotientRing.of(source)
        self.target = QuotientRing.of(target)
        if isinstance(images, dict):
            images = [images[v] for v in self.source.variables]
        images = [self.target(im) for im in images]
        if len(images) != self.source.nvars:
            raise ValueError(f"expected {self.source.nvars} images, got {len(images)}")
        self.images = tuple(images)
        if certify:
            for g in self.source.modulus_gb:
                if not self.target.is_zero(self._raw_apply(g)):
                    raise NotWellDefinedError(f"ring map does not respect the relation {g}")

    def _raw_apply(self, p: Polynomial) -> Polynomial:
        T = self.target.ambient
        if not self.images:
            F = T.field
            total = F.zero
            for c in p.terms.values():
                total = F.add(total, F.embed(c, p.ring.field))
            return T.constant(total)
        return p.substitute(list(self.images), T) if p.terms else T.zero

    def __call__(self, p) -> Polynomial:
        p = self.source.ambient(p)
        return self.target.reduce(self._raw_apply(p))

    apply = __call__

    def compose(self, first: "RingMap") -> "RingMap":
        """``self ∘ first``."""
        if first.target != self.source:
            raise ValueError("ring maps are not composable")
        return RingMap(first.source, self.target, [self(im) for im in first.images])

    @classmethod
    def identity(cls, ring) -> "RingMap":
        ring = QuotientRing.of(ring)
        return cls(ring, ring, list(ring.ambient.gens()))

    @classmethod
    def inclusion_by_name(cls, source, target) -> "RingMap":
        """Send each source variable to the target variable of the same name."""
        target = QuotientRing.of(target)
        return cls(source, target, [target.ambient.gen(v) for v in QuotientRing.of(source).variables])

    def kernel(self) -> Ideal:
        """``ker f`` as an ideal of the source, by eliminating the target variables."""
        S, T = self.source, self.target
        k = T.field
        if S.field != k:
            raise UnsupportedError("kernel of a ring map needs equal coefficient fields")
        nx, ny = T.nvars, S.nvars
        names = tuple(f"x{i}" for i in range(nx)) + tuple(f"y{i}" for i in range(ny))
        C = PolyRing(k, names, IndexBlockOrder((tuple(range(nx)), tuple(range(nx, nx + ny)))))
        lift_x = lambda p: Polynomial(C, {e + (0,) * ny: c for e, c in p.terms.items()})  # noqa: E731
        gens = [lift_x(g) for g in T.modulus_gb]
        gens += [C.gen(nx + i) - lift_x(im) for i, im in enumerate(self.images)]
        kept = [g for g in Ideal(C, gens).gb() if not any(g.lead_exp[:nx])]
        P = S.ambient
        return Ideal(S, [Polynomial(P, {e[nx:]: c for e, c in g.terms.items()}) for g in kept])

    def is_injective(self) -> bool:
        return self.kernel().is_zero()

    def __eq__(self, other):
        return (
            isinstance(other, RingMap)
            and self.source == other.source
            and self.target == other.target
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.source, self.target, self.images))

    def __str__(self):
        parts = ", ".join(f"{v} -> {im}" for v, im in zip(self.source.variables, self.images))
        return f"RingMap({self.source} -> {self.target}: {parts})"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# modules


class PresentedModule:
    """``ring^rank / relations``."""

    def __init__(self, ring, rank: int, relations=()):
        self.ring = QuotientRing.of(ring)
        self.rank = rank
        if isinstance(relations, SubmoduleGens):
            if relations.rank != rank:
                raise ValueError("relation module rank mismatch")
            rels = relations.generators
        else:
            rels = relations
        P = self.ring.ambient
        cleaned = []
        for v in rels:
            v = tuple(self.ring(p) for p in v)
            if len(v) != rank:
                raise ValueError(f"relation of length {len(v)} for rank {rank}")
            if any(v):
                cleaned.append(v)
        self.relations = SubmoduleGens(self.ring, rank, cleaned)
        self._P = P

    # constructors

    @classmethod
    def free(cls, ring, rank=1) -> "PresentedModule":
        return cls(ring, rank, [])

    @classmethod
    def cyclic(cls, ideal_or_ring, generators=None) -> "PresentedModule":
        """``A/J`` for an ideal ``J`` (or generators of it)."""
        if isinstance(ideal_or_ring, Ideal):
            ring, gens = ideal_or_ring.ring, ideal_or_ring.generators
        else:
            ring, gens = ideal_or_ring, generators or []
        ring = QuotientRing.of(ring)
        return cls(ring, 1, [(ring(g),) for g in gens])

    @classmethod
    def from_matrix(cls, ring, matrix) -> "PresentedModule":
        """Presentation from a ``rank x s`` matrix whose columns are relations."""
        ring = QuotientRing.of(ring)
        rows = [[ring(x) for x in row] for row in matrix]
        rank = len(rows)
        ncols = len(rows[0]) if rows else 0
        return cls(ring, rank, [tuple(rows[i][j] for i in range(rank)) for j in range(ncols)])

    # views

    @property
    def P(self) -> PolyRing:
        return self._P

    def relation_vectors(self):
        return list(self.relations.generators)

    def matrix(self):
        """Relation matrix: rows = generators, columns = relations."""
        rels = self.relation_vectors()
        return [[v[i] for v in rels] for i in range(self.rank)]

    def is_zero(self) -> bool:
        return self.rank == 0 or self.relations.is_full()

    def is_free_presentation(self) -> bool:
        return not self.relations.reduced_generators()

    def normal_form(self, vector):
        return self.relations.normal_form(vector)

    def element_is_zero(self, vector) -> bool:
        return self.relations.contains(vector)

    def basis_vector(self, k):
        P = self.P
        return tuple(P.one if j == k else P.zero for j in range(self.rank))

    def canonical(self):
        """Canonical key: ring, rank and reduced relation GB."""
        return (self.ring, self.rank, self.relations)

    def __eq__(self, other):
        if not isinstance(other, PresentedModule):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __str__(self):
        rels = self.relations.reduced_generators()
        if not rels:
            return f"{self.ring}^{self.rank}"
        body = ", ".join("(" + ", ".join(str(p) for p in v) + ")" for v in rels)
        return f"{self.ring}^{self.rank}/<{body}>"

    __repr__ = __str__

    def annihilator(self) -> Ideal:
        """``Ann(M) = ∩_k (Rel : e_k)`` as an ideal of the ring."""
        ring = self.ring
        if self.rank == 0:
            return Ideal(ring, [ring.ambient.one])
        result = None
        for k in range(self.rank):
            rows = _kernel_mod(
                self.P, self.rank, [self.basis_vector(k)], self.relations.generators,
                "annihilator", self.ring.modulus_gb,
            )
            ideal = Ideal(ring, [r[0] for r in rows])
            result = ideal if result is None else result.intersect(ideal)
        return result

    def pruned(self) -> "PresentedModule":
        """Isomorphic presentation after eliminating generators hit by unit entries."""
        ring = self.ring
        F = ring.field
        rels = [list(v) for v in self.relations.reduced_generators()] if self.relations.generators else []
        rank = self.rank
        alive = list(range(rank))
        changed = True
        while changed:
            changed = False
            for idx, v in enumerate(rels):
                for pos, k in enumerate(alive):
                    p = v[pos]
                    if p and p.is_constant():
                        inv = F.inv(p.constant_coeff())
                        new_rels = []
                        for jdx, w in enumerate(rels):
                            if jdx == idx:
                                continue
                            c = w[pos]
                            if c:
                                factor = c.scale(inv)
                                w = [ring(a - factor * b) for a, b in zip(w, v)]
                            del w[pos]
                            if any(w):
                                new_rels.append(w)
                        rels = new_rels
                        alive.pop(pos)
                        changed = True
                        break
                if changed:
                    break
        return PresentedModule(ring, len(alive), [tuple(v) for v in rels])


def subquotient(ring, generators, denominators, rank=None) -> PresentedModule:
    """Present ``span(generators) + D / D`` where ``D = span(denominators)``.

    Relations are the coefficient vectors ``c`` with ``sum c_i w_i ∈ D``.
    """
    ring = QuotientRing.of(ring)
    gens = [tuple(ring(p) for p in w) for w in generators]
    if rank is None:
        rank = len(gens[0]) if gens else (len(denominators[0]) if denominators else 0)
    if not gens:
        return PresentedModule(ring, 0, [])
    rows = _kernel_mod(ring.ambient, rank, gens, list(denominators), "subquotient", ring.modulus_gb)
    return PresentedModule(ring, len(gens), rows)


class ModuleMap:
    """``source -> target`` by a ``target.rank x source.rank`` matrix.

    Column ``j`` is the image of the ``j``-th source generator.  The map is
    certified well defined at construction.
    """

    def __init__(self, source: PresentedModule, target: PresentedModule, matrix, certify=True):
        if source.ring != target.ring:
            raise ValueError("module map between modules over different rings")
        self.source = source
        self.target = target
        ring = target.ring
        rows = [[ring(x) for x in row] for row in matrix]
        if len(rows) != target.rank or any(len(r) != source.rank for r in rows):
            raise ValueError(f"matrix shape must be {target.rank} x {source.rank}")
        self.matrix = rows
        if certify:
            for rel in source.relations.generators:
                if not target.relations.contains(self.apply(rel)):
                    raise NotWellDefinedError("module map does not respect the source relations")

    @property
    def ring(self):
        return self.target.ring

    def column(self, j):
        return tuple(row[j] for row in self.matrix)

    def columns(self):
        return [self.column(j) for j in range(self.source.rank)]

    def apply(self, vector):
        ring = self.ring
        out = []
        for row in self.matrix:
            acc = ring.ambient.zero
            for a, b in zip(row, vector):
                if a and b:
                    acc = acc + a * b
            out.append(ring.reduce(acc))
        return tuple(out)

    __call__ = apply

    def compose(self, first: "ModuleMap") -> "ModuleMap":
        """``self ∘ first``."""
        cols = [self.apply(first.column(j)) for j in range(first.source.rank)]
        mat = [[cols[j][i] for j in range(len(cols))] for i in range(self.target.rank)]
        return ModuleMap(first.source, self.target, mat, certify=False)

    def is_zero(self):
        return all(self.target.element_is_zero(c) for c in self.columns())

    @classmethod
    def identity(cls, m: PresentedModule) -> "ModuleMap":
        P = m.P
        mat = [[P.one if i == j else P.zero for j in range(m.rank)] for i in range(m.rank)]
        return cls(m, m, mat, certify=False)

    @classmethod
    def multiplication(cls, m: PresentedModule, g) -> "ModuleMap":
        g = m.ring(g)
        P = m.P
        mat = [[g if i == j else P.zero for j in range(m.rank)] for i in range(m.rank)]
        return cls(m, m, mat, certify=False)

    def kernel_generators(self):
        """Vectors of the source free module spanning the kernel preimage."""
        return _kernel_mod(
            self.ring.ambient, self.target.rank, self.columns(), self.target.relations.generators,
            "kernel", self.ring.modulus_gb,
        )

    def is_injective(self) -> bool:
        return all(self.source.element_is_zero(w) for w in self.kernel_generators())

    def injectivity_witness(self):
        """A source element mapping to zero but nonzero in the source, or ``None``."""
        for w in self.kernel_generators():
            if not self.source.element_is_zero(w):
                return w
        return None

    def is_surjective(self) -> bool:
        coker, _ = coker_image(self)
        return coker.is_zero()

    def __str__(self):
        rows = "; ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.matrix)
        return f"ModuleMap({self.source} -> {self.target}: {rows})"

    __repr__ = __str__


def kernel(f: ModuleMap):
    """Kernel module ``K`` with its inclusion ``K -> source``."""
    gens = f.kernel_generators()
    gens = [w for w in gens if not f.source.element_is_zero(w)]
    ring = f.ring
    K = subquotient(ring, gens, f.source.relations.generators, rank=f.source.rank)
    mat = [[w[i] for w in gens] for i in range(f.source.rank)]
    return K, ModuleMap(K, f.source, mat, certify=False)


def coker_image(f: ModuleMap):
    """``(cokernel, image)`` of a module map."""
    cols = f.columns()
    tgt = f.target
    coker = PresentedModule(tgt.ring, tgt.rank, tgt.relations.generators + [c for c in cols if any(c)])
    image = subquotient(tgt.ring, cols, tgt.relations.generators, rank=tgt.rank)
    return coker, image


def tensor(m: PresentedModule, n: PresentedModule) -> PresentedModule:
    """``m ⊗ n`` with generator ``(i, j)`` at index ``i * n.rank + j``."""
    if m.ring != n.ring:
        raise ValueError("tensor product of modules over different rings")
    a, b = m.rank, n.rank
    P = m.P
    zero = P.zero
    rels = []
    for r in m.relations.generators:
        for j in range(b):
            v = [zero] * (a * b)
            for i in range(a):
                v[i * b + j] = r[i]
            rels.append(tuple(v))
    for s in n.relations.generators:
        for i in range(a):
            v = [zero] * (a * b)
            for j in range(b):
                v[i * b + j] = s[j]
            rels.append(tuple(v))
    return PresentedModule(m.ring, a * b, rels)


def direct_sum(*mods: PresentedModule) -> PresentedModule:
    ring = mods[0].ring
    total = sum(m.rank for m in mods)
    zero = ring.ambient.zero
    rels = []
    offset = 0
    for m in mods:
        for r in m.relations.generators:
            v = [zero] * total
            v[offset:offset + m.rank] = r
            rels.append(tuple(v))
        offset += m.rank
    return PresentedModule(ring, total, rels)


def base_change(m: PresentedModule, f: RingMap) -> PresentedModule:
    """``m ⊗_R A`` along ``f: R -> A``: apply ``f`` to every relation entry."""
    if f.source != m.ring:
        raise ValueError("ring map source does not match the module's ring")
    return PresentedModule(f.target, m.rank, [tuple(f(p) for p in v) for v in m.relations.generators])


def base_change_map(phi: ModuleMap, f: RingMap) -> ModuleMap:
    src = base_change(phi.source, f)
    tgt = base_change(phi.target, f)
    return ModuleMap(src, tgt, [[f(x) for x in row] for row in phi.matrix], certify=False)


def presentations_equivalent(m: PresentedModule, n: PresentedModule) -> bool:
    """Restricted isomorphism test.

    Supported: equal rank with equal relation modules, or two cyclic modules
    with equal annihilators.  Anything else raises ``UnsupportedError``.
    """
    if m.ring != n.ring:
        return False
    if m.rank == n.rank and m.relations == n.relations:
        return True
    mp, np_ = m.pruned(), n.pruned()
    if mp.rank == np_.rank and mp.relations == np_.relations:
        return True
    if mp.rank <= 1 and np_.rank <= 1:
        return mp.annihilator() == np_.annihilator()
    raise UnsupportedError("general presentation isomorphism is not decided")


# ---------------------------------------------------------------------------
# free resolutions


class FreeResolution:
    """``F_L -> ... -> F_1 -> F_0`` with ``F_0 = ring^rank``.

    ``ranks[i]`` is the rank of ``F_i`` and ``differentials[i-1]`` is the
    matrix of ``d_i: F_i -> F_{i-1}`` (rows index ``F_{i-1}``).
    """

    def __init__(self, module: PresentedModule, ranks, differentials):
        self.module = module
        self.ranks = list(ranks)
        self.differentials = list(differentials)

    @property
    def ring(self):
        return self.module.ring

    @property
    def length(self):
        return len(self.differentials)

    def rank(self, i):
        return self.ranks[i] if i < len(self.ranks) else 0

    def differential(self, i):
        """Matrix of ``d_i`` (``rank(i-1) x rank(i)``); empty when out of range."""
        if 1 <= i <= len(self.differentials):
            return self.differentials[i - 1]
        return [[] for _ in range(self.rank(i - 1))] if i >= 1 else []

    def maps(self):
        out = []
        ring = self.ring
        for i, d in enumerate(self.differentials, start=1):
            src = PresentedModule.free(ring, self.ranks[i])
            tgt = PresentedModule.free(ring, self.ranks[i - 1])
            out.append(ModuleMap(src, tgt, d, certify=False))
        return out

    def certify(self) -> bool:
        """``d_i ∘ d_{i+1} = 0`` and ``ker d_i ⊆ im d_{i+1}`` at every computed stage."""
        ring = self.ring
        maps = self.maps()
        for i in range(len(maps) - 1):
            comp = maps[i].compose(maps[i + 1])
            if not all(not any(c) for c in comp.columns()):
                return False
        for i in range(len(maps) - 1):
            img = SubmoduleGens(ring, self.ranks[i + 1], maps[i + 1].columns())
            for w in maps[i].kernel_generators():
                if not img.contains(w):
                    return False
        return True


def _cols_to_matrix(cols, nrows):
    return [[c[i] for c in cols] for i in range(nrows)]


def free_resolution(m: PresentedModule, length: int) -> FreeResolution:
    """Free resolution up to ``F_length`` (not minimized)."""
    if length < 1:
        raise ValueError("resolution length must be at least 1")
    memo = m.__dict__.setdefault("_resolutions", {})
    if length not in memo:
        memo[length] = _free_resolution(m, length)
    return memo[length]


def _free_resolution(m: PresentedModule, length: int) -> FreeResolution:
    ring = m.ring
    cols = [v for v in m.relations.reduced_generators()] if m.relations.generators else []
    ranks = [m.rank]
    diffs = []
    for _ in range(length):
        if not cols:
            break
        ranks.append(len(cols))
        diffs.append(_cols_to_matrix(cols, ranks[-2]))
        syz = SubmoduleGens(ring, ranks[-2], cols).syzygies()
        cols = syz.reduced_generators() if syz.generators else []
    return FreeResolution(m, ranks, diffs)


# ---------------------------------------------------------------------------
# pushforward along a finite ring map


def pushforward(f: RingMap, module: PresentedModule | None = None):
    """View ``module`` (default: the target ring) as a module over ``f.source``.

    Returns ``(presented module, generator monomials)`` when the target ring
    is finite over the source, else ``None``.
    """
    A, B = f.source, f.target
    module = module if module is not None else PresentedModule.free(B, 1)
    if module.ring != B:
        raise ValueError("module must live over the target of the ring map")
    k = B.field
    if A.field != k:
        raise UnsupportedError("pushforward needs equal coefficient fields")
    ny, nx = B.nvars, A.nvars
    names = tuple(f"y{i}" for i in range(ny)) + tuple(f"x{i}" for i in range(nx))
    C = PolyRing(k, names, IndexBlockOrder((tuple(range(ny)), tuple(range(ny, ny + nx)))))

    def lift_y(p):
        return Polynomial(C, {e + (0,) * nx: c for e, c in p.terms.items()})

    def lift_x(p):
        return Polynomial(C, {(0,) * ny + e: c for e, c in p.terms.items()})

    L = [lift_y(g) for g in B.modulus_gb] + [lift_x(g) for g in A.modulus_gb]
    for i in range(nx):
        L.append(C.gen(ny + i) - lift_y(f.images[i]))
    ideal = Ideal(C, L)
    gb = ideal.gb()
    if any(g.is_constant() for g in gb):
        return PresentedModule(A, 0, []), []
    pure = []
    for g in gb:
        e = g.lead_exp
        if not any(e[ny:]):
            pure.append(e[:ny])
    for j in range(ny):
        if not any(p[j] > 0 and all(p[i] == 0 for i in range(ny) if i != j) for p in pure):
            return None
    # standard y-monomials
    bounds = []
    for j in range(ny):
        bounds.append(min(p[j] for p in pure if p[j] > 0 and all(p[i] == 0 for i in range(ny) if i != j)))
    std = []

    def walk(prefix):
        if len(prefix) == ny:
            t = tuple(prefix)
            if not any(all(a >= b for a, b in zip(t, p)) for p in pure):
                std.append(t)
            return
        for a in range(bounds[len(prefix)]):
            walk(prefix + [a])

    walk([])
    std.sort(key=lambda e: C.order.key(e + (0,) * nx))
    r = module.rank
    m = len(std) * r
    order = TermOrder(C.order.key, C.nvars, ("grouped", r, 1 + ny))
    vecs = []
    for g in gb:
        for kk in range(r):
            vecs.append(poly_to_vec(g, order, kk))
    for rel in module.relations.generators:
        vecs.append(vector_to_vec(tuple(lift_y(p) for p in rel), order))
    zero = (0,) * (ny + nx)
    for s_idx, s in enumerate(std):
        for kk in range(r):
            entries = {(kk, s + (0,) * nx): k.one, (r + s_idx * r + kk, zero): k.one}
            vecs.append(make_vector(order, k, entries))
    vecs = sorted([v for v in vecs if v], key=lambda v: v[0][0])
    gbm = buchberger(vecs, k, order, "pushforward")
    rels = []
    for v in gbm:
        if v[0][1] >= r and not any(v[0][2][:ny]):
            vec = vec_to_vector(v, C, m, offset=r)
            rels.append(tuple(_drop_y(p, A.ambient, ny) for p in vec))
    gens = [(s, kk) for s in std for kk in range(r)]
    return PresentedModule(A, m, rels), gens


def _drop_y(p: Polynomial, target: PolyRing, ny: int) -> Polynomial:
    return Polynomial(target, {e[ny:]: c for e, c in p.terms.items()})
