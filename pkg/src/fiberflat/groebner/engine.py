"""Buchberger's algorithm on raw module vectors.

A vector is a list of terms ``(nk, comp, exp, coeff)`` sorted by ``nk``
ascending, where ``nk`` is the *negated* order key of the module term
``exp * e_comp``.  So ``vec[0]`` is the leading term.  Because all order keys
are linear in the exponent, ``nk(comp, exp + s) == nk(comp, exp) + shift(s)``
componentwise, and multiplying a vector by a monomial only adds a fixed shift.

Ideals are the special case where every term has ``comp == 0``.
"""

from __future__ import annotations

import heapq
from operator import add, le, sub

from ..config import budgets
from ..errors import ResourceBudgetError


class TermOrder:
    """Module term order built from a monomial order key and a layout.

    ``layout`` is ``"pot"`` (position over term, lower index is larger),
    ``"top"`` (term over position), or ``("grouped", r, ny)``: components
    below ``r`` dominate the rest, and inside each group the first ``ny``
    monomial-key entries are compared before the position (module
    elimination of a variable block).
    """

    def __init__(self, mono_key, nvars, layout="pot"):
        self.mono_key = mono_key
        self.nvars = nvars
        self.layout = layout
        zero = tuple(mono_key((0,) * nvars))
        if any(zero):
            raise ValueError("monomial key must vanish on the unit monomial")
        self._shift_cache = {}
        self._key_cache = {}

    def nkey(self, comp, exp):
        cache = self._key_cache
        v = cache.get((comp, exp))
        if v is None:
            v = cache[(comp, exp)] = self._nkey(comp, exp)
        return v

    def _nkey(self, comp, exp):
        k = self.mono_key(exp)
        layout = self.layout
        if layout == "pot":
            return (comp,) + tuple(-x for x in k)
        if layout == "top":
            return tuple(-x for x in k) + (comp,)
        _, r, ny = layout
        return (0 if comp < r else 1,) + tuple(-x for x in k[:ny]) + (comp,) + tuple(-x for x in k[ny:])

    def shift(self, s):
        cache = self._shift_cache
        v = cache.get(s)
        if v is None:
            v = self._nkey(0, s)
            cache[s] = v
        return v


def make_vector(order: TermOrder, F, entries):
    """Build a vector from ``{(comp, exp): coeff}`` (zero coefficients dropped)."""
    out = [(order.nkey(c, e), c, e, a) for (c, e), a in entries.items() if not F.is_zero(a)]
    out.sort(key=lambda t: t[0])
    return out


def _lcm(a, b):
    return tuple(map(max, a, b))


def _divides(a, b):
    return all(map(le, a, b))


class Reducer:
    """Index of reducers grouped by leading component."""

    def __init__(self, F, order):
        self.F = F
        self.order = order
        self.by_comp = {}

    def add(self, vec):
        lead = vec[0]
        self.by_comp.setdefault(lead[1], []).append((lead[2], vec))

    def find(self, comp, exp):
        for lexp, vec in self.by_comp.get(comp, ()):
            if all(map(le, lexp, exp)):
                return lexp, vec
        return None

    def reduce(self, summands, full=True):
        """Reduce ``sum(scalar * mono * vec)`` given as ``(vec, s, scalar)`` triples.

        Returns the reduced vector (``full``: every term irreducible; otherwise
        only the leading term).
        """
        F = self.F
        fadd, fmul, fneg, fdiv, is_zero = F.add, F.mul, F.neg, F.div, F.is_zero
        shift = self.order.shift
        work = {}
        heap = []
        for vec, s, scalar in summands:
            if s is None:
                for nk, c, e, a in vec:
                    a = fmul(scalar, a)
                    slot = work.get(nk)
                    if slot is None:
                        work[nk] = [c, e, a]
                        heap.append(nk)
                    else:
                        slot[2] = fadd(slot[2], a)
            else:
                sh = shift(s)
                for nk, c, e, a in vec:
                    nk = tuple(map(add, nk, sh))
                    a = fmul(scalar, a)
                    slot = work.get(nk)
                    if slot is None:
                        work[nk] = [c, tuple(map(add, e, s)), a]
                        heap.append(nk)
                    else:
                        slot[2] = fadd(slot[2], a)
        heapq.heapify(heap)
        remainder = []
        find = self.find
        pop, push = heapq.heappop, heapq.heappush
        while heap:
            nk = pop(heap)
            c, e, a = work.pop(nk)
            if is_zero(a):
                continue
            hit = find(c, e)
            if hit is None:
                remainder.append((nk, c, e, a))
                if not full:
                    rest = []
                    while heap:
                        k2 = pop(heap)
                        c2, e2, a2 = work.pop(k2)
                        if not is_zero(a2):
                            rest.append((k2, c2, e2, a2))
                    remainder.extend(rest)
                    break
                continue
            lexp, vec = hit
            q = fneg(fdiv(a, vec[0][3]))
            s = tuple(map(sub, e, lexp))
            sh = shift(s)
            for nk2, c2, e2, a2 in vec[1:]:
                nk2 = tuple(map(add, nk2, sh))
                slot = work.get(nk2)
                if slot is None:
                    work[nk2] = [c2, tuple(map(add, e2, s)), fmul(q, a2)]
                    push(heap, nk2)
                else:
                    slot[2] = fadd(slot[2], fmul(q, a2))
        return remainder


def normal_form(vec, basis, F, order):
    """Full normal form of ``vec`` with respect to the list ``basis``."""
    if not vec:
        return []
    red = Reducer(F, order)
    for g in basis:
        red.add(g)
    return red.reduce([(vec, None, F.one)])


def _monic(vec, F):
    lc = vec[0][3]
    if lc == F.one:
        return vec
    inv = F.inv(lc)
    return [(nk, c, e, F.mul(inv, a)) for nk, c, e, a in vec]


def _single_component(vec):
    c = vec[0][1]
    return all(t[1] == c for t in vec)


def buchberger(vectors, F, order: TermOrder, label="groebner basis"):
    """Reduced Gröbner basis of the span of ``vectors``.

    Pairs are selected by sugar degree, then lcm degree, then indices; sugar
    keeps lex computations from chasing high-degree pairs.
    Gebauer-Möller criteria prune pairs; the coprime-lead criterion is only
    applied to vectors supported in a single component.
    """
    cfg = budgets()
    max_pairs, max_degree = cfg.max_pairs, cfg.max_degree

    basis = []          # all vectors, monic
    leads = []          # (comp, exp)
    single = []         # single-component flags
    sugar = []          # phantom homogenization degree
    active = []         # participates in new pairs
    red = Reducer(F, order)
    pairs = {}          # (i, j) -> lcm
    heap = []
    processed = 0

    def insert(h, sug):
        k = len(basis)
        c, e = h[0][1], h[0][2]
        if sum(e) > max_degree:
            raise ResourceBudgetError(f"degree bound {max_degree} exceeded", label)
        basis.append(h)
        leads.append((c, e))
        single.append(_single_component(h))
        sugar.append(max(sug, sum(e)))
        red.add(h)
        # new candidate pairs with active elements of the same component
        cand = {}
        for i in range(k):
            if active[i] and leads[i][0] == c:
                cand[i] = _lcm(leads[i][1], e)
        # Gebauer-Möller: drop old pairs (i, j) whose lcm is strictly divisible
        # by the new lead.
        for (i, j), L in list(pairs.items()):
            if leads[i][0] != c or not _divides(e, L):
                continue
            li, lj = cand.get(i), cand.get(j)
            if li is not None and lj is not None and li != L and lj != L:
                del pairs[(i, j)]
        # criterion M: keep minimal lcms; for equal lcms keep one
        kept = []
        for i, L in sorted(cand.items()):
            dominated = False
            for j, L2 in cand.items():
                if j == i:
                    continue
                if _divides(L2, L) and (L2 != L or j < i):
                    dominated = True
                    break
            if not dominated:
                kept.append((i, L))
        # product criterion, applied after M so equal-lcm representatives are
        # removed together with coprime pairs
        for i, L in kept:
            if single[i] and single[k]:
                li = leads[i][1]
                if all(a == 0 or b == 0 for a, b in zip(li, e)):
                    continue
            pairs[(i, k)] = L
            dl = sum(L)
            s_pair = max(sugar[i] + dl - sum(leads[i][1]), sugar[k] + dl - sum(e))
            heapq.heappush(heap, (s_pair, dl, k, i))
        for i in range(k):
            if active[i] and leads[i][0] == c and _divides(e, leads[i][1]):
                active[i] = False
        active.append(True)

    for v in vectors:
        if not v:
            continue
        h = red.reduce([(v, None, F.one)]) if basis else v
        if h:
            insert(_monic(h, F), max(sum(t[2]) for t in v))

    while heap:
        s_pair, _, k, i = heapq.heappop(heap)
        L = pairs.pop((i, k), None)
        if L is None:
            continue
        processed += 1
        if processed > max_pairs:
            raise ResourceBudgetError(f"S-pair budget {max_pairs} exceeded", label)
        if sum(L) > max_degree:
            raise ResourceBudgetError(f"degree bound {max_degree} exceeded", label)
        f, g = basis[i], basis[k]
        sf = tuple(map(sub, L, leads[i][1]))
        sg = tuple(map(sub, L, leads[k][1]))
        h = red.reduce([(f[1:], sf, F.one), (g[1:], sg, F.neg(F.one))])
        if h:
            insert(_monic(h, F), s_pair)

    return interreduce(basis, F, order)


def interreduce(basis, F, order):
    """Minimalize, tail-reduce and sort a Gröbner basis (canonical output)."""
    keep = []
    for idx, g in enumerate(basis):
        c, e = g[0][1], g[0][2]
        redundant = False
        for jdx, h in enumerate(basis):
            if jdx == idx or h[0][1] != c:
                continue
            he = h[0][2]
            if _divides(he, e) and (he != e or jdx < idx):
                redundant = True
                break
        if not redundant:
            keep.append(g)
    out = []
    for idx, g in enumerate(keep):
        red = Reducer(F, order)
        for jdx, h in enumerate(keep):
            if jdx != idx:
                red.add(h)
        tail = red.reduce([(g[1:], None, F.one)]) if len(g) > 1 else []
        out.append(_monic([g[0]] + tail, F))
    out.sort(key=lambda v: v[0][0])
    return out
