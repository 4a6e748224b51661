"""Flatness oracle and checkers for the fiber criteria of flatness and purity.

The oracle: a finitely presented module is flat iff it is projective iff
every Fitting ideal is idempotent.  Each checker evaluates the conditions of
one criterion prime by prime, attaches witnesses to failures, compares the
outcome with the oracle and raises :class:`ConsistencyViolation` when a
mathematically guaranteed implication is contradicted (which would point at
an engine bug, not at the criterion).
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

from .config import budgets
from .errors import (
    ConsistencyViolation,
    CriterionInapplicable,
    ResourceBudgetError,
    UnsupportedError,
)
from .fpmod import (
    ModuleMap,
    PresentedModule,
    RingMap,
    base_change,
    base_change_map,
    coker_image,
    pushforward,
)
from .groebner.ideals import Ideal, QuotientRing, SubmoduleGens, clear_cache
from .homology import torsion_decompose, tor, tor_over_base
from .spectra import (
    PrimeIdeal,
    PrimeList,
    base_shape,
    enumerate_primes,
    fiber,
    quotient_fiber,
)

HOLDS = "holds"
FAILS = "fails"
NOT_CHECKABLE = "not-checkable"


def _vec_text(v):
    return "(" + ", ".join(str(p) for p in v) + ")"


# ---------------------------------------------------------------------------
# Fitting ideals


def _determinant(matrix, rows, cols, ring, memo):
    key = (rows, cols)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if len(rows) == 1:
        val = matrix[rows[0]][cols[0]]
    else:
        r0, rest = rows[0], rows[1:]
        val = ring.ambient.zero
        for j, c in enumerate(cols):
            a = matrix[r0][c]
            if not a:
                continue
            sub = _determinant(matrix, rest, cols[:j] + cols[j + 1:], ring, memo)
            if not sub:
                continue
            val = val + a * sub if j % 2 == 0 else val - a * sub
        val = ring.reduce(val)
    memo[key] = val
    return val


def _small_presentation(m: PresentedModule) -> PresentedModule:
    """An isomorphic presentation with few relations, within the minor cap."""
    cap = budgets().max_minor_size
    p = m.pruned()
    rels = list(p.relations.generators)
    if len(rels) > cap:
        kept = list(rels)
        for v in rels:
            others = [w for w in kept if w is not v]
            if SubmoduleGens(p.ring, p.rank, others).contains(v):
                kept = others
        rels = kept
        p = PresentedModule(p.ring, p.rank, rels)
    if rels and (p.rank > cap or len(rels) > cap):
        raise ResourceBudgetError(
            f"relation matrix {p.rank} x {len(rels)} exceeds the {cap} x {cap} minor cap", "fitting ideals"
        )
    return p


class FittingIdeals:
    """``Fitt_0 ⊆ Fitt_1 ⊆ ...`` of a finitely presented module."""

    def __init__(self, m: PresentedModule):
        self.module = m
        self.presentation = _small_presentation(m)
        self._memo = {}
        self._cache = {}

    @property
    def rank(self):
        return self.presentation.rank

    def __getitem__(self, i: int) -> Ideal:
        if i < 0:
            raise ValueError("Fitting index must be non-negative")
        hit = self._cache.get(i)
        if hit is not None:
            return hit
        p = self.presentation
        ring = p.ring
        P = ring.ambient
        k = p.rank - i
        rels = p.relations.generators
        if k <= 0:
            ideal = Ideal(ring, [P.one])
        elif k > len(rels):
            ideal = Ideal(ring, [])
        else:
            matrix = p.matrix()
            gens = []
            for rows in combinations(range(p.rank), k):
                for cols in combinations(range(len(rels)), k):
                    d = _determinant(matrix, rows, cols, ring, self._memo)
                    if d:
                        gens.append(d)
            ideal = Ideal(ring, gens)
        self._cache[i] = ideal
        return ideal


def fitting_ideal(m: PresentedModule, i: int) -> Ideal:
    return FittingIdeals(m)[i]


def _idempotence_witness(ideal: Ideal):
    """A generator of ``I`` outside ``I^2``, or ``None`` when ``I^2 = I``."""
    if ideal.is_zero() or ideal.is_unit():
        return None
    gens = ideal.reduced_generators()
    square = Ideal(ideal.ring, [a * b for a in gens for b in gens])
    for g in gens:
        if not square.contains(g):
            return g
    return None


@dataclass
class FlatnessCertificate:
    """Outcome of :func:`is_flat`; truthy iff the module is flat."""

    flat: bool
    module: PresentedModule
    fitting: list
    failing_index: int | None = None
    witness: object = None

    def __bool__(self):
        return self.flat

    def recheck(self) -> bool:
        """Recompute the verdict from the witness alone (equals ``flat``)."""
        if self.flat:
            return True
        ideal = fitting_ideal(self.module, self.failing_index)
        gens = ideal.reduced_generators()
        square = Ideal(ideal.ring, [a * b for a in gens for b in gens])
        return not (ideal.contains(self.witness) and not square.contains(self.witness))

    def to_dict(self):
        d = {"flat": self.flat}
        if not self.flat:
            d["fitting_index"] = self.failing_index
            d["fitting_ideal"] = str(dict(self.fitting)[self.failing_index])
            d["generator_outside_square"] = str(self.witness)
        return d


def is_flat(m: PresentedModule) -> FlatnessCertificate:
    """Flatness of a finitely presented module: every ``Fitt_i`` is idempotent."""
    fit = FittingIdeals(m)
    checked = []
    for i in range(fit.rank):
        ideal = fit[i]
        checked.append((i, ideal))
        if ideal.is_unit():
            break
        w = _idempotence_witness(ideal)
        if w is not None:
            return FlatnessCertificate(False, m, checked, i, w)
    return FlatnessCertificate(True, m, checked)


@dataclass
class FaithfulFlatnessCertificate:
    faithfully_flat: bool
    flatness: FlatnessCertificate
    non_nilpotent: object = None

    def __bool__(self):
        return self.faithfully_flat

    def to_dict(self):
        d = {"faithfully_flat": self.faithfully_flat, "flatness": self.flatness.to_dict()}
        if self.non_nilpotent is not None:
            d["non_nilpotent_fitt0_generator"] = str(self.non_nilpotent)
        return d


def is_faithfully_flat(m: PresentedModule) -> FaithfulFlatnessCertificate:
    """Flat with ``Fitt_0`` inside the nilradical (support is all of Spec).

    Uses Jacobson radical = nilradical, valid for rings finitely generated
    over a field.
    """
    cert = is_flat(m)
    if not cert:
        return FaithfulFlatnessCertificate(False, cert)
    fitt0 = fitting_ideal(m, 0)
    zero = Ideal(m.ring, [])
    gens = fitt0.reduced_generators() if not fitt0.is_unit() else [m.ring.ambient.one]
    for g in gens:
        if not zero.radical_contains(g):
            if m.ring.is_zero_ring():
                break
            return FaithfulFlatnessCertificate(False, cert, g)
    return FaithfulFlatnessCertificate(True, cert)


# ---------------------------------------------------------------------------
# verdicts and reports


@dataclass
class ConditionVerdict:
    name: str
    verdict: str
    witness: dict | None = None
    reason: str = ""
    prime: str | None = None
    bounded: bool = False
    recheck: Callable | None = field(default=None, repr=False, compare=False)

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    @property
    def fails(self) -> bool:
        return self.verdict == FAILS

    def to_dict(self):
        d = {"name": self.name, "verdict": self.verdict}
        if self.prime is not None:
            d["prime"] = self.prime
        if self.witness is not None:
            d["witness"] = self.witness
        if self.reason:
            d["reason"] = self.reason
        if self.bounded:
            d["bounded"] = True
        return d


def _verdict(ok, name, witness=None, reason="", prime=None, bounded=False):
    return ConditionVerdict(name, HOLDS if ok else FAILS, None if ok else witness, reason, prime, bounded)


def _checked(fn, *args):
    """Evaluate a condition and attach an isolated re-run as ``recheck``."""
    v = fn(*args)

    def again():
        clear_cache()
        head = args[0].fresh() if isinstance(args[0], _Instance) else args[0]
        return fn(head, *args[1:]).verdict

    v.recheck = again
    return v


@dataclass
class CriterionReport:
    theorem_id: str
    hypotheses: list
    primes: list = field(default_factory=list)
    complete: bool = False
    conclusion: dict = field(default_factory=dict)
    consistency: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def failures(self):
        return [h for h in self.hypotheses if h.fails]

    def conditions(self, name=None, prime=None):
        out = self.hypotheses
        if name is not None:
            out = [h for h in out if h.name == name]
        if prime is not None:
            key = prime.describe() if isinstance(prime, PrimeIdeal) else prime
            out = [h for h in out if h.prime == key]
        return out

    def all_hold(self, names=None) -> bool:
        hs = self.hypotheses if names is None else [h for h in self.hypotheses if h.name in names]
        return all(h.holds for h in hs)

    @property
    def conclusion_holds(self):
        return self.conclusion.get("verdict") == HOLDS

    def to_dict(self):
        return {
            "theorem_id": self.theorem_id,
            "hypotheses": [h.to_dict() for h in self.hypotheses],
            "primes": [
                {"ideal": p.describe(), "certificate": p.certificate_text(), "complete": self.complete}
                for p in self.primes
            ],
            "conclusion": self.conclusion,
            "consistency": self.consistency,
            "notes": list(self.notes),
        }


def _conclusion(statement, ok, witness=None, reason=""):
    d = {"statement": statement, "verdict": HOLDS if ok else FAILS}
    if not ok and witness is not None:
        d["witness"] = witness
    if reason:
        d["reason"] = reason
    return d


def _not_checkable_conclusion(statement, reason):
    return {"statement": statement, "verdict": NOT_CHECKABLE, "reason": reason}


def _consistency(report: CriterionReport, necessary, sufficient, bundle):
    """Compare per-condition verdicts with the conclusion.

    ``necessary``: names forced to hold when the conclusion holds (any prime
    list).  ``sufficient``: names whose joint truth on a complete prime list
    forces the conclusion, or ``None`` when the criterion gives no
    sufficiency on finite data.
    """
    concl = report.conclusion.get("verdict")
    out = {}
    if concl == HOLDS:
        bad = [h for h in report.hypotheses if h.name in necessary and h.fails]
        if bad:
            report.consistency = {"status": "violation", "direction": "necessity"}
            raise ConsistencyViolation(
                f"{report.theorem_id}: conclusion holds but '{bad[0].name}' fails at {bad[0].prime}",
                bundle(report),
            )
        out["necessity"] = "verified"
    else:
        out["necessity"] = "vacuous"
    if sufficient is None:
        out["sufficiency"] = "not applicable on finite data"
    elif not report.complete:
        out["sufficiency"] = "not decided: prime list incomplete"
    else:
        hs = [h for h in report.hypotheses if h.name in sufficient]
        if all(h.holds for h in hs):
            if concl == FAILS:
                report.consistency = {"status": "violation", "direction": "sufficiency"}
                raise ConsistencyViolation(
                    f"{report.theorem_id}: all conditions hold on a complete prime list but the conclusion fails",
                    bundle(report),
                )
            out["sufficiency"] = "verified" if concl == HOLDS else "conclusion not checkable"
        elif any(h.verdict == NOT_CHECKABLE for h in hs) and not any(h.fails for h in hs):
            out["sufficiency"] = "not decided: some conditions not checkable"
        else:
            out["sufficiency"] = "vacuous"
    out["status"] = "consistent"
    report.consistency = out
    return out


def _bundle_for(*objects):
    def make(report):
        d = report.to_dict()
        d["inputs"] = [str(o) for o in objects]
        return d

    return make


def _prime_list(R, primes, degree_bound=1) -> PrimeList:
    if primes is None:
        return enumerate_primes(R, degree_bound)
    if isinstance(primes, PrimeList):
        return primes
    return PrimeList(list(primes), False)


# ---------------------------------------------------------------------------
# helpers shared by the checkers


def _quotient_by(ring, gens):
    """``ring / (gens)`` together with the projection."""
    ring = QuotientRing.of(ring)
    P = ring.ambient
    Q = QuotientRing(P, list(ring.modulus_gb) + [P(g) for g in gens])
    return Q, RingMap(ring, Q, list(P.gens()), certify=False)


def _mod_ideal(m: PresentedModule, ideal: Ideal):
    """``M / aM`` as a module over ``A / a``."""
    Q, proj = _quotient_by(m.ring, ideal.generators)
    return base_change(m, proj)


def _cyclic(ring, gens) -> PresentedModule:
    return PresentedModule.cyclic(ring, list(gens))


def _tor1_vanishes(n: PresentedModule, m: PresentedModule):
    """``(vanishes, witness cycle, reason)`` for ``Tor_1^A(n, m)``."""
    if m.is_free_presentation() or n.is_free_presentation():
        return True, None, "free presentation"
    # resolve m: it is the fixed module across a prime sweep, so the resolution is reused
    t = tor(1, m, n)
    w = t.nonzero_witness()
    return w is None, w, ""


def _flat_witness(cert: FlatnessCertificate):
    return None if cert.flat else cert.to_dict()


def is_flat_over_base(f: RingMap, m: PresentedModule, primes=None) -> ConditionVerdict:
    """Flatness of an ``A``-module over ``R`` along ``f: R -> A``.

    Exact for field, ``k[t]`` (torsion-freeness) and artinian ``k[t]/(g)``
    bases (Tor against every residue field); otherwise by restriction of
    scalars when ``A`` is finite over ``R``, else the bounded surrogate
    ``Tor_1^R(R/p, M) = 0`` over the supplied primes.
    """
    name = "M flat over R"
    R = f.source
    shape = base_shape(R)
    if shape in ("field", "field-ext", "zero"):
        return ConditionVerdict(name, HOLDS, reason="every module over a field is flat")
    mp = m.pruned()
    if mp.rank == 0:
        return ConditionVerdict(name, HOLDS, reason="zero module")
    if mp.is_free_presentation() and (mp.rank > 1 or not m.is_free_presentation()):
        a_flat = is_flat_over_base(f, PresentedModule.free(m.ring, 1), primes)
        a_flat.name = name
        return a_flat
    m = mp
    if shape == "pid":
        dec = torsion_decompose(m, f)
        if dec.generators:
            g = dec.generators[0]
            return ConditionVerdict(
                name, FAILS,
                {"torsion_element": _vec_text(g), "annihilator": str(dec.witness)},
                "over k[t] flat means torsionfree",
            )
        return ConditionVerdict(name, HOLDS, reason="torsionfree over k[t]")
    if shape == "artinian":
        for q in enumerate_primes(R):
            res = tor_over_base(1, _cyclic(R, q.ideal.generators), f, m)
            w = res.nonzero_witness()
            if w is not None:
                return ConditionVerdict(
                    name, FAILS, {"prime": q.describe(), "tor1_cycle": _vec_text(w)},
                    "Tor_1^R(R/q, M) != 0", q.describe(),
                )
        return ConditionVerdict(name, HOLDS, reason="Tor_1^R(k(q), M) = 0 at every maximal q of an artinian base")
    pf = pushforward(f, m)
    if pf is not None:
        cert = is_flat(pf[0])
        return ConditionVerdict(name, HOLDS if cert else FAILS, _flat_witness(cert), "restriction of scalars")
    if not primes:
        return ConditionVerdict(name, NOT_CHECKABLE, reason="M is not finitely presented over R and no primes given")
    for p in primes:
        res = tor_over_base(1, _cyclic(R, p.ideal.generators), f, m)
        w = res.nonzero_witness()
        if w is not None:
            return ConditionVerdict(name, FAILS, {"prime": p.describe(), "tor1_cycle": _vec_text(w)},
                                    "Tor_1^R(R/p, M) != 0", p.describe(), bounded=True)
    return ConditionVerdict(name, HOLDS, reason="Tor_1^R(R/p, M) = 0 on the listed primes", bounded=True)


class _Instance:
    """Per-(map, module) caches shared by the per-prime conditions."""

    def __init__(self, f: RingMap, m: PresentedModule):
        if m.ring != f.target:
            raise ValueError("module does not live over the target of the ring map")
        self.f = f
        self.m = m
        self.A = f.target
        self.mp = m.pruned()
        self.free = self.mp.is_free_presentation()
        self._fibers = {}
        self._quotients = {}
        self._tf = {}
        self._tor = {}
        self._fiber_flat = {}

    def fresh(self) -> "_Instance":
        """An instance without any cached state (for isolated re-runs)."""
        m = self.m
        return _Instance(self.f, PresentedModule(m.ring, m.rank, m.relations.generators))

    def fiber(self, p):
        if p not in self._fibers:
            self._fibers[p] = fiber(self.f, p)
        return self._fibers[p]

    def quotient(self, p):
        if p not in self._quotients:
            self._quotients[p] = quotient_fiber(self.f, p)
        return self._quotients[p]

    def pA(self, p):
        return [self.f(g) for g in p.ideal.generators]

    def torsionfree_quotient(self, p):
        """``(A/pA)_tf`` as a cyclic ``A``-module, or ``None`` if the base shape is unsupported."""
        if p in self._tf:
            return self._tf[p]
        q = self.quotient(p)
        shape = base_shape(q.base_map.source)
        extra = []
        if shape not in ("field", "field-ext", "zero"):
            try:
                dec = torsion_decompose(PresentedModule.free(q.ring, 1), q.base_map)
            except UnsupportedError:
                self._tf[p] = None
                return None
            extra = [g[0] for g in dec.generators]
        out = _cyclic(self.A, self.pA(p) + extra)
        self._tf[p] = out
        return out


def _quotient_is_field(q, p) -> bool:
    """``R/p`` is a field (certified maximal primes skip the shape test)."""
    return p.is_maximal() or base_shape(q.base_map.source) in ("field", "field-ext", "zero")


_INSTANCES: "OrderedDict" = OrderedDict()


def _instance(f: RingMap, m: PresentedModule) -> _Instance:
    """Shared per-(map, module) state, so several checkers on one input reuse fibers."""
    key = (id(f), id(m))
    hit = _INSTANCES.get(key)
    if hit is not None and hit[0] is f and hit[1] is m:
        _INSTANCES.move_to_end(key)
        return hit[2]
    inst = _Instance(f, m)
    _INSTANCES[key] = (f, m, inst)
    if len(_INSTANCES) > 8:
        _INSTANCES.popitem(last=False)
    return inst


# condition names
TOR_PRIME = "Tor_1^A(A/pA, M) = 0"
FIBER_FLAT = "M ⊗ k(p) flat over A ⊗ k(p)"
TOR_TF = "Tor_1^A((A/pA)_tf, M) = 0"
TOR_IDEAL = "Tor_1^A(A/lA, M) = 0"
NOETHERIAN = "A noetherian"
A_FLAT_R = "A flat over R"
M_FLAT_R = "M flat over R"
FIBER_FF = "M ⊗ k(p) faithfully flat over A ⊗ k(p)"


def _cond_tor_prime(inst: _Instance, p):
    key = ("prime", p)
    if key not in inst._tor:
        if inst.free:
            inst._tor[key] = (True, None, "M has a free presentation")
        else:
            inst._tor[key] = _tor1_vanishes(_cyclic(inst.A, inst.pA(p)), inst.mp)
    ok, w, reason = inst._tor[key]
    return _verdict(ok, TOR_PRIME, {"prime": p.describe(), "tor1_cycle": _vec_text(w)} if w else None,
                    reason, p.describe())


def _cond_fiber_flat(inst: _Instance, p):
    if inst.free:
        return ConditionVerdict(FIBER_FLAT, HOLDS, reason="base change of a free module", prime=p.describe())
    if p not in inst._fiber_flat:
        fb = inst.fiber(p)
        cert = is_flat(fb.module(inst.mp))
        w = None if cert else dict(cert.to_dict(), prime=p.describe(), route=fb.route)
        inst._fiber_flat[p] = (bool(cert), w, f"{fb.route} fiber")
    ok, w, reason = inst._fiber_flat[p]
    return _verdict(ok, FIBER_FLAT, w, reason, p.describe())


def _cond_tor_tf(inst: _Instance, p):
    if inst.free:
        return ConditionVerdict(TOR_TF, HOLDS, reason="M has a free presentation", prime=p.describe())
    q = inst.quotient(p)
    if _quotient_is_field(q, p):
        v = _cond_tor_prime(inst, p)
        v.name = TOR_TF
        v.reason = "R/p is a field, so (A/pA)_tf = A/pA"
        return v
    n = inst.torsionfree_quotient(p)
    if n is None:
        return ConditionVerdict(
            TOR_TF, NOT_CHECKABLE, prime=p.describe(),
            reason="torsion over R/p is unsupported; A is noetherian, which replaces this condition",
        )
    ok, w, reason = _tor1_vanishes(n, inst.mp)
    return _verdict(ok, TOR_TF, {"prime": p.describe(), "tor1_cycle": _vec_text(w)} if w else None,
                    reason, p.describe())


def _cond_tor_ideal(inst: _Instance, gens, label):
    if inst.free:
        return ConditionVerdict(TOR_IDEAL, HOLDS, reason="M has a free presentation", prime=label, bounded=True)
    ok, w, reason = _tor1_vanishes(_cyclic(inst.A, [inst.f(g) for g in gens]), inst.mp)
    return _verdict(ok, TOR_IDEAL, {"ideal": label, "tor1_cycle": _vec_text(w)} if w else None,
                    reason, label, bounded=True)


def _flatness_conclusion(m):
    cert = is_flat(m)
    return _conclusion("M flat over A", bool(cert), _flat_witness(cert)), cert


# ---------------------------------------------------------------------------
# local criterion and its consequences


LOCAL_FLAT = "(1) M flat over A"
LOCAL_GAMMA = "(2) M/aM flat over A/a and gr(a) ⊗ M/aM -> gr(M) injective"
LOCAL_TOR = "(3) M/aM flat over A/a and Tor_1^A(A/a, M) = 0"
LOCAL_POWERS = "(4) M/a^nM flat over A/a^n"
LOCAL_HYP = "a nilpotent (A finitely generated over a field, so Jac(A) = nil(A))"


def _gamma_injective(a: Ideal, n: int, m: PresentedModule):
    """Injectivity of ``gr_n(A) ⊗ M/aM -> a^nM/a^{n+1}M``; returns a kernel witness or ``None``."""
    from .homology import graded_piece
    from .fpmod import tensor

    A = m.ring
    src = tensor(graded_piece(a, n, PresentedModule.free(A, 1)), _mod_ideal_over_A(m, a))
    tgt = graded_piece(a, n, m)
    for v in tgt.relations.generators:
        if not src.relations.contains(v):
            return v
    return None


def _mod_ideal_over_A(m: PresentedModule, a: Ideal) -> PresentedModule:
    P = m.P
    rels = list(m.relations.generators)
    for g in a.generators:
        for k in range(m.rank):
            rels.append(tuple(g if j == k else P.zero for j in range(m.rank)))
    return PresentedModule(m.ring, m.rank, rels)


def check_local_criterion(A, a: Ideal, m: PresentedModule, n_max: int = 3) -> CriterionReport:
    """Local flatness criterion: the four conditions for ``M`` and ``a``.

    (2) and (4) are checked for ``n <= n_max`` only.  The equivalence of all
    four needs ``a`` nilpotent; (1) => (2), (3), (4) and (3) => (4) always hold.
    """
    A = QuotientRing.of(A)
    if m.ring != A or a.P != A.ambient:
        raise ValueError("ideal and module must live over A")
    mp = m.pruned()
    hyps = []
    zero = Ideal(A, [])
    nilpotent = all(zero.radical_contains(g) for g in a.generators)
    nil_index = None
    if nilpotent:
        for n in range(1, max(n_max, 1) + 1):
            if a.power(n).is_zero():
                nil_index = n
                break
    hyps.append(ConditionVerdict(LOCAL_HYP, HOLDS if nilpotent else FAILS,
                                 None if nilpotent else {"generators": [str(g) for g in a.generators]}))

    def flat_mod(n):
        Q, proj = _quotient_by(A, a.power(n).generators)
        return is_flat(base_change(mp, proj))

    c1 = is_flat(mp)
    hyps.append(_verdict(bool(c1), LOCAL_FLAT, _flat_witness(c1)))
    c_mod = flat_mod(1)
    t_ok, t_w, _ = _tor1_vanishes(_cyclic(A, a.generators), mp)
    if not c_mod:
        hyps.append(ConditionVerdict(LOCAL_TOR, FAILS, {"M/aM": c_mod.to_dict()}))
    else:
        hyps.append(_verdict(t_ok, LOCAL_TOR, {"tor1_cycle": _vec_text(t_w)} if t_w is not None else None))
    gamma_fail = None
    if c_mod:
        for n in range(1, n_max + 1):
            w = _gamma_injective(a, n, mp)
            if w is not None:
                gamma_fail = {"degree": n, "kernel_element": _vec_text(w)}
                break
        hyps.append(_verdict(gamma_fail is None, LOCAL_GAMMA, gamma_fail, bounded=True))
    else:
        hyps.append(ConditionVerdict(LOCAL_GAMMA, FAILS, {"M/aM": c_mod.to_dict()}, bounded=True))
    powers_fail = None
    for n in range(1, n_max + 1):
        c = c_mod if n == 1 else flat_mod(n)
        if not c:
            powers_fail = dict(c.to_dict(), n=n)
            break
    hyps.append(_verdict(powers_fail is None, LOCAL_POWERS, powers_fail, bounded=True))

    report = CriterionReport("local-flatness", hyps, notes=[f"n_max = {n_max}"])
    report.conclusion = _conclusion("M flat over A", bool(c1), _flat_witness(c1))
    byname = {h.name: h for h in hyps}
    bundle = _bundle_for(A, a, m)
    out = {}
    if c1:
        bad = [n for n in (LOCAL_GAMMA, LOCAL_TOR, LOCAL_POWERS) if byname[n].fails]
        if bad:
            raise ConsistencyViolation(f"flat module violates '{bad[0]}'", bundle(report))
    if byname[LOCAL_TOR].holds and byname[LOCAL_POWERS].fails:
        raise ConsistencyViolation("(3) holds but (4) fails", bundle(report))
    out["unconditional"] = "verified: (1) => (2), (3), (4) and (3) => (4)"
    if nilpotent:
        full = nil_index is not None
        implied = [LOCAL_TOR] + ([LOCAL_GAMMA, LOCAL_POWERS] if full else [])
        for n in implied:
            if byname[n].holds and not c1:
                raise ConsistencyViolation(f"a is nilpotent and '{n}' holds but M is not flat", bundle(report))
        out["equivalence"] = "verified" if full else "verified for (1) <=> (3); a^n != 0 for n <= n_max"
    else:
        out["equivalence"] = "not asserted: a is not nilpotent"
        if byname[LOCAL_TOR].holds and not c1:
            report.notes.append("(3) holds but M is not flat: the criterion's hypothesis is essential here")
    out["status"] = "consistent"
    report.consistency = out
    return report


CONS_MOD_POWERS = "M/a^nM flat over A/a^n"
CONS_TOR = "Tor_1^A(M, N) = 0"


def _killing_power(a: Ideal, n_mod: PresentedModule, n_max: int):
    ann = n_mod.annihilator()
    for n in range(1, n_max + 1):
        if ann.contains_ideal(a.power(n)):
            return n
    return None


def check_local_flatness_consequences(A, a: Ideal, m: PresentedModule, n_max: int = 3,
                                      sample_N=()) -> CriterionReport:
    """If ``M/aM`` is ``A/a``-flat and ``Tor_1(A/a, M) = 0``, verify the consequents.

    Consequents: ``M/a^nM`` flat over ``A/a^n`` for ``2 <= n <= n_max`` and
    ``Tor_1(M, N) = 0`` for each sample ``N`` killed by some ``a^n``.
    """
    A = QuotientRing.of(A)
    mp = m.pruned()
    Q, proj = _quotient_by(A, a.generators)
    c_mod = is_flat(base_change(mp, proj)) if not mp.is_free_presentation() else FlatnessCertificate(True, mp, [])
    h1 = _verdict(bool(c_mod), "M/aM flat over A/a", _flat_witness(c_mod))
    ok, w, reason = _tor1_vanishes(_cyclic(A, a.generators), mp)
    h2 = _verdict(ok, "Tor_1^A(A/a, M) = 0", {"tor1_cycle": _vec_text(w)} if w else None, reason)
    hyps = [h1, h2]
    report = CriterionReport("local-flatness-consequences", hyps, notes=[f"n_max = {n_max}"])
    if not (h1.holds and h2.holds):
        report.conclusion = _not_checkable_conclusion("consequents", "hypotheses fail; consequents skipped")
        report.consistency = {"status": "consistent", "implication": "vacuous"}
        return report
    results = []
    for n in range(2, n_max + 1):
        Qn, pn = _quotient_by(A, a.power(n).generators)
        cert = is_flat(base_change(mp, pn)) if not mp.is_free_presentation() else FlatnessCertificate(True, mp, [])
        v = _verdict(bool(cert), CONS_MOD_POWERS, _flat_witness(cert), f"n = {n}", bounded=True)
        results.append(v)
    for idx, N in enumerate(sample_N):
        label = f"sample {idx}"
        n = _killing_power(a, N, n_max)
        if n is None:
            results.append(ConditionVerdict(CONS_TOR, NOT_CHECKABLE, reason=f"{label}: not killed by a^n, n <= {n_max}",
                                            prime=label))
            continue
        ok, w, reason = _tor1_vanishes(mp, N)
        results.append(_verdict(ok, CONS_TOR, {"sample": idx, "tor1_cycle": _vec_text(w)} if w else None,
                                f"{label}: killed by a^{n}" + (f"; {reason}" if reason else ""), label))
    report.hypotheses = hyps + results
    failed = [r for r in results if r.fails]
    report.conclusion = _conclusion("consequents hold", not failed, failed[0].witness if failed else None)
    if failed:
        raise ConsistencyViolation("hypotheses hold but a consequent fails", _bundle_for(A, a, m)(report))
    report.consistency = {"status": "consistent", "implication": "verified"}
    return report


# ---------------------------------------------------------------------------
# fiber criteria for flatness


def _run_primes(inst, primes, conds):
    out = []
    for p in primes:
        for fn in conds:
            out.append(_checked(fn, inst, p))
    return out


def check_fiber_flatness(f: RingMap, m: PresentedModule, primes=None) -> CriterionReport:
    """Fiber criterion: ``A`` and ``M`` flat over ``R`` and every fiber of ``M`` flat."""
    primes = _prime_list(f.source, primes)
    inst = _instance(f, m)
    a_flat = is_flat_over_base(f, PresentedModule.free(f.target, 1), list(primes))
    a_flat.name = A_FLAT_R
    m_flat = is_flat_over_base(f, m, list(primes))
    hyps = [a_flat, m_flat] + _run_primes(inst, primes, [_cond_fiber_flat])
    report = CriterionReport("fiber-flatness", hyps, list(primes), primes.complete)
    report.conclusion, _ = _flatness_conclusion(inst.mp)
    _consistency(report, {FIBER_FLAT}, {A_FLAT_R, M_FLAT_R, FIBER_FLAT}, _bundle_for(f, m))
    report.notes.append("R-flatness hypotheses are not necessary conditions and are excluded from the necessity check")
    return report


def _cond_fiber_ff(inst: _Instance, p):
    fb = inst.fiber(p)
    cert = is_faithfully_flat(fb.module(inst.mp))
    w = None if cert else dict(cert.to_dict(), prime=p.describe())
    return _verdict(bool(cert), FIBER_FF, w, f"{fb.route} fiber", p.describe())


def check_fiber_faithful_flatness(f: RingMap, m: PresentedModule, primes=None) -> CriterionReport:
    """Faithfully flat variant of :func:`check_fiber_flatness`."""
    primes = _prime_list(f.source, primes)
    inst = _instance(f, m)
    a_flat = is_flat_over_base(f, PresentedModule.free(f.target, 1), list(primes))
    a_flat.name = A_FLAT_R
    m_flat = is_flat_over_base(f, m, list(primes))
    hyps = [a_flat, m_flat] + _run_primes(inst, primes, [_cond_fiber_ff])
    report = CriterionReport("fiber-faithful-flatness", hyps, list(primes), primes.complete)
    cert = is_faithfully_flat(inst.mp)
    report.conclusion = _conclusion("M faithfully flat over A", bool(cert), None if cert else cert.to_dict())
    _consistency(report, {FIBER_FF}, {A_FLAT_R, M_FLAT_R, FIBER_FF}, _bundle_for(f, m))
    return report


def check_tor_fiber_criterion(f: RingMap, m: PresentedModule, primes=None) -> CriterionReport:
    """Tor vanishing over primes plus fiber flatness.

    Per prime: ``Tor_1^A(A/pA, M) = 0``, ``M ⊗ k(p)`` flat, and
    ``Tor_1^A((A/pA)_tf, M) = 0``.  All engine rings are noetherian, so the
    last condition is implied; it is still evaluated where the torsion is
    computable.
    """
    primes = _prime_list(f.source, primes)
    inst = _instance(f, m)
    hyps = _run_primes(inst, primes, [_cond_tor_prime, _cond_fiber_flat, _cond_tor_tf])
    report = CriterionReport("tor-fiber", hyps, list(primes), primes.complete)
    report.conclusion, _ = _flatness_conclusion(inst.mp)
    _consistency(report, {TOR_PRIME, FIBER_FLAT, TOR_TF}, {TOR_PRIME, FIBER_FLAT}, _bundle_for(f, m))
    return report


def check_tor_fiber_criterion_ideals(f: RingMap, m: PresentedModule, ideal_corpus=(), primes=None,
                                     torsionfree_condition=True) -> CriterionReport:
    """Tor vanishing over a corpus of (not necessarily prime) ideals of ``R``.

    The listed primes are added to the corpus, so on a complete prime list
    the checked conditions suffice for flatness (``A`` is noetherian).
    """
    primes = _prime_list(f.source, primes)
    inst = _instance(f, m)
    R = f.source
    hyps = []
    seen = set()
    corpus = []
    for l in list(ideal_corpus) + [p.ideal for p in primes]:
        l = l if isinstance(l, Ideal) else Ideal(R, list(l))
        key = tuple(l.gb())
        if key in seen:
            continue
        seen.add(key)
        corpus.append(l)
    for l in corpus:
        label = str(l) if l.reduced_generators() else "(0)"
        hyps.append(_checked(_cond_tor_ideal, inst, l.reduced_generators(), label))
    hyps += _run_primes(inst, primes, [_cond_fiber_flat])
    hyps.append(ConditionVerdict(NOETHERIAN, HOLDS, reason="finitely generated over a field"))
    if torsionfree_condition:
        hyps += _run_primes(inst, primes, [_cond_tor_tf])
    report = CriterionReport("tor-fiber-strong", hyps, list(primes), primes.complete,
                             notes=[f"ideal corpus of size {len(corpus)} (bounded check)"])
    report.conclusion, _ = _flatness_conclusion(inst.mp)
    _consistency(report, {TOR_IDEAL, FIBER_FLAT, TOR_TF}, {TOR_IDEAL, FIBER_FLAT, NOETHERIAN}, _bundle_for(f, m))
    return report


NZD_TOR = "Tor_1^A(M, A/zA) = 0"
NZD_FLAT = "M/zM flat over A/zA"
NZD_CONS = "Tor_i^A(M, N) = 0"


def check_nzd_reduction(A, z, m: PresentedModule, sample_N=(), max_index: int = 2) -> CriterionReport:
    """If ``Tor_1(M, A/zA) = 0`` and ``M/zM`` is flat, then ``Tor_i(M, N) = 0`` for ``zN = 0``."""
    A = QuotientRing.of(A)
    z = A(z)
    imax = min(max_index, budgets().max_tor_index)
    mp = m.pruned()
    ok, w, reason = _tor1_vanishes(mp, _cyclic(A, [z]))
    h1 = _verdict(ok, NZD_TOR, {"tor1_cycle": _vec_text(w)} if w else None, reason)
    zi = Ideal(A, [z])
    cert = is_flat(_mod_ideal(mp, zi))
    h2 = _verdict(bool(cert), NZD_FLAT, _flat_witness(cert))
    hyps = [h1, h2]
    report = CriterionReport("nzd-reduction", hyps, notes=[f"Tor indices 1..{imax}"])
    if not (h1.holds and h2.holds):
        report.conclusion = _not_checkable_conclusion("consequents", "hypotheses fail; consequents skipped")
        report.consistency = {"status": "consistent", "implication": "vacuous"}
        return report
    results = []
    for idx, N in enumerate(sample_N):
        label = f"sample {idx}"
        if not all(N.element_is_zero(tuple(z if j == k else N.P.zero for j in range(N.rank))) for k in range(N.rank)):
            results.append(ConditionVerdict(NZD_CONS, NOT_CHECKABLE, reason=f"{label}: zN != 0", prime=label))
            continue
        bad = None
        if not mp.is_free_presentation():
            for i in range(1, imax + 1):
                t = tor(i, mp, N)
                wv = t.nonzero_witness()
                if wv is not None:
                    bad = {"sample": idx, "index": i, "cycle": _vec_text(wv)}
                    break
        results.append(_verdict(bad is None, NZD_CONS, bad, f"{label}: i <= {imax}", label, bounded=True))
    report.hypotheses = hyps + results
    failed = [r for r in results if r.fails]
    report.conclusion = _conclusion("consequents hold", not failed, failed[0].witness if failed else None)
    if failed:
        raise ConsistencyViolation("hypotheses hold but a consequent fails", _bundle_for(A, z, m)(report))
    report.consistency = {"status": "consistent", "implication": "verified"}
    return report


# ---------------------------------------------------------------------------
# purity


@dataclass
class PurityVerdict:
    pure: bool
    injective: bool | None
    kernel_witness: object = None
    cokernel: FlatnessCertificate | None = None

    def __bool__(self):
        return self.pure

    def to_dict(self):
        d = {"pure": self.pure}
        if self.injective is not None:
            d["injective"] = self.injective
        if self.kernel_witness is not None:
            d["kernel_element"] = _vec_text(self.kernel_witness)
        if self.cokernel is not None and not self.cokernel:
            d["cokernel"] = self.cokernel.to_dict()
        return d


def is_pure_into_flat(phi: ModuleMap, check_injective: bool = True) -> PurityVerdict:
    """Purity of a map into a flat module: injective with flat cokernel."""
    if not is_flat(phi.target):
        raise CriterionInapplicable("target module is not flat")
    if check_injective:
        w = phi.injectivity_witness()
        if w is not None:
            return PurityVerdict(False, False, w)
    coker, _ = coker_image(phi)
    cert = is_flat(coker)
    return PurityVerdict(bool(cert), True if check_injective else None, None, cert)


PURE_I = "φ ⊗ A/pA injective"
PURE_II = "φ ⊗ (A/pA)_tf injective"
PURE_III = "φ ⊗ k(p) pure over A ⊗ k(p)"


class _MapInstance(_Instance):
    def __init__(self, f, phi):
        super().__init__(f, phi.target)
        self.phi = phi

    def fresh(self) -> "_MapInstance":
        phi = self.phi
        return _MapInstance(self.f, ModuleMap(phi.source, phi.target, phi.matrix, certify=False))


def _injective_after(phi, proj, name, prime, reason=""):
    w = base_change_map(phi, proj).injectivity_witness()
    return _verdict(w is None, name, {"prime": prime, "kernel_element": _vec_text(w)} if w else None, reason, prime)


def _cond_pure_i(inst: _MapInstance, p):
    q = inst.quotient(p)
    return _injective_after(inst.phi, q.to_fiber, PURE_I, p.describe())


def _cond_pure_ii(inst: _MapInstance, p):
    q = inst.quotient(p)
    if _quotient_is_field(q, p):
        v = _cond_pure_i(inst, p)
        v.name = PURE_II
        v.reason = "R/p is a field, so (A/pA)_tf = A/pA"
        return v
    n = inst.torsionfree_quotient(p)
    if n is None:
        return ConditionVerdict(PURE_II, NOT_CHECKABLE, reason="torsion over R/p is unsupported", prime=p.describe())
    Q, proj = _quotient_by(inst.A, [g[0] for g in n.relations.generators])
    return _injective_after(inst.phi, proj, PURE_II, p.describe())


def _cond_pure_iii(inst: _MapInstance, p):
    fb = inst.fiber(p)
    pv = is_pure_into_flat(fb.map(inst.phi))
    w = None if pv else dict(pv.to_dict(), prime=p.describe())
    return _verdict(bool(pv), PURE_III, w, f"{fb.route} fiber", p.describe())


def check_fiber_purity(f: RingMap, phi: ModuleMap, primes=None) -> CriterionReport:
    """Fiber criterion for a map ``φ: M -> N`` of ``A``-modules with ``N`` flat."""
    if not is_flat(phi.target):
        raise CriterionInapplicable("target module is not flat")
    primes = _prime_list(f.source, primes)
    inst = _MapInstance(f, phi)
    hyps = _run_primes(inst, primes, [_cond_pure_i, _cond_pure_ii, _cond_pure_iii])
    report = CriterionReport("fiber-purity", hyps, list(primes), primes.complete)
    pv = is_pure_into_flat(phi)
    report.conclusion = _conclusion("φ pure", bool(pv), None if pv else pv.to_dict())
    names = {PURE_I, PURE_II, PURE_III}
    _consistency(report, names, names, _bundle_for(f, phi))
    return report


POINT_TF = "M/pM torsionfree over R/p"
POINT_INJ = "φ ⊗ k(p) injective"


def _cond_point_tf(inst: _MapInstance, p):
    q = inst.quotient(p)
    if _quotient_is_field(q, p):
        return ConditionVerdict(POINT_TF, HOLDS, reason="R/p is a field", prime=p.describe())
    mod = q.module(inst.phi.source)
    dec = torsion_decompose(mod, q.base_map)
    if dec.generators:
        return ConditionVerdict(POINT_TF, FAILS, {"prime": p.describe(), "torsion_element": _vec_text(dec.generators[0]),
                                                  "annihilator": str(dec.witness)}, prime=p.describe())
    return ConditionVerdict(POINT_TF, HOLDS, prime=p.describe())


def _cond_point_inj(inst: _MapInstance, p):
    fb = inst.fiber(p)
    w = fb.map(inst.phi).injectivity_witness()
    return _verdict(w is None, POINT_INJ, {"prime": p.describe(), "kernel_element": _vec_text(w)} if w else None,
                    f"{fb.route} fiber", p.describe())


def check_pointwise_purity(phi: ModuleMap, primes=None) -> CriterionReport:
    """Purity of ``φ: M -> N`` over ``R`` itself with ``N`` flat, checked at primes."""
    R = phi.ring
    if not is_flat(phi.target):
        raise CriterionInapplicable("target module is not flat")
    primes = _prime_list(R, primes)
    inst = _MapInstance(RingMap.identity(R), phi)
    hyps = _run_primes(inst, primes, [_cond_point_tf, _cond_point_inj])
    report = CriterionReport("pointwise-purity", hyps, list(primes), primes.complete)
    pv = is_pure_into_flat(phi)
    report.conclusion = _conclusion("φ pure", bool(pv), None if pv else pv.to_dict())
    _consistency(report, {POINT_TF, POINT_INJ}, {POINT_TF, POINT_INJ}, _bundle_for(phi))
    return report


# ---------------------------------------------------------------------------
# pure subalgebras of Hopf algebras


SUB_FF = "(1) f faithfully flat"
SUB_FIBER = "(2) f ⊗ k(p) faithfully flat"
SUB_PURE = "(3) f♯ pure"


def _finite_ff(fs: RingMap):
    """Faithful flatness along a ring map when the target is finite; ``None`` otherwise."""
    pf = pushforward(fs)
    if pf is None:
        return None
    return is_faithfully_flat(pf[0])


def _fiber_map(fs: RingMap, base_B: RingMap, base_A: RingMap, p):
    fb = fiber(base_B, p)
    fa = fiber(base_A, p)
    return RingMap(fb.ring, fa.ring, [fa.to_fiber(im) for im in fs.images], certify=False)


def _cond_sub_fiber(fs, base_B, base_A, p):
    g = _fiber_map(fs, base_B, base_A, p)
    cert = _finite_ff(g)
    if cert is not None:
        w = None if cert else dict(cert.to_dict(), prime=p.describe())
        return _verdict(bool(cert), SUB_FIBER, w, "finite fiber map", p.describe())
    ker = g.kernel()
    gens = ker.reduced_generators()
    return _verdict(
        not gens, SUB_FIBER, {"prime": p.describe(), "kernel_element": str(gens[0])} if gens else None,
        "over a field, a Hopf algebra map is faithfully flat iff injective", p.describe(),
    )


def check_pure_subalgebra(f_sharp: RingMap, primes=None, base_map: RingMap | None = None) -> CriterionReport:
    """Faithful flatness vs fiberwise faithful flatness vs purity of ``R[G] -> R[G']``.

    ``base_map`` is the structure map ``R -> R[G]`` (default: ``R`` is the
    coefficient field).  The Hopf structure is not represented; the inputs
    must be coordinate rings of flat affine group schemes and ``f_sharp`` a
    Hopf algebra map.  Purity is tested over ``R[G]`` on the unit map
    ``R[G] -> R[G']``, which is equivalent for such maps.
    """
    from .polys import PolyRing

    B, A = f_sharp.source, f_sharp.target
    if base_map is None:
        base_map = RingMap(PolyRing(B.field, ()), B, [])
    R = base_map.source
    base_A = f_sharp.compose(base_map)
    primes = _prime_list(R, primes)
    hyps = []
    for ring, bm, label in ((B, base_map, "R[G] flat over R"), (A, base_A, "R[G'] flat over R")):
        v = is_flat_over_base(bm, PresentedModule.free(ring, 1), list(primes))
        v.name = label
        hyps.append(v)
    pf = pushforward(f_sharp)
    if pf is None:
        hyps.append(ConditionVerdict(SUB_FF, NOT_CHECKABLE, reason="R[G'] is not finite over R[G]"))
    else:
        cert = is_faithfully_flat(pf[0])
        hyps.append(_verdict(bool(cert), SUB_FF, None if cert else cert.to_dict(), "R[G'] finite over R[G]"))
    for p in primes:
        hyps.append(_checked(_cond_sub_fiber, f_sharp, base_map, base_A, p))
    ker = f_sharp.kernel().reduced_generators()
    if ker:
        hyps.append(ConditionVerdict(SUB_PURE, FAILS, {"kernel_element": str(ker[0])}, "f♯ is not injective"))
    elif pf is None:
        hyps.append(ConditionVerdict(SUB_PURE, NOT_CHECKABLE, reason="R[G'] is not finite over R[G]"))
    else:
        module, gens = pf
        P = B.ambient
        unit = [P.one if (s == (0,) * A.nvars and kk == 0) else P.zero for s, kk in gens]
        phi = ModuleMap(PresentedModule.free(B, 1), module, [[x] for x in unit])
        try:
            pv = is_pure_into_flat(phi)
            hyps.append(_verdict(bool(pv), SUB_PURE, None if pv else pv.to_dict(), "unit map over R[G]"))
        except CriterionInapplicable:
            hyps.append(ConditionVerdict(SUB_PURE, NOT_CHECKABLE, reason="R[G'] is not flat over R[G]"))
    report = CriterionReport("pure-subalgebra", hyps, list(primes), primes.complete)
    byname = {}
    for h in hyps:
        byname.setdefault(h.name, []).append(h)
    clause = {}
    for name in (SUB_FF, SUB_FIBER, SUB_PURE):
        vs = [h.verdict for h in byname.get(name, [])]
        if any(v == FAILS for v in vs):
            clause[name] = FAILS
        elif vs and all(v == HOLDS for v in vs):
            clause[name] = HOLDS
        else:
            clause[name] = NOT_CHECKABLE
    decided = [v for v in clause.values() if v != NOT_CHECKABLE]
    if clause[SUB_FF] != NOT_CHECKABLE:
        report.conclusion = {"statement": "f faithfully flat", "verdict": clause[SUB_FF]}
    else:
        report.conclusion = _not_checkable_conclusion("f faithfully flat", "R[G'] is not finite over R[G]")
    agree = len(set(decided)) <= 1
    if not agree and primes.complete and clause[SUB_FIBER] != NOT_CHECKABLE:
        raise ConsistencyViolation("clauses of the pure-subalgebra equivalence disagree", _bundle_for(f_sharp)(report))
    report.consistency = {
        "status": "consistent" if agree else "clauses disagree on an incomplete prime list",
        "clauses": {k: clause[k] for k in (SUB_FF, SUB_FIBER, SUB_PURE)},
        "equivalence": "verified" if agree and primes.complete and len(decided) == 3 else "partial",
    }
    return report


# names used by the external API description
check_lemma_2_5 = check_local_flatness_consequences
check_thm_3_2 = check_fiber_flatness
check_cor_3_3 = check_fiber_faithful_flatness
check_thm_4_1 = check_tor_fiber_criterion
check_thm_4_2 = check_tor_fiber_criterion_ideals
check_lemma_4_5 = check_nzd_reduction
check_prop_5_3 = check_fiber_purity
check_cor_5_5 = check_pointwise_purity
check_thm_7_1 = check_pure_subalgebra
