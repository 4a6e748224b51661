"""Acceptance criteria, one test per criterion.

Each test prints a PASS/FAIL line, also collected in the terminal summary.
Thresholds are pinned below.
"""

import os
import random
import subprocess
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import pytest

from fiberflat import (
    ConsistencyViolation,
    PresentedModule,
    QuotientRing,
    RingMap,
    check_fiber_flatness,
    check_local_flatness_consequences,
    check_pointwise_purity,
    check_tor_fiber_criterion,
    enumerate_primes,
    is_flat,
    is_pure_into_flat,
    verify_claim_a,
    verify_claim_b,
    verify_claim_c_boundary,
    verify_claim_d,
)
from fiberflat.criteria import FAILS, FIBER_FLAT, HOLDS, SUB_FF, SUB_FIBER, SUB_PURE, TOR_PRIME, TOR_TF
from fiberflat.gallery import doubling_demo, torsion_quotient_demo
from fiberflat.groebner import Ideal, clear_cache
from fiberflat.spectra import base_shape
from fiberflat.homology import tor, torsion_decompose, torsion_localizes

import corpora
from conftest import record_criterion, ring

ROOT = Path(__file__).resolve().parents[1]

# pinned thresholds
LEVELS = (3, 4, 5, 6)
GALLERY_SECONDS = 120.0
DIAG_SECONDS = 10.0
N_ARTINIAN_MODULES = 100
N_ARTINIAN_MAPS = 100
N_CUBIC_MODULES = 40
N_FLAT = 100
PRIME_DEGREE = 2
N_CYCLIC = 200
N_TORSION = 50
N_LOCALIZATION = 20
N_LOCAL_CONSEQUENCES = 60
CLI_RUNS = 3
MAX_DISAGREEMENTS = 0
COMPLETE_SPEC = ("field", "field-ext", "artinian")

pytestmark = pytest.mark.acceptance


def test_criterion_1_counterexample_reproduction():
    clear_cache()
    start = time.perf_counter()
    problems = []
    for d in LEVELS:
        a, b, c, dd = verify_claim_a(d), verify_claim_b(d), verify_claim_c_boundary(d), verify_claim_d(d)
        if not (a.holds and b.holds and dd.holds):
            problems.append(f"d={d}: claims a/b/d = {a.holds}/{b.holds}/{dd.holds}")
        if not (dd.details["tor1_nonzero"] and dd.details["T/T^2_nonzero"]):
            problems.append(f"d={d}: Tor_1(M, M) routes disagree")
        if c.details["discrepancy"] != [f"x{d - 1}"]:
            problems.append(f"d={d}: discrepancy {c.details['discrepancy']}")
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed <= GALLERY_SECONDS
    record_criterion(1, ok, f"d in {LEVELS}, {elapsed:.1f}s (limit {GALLERY_SECONDS:.0f}s)"
                     + ("" if not problems else "; " + "; ".join(problems)))
    assert ok


def _artinian_agreement(corpus):
    bad = []
    flat = 0
    for f, M in corpus:
        rep = check_tor_fiber_criterion(f, M)
        assert rep.complete
        conds = rep.all_hold([TOR_PRIME, FIBER_FLAT, TOR_TF])
        oracle = bool(is_flat(M))
        flat += oracle
        if conds != oracle:
            bad.append(str(M))
    return bad, flat


def test_criterion_2_artinian_equivalence():
    modules = corpora.artinian_modules(N_ARTINIAN_MODULES, seed=2)
    bad, flat = _artinian_agreement(modules)
    cubic = corpora.artinian_modules(N_CUBIC_MODULES, seed=3, nilpotency=3)
    bad3, flat3 = _artinian_agreement(cubic)
    maps = corpora.artinian_maps(N_ARTINIAN_MAPS, seed=2)
    bad_maps = []
    pure = 0
    for phi in maps:
        rep = check_pointwise_purity(phi)
        assert rep.complete
        oracle = bool(is_pure_into_flat(phi))
        pure += oracle
        if rep.all_hold() != oracle:
            bad_maps.append(str(phi.matrix))
    wrong = len(bad) + len(bad3) + len(bad_maps)
    ok = wrong <= MAX_DISAGREEMENTS
    record_criterion(2, ok, (
        f"e^2: {len(modules)} modules ({flat} flat), e^3: {len(cubic)} modules ({flat3} flat), "
        f"{len(maps)} maps ({pure} pure); {wrong} disagreements"))
    assert ok, (bad, bad3, bad_maps)


def _necessity_chunk(indices):
    """Run both fiber criteria on the flat corpus members in ``indices``."""
    corpus = corpora.flat_modules(N_FLAT, seed=4)
    primes = enumerate_primes(ring(["t"]), PRIME_DEGREE)
    violations = []
    for i in indices:
        f, M = corpus[i]
        try:
            reps = [check_tor_fiber_criterion(f, M, primes), check_fiber_flatness(f, M, primes)]
        except ConsistencyViolation as e:
            violations.append(f"instance {i}: {e}")
            continue
        for rep in reps:
            bad = [h for h in rep.hypotheses if not h.holds]
            if bad:
                violations.append(f"instance {i}: {rep.theorem_id} '{bad[0].name}' at {bad[0].prime}")
    return len(primes), violations


def test_criterion_3_necessity():
    start = time.perf_counter()
    workers = max(1, min(os.cpu_count() or 1, 8))
    chunks = [list(range(k, N_FLAT, workers)) for k in range(workers)]
    if workers == 1:
        results = [_necessity_chunk(chunks[0])]
    else:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_necessity_chunk, chunks))
    nprimes = results[0][0]
    violations = [v for _, vs in results for v in vs]
    elapsed = time.perf_counter() - start
    ok = len(violations) <= MAX_DISAGREEMENTS
    record_criterion(3, ok, (
        f"{N_FLAT} flat instances x {nprimes} primes (degree <= {PRIME_DEGREE}), "
        f"{len(violations)} violations, {elapsed:.0f}s on {workers} worker(s)"))
    assert ok, violations[:5]


def test_criterion_4_oracle_cross_validation():
    bad = []
    flat = tor_checked = 0
    for A, J in corpora.cyclic_modules(N_CYCLIC, seed=5):
        M = PresentedModule.cyclic(A, J)
        oracle = bool(is_flat(M))
        flat += oracle
        I = Ideal(A, J)
        if oracle != (I == I.power(2)):
            bad.append(("idempotence", str(A), [str(g) for g in J]))
        if base_shape(A) not in COMPLETE_SPEC:
            continue
        maximal = enumerate_primes(A)
        assert maximal.complete
        vanish = all(tor(1, PresentedModule.cyclic(A, m.generators()), M).is_zero for m in maximal)
        tor_checked += 1
        if vanish != oracle:
            bad.append(("tor", str(A), [str(g) for g in J]))
    ok = len(bad) <= MAX_DISAGREEMENTS and tor_checked > 0
    record_criterion(4, ok, (
        f"{N_CYCLIC} cyclic modules ({flat} flat) vs J^2 = J, "
        f"{tor_checked} complete-Spec cases vs Tor_1(A/m, M); {len(bad)} disagreements"))
    assert ok, bad[:5]


def test_criterion_5_homology_soundness():
    problems = []
    with_torsion = 0
    instances = corpora.torsion_instances(N_TORSION, seed=9)
    for i, (f, N) in enumerate(instances):
        d = torsion_decompose(N, f)
        if d.generators:
            with_torsion += 1
            if not d.certify(f):
                problems.append(f"torsion {i}: witness does not kill t(N)")
            if not torsion_decompose(d.torsion, f).torsionfree.is_zero():
                problems.append(f"torsion {i}: t(t(N)) != t(N)")
        if torsion_decompose(d.torsionfree, f).generators:
            problems.append(f"torsion {i}: t(N_tf) != 0")

    # element localization over the cyclic algebras A/(relations)
    rng = random.Random(10)
    localized = 0
    for f, N in corpora.torsion_instances(4 * N_LOCALIZATION, seed=10):
        if N.rank != 1 or localized >= N_LOCALIZATION:
            continue
        B = f.target
        Aq = QuotientRing(B.ambient, list(B.modulus.generators) + [v[0] for v in N.relations.generators])
        if Aq.is_zero_ring():
            continue
        fq = RingMap(f.source, Aq, ["t"])
        g = Aq.reduce(corpora.sparse_poly(rng, Aq.ambient, list(Aq.variables), degree=1, density=0.7))
        if not g:
            continue
        localized += 1
        if not torsion_localizes(fq, g).holds:
            problems.append(f"localization at {g} over {Aq}")

    # consequents of the local hypotheses for a = (x) over F_101[x, y]/(xy)
    A = ring(["x", "y"], ["x*y"])
    a = Ideal(A, ["x"])
    samples = [PresentedModule.cyclic(A, gens) for gens in (["x"], ["x^2"], ["x^2", "y - 1"], ["x", "y^2"])]
    passing = 0
    for M in corpora.local_modules(N_LOCAL_CONSEQUENCES, seed=11):
        try:
            rep = check_local_flatness_consequences(A, a, M, 3, samples)
        except ConsistencyViolation as e:
            problems.append(f"consequents fail for {M}: {e}")
            continue
        if rep.hypotheses[0].holds and rep.hypotheses[1].holds:
            passing += 1
            if not rep.conclusion_holds:
                problems.append(f"consequents not verified for {M}")
    ok = (not problems and with_torsion > 0 and localized >= N_LOCALIZATION and passing > 0)
    record_criterion(5, ok, (
        f"idempotence on {len(instances)} modules ({with_torsion} with torsion), "
        f"localization on {localized}, consequents on {passing}/{N_LOCAL_CONSEQUENCES} passing hypotheses"
        + ("" if not problems else "; " + "; ".join(problems[:3]))))
    assert ok, problems


def test_criterion_6_group_scheme_demos():
    clear_cache()
    start = time.perf_counter()
    doubling = doubling_demo()
    quotient = torsion_quotient_demo()
    elapsed = time.perf_counter() - start
    clauses = doubling.consistency["clauses"]
    doubling_ok = doubling.complete and all(clauses[c] == HOLDS for c in (SUB_FF, SUB_FIBER, SUB_PURE))
    pure = quotient.conditions(SUB_PURE)
    witness_ok = (quotient.consistency["clauses"][SUB_PURE] == FAILS
                  and any(h.fails and h.witness and "kernel_element" in h.witness for h in pure))
    ok = doubling_ok and witness_ok and elapsed <= DIAG_SECONDS
    record_criterion(6, ok, (
        f"doubling clauses {sorted(clauses.values())}, Z -> Z/2 kernel witness "
        f"{pure[0].witness if pure else None}, {elapsed:.2f}s (limit {DIAG_SECONDS:.0f}s)"))
    assert ok


def test_criterion_7_determinism():
    files = sorted(str(p) for p in (ROOT / "problems").glob("*.json"))
    assert files
    cmd = [sys.executable, "-m", "fiberflat", "run", "--no-timestamp", *files]
    outputs = [subprocess.run(cmd, capture_output=True, cwd=ROOT, timeout=600).stdout for _ in range(CLI_RUNS)]
    ok = len(set(outputs)) == 1 and len(outputs[0]) > 0
    record_criterion(7, ok, f"{CLI_RUNS} runs over {len(files)} problem files, {len(outputs[0])} bytes, "
                            f"{len(set(outputs))} distinct output(s)")
    assert ok
