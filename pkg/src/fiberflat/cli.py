"""Batch front end: read problem documents, run them, print reports.

A problem document is a JSON object::

    {
      "field": "F_101",
      "rings": {"R": {"variables": ["t"]},
                "A": {"variables": ["t", "x"], "relations": []}},
      "ring_maps": {"f": {"source": "R", "target": "A", "images": {"t": "t"}}},
      "modules": {"M": {"ring": "A", "rank": 1, "relations": [["x - t"]]}},
      "task": {"kind": "fibercheck", "theorem": "tor-fiber", "map": "f", "module": "M"}
    }

Exit codes: 0 completed, 2 a condition failed (a witness is in the report),
3 parse, resource or unsupported errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .config import use_budgets
from .criteria import (
    FAILS,
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
    is_faithfully_flat,
    is_flat,
    is_pure_into_flat,
)
from .errors import (
    ConsistencyViolation,
    CriterionInapplicable,
    FiberflatError,
    NotWellDefinedError,
    ParseError,
    ResourceBudgetError,
    UnsupportedError,
)
from .fields import Field, PrimeField, RationalFunctions, Rationals, SimpleExtension
from .fpmod import ModuleMap, PresentedModule, RingMap
from .gallery import AbelianGroup, counterexample_document, diag_morphism
from .groebner.ideals import Ideal, QuotientRing, clear_cache
from .homology import tor, torsion_decompose
from .polys import PolyRing, parse_polynomial
from .spectra import PrimeList, enumerate_primes, principal_prime, user_prime, zero_prime

EXIT_OK = 0
EXIT_FAILED = 2
EXIT_ERROR = 3

TASK_KINDS = ("gb", "tor", "torsion", "isflat", "ispure", "fibercheck", "validate", "counterexample", "diag")

# theorem id -> (checker kind, accepted aliases)
THEOREMS = {
    "local-flatness": ("thm2.4", "lemma2.4"),
    "local-flatness-consequences": ("lemma2.5",),
    "fiber-flatness": ("thm3.2",),
    "fiber-faithful-flatness": ("cor3.3",),
    "tor-fiber": ("thm4.1", "cor4.6"),
    "tor-fiber-strong": ("thm4.2",),
    "nzd-reduction": ("lemma4.5",),
    "fiber-purity": ("prop5.3",),
    "pointwise-purity": ("cor5.5",),
    "pure-subalgebra": ("thm7.1",),
}
_ALIASES = {alias: tid for tid, aliases in THEOREMS.items() for alias in aliases}
_ALIASES.update({tid: tid for tid in THEOREMS})


class DocumentError(FiberflatError):
    """A malformed document; ``where`` is a JSON path, line/column locate the offending text."""

    def __init__(self, where, message, line=None, column=None):
        self.where = where
        self.line = line
        self.column = column
        loc = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{where}: {message}{loc}" if where else f"{message}{loc}")


def resolve_theorem(name: str) -> str:
    key = name.strip().lower().replace("_", "").replace(" ", "")
    key = re.sub(r"^(theorem|thm)", "thm", key)
    key = re.sub(r"^(corollary|cor)", "cor", key)
    key = re.sub(r"^(proposition|prop)", "prop", key)
    if key in _ALIASES:
        return _ALIASES[key]
    if name in _ALIASES:
        return _ALIASES[name]
    raise DocumentError("task.theorem", f"unknown theorem id {name!r}")


# ---------------------------------------------------------------------------
# fields


_PRIME_RE = re.compile(r"^(?:F_?|GF\()(\d+)\)?$")


def parse_field(text: str) -> Field:
    """``F_p``/``GF(p)``, ``QQ``, ``K(s)`` (rational functions) or ``K[a]/(g)``."""
    s = text.strip()
    m = _PRIME_RE.match(s)
    if m:
        return PrimeField(int(m.group(1)))
    if s in ("QQ", "Q"):
        return Rationals()
    m = re.match(r"^(.*)\[([A-Za-z][A-Za-z0-9_]*)\]/\((.*)\)$", s)
    if m:
        base = parse_field(m.group(1))
        var = m.group(2)
        g = parse_polynomial(m.group(3), PolyRing(base, [var]))
        coeffs = [base.zero] * (g.total_degree() + 1)
        for exp, c in g.terms.items():
            coeffs[exp[0]] = c
        return SimpleExtension(base, var, tuple(coeffs))
    m = re.match(r"^(.*)\(([A-Za-z][A-Za-z0-9_]*)\)$", s)
    if m:
        return RationalFunctions(parse_field(m.group(1)), m.group(2))
    raise DocumentError("field", f"unrecognized field {text!r}")


# ---------------------------------------------------------------------------
# documents


def _need(obj, key, where, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise DocumentError(where, f"missing key {key!r}")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise DocumentError(f"{where}.{key}", f"expected {kind.__name__ if isinstance(kind, type) else kind}")
    return val


class Document:
    """A parsed problem document with every name resolved and type-checked."""

    def __init__(self, raw: dict, field_override=None, order_override=None):
        if not isinstance(raw, dict):
            raise DocumentError("", "the document must be a JSON object")
        unknown = set(raw) - {"field", "rings", "ideals", "modules", "ring_maps", "module_maps", "task", "name"}
        if unknown:
            raise DocumentError("", f"unknown top-level keys {sorted(unknown)}")
        self.name = raw.get("name")
        field_text = field_override or raw.get("field", "F_101")
        try:
            self.field = parse_field(field_text)
        except (ValueError, ParseError) as e:
            raise DocumentError("field", str(e)) from None
        self.order_override = order_override
        self.rings = {}
        self.ring_specs = {}
        self.ideals = {}
        self.modules = {}
        self.ring_maps = {}
        self.module_maps = {}
        for name, spec in sorted(raw.get("rings", {}).items()):
            self._ring(name, spec)
        for name, spec in sorted(raw.get("ideals", {}).items()):
            where = f"ideals.{name}"
            ring = self._lookup(self.rings, _need(spec, "ring", where), f"{where}.ring", "ring")
            gens = self._polys(ring, spec.get("generators", []), f"{where}.generators")
            self.ideals[name] = Ideal(ring, gens)
        for name, spec in sorted(raw.get("modules", {}).items()):
            self._module(name, spec)
        for name, spec in sorted(raw.get("ring_maps", {}).items()):
            self._ring_map(name, spec)
        for name, spec in sorted(raw.get("module_maps", {}).items()):
            self._module_map(name, spec)
        self.task = _need(raw, "task", "", dict)
        self.kind = _need(self.task, "kind", "task", str)
        if self.kind not in TASK_KINDS:
            raise DocumentError("task.kind", f"unknown task kind {self.kind!r}; expected one of {list(TASK_KINDS)}")
        self.theorem = resolve_theorem(self.task["theorem"]) if "theorem" in self.task else None
        self._check_task()

    # construction

    def _lookup(self, table, name, where, what):
        if not isinstance(name, str) or name not in table:
            raise DocumentError(where, f"unknown {what} {name!r}")
        return table[name]

    def _poly(self, ring, text, where):
        if not isinstance(text, (str, int)):
            raise DocumentError(where, "expected a polynomial string")
        P = ring.ambient if isinstance(ring, QuotientRing) else ring
        try:
            p = parse_polynomial(str(text), P)
        except ParseError as e:
            raise DocumentError(where, e.message, e.line, e.column) from None
        return ring(p) if isinstance(ring, QuotientRing) else p

    def _polys(self, ring, texts, where):
        if not isinstance(texts, list):
            raise DocumentError(where, "expected a list")
        return [self._poly(ring, t, f"{where}[{i}]") for i, t in enumerate(texts)]

    def _ring(self, name, spec):
        where = f"rings.{name}"
        variables = _need(spec, "variables", where, list)
        order = self.order_override or spec.get("order", "grevlex")
        try:
            P = PolyRing(self.field, variables, order)
        except ValueError as e:
            raise DocumentError(where, str(e)) from None
        rels = self._polys(P, spec.get("relations", []), f"{where}.relations")
        self.rings[name] = QuotientRing(P, rels)
        self.ring_specs[name] = order

    def _vector_list(self, ring, rank, vectors, where):
        if not isinstance(vectors, list):
            raise DocumentError(where, "expected a list of vectors")
        out = []
        for i, v in enumerate(vectors):
            if not isinstance(v, list) or len(v) != rank:
                raise DocumentError(f"{where}[{i}]", f"expected a vector of length {rank}")
            out.append(tuple(self._polys(ring, v, f"{where}[{i}]")))
        return out

    def _module(self, name, spec):
        where = f"modules.{name}"
        ring = self._lookup(self.rings, _need(spec, "ring", where), f"{where}.ring", "ring")
        if "ideal" in spec:
            J = self._lookup(self.ideals, spec["ideal"], f"{where}.ideal", "ideal")
            if J.ring != ring and QuotientRing.of(J.ring) != ring:
                raise DocumentError(f"{where}.ideal", "ideal lives over a different ring")
            self.modules[name] = PresentedModule.cyclic(ring, J.generators)
            return
        rank = _need(spec, "rank", where, int)
        if rank < 0:
            raise DocumentError(f"{where}.rank", "rank must be non-negative")
        rels = self._vector_list(ring, rank, spec.get("relations", []), f"{where}.relations")
        self.modules[name] = PresentedModule(ring, rank, rels)

    def _ring_map(self, name, spec):
        where = f"ring_maps.{name}"
        src = self._lookup(self.rings, _need(spec, "source", where), f"{where}.source", "ring")
        tgt = self._lookup(self.rings, _need(spec, "target", where), f"{where}.target", "ring")
        images = _need(spec, "images", where, dict)
        missing = [v for v in src.variables if v not in images]
        extra = sorted(set(images) - set(src.variables))
        if missing or extra:
            raise DocumentError(f"{where}.images", f"images must be given for exactly {list(src.variables)}")
        ims = [self._poly(tgt, images[v], f"{where}.images.{v}") for v in src.variables]
        try:
            self.ring_maps[name] = RingMap(src, tgt, ims)
        except NotWellDefinedError as e:
            raise DocumentError(where, str(e)) from None

    def _module_map(self, name, spec):
        where = f"module_maps.{name}"
        src = self._lookup(self.modules, _need(spec, "source", where), f"{where}.source", "module")
        tgt = self._lookup(self.modules, _need(spec, "target", where), f"{where}.target", "module")
        if src.ring != tgt.ring:
            raise DocumentError(where, "source and target live over different rings")
        rows = _need(spec, "matrix", where, list)
        if len(rows) != tgt.rank or any(not isinstance(r, list) or len(r) != src.rank for r in rows):
            raise DocumentError(f"{where}.matrix", f"matrix must be {tgt.rank} x {src.rank}")
        matrix = [self._polys(tgt.ring, r, f"{where}.matrix[{i}]") for i, r in enumerate(rows)]
        try:
            self.module_maps[name] = ModuleMap(src, tgt, matrix)
        except NotWellDefinedError as e:
            raise DocumentError(where, str(e)) from None

    # task type-checking: every reference is resolved before computing

    def module(self, key="module"):
        return self._lookup(self.modules, self.task.get(key), f"task.{key}", "module")

    def ring_map(self, key="map"):
        return self._lookup(self.ring_maps, self.task.get(key), f"task.{key}", "ring map")

    def module_map(self, key="module_map"):
        return self._lookup(self.module_maps, self.task.get(key), f"task.{key}", "module map")

    def ideal(self, key="ideal"):
        return self._lookup(self.ideals, self.task.get(key), f"task.{key}", "ideal")

    def samples(self):
        names = self.task.get("samples", [])
        if not isinstance(names, list):
            raise DocumentError("task.samples", "expected a list of module names")
        return [self._lookup(self.modules, n, f"task.samples[{i}]", "module") for i, n in enumerate(names)]

    def _check_task(self):
        k, t = self.kind, self.task
        if k == "gb":
            if ("ideal" in t) == ("module" in t):
                raise DocumentError("task", "gb needs exactly one of 'ideal' or 'module'")
            self.ideal() if "ideal" in t else self.module()
        elif k == "tor":
            if not isinstance(t.get("index", 1), int) or t.get("index", 1) < 0:
                raise DocumentError("task.index", "expected a non-negative integer")
            m, n = self.module("left"), self.module("right")
            if m.ring != n.ring:
                raise DocumentError("task", "Tor of modules over different rings")
        elif k == "torsion":
            f, n = self.ring_map(), self.module()
            if n.ring != f.target:
                raise DocumentError("task", "module does not live over the map's target")
        elif k == "isflat":
            self.module()
        elif k == "ispure":
            self.module_map("map")
        elif k in ("fibercheck", "validate"):
            if self.theorem is None:
                raise DocumentError("task", f"{k} needs a 'theorem'")
            self._check_theorem_args()
        elif k == "counterexample":
            d = t.get("d")
            if not isinstance(d, int) or d < 3:
                raise DocumentError("task.d", "expected an integer d >= 3")
        elif k == "diag":
            for key in ("source", "target"):
                self.group(key)
            if not isinstance(t.get("matrix"), list):
                raise DocumentError("task.matrix", "expected a matrix of integers")

    def _check_theorem_args(self):
        th = self.theorem
        if th in ("local-flatness", "local-flatness-consequences"):
            a, m = self.ideal(), self.module()
            if QuotientRing.of(a.ring) != m.ring:
                raise DocumentError("task", "ideal and module live over different rings")
            self.samples()
        elif th == "nzd-reduction":
            m = self.module()
            self._poly(m.ring, self.task.get("element"), "task.element")
            self.samples()
        elif th in ("fiber-flatness", "fiber-faithful-flatness", "tor-fiber", "tor-fiber-strong"):
            f, m = self.ring_map(), self.module()
            if m.ring != f.target:
                raise DocumentError("task", "module does not live over the map's target")
        elif th == "fiber-purity":
            f, phi = self.ring_map(), self.module_map()
            if phi.ring != f.target:
                raise DocumentError("task", "module map does not live over the map's target")
        elif th == "pointwise-purity":
            self.module_map()
        elif th == "pure-subalgebra":
            self.ring_map()
            if "base_map" in self.task:
                self.ring_map("base_map")

    def group(self, key):
        spec = self.task.get(key)
        where = f"task.{key}"
        if not isinstance(spec, dict):
            raise DocumentError(where, "expected {\"free_rank\": r, \"torsion\": [n, ...]}")
        r = spec.get("free_rank", 0)
        tors = spec.get("torsion", [])
        if not isinstance(r, int) or r < 0 or not isinstance(tors, list) or any(
                not isinstance(n, int) or n < 2 for n in tors):
            raise DocumentError(where, "free_rank must be >= 0 and torsion orders >= 2")
        return AbelianGroup(r, tuple(tors))

    def primes(self, R, degree_bound):
        spec = self.task.get("primes")
        if spec is None or (isinstance(spec, dict) and "list" not in spec):
            bound = spec.get("degree_bound", degree_bound) if isinstance(spec, dict) else degree_bound
            return enumerate_primes(R, bound)
        if not isinstance(spec, dict) or not isinstance(spec["list"], list):
            raise DocumentError("task.primes", "expected {\"degree_bound\": d} or {\"list\": [[gens], ...]}")
        out = []
        for i, gens in enumerate(spec["list"]):
            polys = [p for p in self._polys(R, gens, f"task.primes.list[{i}]") if p]
            if not polys:
                out.append(zero_prime(R))
                continue
            try:
                out.append(principal_prime(R, polys[0]) if len(polys) == 1 and R.nvars == 1 else user_prime(R, polys))
            except ValueError as e:
                raise DocumentError(f"task.primes.list[{i}]", str(e)) from None
        return PrimeList(out, bool(spec.get("complete", False)))


# ---------------------------------------------------------------------------
# canonical form


def canonicalize(raw: dict) -> dict:
    """Semantically equal documents map to the same canonical object.

    Polynomials are re-printed in normal form, the field in its canonical
    spelling, and the task's theorem id in descriptive form.
    """
    doc = Document(raw)
    out = {"field": str(doc.field)}
    if doc.name is not None:
        out["name"] = doc.name
    rings = {}
    for name, spec in raw.get("rings", {}).items():
        Q = doc.rings[name]
        rings[name] = {
            "variables": list(Q.variables),
            "order": str(spec.get("order", "grevlex")).strip().lower(),
            "relations": [str(g) for g in _polys_text(Q, spec.get("relations", []), doc)],
        }
    out["rings"] = rings
    if "ideals" in raw:
        out["ideals"] = {
            name: {"ring": spec["ring"],
                   "generators": [str(g) for g in doc.ideals[name].generators]}
            for name, spec in raw["ideals"].items()
        }
    if "modules" in raw:
        mods = {}
        for name, spec in raw["modules"].items():
            if "ideal" in spec:
                mods[name] = {"ring": spec["ring"], "ideal": spec["ideal"]}
            else:
                m = doc.modules[name]
                mods[name] = {"ring": spec["ring"], "rank": m.rank,
                              "relations": [[str(p) for p in v] for v in m.relations.generators]}
        out["modules"] = mods
    if "ring_maps" in raw:
        out["ring_maps"] = {
            name: {"source": spec["source"], "target": spec["target"],
                   "images": {v: str(p) for v, p in zip(doc.ring_maps[name].source.variables,
                                                          doc.ring_maps[name].images)}}
            for name, spec in raw["ring_maps"].items()
        }
    if "module_maps" in raw:
        out["module_maps"] = {
            name: {"source": spec["source"], "target": spec["target"],
                   "matrix": [[str(p) for p in row] for row in doc.module_maps[name].matrix]}
            for name, spec in raw["module_maps"].items()
        }
    task = dict(raw["task"])
    if doc.theorem is not None:
        task["theorem"] = doc.theorem
    if "element" in task:
        task["element"] = str(doc._poly(doc.module().ring, task["element"], "task.element"))
    out["task"] = task
    return out


def _polys_text(Q, texts, doc):
    return [doc._poly(Q.ambient, t, "") for t in texts]


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False, default=str) + "\n"


# ---------------------------------------------------------------------------
# running


class Options:
    def __init__(self, degree_bound=1, n_max=3, budget_pairs=None, budget_degree=None, timestamp=True,
                 field=None, order=None):
        self.degree_bound = degree_bound
        self.n_max = n_max
        self.budget_pairs = budget_pairs
        self.budget_degree = budget_degree
        self.timestamp = timestamp
        self.field = field
        self.order = order

    def budgets(self):
        out = {}
        if self.budget_pairs is not None:
            out["max_pairs"] = self.budget_pairs
        if self.budget_degree is not None:
            out["max_degree"] = self.budget_degree
        return out


def _report_exit(report_dict):
    failed = any(h.get("verdict") == FAILS for h in report_dict.get("hypotheses", []))
    return EXIT_FAILED if failed else EXIT_OK


def _run_task(doc: Document, opts: Options):
    """``(result dict, exit code)`` for a resolved document."""
    t = doc.task
    k = doc.kind
    n_max = t.get("n_max", opts.n_max)
    if k == "gb":
        if "ideal" in t:
            J = doc.ideal()
            return {"groebner_basis": [str(g) for g in J.reduced_generators()]}, EXIT_OK
        m = doc.module()
        gb = m.relations.reduced_generators()
        return {"groebner_basis": [[str(p) for p in v] for v in gb]}, EXIT_OK
    if k == "tor":
        i = t.get("index", 1)
        res = tor(i, doc.module("left"), doc.module("right"))
        w = res.nonzero_witness()
        out = {"index": i, "is_zero": w is None, "ambient_rank": res.rank}
        if w is not None:
            out["nonzero_class"] = [str(p) for p in w]
        return out, EXIT_OK
    if k == "torsion":
        dec = torsion_decompose(doc.module(), doc.ring_map())
        return {
            "torsion_generators": [[str(p) for p in v] for v in dec.generators],
            "witness": str(dec.witness),
            "torsionfree_relations": [[str(p) for p in v] for v in dec.torsionfree.relations.reduced_generators()],
        }, EXIT_OK
    if k == "isflat":
        m = doc.module()
        cert = is_faithfully_flat(m) if t.get("faithfully") else is_flat(m)
        out = cert.to_dict()
        out["verdict"] = "faithfully flat" if t.get("faithfully") and cert else (
            "flat" if cert else ("not faithfully flat" if t.get("faithfully") else "not flat"))
        return out, EXIT_OK if cert else EXIT_FAILED
    if k == "ispure":
        v = is_pure_into_flat(doc.module_map("map"), t.get("check_injective", True))
        out = v.to_dict()
        out["verdict"] = "pure" if v else "not pure"
        return out, EXIT_OK if v else EXIT_FAILED
    if k in ("fibercheck", "validate"):
        rep = _run_theorem(doc, opts, n_max).to_dict()
        return rep, _report_exit(rep)
    if k == "counterexample":
        d = t["d"]
        R = QuotientRing(PolyRing(doc.field, ["t"]))
        primes = doc.primes(R, opts.degree_bound)
        out = counterexample_document(d, primes, doc.field)
        byclaim = {c["claim"]: c for c in out["claims"]}
        ok = all(byclaim[c]["verdict"] == "holds" for c in ("a", "b", "d"))
        return out, EXIT_OK if ok else EXIT_FAILED
    if k == "diag":
        f = diag_morphism(doc.group("source"), doc.group("target"), t["matrix"], doc.field)
        primes = doc.primes(f.source, opts.degree_bound) if "primes" in t else None
        rep = check_pure_subalgebra(f, primes).to_dict()
        rep["map"] = {v: str(p) for v, p in zip(f.source.variables, f.images)}
        return rep, _report_exit(rep)
    raise DocumentError("task.kind", f"unknown task kind {k!r}")


def _run_theorem(doc: Document, opts: Options, n_max):
    th = doc.theorem
    t = doc.task
    if th == "local-flatness":
        m = doc.module()
        return check_local_criterion(m.ring, doc.ideal(), m, n_max)
    if th == "local-flatness-consequences":
        m = doc.module()
        return check_local_flatness_consequences(m.ring, doc.ideal(), m, n_max, doc.samples())
    if th == "nzd-reduction":
        m = doc.module()
        z = doc._poly(m.ring, t["element"], "task.element")
        return check_nzd_reduction(m.ring, z, m, doc.samples(), t.get("max_index", 2))
    if th == "pointwise-purity":
        phi = doc.module_map()
        return check_pointwise_purity(phi, doc.primes(phi.ring, opts.degree_bound))
    if th == "pure-subalgebra":
        f = doc.ring_map()
        base = doc.ring_map("base_map") if "base_map" in t else None
        primes = doc.primes(base.source if base else f.source, opts.degree_bound) if "primes" in t or base else None
        return check_pure_subalgebra(f, primes, base)
    f = doc.ring_map()
    primes = doc.primes(f.source, opts.degree_bound)
    if th == "fiber-purity":
        return check_fiber_purity(f, doc.module_map(), primes)
    m = doc.module()
    if th == "fiber-flatness":
        return check_fiber_flatness(f, m, primes)
    if th == "fiber-faithful-flatness":
        return check_fiber_faithful_flatness(f, m, primes)
    if th == "tor-fiber":
        return check_tor_fiber_criterion(f, m, primes)
    corpus = [doc._polys(f.source, gens, f"task.ideal_corpus[{i}]")
              for i, gens in enumerate(t.get("ideal_corpus", []))]
    return check_tor_fiber_criterion_ideals(f, m, [Ideal(f.source, g) for g in corpus], primes)


def run_document(raw, opts: Options | None = None, source: str | None = None):
    """Run one document (a parsed JSON object) and return ``(report, exit code)``."""
    opts = opts or Options()
    report = {"generator": f"fiberflat {__version__}"}
    if source is not None:
        report["source"] = source
    if opts.budgets():
        # cached bases were computed under other budgets
        clear_cache()
    try:
        with use_budgets(**opts.budgets()):
            doc = Document(raw, opts.field, opts.order)
            report["task"] = doc.kind if doc.theorem is None else f"{doc.kind} {doc.theorem}"
            if doc.name is not None:
                report["name"] = doc.name
            result, code = _run_task(doc, opts)
        report["result"] = result
    except DocumentError as e:
        report["error"] = {"kind": "parse", "message": str(e)}
        code = EXIT_ERROR
    except ResourceBudgetError as e:
        report["error"] = {"kind": "resource", "message": str(e), "subcomputation": e.subcomputation}
        code = EXIT_ERROR
    except (UnsupportedError, CriterionInapplicable) as e:
        report["error"] = {"kind": "unsupported", "message": str(e)}
        code = EXIT_ERROR
    except ConsistencyViolation as e:
        report["error"] = {"kind": "consistency", "message": str(e), "bundle": e.bundle}
        code = EXIT_ERROR
    report["exit_code"] = code
    report["status"] = {EXIT_OK: "completed", EXIT_FAILED: "condition failed", EXIT_ERROR: "error"}[code]
    if opts.timestamp:
        report["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return report, code


def load_json(text: str, where=""):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(where, e.msg, e.lineno, e.colno) from None


# ---------------------------------------------------------------------------
# text rendering


def render_text(report: dict) -> str:
    lines = []
    head = report.get("source") or report.get("name") or "document"
    lines.append(f"== {head}")
    if "task" in report:
        lines.append(f"task: {report['task']}")
    lines.append(f"status: {report['status']} (exit {report['exit_code']})")
    if "error" in report:
        lines.append(f"error: {report['error']['message']}")
    res = report.get("result", {})
    if "hypotheses" in res:
        lines.append(f"theorem: {res['theorem_id']}")
        if res.get("primes"):
            complete = res["primes"][0]["complete"]
            lines.append(f"primes: {len(res['primes'])} ({'complete' if complete else 'incomplete'} list)")
        names = []
        for h in res["hypotheses"]:
            if h["name"] not in names:
                names.append(h["name"])
        for name in names:
            rows = [h for h in res["hypotheses"] if h["name"] == name]
            held = sum(h["verdict"] == "holds" for h in rows)
            if len(rows) > 1:
                lines.append(f"  {name}: holds at {held} of {len(rows)}")
            shown = 0
            rest = [h for h in rows if not (len(rows) > 1 and h["verdict"] == "holds")]
            for h in rest:
                if shown == 5:
                    lines.append(f"  ... {len(rest) - shown} more")
                    break
                shown += 1
                at = f" at {h['prime']}" if "prime" in h else ""
                line = f"  [{h['verdict']}] {name}{at}"
                if "witness" in h:
                    line += f"; witness {json.dumps(h['witness'], sort_keys=True, ensure_ascii=False)}"
                elif h.get("reason"):
                    line += f"; {h['reason']}"
                lines.append(line)
        c = res.get("conclusion", {})
        if c:
            lines.append(f"conclusion: {c.get('statement')}: {c.get('verdict')}")
        cons = res.get("consistency", {})
        for key in sorted(cons):
            if isinstance(cons[key], str):
                lines.append(f"consistency.{key}: {cons[key]}")
        for n in res.get("notes", []):
            lines.append(f"note: {n}")
    elif "claims" in res:
        for c in res["claims"]:
            lines.append(f"  claim {c['claim']}: {c['verdict']}")
        lines.append(render_text({"status": "audit", "exit_code": "-", "result": res["audit"],
                                  "source": "truncation audit"}).rstrip())
    else:
        for key in sorted(res):
            lines.append(f"{key}: {json.dumps(res[key], sort_keys=True, ensure_ascii=False)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# entry point


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the error code of the report contract."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_ERROR)


def _common(p):
    p.add_argument("--field", help="override the document's coefficient field, e.g. F_101 or QQ")
    p.add_argument("--order", help="override every ring's monomial order (lex, grevlex, block(...))")
    p.add_argument("--degree-bound", type=int, default=1, help="default degree bound for enumerated primes")
    p.add_argument("--nmax", type=int, default=3, help="default truncation degree for local criteria")
    p.add_argument("--budget-pairs", type=int, help="maximum S-pairs per Groebner basis")
    p.add_argument("--budget-degree", type=int, help="maximum polynomial degree during Buchberger")
    p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp for byte-stable output")
    p.add_argument("--report", choices=("text", "structured"), default="structured")


def build_parser():
    parser = _Parser(prog="fiberflat", description="Fiber criteria for flatness and purity.")
    parser.add_argument("--version", action="version", version=f"fiberflat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("run", help="run problem documents")
    p.add_argument("files", nargs="+")
    _common(p)
    p = sub.add_parser("counterexample", help="reproduce the truncated counterexample at level d")
    p.add_argument("-d", type=int, default=4)
    _common(p)
    p = sub.add_parser("canonicalize", help="print the canonical form of a document")
    p.add_argument("file")
    return parser


def _options(args):
    return Options(args.degree_bound, args.nmax, args.budget_pairs, args.budget_degree, not args.no_timestamp,
                   args.field, args.order)


def _emit(reports, fmt, out):
    if fmt == "text":
        out.write("".join(render_text(r) for r in reports))
    elif len(reports) == 1:
        out.write(dumps(reports[0]))
    else:
        out.write(dumps({"reports": reports}))


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.command == "canonicalize":
        try:
            raw = load_json(Path(args.file).read_text(encoding="utf-8"), args.file)
            out.write(dumps(canonicalize(raw)))
        except (DocumentError, OSError) as e:
            sys.stderr.write(f"fiberflat: {e}\n")
            return EXIT_ERROR
        return EXIT_OK
    opts = _options(args)
    reports = []
    code = EXIT_OK
    if args.command == "counterexample":
        raw = {"task": {"kind": "counterexample", "d": args.d}}
        rep, c = run_document(raw, opts, f"counterexample d={args.d}")
        reports.append(rep)
        code = c
    else:
        for path in args.files:
            try:
                raw = load_json(Path(path).read_text(encoding="utf-8"))
            except (OSError, DocumentError) as e:
                rep = {"source": path, "error": {"kind": "parse", "message": str(e)},
                       "exit_code": EXIT_ERROR, "status": "error"}
                c = EXIT_ERROR
            else:
                rep, c = run_document(raw, opts, path)
            reports.append(rep)
            code = max(code, c)
    try:
        _emit(reports, args.report, out)
    except BrokenPipeError:
        # reader went away (e.g. piped into head); nothing left to report
        sys.stderr.close()
    return code


if __name__ == "__main__":
    raise SystemExit(main())
