"""Sparse multivariate polynomials with canonical term order.

Monomial orders are represented by *key functions*: ``order.key(exp)`` maps an
exponent tuple to a tuple of ints such that comparing keys compares monomials.
All keys used here are linear in the exponent vector, which lets the Gröbner
engine update keys by addition instead of recomputing them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .errors import ParseError
from .fields import Field, FieldElem


# ---------------------------------------------------------------------------
# monomial orders


@dataclass(frozen=True)
class Lex:
    name = "lex"

    def key(self, exp):
        return tuple(exp)

    def __str__(self):
        return "lex"


@dataclass(frozen=True)
class GRevLex:
    name = "grevlex"

    def key(self, exp):
        return (sum(exp),) + tuple(-e for e in reversed(exp))

    def __str__(self):
        return "grevlex"


@dataclass(frozen=True)
class BlockOrder:
    """Product order of consecutive variable blocks, grevlex inside each block.

    ``BlockOrder((2, 3))`` compares the first two variables first; ties are
    broken by the remaining three.
    """

    sizes: tuple
    name = "block"

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if any(s <= 0 for s in self.sizes):
            raise ValueError("block sizes must be positive")

    def key(self, exp):
        out = []
        start = 0
        for s in self.sizes:
            block = exp[start:start + s]
            out.append(sum(block))
            out.extend(-e for e in reversed(block))
            start += s
        return tuple(out)

    def __str__(self):
        return "block(" + ",".join(map(str, self.sizes)) + ")"


@dataclass(frozen=True)
class IndexBlockOrder:
    """Block order over arbitrary index subsets (used internally for elimination)."""

    blocks: tuple

    def key(self, exp):
        out = []
        for block in self.blocks:
            sub = [exp[i] for i in block]
            out.append(sum(sub))
            out.extend(-e for e in reversed(sub))
        return tuple(out)

    def __str__(self):
        return "blocks" + str(self.blocks)


_ORDER_RE = re.compile(r"^block\(\s*(\d+(?:\s*,\s*\d+)*)\s*\)$")


def parse_order(spec) -> object:
    if not isinstance(spec, str):
        return spec
    s = spec.strip().lower()
    if s == "lex":
        return Lex()
    if s == "grevlex":
        return GRevLex()
    m = _ORDER_RE.match(s)
    if m:
        return BlockOrder(tuple(int(x) for x in m.group(1).split(",")))
    raise ValueError(f"unknown monomial order {spec!r}")


# ---------------------------------------------------------------------------
# rings


_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


class PolyRing:
    """``field[variables]`` with a fixed monomial order (default grevlex)."""

    def __init__(self, field: Field, variables: Iterable[str], order="grevlex"):
        if isinstance(variables, str):
            variables = variables.replace(",", " ").split()
        variables = tuple(variables)
        for v in variables:
            if not _NAME_RE.match(v):
                raise ValueError(f"invalid variable name {v!r}")
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        clash = set(variables) & set(field.generator_names())
        if clash:
            raise ValueError(f"variable names {sorted(clash)} clash with field generators")
        self.field = field
        self.variables = variables
        self.order = parse_order(order)
        if isinstance(self.order, BlockOrder) and sum(self.order.sizes) != len(variables):
            raise ValueError("block sizes must add up to the number of variables")
        self.nvars = len(variables)
        self._index = {v: i for i, v in enumerate(variables)}
        self._hash = hash((field, variables, self.order))

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.field == other.field
            and self.variables == other.variables
            and self.order == other.order
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"PolyRing({self.field}, {list(self.variables)}, {self.order})"

    def __str__(self):
        return f"{self.field}[{', '.join(self.variables)}]"

    # construction helpers

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return self.constant(self.field.one)

    def constant(self, raw) -> "Polynomial":
        if self.field.is_zero(raw):
            return self.zero
        return Polynomial(self, {(0,) * self.nvars: raw})

    def monomial(self, exp, coeff=None) -> "Polynomial":
        coeff = self.field.one if coeff is None else coeff
        if len(exp) != self.nvars:
            raise ValueError("exponent length does not match the ring")
        return Polynomial(self, {tuple(exp): coeff})

    def index(self, name: str) -> int:
        return self._index[name]

    def gen(self, name_or_index) -> "Polynomial":
        i = name_or_index if isinstance(name_or_index, int) else self._index[name_or_index]
        exp = [0] * self.nvars
        exp[i] = 1
        return self.monomial(tuple(exp))

    def gens(self):
        return tuple(self.gen(i) for i in range(self.nvars))

    def __call__(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            if value.ring == self:
                return value
            return self.coerce_by_name(value)
        if isinstance(value, str):
            return parse_polynomial(value, self)
        if isinstance(value, FieldElem):
            return self.constant(self.field.embed(value.raw, value.field))
        if isinstance(value, int):
            return self.constant(self.field.from_int(value))
        raise TypeError(f"cannot convert {value!r} into {self}")

    def coerce_by_name(self, p: "Polynomial") -> "Polynomial":
        """Map a polynomial from another ring by matching variable names."""
        idx = []
        for v in p.ring.variables:
            if v not in self._index:
                if any(e[p.ring.index(v)] for e in p.terms):
                    raise ValueError(f"variable {v} is not in {self}")
                idx.append(None)
            else:
                idx.append(self._index[v])
        F = self.field
        out = {}
        for e, c in p.terms.items():
            ne = [0] * self.nvars
            for j, k in enumerate(e):
                if k:
                    ne[idx[j]] = k
            c = F.embed(c, p.ring.field)
            ne = tuple(ne)
            out[ne] = F.add(out[ne], c) if ne in out else c
        return Polynomial(self, {e: c for e, c in out.items() if not F.is_zero(c)})

    def with_order(self, order) -> "PolyRing":
        return PolyRing(self.field, self.variables, order)

    def with_field(self, field) -> "PolyRing":
        return PolyRing(field, self.variables, self.order)

    def polys(self, texts):
        return [self(t) for t in texts]


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Immutable polynomial; ``terms`` maps exponent tuples to nonzero raw coefficients."""

    __slots__ = ("ring", "terms", "_sorted", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._sorted = None
        self._hash = None

    # views

    def sorted_terms(self):
        """Terms as a tuple of ``(exp, coeff)`` in strictly descending order."""
        if self._sorted is None:
            key = self.ring.order.key
            self._sorted = tuple(sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True))
        return self._sorted

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_coeff(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    @property
    def lead_exp(self):
        return self.sorted_terms()[0][0]

    @property
    def lead_coeff(self):
        return self.sorted_terms()[0][1]

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name):
        i = self.ring.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def support_vars(self):
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return tuple(self.ring.variables[i] for i in sorted(used))

    def coefficient(self, exp):
        return FieldElem(self.ring.field, self.terms.get(tuple(exp), self.ring.field.zero))

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, (int, FieldElem)):
            return self.ring(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.ring.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = F.add(out[e], c)
                if F.is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.field
        return Polynomial(self.ring, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.ring.field
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = F.mul(c1, c2)
                if e in out:
                    out[e] = F.add(out[e], c)
                else:
                    out[e] = c
        return Polynomial(self.ring, {e: c for e, c in out.items() if not F.is_zero(c)})

    __rmul__ = __mul__

    def scale(self, raw):
        F = self.ring.field
        if F.is_zero(raw):
            return self.ring.zero
        return Polynomial(self.ring, {e: F.mul(raw, c) for e, c in self.terms.items()})

    def mul_monomial(self, exp, raw=None):
        F = self.ring.field
        out = {tuple(a + b for a, b in zip(e, exp)): (c if raw is None else F.mul(raw, c)) for e, c in self.terms.items()}
        return Polynomial(self.ring, out)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def monic(self):
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.lead_coeff))

    def substitute(self, images, target=None):
        """Evaluate with variable ``i`` replaced by ``images[i]`` (Polynomials of ``target``)."""
        target = target if target is not None else images[0].ring
        F = target.field
        result = target.zero
        powers = [dict() for _ in images]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = images[i] ** k
            return cache[k]

        for e, c in self.terms.items():
            term = target.constant(F.embed(c, self.ring.field))
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    # comparison / hashing

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int):
            return self == self.ring(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({self})"


def format_monomial(ring: PolyRing, exp) -> str:
    parts = []
    for v, k in zip(ring.variables, exp):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    F = p.ring.field
    out = []
    for i, (e, c) in enumerate(p.sorted_terms()):
        text, negative = F.format_signed(c)
        mon = format_monomial(p.ring, e)
        if not mon:
            body = text
        elif text == "1":
            body = mon
        else:
            body = f"{text}*{mon}"
        if i == 0:
            out.append("-" + body if negative else body)
        else:
            out.append((" - " if negative else " + ") + body)
    return "".join(out)


# ---------------------------------------------------------------------------
# parser

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    text = text.replace("−", "-")
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break
        if m.group(1) is not None:
            tokens.append(("INT", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("NAME", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*^()/":
                tokens.append(("BAD", ch, m.start(3)))
            else:
                tokens.append((ch, ch, m.start(3)))
        pos = m.end()
    tokens.append(("END", "", len(text)))
    return tokens


def _line_col(text: str, pos: int):
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text, ring, line_offset=0):
        self.text = text
        self.ring = ring
        self.tokens = _tokenize(text)
        self.i = 0
        self.line_offset = line_offset

    def error(self, msg, pos=None):
        if pos is None:
            pos = self.tokens[self.i][2]
        line, col = _line_col(self.text, pos)
        raise ParseError(msg, line + self.line_offset, col, self.text)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        if tok[0] == "BAD":
            self.error(f"unexpected character {tok[1]!r}")
        self.i += 1
        return tok

    def parse(self):
        if self.peek()[0] == "END":
            self.error("empty polynomial")
        p = self.expr()
        tok = self.peek()
        if tok[0] != "END":
            if tok[0] in ("INT", "NAME", "("):
                self.error("implicit multiplication is not allowed; use '*'")
            self.error(f"unexpected token {tok[1]!r}")
        return p

    def expr(self):
        sign = None
        if self.peek()[0] in "+-":
            sign = self.take()[0]
        p = self.term()
        if sign == "-":
            p = -p
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.factor()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            q = self.factor()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    self.error("division is only allowed by a nonzero constant", pos)
                p = p.scale(self.ring.field.inv(q.constant_coeff()))
        if self.peek()[0] in ("INT", "NAME", "("):
            self.error("implicit multiplication is not allowed; use '*'")
        return p

    def factor(self):
        p = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "INT":
                self.error("exponent must be a non-negative integer literal")
            self.take()
            p = p ** int(tok[1])
        return p

    def atom(self):
        kind, value, pos = self.peek()
        if kind == "BAD":
            self.error(f"unexpected character {value!r}")
        if kind == "INT":
            self.take()
            return self.ring(int(value))
        if kind == "NAME":
            self.take()
            ring = self.ring
            if value in ring._index:
                return ring.gen(value)
            if value in ring.field.generator_names():
                return ring.constant(ring.field.generator(value))
            self.error(f"unknown variable {value!r}", pos)
        if kind == "(":
            self.take()
            p = self.expr()
            if self.peek()[0] != ")":
                self.error("expected ')'")
            self.take()
            return p
        if kind == "END":
            self.error("unexpected end of input")
        self.error(f"unexpected token {value!r}")


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    """Parse the polynomial text grammar, e.g. ``"t^2*x1 - 3*x2"``."""
    return _Parser(text, ring).parse()


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if a.ring != b.ring:
        raise ValueError(f"ring mismatch: {a.ring!r} vs {b.ring!r}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown polynomial operation {op!r}")
