"""Exact coefficient fields.

Field objects carry the arithmetic; elements are plain immutable Python values
("raw" elements) so the Gröbner core can work without wrapper overhead:

* ``PrimeField(p)``: ``int`` in ``range(p)``
* ``Rationals()``: :class:`fractions.Fraction`
* ``RationalFunctions(base, var)``: ``(num, den)`` pair of dense coefficient
  tuples over ``base`` with ``den`` monic and ``gcd(num, den) == 1``
* ``SimpleExtension(base, var, modulus)``: dense coefficient tuple reduced
  modulo the (irreducible) modulus

:class:`FieldElem` wraps a raw element with operator overloading for
interactive use.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import univariate as up
from .errors import UnsupportedError

MAX_NESTING = 2


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Common interface; subclasses implement the raw arithmetic."""

    depth = 0

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        result = self.one
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def __call__(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            if value.field != self:
                return FieldElem(self, self.embed(value.raw, value.field))
            return value
        if isinstance(value, int):
            return FieldElem(self, self.from_int(value))
        return FieldElem(self, self.coerce(value))

    def coerce(self, raw):
        if isinstance(raw, int):
            return self.from_int(raw)
        return raw

    def embed(self, raw, source: "Field"):
        """Map a raw element of a subfield ``source`` into this field."""
        if source == self:
            return raw
        raise UnsupportedError(f"no embedding of {source} into {self}")

    def contains_field(self, other: "Field") -> bool:
        try:
            self.embed(other.one, other)
        except UnsupportedError:
            return False
        return True

    def format(self, raw) -> str:
        text, negative = self.format_signed(raw)
        return "-" + text if negative else text

    def generator_names(self) -> tuple[str, ...]:
        return ()

    def generator(self, name: str):
        raise KeyError(name)

    def elements_of_prime_field(self):
        raise UnsupportedError(f"{self} has no finite prime subfield listing")


@dataclass(frozen=True)
class PrimeField(Field):
    p: int

    def __post_init__(self):
        if not (1 < self.p < 2**31) or not _is_prime(self.p):
            raise ValueError(f"PrimeField modulus must be a prime below 2^31, got {self.p}")

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    @property
    def characteristic(self):
        return self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return pow(a, -1, self.p)

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return n % self.p

    def coerce(self, raw):
        return int(raw) % self.p

    def format_signed(self, a):
        if a > self.p // 2:
            return str(self.p - a), True
        return str(a), False

    def elements(self):
        return range(self.p)

    def __str__(self):
        return f"F_{self.p}"


@dataclass(frozen=True)
class Rationals(Field):
    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    @property
    def characteristic(self):
        return 0

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in QQ")
        return 1 / a

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return Fraction(n)

    def coerce(self, raw):
        return Fraction(raw)

    def format_signed(self, a):
        return str(abs(a)), a < 0

    def __str__(self):
        return "QQ"


def _check_nesting(base: Field):
    if base.depth + 1 > MAX_NESTING:
        raise UnsupportedError(f"field towers deeper than {MAX_NESTING} are not supported")


def _needs_parens(text: str) -> bool:
    return any(ch in text for ch in " /-")


@dataclass(frozen=True)
class RationalFunctions(Field):
    """The fraction field ``base(var)``."""

    base: Field
    var: str = "t"

    def __post_init__(self):
        _check_nesting(self.base)

    @property
    def depth(self):
        return self.base.depth + 1

    @property
    def zero(self):
        return ((), (self.base.one,))

    @property
    def one(self):
        return ((self.base.one,), (self.base.one,))

    @property
    def characteristic(self):
        return self.base.characteristic

    def _make(self, num, den):
        B = self.base
        if not den:
            raise ZeroDivisionError("zero denominator in rational function")
        if not num:
            return self.zero
        g = up.gcd(B, num, den)
        if len(g) > 1:
            num = up.divmod_(B, num, g)[0]
            den = up.divmod_(B, den, g)[0]
        lc = den[-1]
        if lc != B.one:
            inv = B.inv(lc)
            num = up.scale(B, inv, num)
            den = up.scale(B, inv, den)
        return (num, den)

    def add(self, a, b):
        B = self.base
        if not a[0]:
            return b
        if not b[0]:
            return a
        if a[1] == b[1]:
            return self._make(up.add(B, a[0], b[0]), a[1])
        num = up.add(B, up.mul(B, a[0], b[1]), up.mul(B, b[0], a[1]))
        return self._make(num, up.mul(B, a[1], b[1]))

    def neg(self, a):
        return (up.neg(self.base, a[0]), a[1])

    def mul(self, a, b):
        B = self.base
        if not a[0] or not b[0]:
            return self.zero
        return self._make(up.mul(B, a[0], b[0]), up.mul(B, a[1], b[1]))

    def inv(self, a):
        if not a[0]:
            raise ZeroDivisionError("division by zero in rational function field")
        return self._make(a[1], a[0])

    def is_zero(self, a):
        return not a[0]

    def from_int(self, n):
        c = self.base.from_int(n)
        return self.zero if self.base.is_zero(c) else ((c,), (self.base.one,))

    def from_polys(self, num, den=None):
        B = self.base
        num = up.trim(B, [B.coerce(c) for c in num])
        den = (B.one,) if den is None else up.trim(B, [B.coerce(c) for c in den])
        return self._make(num, den)

    def embed(self, raw, source):
        if source == self:
            return raw
        inner = self.base.embed(raw, source)
        if self.base.is_zero(inner):
            return self.zero
        return ((inner,), (self.base.one,))

    def generator_names(self):
        return (self.var,) + self.base.generator_names()

    def generator(self, name):
        if name == self.var:
            return ((self.base.zero, self.base.one), (self.base.one,))
        return self.embed(self.base.generator(name), self.base)

    def format_signed(self, a):
        B = self.base
        num, den = a
        if den == (B.one,):
            if len(num) == 1:
                return B.format_signed(num[0])
            text = up.format_poly(B, num, self.var)
            return (f"({text})" if _needs_parens(text) else text), False
        n = up.format_poly(B, num, self.var)
        d = up.format_poly(B, den, self.var)
        n = f"({n})" if _needs_parens(n) else n
        d = f"({d})" if _needs_parens(d) else d
        return f"({n}/{d})", False

    def __str__(self):
        return f"{self.base}({self.var})"


@dataclass(frozen=True)
class SimpleExtension(Field):
    """``base[var]/(modulus)`` for an irreducible univariate ``modulus``.

    ``modulus`` is a dense coefficient tuple (constant term first); it is made
    monic and tested for irreducibility at construction.
    """

    base: Field
    var: str
    modulus: tuple

    def __post_init__(self):
        _check_nesting(self.base)
        B = self.base
        m = up.monic(B, up.trim(B, [B.coerce(c) for c in self.modulus]))
        if len(m) < 2:
            raise ValueError("extension modulus must have positive degree")
        object.__setattr__(self, "modulus", m)
        if not is_irreducible(B, m):
            raise ValueError(f"modulus {up.format_poly(B, m, self.var)} is reducible over {B}")

    @property
    def depth(self):
        return self.base.depth + 1

    @property
    def degree(self):
        return len(self.modulus) - 1

    @property
    def zero(self):
        return ()

    @property
    def one(self):
        return (self.base.one,)

    @property
    def characteristic(self):
        return self.base.characteristic

    def add(self, a, b):
        return up.add(self.base, a, b)

    def neg(self, a):
        return up.neg(self.base, a)

    def mul(self, a, b):
        return up.rem(self.base, up.mul(self.base, a, b), self.modulus)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("division by zero in field extension")
        d, s, _ = up.xgcd(self.base, a, self.modulus)
        return up.rem(self.base, s, self.modulus)

    def is_zero(self, a):
        return not a

    def from_int(self, n):
        return up.trim(self.base, [self.base.from_int(n)])

    def from_poly(self, coeffs):
        B = self.base
        return up.rem(B, up.trim(B, [B.coerce(c) for c in coeffs]), self.modulus)

    def embed(self, raw, source):
        if source == self:
            return raw
        inner = self.base.embed(raw, source)
        return up.trim(self.base, [inner])

    def generator_names(self):
        return (self.var,) + self.base.generator_names()

    def generator(self, name):
        if name == self.var:
            return self.from_poly((self.base.zero, self.base.one))
        return self.embed(self.base.generator(name), self.base)

    def format_signed(self, a):
        B = self.base
        if not a:
            return "0", False
        if len(a) == 1:
            return B.format_signed(a[0])
        text = up.format_poly(B, a, self.var)
        return (f"({text})" if _needs_parens(text) else text), False

    def __str__(self):
        return f"{self.base}[{self.var}]/({up.format_poly(self.base, self.modulus, self.var)})"


@dataclass(frozen=True)
class FieldElem:
    field: Field
    raw: object

    def _other(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError(f"field mismatch: {self.field} vs {other.field}")
            return other.raw
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return FieldElem(self.field, self.field.add(self.raw, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return FieldElem(self.field, self.field.sub(self.raw, b))

    def __rsub__(self, other):
        b = self._other(other)
        return FieldElem(self.field, self.field.sub(b, self.raw))

    def __mul__(self, other):
        b = self._other(other)
        return FieldElem(self.field, self.field.mul(self.raw, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return FieldElem(self.field, self.field.div(self.raw, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        return FieldElem(self.field, self.field.div(b, self.raw))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.raw))

    def __pow__(self, n: int):
        return FieldElem(self.field, self.field.pow(self.raw, n))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.raw == self.field.from_int(other)
        if isinstance(other, FieldElem):
            return self.field == other.field and self.raw == other.raw
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.raw))

    def is_zero(self):
        return self.field.is_zero(self.raw)

    def __str__(self):
        return self.field.format(self.raw)

    def __repr__(self):
        return f"FieldElem({self.field}, {self})"


def field_arith(a: FieldElem, b: FieldElem, op: str) -> FieldElem:
    if a.field != b.field:
        raise ValueError(f"field mismatch: {a.field} vs {b.field}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown field operation {op!r}")


# ---------------------------------------------------------------------------
# univariate irreducibility


def _has_root(F, f) -> bool:
    return any(F.is_zero(up.evaluate(F, f, a)) for a in F.elements())


def _rational_roots(f):
    """Rational roots of a polynomial with Fraction coefficients."""
    from math import gcd, lcm

    den = 1
    for c in f:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in f]
    if ints[0] == 0:
        return [Fraction(0)]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]

    def divisors(n):
        n = abs(n)
        return [d for d in range(1, n + 1) if n % d == 0]

    roots = []
    for p in divisors(ints[0]):
        for q in divisors(ints[-1]):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if sum(Fraction(c) * cand**k for k, c in enumerate(ints)) == 0:
                    roots.append(cand)
    return roots


def is_irreducible(F: Field, f) -> bool:
    """Irreducibility of a dense univariate polynomial over ``F``.

    Over prime fields: exhaustive root/factor search up to degree 4 and a
    distinct-degree test beyond.  Over QQ: rational root test, degree <= 3.
    Other bases only accept degree-1 input.
    """
    f = up.monic(F, up.trim(F, f))
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if isinstance(F, PrimeField):
        if n <= 3:
            return not _has_root(F, f)
        if n == 4:
            if _has_root(F, f):
                return False
            p = F.p
            for b in range(p):
                for c in range(p):
                    if not up.rem(F, f, (c, b, 1)):
                        return False
            return True
        return _ddf_irreducible(F, f)
    if isinstance(F, Rationals):
        if n > 3:
            raise UnsupportedError("irreducibility over QQ is only decided up to degree 3")
        return not _rational_roots(f)
    raise UnsupportedError(f"irreducibility test over {F} is not supported beyond degree 1")


def _ddf_irreducible(F: PrimeField, f) -> bool:
    n = len(f) - 1
    x = (0, 1)
    h = x
    for i in range(1, n // 2 + 1):
        h = up.powmod(F, h, F.p, f)
        if len(up.gcd(F, up.sub(F, h, x), f)) > 1:
            return False
    return True


def monic_irreducibles(F: PrimeField, degree: int):
    """All monic irreducible polynomials of the given degree, in a fixed order."""
    p = F.p
    if degree == 1:
        return [((-a) % p, 1) for a in range(p)]
    if degree == 2:
        reducible = set()
        for r1 in range(p):
            for r2 in range(r1, p):
                reducible.add(((r1 * r2) % p, (-(r1 + r2)) % p))
        return [(c, b, 1) for b in range(p) for c in range(p) if (c, b) not in reducible]
    out = []
    for idx in range(p**degree):
        coeffs = []
        k = idx
        for _ in range(degree):
            coeffs.append(k % p)
            k //= p
        f = tuple(coeffs) + (1,)
        if is_irreducible(F, f):
            out.append(f)
    return out


def necklace_count(q: int, n: int) -> int:
    """Number of monic irreducibles of degree ``n`` over F_q (Gauss)."""

    def mobius(m):
        result, k = 1, 2
        while k * k <= m:
            if m % k == 0:
                m //= k
                if m % k == 0:
                    return 0
                result = -result
            k += 1
        return -result if m > 1 else result

    return sum(mobius(d) * q ** (n // d) for d in range(1, n + 1) if n % d == 0) // n
