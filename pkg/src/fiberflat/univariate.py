"""Dense univariate polynomials over an exact field.

A polynomial is a tuple of raw field elements, constant term first, with no
trailing zeros; ``()`` is the zero polynomial.  Every function takes the
coefficient field as its first argument.
"""

from __future__ import annotations


def trim(F, coeffs):
    coeffs = list(coeffs)
    while coeffs and F.is_zero(coeffs[-1]):
        coeffs.pop()
    return tuple(coeffs)


def degree(f):
    return len(f) - 1


def add(F, f, g):
    n = max(len(f), len(g))
    z = F.zero
    out = [F.add(f[i] if i < len(f) else z, g[i] if i < len(g) else z) for i in range(n)]
    return trim(F, out)


def neg(F, f):
    return tuple(F.neg(c) for c in f)


def sub(F, f, g):
    return add(F, f, neg(F, g))


def scale(F, c, f):
    if F.is_zero(c):
        return ()
    return tuple(F.mul(c, a) for a in f)


def mul(F, f, g):
    if not f or not g:
        return ()
    out = [F.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if F.is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return trim(F, out)


def divmod_(F, f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = F.inv(g[-1])
    rem = list(f)
    dg = len(g) - 1
    if len(rem) - 1 < dg:
        return (), tuple(f)
    quot = [F.zero] * (len(rem) - dg)
    for k in range(len(rem) - 1, dg - 1, -1):
        c = rem[k]
        if F.is_zero(c):
            continue
        q = F.mul(c, inv_lead)
        quot[k - dg] = q
        for j, b in enumerate(g):
            rem[k - dg + j] = F.sub(rem[k - dg + j], F.mul(q, b))
    return trim(F, quot), trim(F, rem[:dg])


def rem(F, f, g):
    return divmod_(F, f, g)[1]


def monic(F, f):
    if not f:
        return ()
    inv = F.inv(f[-1])
    return tuple(F.mul(inv, c) for c in f)


def gcd(F, f, g):
    """Monic gcd (``()`` when both inputs vanish)."""
    while g:
        f, g = g, rem(F, f, g)
    return monic(F, f)


def xgcd(F, f, g):
    """Return ``(d, s, u)`` with ``s*f + u*g = d`` and ``d`` monic."""
    r0, r1 = f, g
    s0, s1 = (F.one,), ()
    u0, u1 = (), (F.one,)
    while r1:
        q, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, q, s1))
        u0, u1 = u1, sub(F, u0, mul(F, q, u1))
    if not r0:
        return (), (), ()
    inv = F.inv(r0[-1])
    return scale(F, inv, r0), scale(F, inv, s0), scale(F, inv, u0)


def powmod(F, f, n, m):
    result = (F.one,)
    base = rem(F, f, m)
    while n:
        if n & 1:
            result = rem(F, mul(F, result, base), m)
        base = rem(F, mul(F, base, base), m)
        n >>= 1
    return result


def evaluate(F, f, x):
    acc = F.zero
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def from_roots(F, roots):
    f = (F.one,)
    for r in roots:
        f = mul(F, f, (F.neg(r), F.one))
    return f


def format_poly(F, f, var):
    """Render in the polynomial text grammar, highest degree first."""
    if not f:
        return "0"
    parts = []
    for k in range(len(f) - 1, -1, -1):
        c = f[k]
        if F.is_zero(c):
            continue
        text, negative = F.format_signed(c)
        if k == 0:
            mon = text
        else:
            power = var if k == 1 else f"{var}^{k}"
            mon = power if text == "1" else f"{text}*{power}"
        parts.append((negative, mon))
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for negative, mon in parts[1:]:
        out += (" - " if negative else " + ") + mon
    return out
