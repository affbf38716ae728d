"""Dense univariate polynomials over Q.

A polynomial is a tuple of Fractions, lowest degree first, with no trailing
zeros; the zero polynomial is the empty tuple.  These helpers back the
rational-function and number-field scalars, so they stay small and
allocation-light.
"""

from fractions import Fraction
from math import gcd, lcm

ZERO = ()
ONE = (Fraction(1),)


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def const(c):
    c = Fraction(c)
    return (c,) if c else ZERO


def deg(a):
    return len(a) - 1


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return trim(out)


def neg(a):
    return tuple(-c for c in a)


def sub(a, b):
    return add(a, neg(b))


def scale(a, c):
    if not c:
        return ZERO
    return tuple(x * c for x in a)


def _to_ints(a):
    """(integer coefficients, common denominator) with a = ints / den."""
    den = lcm(*(c.denominator for c in a)) if a else 1
    return [c.numerator * (den // c.denominator) for c in a], den


def _int_mul(A, B):
    out = [0] * (len(A) + len(B) - 1)
    for i, x in enumerate(A):
        if x:
            for j, y in enumerate(B):
                out[i + j] += x * y
    return out


def mul(a, b):
    if not a or not b:
        return ZERO
    A, da = _to_ints(a)
    B, db = _to_ints(b)
    d = da * db
    return trim(Fraction(c, d) for c in _int_mul(A, B))


def divmod_(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    inv = 1 / b[-1]
    if len(r) - 1 < db:
        return ZERO, tuple(a)
    q = [Fraction(0)] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k] * inv
        if c:
            q[k - db] = c
            for j in range(db + 1):
                r[k - db + j] -= c * b[j]
    return trim(q), trim(r[:db] if db else [])


def rem(a, b):
    return divmod_(a, b)[1]


def monic(a):
    if not a:
        return a
    return scale(a, 1 / a[-1])


def _primitive(A):
    g = gcd(*A)
    if g > 1:
        A = [c // g for c in A]
    if A[-1] < 0:
        A = [-c for c in A]
    return A


def _int_prem(A, B):
    r = list(A)
    db = len(B) - 1
    lb = B[-1]
    while len(r) - 1 >= db and r:
        c = r[-1]
        k = len(r) - 1 - db
        r = [lb * x for x in r]
        for j, y in enumerate(B):
            r[k + j] -= c * y
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return r


def gcd_(a, b):
    """Monic gcd (zero if both are zero), by a primitive integer remainder sequence."""
    a, b = trim(a), trim(b)
    if not a or not b:
        return monic(a or b)
    if len(a) == 1 or len(b) == 1:
        return ONE
    A = _primitive(_to_ints(a)[0])
    B = _primitive(_to_ints(b)[0])
    if len(A) < len(B):
        A, B = B, A
    while B:
        if len(B) == 1:
            return ONE
        R = _int_prem(A, B)
        A, B = B, (_primitive(R) if R else R)
    lc = A[-1]
    return tuple(Fraction(c, lc) for c in A)


def xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = a, b
    s0, s1 = ONE, ZERO
    t0, t1 = ZERO, ONE
    while r1:
        q, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    if not r0:
        return ZERO, ZERO, ZERO
    c = 1 / r0[-1]
    return scale(r0, c), scale(s0, c), scale(t0, c)


def deriv(a):
    return trim(tuple(a[i] * i for i in range(1, len(a))))


def evaluate(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def power(a, n):
    out = ONE
    base = a
    while n:
        if n & 1:
            out = mul(out, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return out


def compose(a, b):
    """a(b(x))."""
    out = ZERO
    for c in reversed(a):
        out = add(mul(out, b), const(c))
    return out


def squarefree(a):
    if deg(a) < 1:
        return monic(a)
    return monic(divmod_(a, gcd_(a, deriv(a)))[0])


def integer_primitive(a):
    """Scale to integer coefficients with gcd 1 and positive leading coefficient."""
    if not a:
        return a
    den = 1
    for c in a:
        den = lcm(den, c.denominator)
    nums = [int(c * den) for c in a]
    g = 0
    for n in nums:
        g = gcd(g, n)
    if nums[-1] < 0:
        g = -g
    return tuple(Fraction(n // g) for n in nums)


def to_text(a, var):
    """Human-readable text, highest degree first, parseable by the poly grammar."""
    if not a:
        return "0"
    parts = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if not c:
            continue
        if i == 0:
            mono = ""
        elif i == 1:
            mono = var
        else:
            mono = f"{var}^{i}"
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{mag}*{mono}"
        else:
            body = str(mag)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
