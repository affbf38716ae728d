"""Specialization of Q(t) objects and rational-function reconstruction from values."""

from fractions import Fraction
from math import gcd, isqrt

from . import upoly
from .fields import QQ, RatFunc


def specialize_poly(p, t0, ring=None):
    """Substitute the field parameter t = t0 in every coefficient of ``p``.

    Raises ZeroDivisionError when a denominator vanishes at t0.
    """
    if ring is None:
        ring = p.ring.with_field(QQ)
    out = {}
    for e, c in p.terms.items():
        v = c.evaluate(t0)
        if v != 0:
            out[e] = v
    return type(p)(ring, out)


def interpolate(xs, ys):
    """Polynomial of degree < len(xs) through the points (Newton form)."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = upoly.ZERO
    for i in range(n - 1, -1, -1):
        out = upoly.add(upoly.mul(out, (Fraction(-xs[i]), Fraction(1))), upoly.const(coef[i]))
    return out


def _is_prime(n):
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _primes(start=(1 << 62)):
    n = start - 1
    while True:
        if _is_prime(n):
            yield n
        n -= 2 if n % 2 else 1


def _interpolate_mod(xs, ys, p):
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) * pow(xs[i] - xs[i - j], -1, p) % p
    out = []
    for i in range(n - 1, -1, -1):
        # out = out * (x - xs[i]) + coef[i]
        nxt = [0] * (len(out) + 1)
        for k, c in enumerate(out):
            nxt[k + 1] = (nxt[k + 1] + c) % p
            nxt[k] = (nxt[k] - c * xs[i]) % p
        nxt[0] = (nxt[0] + coef[i]) % p
        out = nxt
    while out and out[-1] == 0:
        out.pop()
    return out


def _eval_mod(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def _divmod_mod(a, b, p):
    r = list(a)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    q = [0] * max(len(r) - db, 1)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k] * inv % p
        if c:
            q[k - db] = c
            for j in range(db + 1):
                r[k - db + j] = (r[k - db + j] - c * b[j]) % p
    r = r[:db]
    while r and r[-1] == 0:
        r.pop()
    return q, r


def _sub_mul_mod(t0, q, t1, p):
    out = [0] * max(len(t0), len(q) + len(t1) - 1)
    for i, c in enumerate(t0):
        out[i] = c
    for i, a in enumerate(q):
        if a:
            for j, b in enumerate(t1):
                out[i + j] = (out[i + j] - a * b) % p
    while out and out[-1] == 0:
        out.pop()
    return out


def _reconstruct_mod(xs, ys, checks, p):
    """(deg num, monic den mod p) of the least candidate fitting the checks, or None."""
    n = len(xs)
    A = _interpolate_mod(xs, ys, p)
    if not A:
        return 0, [1]
    M = [1]
    for x in xs:
        M = _sub_mul_mod([], [(-x) % p, 1], M, p)
        M = [(-c) % p for c in M]
    r0, r1, t0, t1 = M, A, [], [1]
    best = None
    while r1:
        total = len(r1) + len(t1) - 2
        if total < n and (best is None or total < best[0]):
            inv = pow(t1[-1], -1, p) if t1 else None
            if inv is not None and all(
                _eval_mod(t1, x, p) != 0 and _eval_mod(r1, x, p) * pow(_eval_mod(t1, x, p), -1, p) % p == y
                for x, y in checks
            ):
                best = (total, len(r1) - 1, [c * inv % p for c in t1])
        q, r = _divmod_mod(r0, r1, p)
        r0, t0, r1, t1 = r1, t1, r, _sub_mul_mod(t0, q, t1, p)
    return None if best is None else best[1:]


def _rational_number(a, m):
    """r/t with r = a*t mod m and |r|, |t| < sqrt(m/2), or None."""
    bound = isqrt(m // 2)
    r0, r1, t0, t1 = m, a % m, 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or gcd(r1, abs(t1)) != 1:
        return None
    return Fraction(r1, t1)


def _mod(c, p):
    c = Fraction(c)
    return c.numerator * pow(c.denominator, -1, p) % p


def rational_reconstruction(xs, ys, checks=()):
    """A rational function num/den fitting the data, or None.

    The denominator is the least-degree candidate of the extended Euclidean
    algorithm that also fits the extra ``checks`` points.  It is found
    modulo word-size primes, lifted by Chinese remaindering and rational
    number reconstruction, and the numerator is then interpolated exactly.
    Returns (num, den) with monic den.
    """
    xs = list(xs)
    checks = list(checks)
    mods = []
    modulus = 1
    previous = None
    for p in _primes():
        try:
            yp = [_mod(y, p) for y in ys]
            xp = [_mod(x, p) for x in xs]
            cp = [(_mod(x, p), _mod(y, p)) for x, y in checks]
        except ValueError:
            continue
        res = _reconstruct_mod(xp, yp, cp, p)
        if res is None:
            if not mods:
                return None
            continue
        dn, den_p = res
        if mods and len(den_p) != len(mods[0][2]):
            if len(den_p) < len(mods[0][2]):
                continue
            mods, modulus, previous = [], 1, None
        mods.append((p, dn, den_p))
        # Chinese remaindering of the denominators collected so far
        if len(mods) == 1:
            lifted = list(den_p)
            modulus = p
        else:
            inv = pow(modulus, -1, p)
            lifted = [a + modulus * ((b - a) * inv % p) for a, b in zip(lifted, den_p)]
            modulus *= p
        den = [_rational_number(c, modulus) for c in lifted]
        if None in den:
            continue
        den = upoly.trim(den)
        if den != previous:
            previous = den
            continue
        dn = max(m[1] for m in mods)
        if dn + 1 > len(xs):
            return None
        num = interpolate(xs[: dn + 1], [y * upoly.evaluate(den, x) for x, y in zip(xs[: dn + 1], ys)])
        if all(upoly.evaluate(num, x) == y * upoly.evaluate(den, x) for x, y in list(zip(xs, ys)) + checks):
            return num, den
        return None


def ratfunc_from(field, num, den):
    return RatFunc.make(field, num, den)
