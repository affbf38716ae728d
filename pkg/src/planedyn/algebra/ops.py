"""Resultants, gcd, squarefree parts and divisibility for :class:`Poly`.

All routines treat a polynomial as univariate in a chosen variable with
coefficients in the polynomial ring of the remaining variables, which is
an integral domain, so pseudo-division is exact.
"""

from .poly import canonical
from ..budget import checkpoint


class DegenerateInput(ValueError):
    pass


def prem(a, b, var):
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b in ``var``."""
    db = b.degree_in(var)
    if db < 0:
        raise ZeroDivisionError("pseudo-division by zero")
    lb = b.lc_in(var)
    r = a
    e = a.degree_in(var) - db + 1
    if e <= 0:
        return a
    while r.terms:
        dr = r.degree_in(var)
        if dr < db:
            break
        checkpoint(len(r.terms))
        r = r * lb - (r.lc_in(var) * b).shift_var(var, dr - db)
        e -= 1
    if e > 0:
        r = r * lb ** e
    return r


def resultant(f, g, var):
    """Res_var(f, g) by the subresultant pseudo-remainder sequence."""
    ring = f.ring
    if not f.terms and not g.terms:
        raise DegenerateInput("resultant of two zero polynomials")
    if not f.terms or not g.terms:
        return ring.zero
    a = f.degree_in(var)
    b = g.degree_in(var)
    if a == 0 and b == 0:
        return ring.one
    if a == 0:
        return f ** b
    if b == 0:
        return g ** a
    s = 1
    A, B = f, g
    if a < b:
        A, B = g, f
        if (a * b) % 2:
            s = -1
    gg = ring.one
    h = ring.one
    while True:
        da = A.degree_in(var)
        db = B.degree_in(var)
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        R = prem(A, B, var)
        if not R.terms:
            return ring.zero
        A = B
        div = gg * h ** delta
        B = R if div == 1 else R.exact_div(div)
        gg = A.lc_in(var)
        if delta == 0:
            pass
        elif delta == 1:
            h = gg
        else:
            h = (gg ** delta).exact_div(h ** (delta - 1))
        if B.degree_in(var) == 0:
            break
    da = A.degree_in(var)
    res = B ** da if da == 1 else (B ** da).exact_div(h ** (da - 1))
    return res if s == 1 else -res


def _first_var(f, g):
    fv = set(f.variables()) | set(g.variables())
    for v in f.ring.vars:
        if v in fv:
            return v
    return None


def content(f, var):
    """Gcd of the coefficients of ``f`` viewed as a polynomial in ``var``."""
    c = None
    for co in sorted(f.coeffs_in(var).values(), key=lambda p: len(p.terms)):
        c = co if c is None else gcd(c, co)
        if c.is_constant():
            return f.ring.one
    return c if c is not None else f.ring.zero


def primitive_part(f, var):
    c = content(f, var)
    return f if c == 1 else f.exact_div(c)


def gcd(f, g):
    """Greatest common divisor, canonically normalized (see :func:`canonical`)."""
    ring = f.ring
    if not f.terms:
        return canonical(g)
    if not g.terms:
        return canonical(f)
    if f.is_constant() or g.is_constant():
        return ring.one
    var = _first_var(f, g)
    df = f.degree_in(var)
    dg = g.degree_in(var)
    if df == 0:
        return gcd(f, content(g, var))
    if dg == 0:
        return gcd(content(f, var), g)
    cf = content(f, var)
    cg = content(g, var)
    pf = f if cf == 1 else f.exact_div(cf)
    pg = g if cg == 1 else g.exact_div(cg)
    c = gcd(cf, cg)
    A, B = (pf, pg) if df >= dg else (pg, pf)
    A, B = canonical(A), canonical(B)
    while True:
        checkpoint(len(A.terms) + len(B.terms))
        R = prem(A, B, var)
        if not R.terms:
            G = B
            break
        if R.degree_in(var) == 0:
            G = ring.one
            break
        A, B = B, canonical(primitive_part(R, var))
    return canonical(c * primitive_part(G, var))


def squarefree_part(f):
    """Product of the distinct irreducible factors of ``f``, canonical."""
    if not f.terms:
        raise DegenerateInput("squarefree part of zero")
    if f.is_constant():
        return f.ring.one
    g = f
    for v in f.variables():
        g = gcd(g, f.derivative(v))
        if g.is_constant():
            return canonical(f)
    return canonical(f.exact_div(g))


def divides(f, g):
    """Return (True, q) if g == q*f exactly, else (False, None)."""
    if not f.terms:
        raise ZeroDivisionError("divisor is zero")
    q, r = g.divmod(f)
    if r.terms:
        return False, None
    return True, q


def compose(f, substitution, ring=None):
    """f with each variable replaced by ``substitution[var]``."""
    return f.compose(substitution, ring)


def lcm(f, g):
    return canonical((f * g).exact_div(gcd(f, g)))
