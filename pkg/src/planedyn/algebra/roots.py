"""Univariate root finding over Q.

Exact mode returns the rational roots with multiplicity; whatever is left
is reported as squarefree "packets" (Galois-stable sets of irrational
roots, not necessarily irreducible).  Numeric mode returns every complex
root together with a Newton inclusion radius and a residual bound.
"""

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import upoly


class PrecisionError(ArithmeticError):
    """Numeric root refinement did not reach the requested accuracy."""


@dataclass(frozen=True)
class NumericRoot:
    value: complex
    multiplicity: int
    radius: float     # a root of f lies within this distance of ``value``
    residual: float   # |f(value)| is below this bound


def as_coeffs(f):
    """Coefficient tuple (low -> high) of a univariate Poly or sequence over Q."""
    from .poly import Poly

    if isinstance(f, Poly):
        vs = f.variables()
        if len(vs) > 1:
            raise ValueError(f"expected a univariate polynomial, got variables {vs}")
        if not vs:
            return upoly.const(f.constant_coeff()) if f.terms else upoly.ZERO
        i = f.ring.index[vs[0]]
        out = [Fraction(0)] * (f.degree() + 1)
        for e, c in f.terms.items():
            out[e[i]] = Fraction(c)
        return upoly.trim(out)
    return upoly.trim(tuple(Fraction(c) for c in f))


def squarefree_decomposition(a):
    """Yun's algorithm: list of (factor, multiplicity) with monic squarefree factors."""
    a = upoly.monic(upoly.trim(a))
    if upoly.deg(a) < 1:
        return []
    out = []
    d = upoly.deriv(a)
    g = upoly.gcd_(a, d)
    b = upoly.divmod_(a, g)[0]
    c = upoly.divmod_(d, g)[0]
    i = 1
    while upoly.deg(b) > 0:
        dd = upoly.sub(c, upoly.deriv(b))
        h = upoly.gcd_(b, dd)
        if upoly.deg(h) > 0:
            out.append((h, i))
        b = upoly.divmod_(b, h)[0]
        c = upoly.divmod_(dd, h)[0]
        i += 1
    return out


def _mp_roots(a, dps):
    """Approximate roots of a squarefree polynomial with mpmath."""
    coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(a)]
    if len(coeffs) == 2:
        return [-coeffs[1] / coeffs[0]]
    with mpmath.workdps(dps):
        try:
            return mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * dps)
        except mpmath.libmp.libhyper.NoConvergence as exc:
            raise PrecisionError(f"root iteration did not converge: {exc}") from None


def _rational_roots_squarefree(a):
    if upoly.deg(a) < 1:
        return []
    p = upoly.integer_primitive(a)
    lc = abs(int(p[-1]))
    roots = []
    if p[0] == 0:
        roots.append(Fraction(0))
    bits = max(abs(int(c)).bit_length() for c in p)
    dps = 30 + 2 * len(str(lc)) + bits // 3 + 2 * upoly.deg(p)
    with mpmath.workdps(dps):
        for r in _mp_roots(p, dps):
            if abs(mpmath.im(r)) > mpmath.mpf(10) ** (-dps // 3):
                continue
            re = mpmath.re(r)
            if re == 0:
                continue
            cand = Fraction(mpmath.nstr(re, dps, strip_zeros=False)).limit_denominator(lc)
            if cand != 0 and upoly.evaluate(p, cand) == 0 and cand not in roots:
                roots.append(cand)
    return roots


def rational_roots_and_packets(f):
    """Exact mode: ([(root, multiplicity)], [(packet polynomial, multiplicity)])."""
    a = as_coeffs(f)
    if not a:
        raise ValueError("roots of the zero polynomial")
    roots = []
    packets = []
    for factor, mult in squarefree_decomposition(a):
        rest = factor
        for r in _rational_roots_squarefree(factor):
            roots.append((r, mult))
            rest = upoly.divmod_(rest, (-r, Fraction(1)))[0]
        if upoly.deg(rest) > 0:
            packets.append((upoly.monic(rest), mult))
    roots.sort()
    packets.sort(key=lambda pm: (upoly.deg(pm[0]), pm[0]))
    return roots, packets


def numeric_roots_q(a, dps=30, tol=None):
    """All complex roots of a polynomial over Q (no multiplicities merged)."""
    a = upoly.trim(tuple(Fraction(c) for c in a))
    out = []
    for factor, mult in squarefree_decomposition(a):
        out.extend(_refine(factor, mult, a, dps, tol))
    return out


def _refine(factor, mult, full, dps, tol):
    n = upoly.deg(factor)
    tol = mpmath.mpf(10) ** (-(dps // 2)) if tol is None else mpmath.mpf(tol)
    deriv = upoly.deriv(factor)
    out = []
    with mpmath.workdps(2 * dps):
        approx = _mp_roots(factor, 2 * dps)
        cf = [mpmath.mpf(c.numerator) / c.denominator for c in factor]
        cd = [mpmath.mpf(c.numerator) / c.denominator for c in deriv]
        cfull = [mpmath.mpf(c.numerator) / c.denominator for c in full]

        def ev(cs, z):
            acc = mpmath.mpc(0)
            for c in reversed(cs):
                acc = acc * z + c
            return acc

        for z in approx:
            z = mpmath.mpc(z)
            for _ in range(3):
                fz = ev(cf, z)
                dz = ev(cd, z)
                if dz == 0:
                    break
                z = z - fz / dz
            fz = ev(cf, z)
            dz = ev(cd, z)
            if dz == 0:
                raise PrecisionError("vanishing derivative at a simple root")
            radius = n * abs(fz / dz)
            if radius > tol:
                raise PrecisionError(f"root {mpmath.nstr(z, 8)} only located to within {mpmath.nstr(radius, 3)}")
            zc = complex(z)
            err = abs(mpmath.mpc(zc) - z)
            resid = abs(ev(cfull, mpmath.mpc(zc)))
            bound = 2 * resid + mpmath.mpf(10) ** (-dps)
            out.append(NumericRoot(zc, mult, float(radius + err), float(bound)))
    return out


def univariate_roots(f, mode="exact", dps=30, tol=None):
    """Roots of a univariate polynomial over Q.

    ``mode="exact"``: sorted list of (Fraction, multiplicity) for rational
    roots.  ``mode="numeric"``: list of :class:`NumericRoot`.  A constant
    polynomial has no roots.
    """
    a = as_coeffs(f)
    if not a:
        raise ValueError("roots of the zero polynomial")
    if upoly.deg(a) < 1:
        return []
    if mode == "exact":
        return rational_roots_and_packets(a)[0]
    if mode == "numeric":
        return numeric_roots_q(a, dps=dps, tol=tol)
    raise ValueError(f"unknown mode {mode!r}")
