"""Points of P^1 (the line at infinity) and root finding over the coefficient fields.

A point is a normalized pair ``(X, Y)``: ``(1, t)`` for the finite points
of the chart t = y/x and ``(0, 1)`` for its point at infinity.  Zeros that
do not live in the coefficient field are kept as :class:`Packet` values:
a squarefree factor (not necessarily irreducible) together with its
multiplicity.
"""

from dataclasses import dataclass
from fractions import Fraction
import itertools

import mpmath

from .algebra import QQ, NumberField, PolyRing, gcd, resultant
from .algebra.roots import rational_roots_and_packets


@dataclass(frozen=True)
class Packet:
    """Zeros of ``poly`` (a univariate Poly over the base field, in the chart t = y/x)."""

    poly: object
    multiplicity: int = 1

    @property
    def degree(self):
        return self.poly.degree()

    def coeffs(self):
        """Low -> high coefficient list."""
        out = [self.poly.ring.field.zero] * (self.degree + 1)
        for e, c in self.poly.terms.items():
            out[e[0]] = c
        return out

    def number_field(self, var="w"):
        if self.poly.ring.field != QQ:
            raise ValueError("only packets over Q define a number field here")
        return NumberField(self.coeffs(), var)

    def text(self):
        return str(self.poly)


def point_text(pt):
    X, Y = pt
    if X == 0:
        return "inf"
    return str(Y)


def point_key(pt):
    """Sort key giving a deterministic order (infinity last)."""
    X, Y = pt
    if X == 0:
        return (1, "")
    if isinstance(Y, Fraction):
        return (0, "", Y)
    return (0, str(Y), Fraction(0))


def _univariate_poly(coeffs, field, var="t"):
    ring = PolyRing(field, (var,))
    return ring.zero + sum((ring.monomial((i,), c) for i, c in enumerate(coeffs) if c != 0), ring.zero)


def _coeffs(p):
    d = p.degree()
    out = [p.ring.field.zero] * (d + 1)
    for e, c in p.terms.items():
        out[e[0]] = c
    return out


def squarefree_factors(p):
    """Yun's decomposition for a univariate Poly over any supported field."""
    var = p.ring.vars[0]
    if p.degree() < 1:
        return []
    out = []
    d = p.derivative(var)
    g = gcd(p, d)
    b = p.exact_div(g)
    c = d.exact_div(g)
    i = 1
    while b.degree() > 0:
        dd = c - b.derivative(var)
        h = gcd(b, dd)
        if h.degree() > 0:
            out.append((_monic(h), i))
        b = b.exact_div(h)
        c = dd.exact_div(h)
        i += 1
    return out


def _monic(p):
    lc = p.terms[(p.degree(),)]
    return p.scale(1 / lc)


def field_roots(p, candidates=()):
    """Zeros of a univariate Poly in its coefficient field.

    Returns ``([(root, multiplicity)], [Packet])``.  Over Q the rational
    roots are exact; over a number field roots are found through the norm
    and gcd, and through ``candidates`` (values tested exactly); over Q(t)
    only linear factors are resolved.
    """
    field = p.ring.field
    if p.is_zero():
        raise ValueError("roots of the zero polynomial")
    if p.degree() < 1:
        return [], []
    if field == QQ:
        roots, packets = rational_roots_and_packets([Fraction(c) for c in _coeffs(p)])
        var = p.ring.vars[0]
        return roots, [Packet(_univariate_poly(q, QQ, var), m) for q, m in packets]
    roots, packets = [], []
    for q, mult in squarefree_factors(p):
        found = []
        if q.degree() == 1:
            found.append(-q.terms.get((0,), field.zero) / q.terms[(1,)])
        else:
            for cand in candidates:
                if cand not in found and q.evaluate({q.ring.vars[0]: cand}) == 0:
                    found.append(cand)
            if isinstance(field, NumberField):
                rest = _remove_roots(q, found)
                for r in _number_field_roots(rest):
                    if r not in found:
                        found.append(r)
        rest = _remove_roots(q, found)
        roots.extend((r, mult) for r in found)
        if rest.degree() > 0:
            packets.append(Packet(rest, mult))
    return roots, packets


def _remove_roots(q, roots):
    var = q.ring.vars[0]
    t = q.ring.gen(var)
    for r in roots:
        q = q.exact_div(t - r)
    return q


def _number_field_roots(q):
    """Roots in K of a squarefree q over K via the norm to Q."""
    field = q.ring.field
    if q.degree() < 1:
        return []
    if q.degree() == 1:
        return [-q.terms.get((0,), field.zero) / q.terms[(1,)]]
    lift = PolyRing(QQ, ("t", "w_"))
    Q = lift.zero
    for e, c in q.terms.items():
        for j, a in enumerate(c.c):
            if a != 0:
                Q = Q + lift.monomial((e[0], j), a)
    M = sum((lift.monomial((0, j), a) for j, a in enumerate(field.modulus) if a != 0), lift.zero)
    N = resultant(M, Q, "w_")
    ncoeffs = [Fraction(0)] * (N.degree_in("t") + 1)
    for e, c in N.terms.items():
        ncoeffs[e[0]] += c
    nroots, npackets = rational_roots_and_packets(ncoeffs)
    found = []
    for r, _ in nroots:
        if q.evaluate({q.ring.vars[0]: field(r)}) == 0:
            found.append(field(r))
    for pk, _ in npackets:
        G = gcd(q, _univariate_poly([field(c) for c in pk], field, q.ring.vars[0]))
        if G.degree() == 1:
            found.append(-G.terms.get((0,), field.zero) / G.terms[(1,)])
        elif G.degree() > 1:
            found.extend(_numeric_recognize(G))
    return found


def _numeric_recognize(G, max_degree=4, dps=40):
    """Roots in K of G found numerically across all embeddings, then verified exactly."""
    field = G.ring.field
    n = field.degree
    if n > max_degree or G.degree() > 6:
        return []
    var = G.ring.vars[0]
    out = []
    with mpmath.workdps(dps):
        thetas = [mpmath.mpc(z) for z in _refined_modulus_roots(field, dps)]
        per_embedding = []
        for th in thetas:
            cs = [mpmath.mpc(0)] * (G.degree() + 1)
            for e, c in G.terms.items():
                cs[e[0]] = sum((mpmath.mpf(a.numerator) / a.denominator * th ** j for j, a in enumerate(c.c)), mpmath.mpc(0))
            roots = mpmath.polyroots(list(reversed(cs)), maxsteps=200, extraprec=2 * dps)
            per_embedding.append(roots)
        V = mpmath.matrix([[th ** j for j in range(n)] for th in thetas])
        for combo in itertools.product(*per_embedding):
            try:
                sol = mpmath.lu_solve(V, mpmath.matrix(list(combo)))
            except ZeroDivisionError:
                continue
            coeffs = []
            ok = True
            for v in sol:
                if abs(mpmath.im(v)) > mpmath.mpf(10) ** (-dps // 2):
                    ok = False
                    break
                coeffs.append(Fraction(mpmath.nstr(mpmath.re(v), dps // 2)).limit_denominator(10 ** 12))
            if not ok:
                continue
            r = field.from_poly(coeffs)
            if r not in out and G.evaluate({var: r}) == 0:
                out.append(r)
    return out


def _refined_modulus_roots(field, dps):
    with mpmath.workdps(dps):
        cs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(field.modulus)]
        return mpmath.polyroots(cs, maxsteps=200, extraprec=2 * dps)


def binary_roots(form, candidates=()):
    """Zeros on P^1 of a binary form in (x, y): ([(point, mult)], [Packet in t = y/x])."""
    ring = form.ring
    field = ring.field
    d = form.degree()
    if d < 1:
        return [], []
    t_ring = PolyRing(field, ("u",) if field.var == "t" else ("t",))
    tv = t_ring.vars[0]
    u = form.compose({"x": t_ring.one, "y": t_ring.gen(tv)}, t_ring)
    pts = []
    inf_mult = d - max(u.degree(), 0) if u.terms else d
    if inf_mult > 0:
        pts.append(((field.zero, field.one), inf_mult))
    if u.degree() >= 1:
        cands = [Y for X, Y in candidates if X != 0]
        roots, packets = field_roots(u, cands)
        pts.extend(((field.one, r), m) for r, m in roots)
    else:
        packets = []
    pts.sort(key=lambda pm: point_key(pm[0]))
    return pts, packets
