"""One-parameter families over Q(t): specialization, marked points, parameter detection."""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import mpmath

from .algebra import QQ, NumberField, Poly, RatFunc, RationalFunctionField
from .algebra import upoly
from .algebra.interp import specialize_poly
from .algebra.roots import numeric_roots_q, rational_roots_and_packets
from .budget import BudgetExceeded
from .curve import ProjCurve, new_curve
from .endo import (Endomorphism, InfinityMap, NotRegular, affine_ring, binary_resultant, check_regular,
                   normalize_p1)
from .infinity import _cycle_multiplier, _point
from .p1 import Packet, binary_roots
from .search import orbit_degree_sequence


class BadParameter(ValueError):
    """The parameter value makes a denominator vanish or the map degenerate."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# ------------------------------------------------------------ specialize
def _scalar(c, t0):
    try:
        return c.evaluate(t0)
    except ZeroDivisionError as exc:
        raise BadParameter(str(exc), witness=upoly.to_text(c.den, c.field.var)) from None


def _poly_at(p, t0, ring=None):
    try:
        return specialize_poly(p, t0, ring)
    except ZeroDivisionError as exc:
        raise BadParameter(str(exc)) from None


def specialize(obj, t0):
    """Substitute the parameter t = t0 (rational) in a scalar, polynomial, map or curve."""
    t0 = Fraction(t0)
    if isinstance(obj, RatFunc):
        return _scalar(obj, t0)
    if isinstance(obj, EndoFamily):
        obj = obj.F
    if isinstance(obj, Endomorphism):
        ring = affine_ring(QQ)
        P, Q = _poly_at(obj.P, t0, ring), _poly_at(obj.Q, t0, ring)
        if max(P.degree(), Q.degree()) < obj.degree:
            raise BadParameter(f"degree drops at {obj.field.var}={t0}", witness=(str(P), str(Q)))
        G = Endomorphism(P, Q)
        try:
            check_regular(G)
        except NotRegular as exc:
            raise BadParameter(f"not regular at {obj.field.var}={t0}: {exc}", witness=exc.witness) from None
        return G
    if isinstance(obj, InfinityMap):
        ring = obj.ring.with_field(QQ)
        A, B = _poly_at(obj.A, t0, ring), _poly_at(obj.B, t0, ring)
        if not A.terms and not B.terms:
            raise BadParameter(f"map vanishes at {obj.field.var}={t0}")
        out = InfinityMap(A, B)
        if _rdegree(out) < _rdegree(obj):
            raise BadParameter(f"degree of the map drops at {obj.field.var}={t0}")
        return out
    if isinstance(obj, ProjCurve):
        g = _poly_at(obj.g, t0)
        if g.is_constant():
            raise BadParameter(f"curve degenerates at {obj.field.var}={t0}")
        return new_curve(g, "homogeneous")
    if isinstance(obj, Poly):
        return _poly_at(obj, t0)
    if isinstance(obj, tuple):
        return tuple(specialize(c, t0) for c in obj)
    raise TypeError(f"cannot specialize {type(obj).__name__}")


def _rdegree(f):
    num, den = f.rational_function()
    return max(num.degree(), den.degree())


# ---------------------------------------------------------------- families
@dataclass
class EndoFamily:
    """An endomorphism over Q(t) with its finite set of bad parameters."""

    F: Endomorphism
    bad: list = dc_field(default_factory=list)    # polynomials in t (coefficient tuples)

    @classmethod
    def from_endo(cls, F):
        if not isinstance(F.field, RationalFunctionField):
            raise ValueError("a family needs coefficients in Q(t)")
        bad = []
        Pd, Qd = F.leading_forms()
        res = binary_resultant(Pd, Qd, F.degree)
        if upoly.deg(res.num) > 0:
            bad.append(upoly.monic(res.num))
        dens = upoly.ONE
        for p in (F.P, F.Q):
            for c in p.terms.values():
                if upoly.deg(c.den) > 0:
                    dens = upoly.divmod_(upoly.mul(dens, c.den), upoly.gcd_(dens, c.den))[0]
        if upoly.deg(dens) > 0:
            bad.append(dens)
        # parameters where a leading coefficient vanishes (degree drop)
        for form in (Pd, Qd):
            lc = None
            for c in form.terms.values():
                lc = c.num if lc is None else upoly.gcd_(lc, c.num)
            if lc is not None and upoly.deg(lc) > 0:
                bad.append(upoly.monic(lc))
        return cls(F, bad)

    @property
    def var(self):
        return self.F.field.var

    def bad_text(self):
        return [upoly.to_text(b, self.var) for b in self.bad]

    def is_bad(self, t0):
        return any(upoly.evaluate(b, Fraction(t0)) == 0 for b in self.bad)

    def specialize(self, t0):
        if self.is_bad(t0):
            hits = [upoly.to_text(b, self.var) for b in self.bad if upoly.evaluate(b, Fraction(t0)) == 0]
            raise BadParameter(f"{self.var}={t0} is a bad parameter", witness=hits)
        return specialize(self.F, t0)

    def record(self):
        return {"P": str(self.F.P), "Q": str(self.F.Q), "field": self.F.field.record(), "bad": self.bad_text()}


# ------------------------------------------------------------ marked points
@dataclass(frozen=True)
class MarkedPoint:
    """A point of X_t on the line at infinity, exact over Q(t) or a packet."""

    point: tuple = None
    multiplicity: int = 1
    packet: Packet = None

    def text(self):
        if self.packet is not None:
            return f"roots of {self.packet.text()}"
        X, Y = self.point
        return "inf" if X == 0 else str(Y)

    @property
    def degree(self):
        return 1 if self.packet is None else self.packet.degree


def _sqrt_upoly(a):
    """Square root in Q[t] of a, or None."""
    if not a:
        return upoly.ZERO
    n = upoly.deg(a)
    if n % 2:
        return None
    lc = a[-1]
    if lc < 0:
        return None
    r = _sqrt_fraction(lc)
    if r is None:
        return None
    m = n // 2
    s = [Fraction(0)] * (m + 1)
    s[m] = r
    # match coefficients from the top down
    for k in range(m - 1, -1, -1):
        acc = a[m + k]
        for i in range(k + 1, m):
            j = m + k - i
            if k < j <= m:
                acc -= s[i] * s[j]
        s[k] = acc / (2 * r)
    s = upoly.trim(s)
    return s if upoly.mul(s, s) == upoly.trim(a) else None


def _sqrt_fraction(q):
    from math import isqrt

    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _quadratic_roots(pk):
    """Roots in Q(t) of a quadratic packet, when its discriminant is a square."""
    field = pk.poly.ring.field
    a = pk.poly.terms.get((2,), field.zero)
    b = pk.poly.terms.get((1,), field.zero)
    c = pk.poly.terms.get((0,), field.zero)
    disc = b * b - a * c * 4
    num, den = disc.num, disc.den
    sn, sd = _sqrt_upoly(num), _sqrt_upoly(den)
    if sn is None or sd is None:
        return None
    root = RatFunc.make(field, sn, sd)
    return [(-b + root) / (a * 2), (-b - root) / (a * 2)]


def marked_infinity_points(X):
    """Points of the family X_t on the line at infinity (exact or as packets over Q(t))."""
    if isinstance(X, Poly):
        X = new_curve(X, "affine")
    if X.is_line_at_infinity():
        raise ValueError("the line at infinity has no marked points")
    form = X.top_form()
    pts, packets = binary_roots(form)
    out = [MarkedPoint(p, m) for p, m in pts]
    field = X.field
    for pk in packets:
        roots = _quadratic_roots(pk) if pk.degree == 2 and isinstance(field, RationalFunctionField) else None
        if roots is not None:
            out.extend(MarkedPoint((field.one, r), pk.multiplicity) for r in roots)
        else:
            out.append(MarkedPoint(None, pk.multiplicity, pk))
    return out


# --------------------------------------------- superattracting parameters
@dataclass
class ParameterReport:
    exact: list = dc_field(default_factory=list)     # (t0, period)
    packets: list = dc_field(default_factory=list)   # (minimal polynomial text, period, numeric values)
    all_parameters: bool = False
    notes: list = dc_field(default_factory=list)

    def values(self):
        return sorted({t for t, _ in self.exact})

    def record(self):
        return {
            "all_parameters": self.all_parameters,
            "parameters": [{"value": str(t), "period": n} for t, n in self.exact],
            "packets": [{"poly": p, "period": n, "numeric": v} for p, n, v in self.packets],
            "notes": self.notes,
        }


def _as_point(f, a):
    if isinstance(a, MarkedPoint):
        if a.packet is not None:
            raise ValueError("packets are handled per factor; pass an exact point")
        return _point(f.field, a.point)
    if isinstance(a, tuple):
        return _point(f.field, a)
    return _point(f.field, (1, a))


def _clear_point(p):
    """Polynomial coordinates (A0, A1) in Q[t] for a projective point over Q(t)."""
    X, Y = p
    den = upoly.mul(X.den, Y.den)
    A0 = upoly.divmod_(upoly.mul(X.num, den), X.den)[0]
    A1 = upoly.divmod_(upoly.mul(Y.num, den), Y.den)[0]
    return A0, A1


def _fix_poly(f, p, n):
    """Numerator polynomial in t whose roots are where f^n(p) = p (or None if identically)."""
    q = p
    for _ in range(n):
        q = f(q)
    A0, A1 = _clear_point(p)
    B0, B1 = _clear_point(q)
    return upoly.sub(upoly.mul(A0, B1), upoly.mul(A1, B0))


def _check_exact(f, a, t0, n):
    """(holds, minimal period) for f_t0 and a(t0), by exact specialization."""
    try:
        g = specialize(f, t0)
        p = (specialize(a[0], t0), specialize(a[1], t0))
    except BadParameter:
        return False, None
    if p[0] == 0 and p[1] == 0:
        return False, None
    p = normalize_p1(*p)
    q = p
    for k in range(1, n + 1):
        q = g(q)
        if q == p:
            return _cycle_multiplier(g, p, k) == 0, k
    return False, None


def superattracting_parameters(f, a, n_max):
    """Parameters t0 where a(t0) is a superattracting periodic point of f_t0 with period <= n_max."""
    if isinstance(f, Endomorphism):
        from .endo import restrict_infinity

        f = restrict_infinity(f)
    field = f.field
    if not isinstance(field, RationalFunctionField):
        raise ValueError("a family needs coefficients in Q(t)")
    p = _as_point(f, a)
    report = ParameterReport()
    seen = set()
    for n in range(1, n_max + 1):
        fix = _fix_poly(f, p, n)
        try:
            lam = _cycle_multiplier(f, p, n)
            lam_num, lam_den = lam.num, lam.den
        except ZeroDivisionError:
            lam_num, lam_den = None, None
        if not fix:
            if lam_num is not None and not lam_num:
                report.all_parameters = True
                report.notes.append(f"a(t) is periodic of period dividing {n} with vanishing multiplier for every t")
                return report
            cand = upoly.monic(upoly.mul(lam_num, lam_den)) if lam_num is not None else None
            report.notes.append(f"a(t) is periodic of period dividing {n} for every t")
        else:
            cand = fix
        if cand is None or upoly.deg(cand) < 1:
            continue
        roots, packets = rational_roots_and_packets(cand)
        for t0, _ in roots:
            if t0 in seen:
                continue
            ok, k = _check_exact(f, p, t0, n)
            if ok and k == n:
                seen.add(t0)
                report.exact.append((t0, k))
        for pk, _ in packets:
            _packet_parameters(f, p, n, pk, lam_num, report)
    report.exact.sort(key=lambda tk: (tk[0], tk[1]))
    return report


def _packet_parameters(f, p, n, pk, lam_num, report):
    """Irrational parameters: common roots of a packet of Fix_n with the multiplier numerator."""
    common = pk if lam_num is None else upoly.gcd_(pk, lam_num)
    if upoly.deg(common) < 1:
        return
    K = NumberField(common, "w")
    fK = InfinityMap(_at_number(f.A, K), _at_number(f.B, K))
    pK = (_scalar_at_number(p[0], K), _scalar_at_number(p[1], K))
    try:
        pK = normalize_p1(*pK)
        q = pK
        period = None
        for k in range(1, n + 1):
            q = fK(q)
            if q == pK:
                period = k
                break
        if period != n or _cycle_multiplier(fK, pK, n) != 0:
            return
    except (ZeroDivisionError, ArithmeticError):
        report.notes.append(f"parameters {upoly.to_text(common, f.field.var)} could not be checked exactly")
        return
    values = [complex(r.value) for r in numeric_roots_q(common)]
    report.packets.append((upoly.to_text(common, f.field.var), n,
                           [mpmath.nstr(mpmath.mpc(v), 12) for v in values]))


def _scalar_at_number(c, K):
    w = K.gen()
    num = K.zero
    for a in reversed(c.num):
        num = num * w + a
    den = K.zero
    for a in reversed(c.den):
        den = den * w + a
    return num / den


def _at_number(p, K):
    ring = p.ring.with_field(K)
    return ring.zero + sum((ring.monomial(e, _scalar_at_number(c, K)) for e, c in p.terms.items()), ring.zero)


# ------------------------------------------------------ degree sequences
@dataclass
class FamilyDegreeReport:
    generic: object
    spot_checks: list

    def record(self):
        return {"generic": self.generic.record(), "spot_checks": self.spot_checks}


def family_degree_sequence(F, X, k_max, samples=(1, 2), special=()):
    """Generic degrees of X_t, F_t(X_t), ... over Q(t), with checks at rational parameters.

    Each value in ``samples`` and ``special`` is specialized and the
    degree sequence recomputed over Q; mismatches are flagged as degree drops.
    """
    fam = F if isinstance(F, EndoFamily) else EndoFamily.from_endo(F)
    if isinstance(X, Poly):
        X = new_curve(X, "affine")
    generic = orbit_degree_sequence(fam.F, X, k_max)
    checks = []
    for t0 in list(samples) + list(special):
        entry = {"parameter": str(Fraction(t0))}
        try:
            G = fam.specialize(t0)
            C = specialize(X, t0)
            rep = orbit_degree_sequence(G, C, len(generic.degrees) - 1)
            entry["degrees"] = rep.degrees
            entry["matches_generic"] = rep.degrees == generic.degrees
            if rep.degrees != generic.degrees:
                entry["flag"] = "degree drop" if rep.degrees[-1] < generic.degrees[-1] else "degree change"
        except BadParameter as exc:
            entry["rejected"] = str(exc)
        except BudgetExceeded as exc:
            entry["truncated"] = str(exc)
        checks.append(entry)
    return FamilyDegreeReport(generic, checks)
