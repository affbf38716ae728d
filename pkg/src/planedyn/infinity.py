"""Dynamics on the line at infinity and invariant formal branches through it.

Points of P^1 are normalized pairs (X, Y) as in :mod:`planedyn.p1`.  Local
computations use the chart c -> [1 : c] at finite points and c -> [c : 1]
at infinity, so multipliers are chart-corrected automatically.
"""

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .algebra import QQ, NumberField, PolyRing, ZeroDivisorSplit, canonical, gcd
from .algebra import linalg
from .algebra.roots import numeric_roots_q
from .budget import BudgetExceeded, checkpoint
from .curve import ProjCurve, invariance_certificate
from .endo import Endomorphism, normalize_p1, restrict_infinity
from .p1 import Packet, _coeffs, binary_roots, point_key

CLASSES = ("superattracting", "attracting", "indifferent", "repelling")


class Superattracting(ValueError):
    """The base point has multiplier zero; no transverse invariant branch is guaranteed."""


class Resonance(ArithmeticError):
    """The order-by-order equation degenerates."""

    def __init__(self, order, consistent):
        what = "infinitely many solutions" if consistent else "no solution"
        super().__init__(f"resonance at order {order}: {what}")
        self.order = order
        self.consistent = consistent


# ----------------------------------------------------------- local charts
def _chart_ring(field):
    return PolyRing(field, ("e",) if getattr(field, "var", None) == "c" else ("c",))


def _local_map(f, p, q):
    """(N, D) with the chart coordinate of f(point(c)) at q equal to N(c)/D(c)."""
    ring = _chart_ring(f.field)
    c = ring.gen(ring.vars[0])
    sub = {"x": ring.one, "y": c} if p[0] != 0 else {"x": c, "y": ring.one}
    a = f.A.compose(sub, ring)
    b = f.B.compose(sub, ring)
    return (b, a) if q[0] != 0 else (a, b)


def _chart_value(p):
    return p[1] if p[0] != 0 else p[0]


def _univariate_eval(p, c):
    return p.evaluate({p.ring.vars[0]: c})


def _derivative_at(N, D, c):
    var = N.ring.vars[0]
    n, d = _univariate_eval(N, c), _univariate_eval(D, c)
    dn, dd = _univariate_eval(N.derivative(var), c), _univariate_eval(D.derivative(var), c)
    return (dn * d - n * dd) / (d * d)


def _step_derivative(f, p):
    q = f(p)
    N, D = _local_map(f, p, q)
    return _derivative_at(N, D, _chart_value(p)), q


def multiplier(f, cycle):
    """Product of the chart derivatives of f along ``cycle`` (a list of points)."""
    if isinstance(f, Endomorphism):
        f = restrict_infinity(f)
    cycle = [_point(f.field, p) for p in cycle]
    if not cycle:
        raise ValueError("empty cycle")
    lam = f.field.one
    for i, p in enumerate(cycle):
        d, q = _step_derivative(f, p)
        if q != cycle[(i + 1) % len(cycle)]:
            raise ValueError(f"not a cycle: f({_text(p)}) = {_text(q)}")
        lam = lam * d
    return lam


def _point(field, p):
    X, Y = p
    return normalize_p1(field(X) if not hasattr(X, "field") else X, field(Y) if not hasattr(Y, "field") else Y)


def _text(p):
    return "inf" if p[0] == 0 else str(p[1])


def classify(lam):
    """Class of an exact rational or numeric multiplier (None if undecidable)."""
    if lam == 0:
        return "superattracting"
    if isinstance(lam, Fraction):
        a = abs(lam)
    elif isinstance(lam, (complex, float, mpmath.mpc, mpmath.mpf)):
        a = abs(lam)
        if abs(a - 1) < 1e-12:
            return "indifferent"
    else:
        return None
    if a < 1:
        return "attracting"
    if a == 1:
        return "indifferent"
    return "repelling"


def _classify_embeddings(lam):
    """Class of an exact multiplier in a number field, if all embeddings agree."""
    if isinstance(lam, Fraction):
        return classify(lam)
    K = lam.field
    if len(lam.c) <= 1:
        return classify(Fraction(lam.c[0]) if lam.c else Fraction(0))
    classes = set()
    for r in K.complex_roots():
        v = sum(complex(c) * complex(r) ** i for i, c in enumerate(lam.c))
        a = abs(v)
        if abs(a - 1) < 1e-9:
            return None
        classes.add("attracting" if a < 1 else "repelling")
    return classes.pop() if len(classes) == 1 else None


# ------------------------------------------------------- periodic points
@dataclass(frozen=True)
class PeriodicPointReport:
    """A periodic point of f (or a Galois-stable packet of them).

    ``point`` is an exact pair, or for a packet the generic root (1, w) over
    the number field it defines, or a complex number in numeric mode
    (``None`` meaning infinity).  ``multiplier`` is (f^period)' at the point.
    """

    point: object
    period: int
    multiplier: object
    cls: str = None
    multiplicity: int = 1
    packet: Packet = None
    numeric: bool = False
    residual: float = 0.0

    def point_text(self):
        if self.numeric:
            return "inf" if self.point is None else mpmath.nstr(mpmath.chop(mpmath.mpc(self.point), 1e-12), 12)
        if self.packet is not None:
            return f"roots of {self.packet.text()}"
        return _text(self.point)

    def record(self):
        return {
            "point": self.point_text(),
            "period": self.period,
            "multiplier": str(self.multiplier) if not self.numeric else mpmath.nstr(mpmath.chop(mpmath.mpc(self.multiplier), 1e-12), 12),
            "class": self.cls,
            "multiplicity": self.multiplicity,
            "degree": 1 if self.packet is None else self.packet.degree,
        }


def _divisors(n):
    return [k for k in range(1, n + 1) if n % k == 0]


def _minimal_period(f, p, n):
    q = p
    for k in range(1, n + 1):
        q = f(q)
        if q == p:
            return k
    raise ValueError(f"{_text(p)} is not periodic of period dividing {n}")


def _cycle_multiplier(f, p, k):
    lam = f.field.one
    q = p
    for _ in range(k):
        d, q = _step_derivative(f, q)
        lam = lam * d
    return lam


def _packet_reports(f, poly, mult, n):
    """Split a packet by minimal period and report each piece over its number field."""
    t_ring = poly.ring
    var = t_ring.vars[0]
    rest = poly
    out = []
    for k in _divisors(n):
        form = f.fixed_point_form(k)
        fk = form.compose({"x": t_ring.one, "y": t_ring.gen(var)}, t_ring)
        piece = gcd(rest, fk)
        if piece.degree() < 1:
            continue
        rest = rest.exact_div(piece)
        out.extend(_packet_piece(f, _monic(piece), mult, k))
        checkpoint(1)
        if rest.degree() < 1:
            break
    return out


def _monic(p):
    return p.scale(1 / p.terms[(p.degree(),)])


def _packet_piece(f, piece, mult, k):
    if piece.degree() == 1:
        r = -piece.terms.get((0,), piece.ring.field.zero) / piece.terms[(1,)]
        p = (f.field.one, r)
        lam = _cycle_multiplier(f, p, k)
        return [PeriodicPointReport(p, k, lam, classify(lam), mult)]
    K = NumberField(_coeffs(piece), "w")
    fK = f.change_field(K)
    p = (K.one, K.gen())
    try:
        lam = _cycle_multiplier(fK, p, k)
    except ZeroDivisorSplit as split:
        # the packet was reducible and a factor was exposed; report the factors separately
        factor = _poly_from_upoly(piece.ring, split.factor)
        other = piece.exact_div(factor)
        return _packet_piece(f, _monic(factor), mult, k) + _packet_piece(f, _monic(other), mult, k)
    if len(lam.c) <= 1:
        lam = Fraction(lam.c[0]) if lam.c else Fraction(0)
    return [PeriodicPointReport(p, k, lam, _classify_embeddings(lam), mult, Packet(piece, mult))]


def _poly_from_upoly(ring, coeffs):
    return ring.zero + sum((ring.monomial((i,), c) for i, c in enumerate(coeffs) if c != 0), ring.zero)


def periodic_points(f, n=1, mode="exact", dps=30):
    """All fixed points of f^n, each with minimal period, multiplier and class.

    ``mode="exact"`` returns rational points and number-field packets (over
    Q; over other fields unresolved packets carry no multiplier).
    ``mode="numeric"`` returns complex approximations with residuals.
    """
    if isinstance(f, Endomorphism):
        f = restrict_infinity(f)
    if n < 1:
        raise ValueError("period must be positive")
    if f.degree ** n > 4096:
        raise BudgetExceeded(f"f^{n} has degree {f.degree ** n}, beyond the supported size")
    form = f.fixed_point_form(n)
    if mode == "exact":
        return _exact_periodic(f, form, n)
    if mode == "numeric":
        if f.field != QQ:
            raise ValueError("numeric mode needs a map over Q")
        return _numeric_periodic(f, form, n, dps)
    raise ValueError(f"unknown mode {mode!r}")


def _exact_periodic(f, form, n):
    pts, packets = binary_roots(form)
    out = []
    for p, m in pts:
        k = _minimal_period(f, p, n)
        lam = _cycle_multiplier(f, p, k)
        out.append(PeriodicPointReport(p, k, lam, classify(lam), m))
    for pk in packets:
        if f.field == QQ:
            out.extend(_packet_reports(f, pk.poly, pk.multiplicity, n))
        else:
            out.append(PeriodicPointReport(None, n, None, None, pk.multiplicity, pk))
    out.sort(key=_report_key)
    return out


def _report_key(r):
    if r.packet is not None:
        return (r.period, 2, r.packet.degree, r.packet.text())
    return (r.period, 0, point_key(r.point))


def _mp_eval(p, z):
    acc = mpmath.mpc(0)
    for c in reversed(_coeffs(p)):
        acc = acc * z + mpmath.mpf(Fraction(c).numerator) / Fraction(c).denominator
    return acc


def _numeric_image(f, z):
    """f at a complex point (None for infinity)."""
    if z is None:
        X, Y = mpmath.mpc(0), mpmath.mpc(1)
    else:
        X, Y = mpmath.mpc(1), z
    a = _mp_form(f.A, X, Y)
    b = _mp_form(f.B, X, Y)
    if abs(a) <= 1e-30 * max(1, abs(b)):
        return None
    return b / a


def _mp_form(form, X, Y):
    acc = mpmath.mpc(0)
    for e, c in form.terms.items():
        c = Fraction(c)
        acc += mpmath.mpf(c.numerator) / c.denominator * X ** e[0] * Y ** e[1]
    return acc


def _numeric_derivative(f, z, k):
    lam = mpmath.mpc(1)
    p = z
    for _ in range(k):
        q = _numeric_image(f, p)
        pp = (1, 0) if p is None else (1, 1)
        qq = (0, 1) if q is None else (1, 1)
        if p is None:
            pp = (0, 1)
        N, D = _local_map(f, pp, qq)
        c = mpmath.mpc(0) if p is None else p
        n, d = _mp_eval(N, c), _mp_eval(D, c)
        var = N.ring.vars[0]
        dn, dd = _mp_eval(N.derivative(var), c), _mp_eval(D.derivative(var), c)
        lam *= (dn * d - n * dd) / (d * d)
        p = q
    return lam


def _close(a, b, tol):
    if a is None or b is None:
        return a is None and b is None
    return abs(a - b) <= tol * max(1, abs(a))


def _numeric_periodic(f, form, n, dps):
    var_ring = _chart_ring(QQ)
    c = var_ring.gen(var_ring.vars[0])
    u = form.compose({"x": var_ring.one, "y": c}, var_ring)
    tol = mpmath.mpf(10) ** (-(dps // 3))
    out = []
    with mpmath.workdps(dps):
        zs = []
        inf_mult = form.degree() - u.degree()
        if inf_mult > 0:
            zs.append((None, inf_mult, 0.0))
        for r in numeric_roots_q(_coeffs(u), dps=dps):
            zs.append((mpmath.mpc(r.value), r.multiplicity, r.residual))
        for z, m, res in zs:
            k = n
            for j in _divisors(n):
                q = z
                for _ in range(j):
                    q = _numeric_image(f, q)
                if _close(q, z, tol):
                    k = j
                    break
            lam = _numeric_derivative(f, z, k)
            if abs(lam) < tol:
                cls = "superattracting"
            else:
                cls = classify(complex(lam))
            out.append(PeriodicPointReport(None if z is None else complex(z), k, complex(lam), cls, m,
                                           numeric=True, residual=float(res)))
    out.sort(key=lambda r: (r.period, r.point is None, 0 if r.point is None else r.point.real,
                            0 if r.point is None else r.point.imag))
    return out


def fixed_point_count(f, n):
    """Number of fixed points of f^n with multiplicity (d^n + 1 for degree d >= 2)."""
    total = 0
    for r in periodic_points(f, n):
        total += r.multiplicity * (1 if r.packet is None else r.packet.degree)
    return total


def critical_points(f):
    """Zeros of the Jacobian form A_x B_y - A_y B_x: ([(point, mult)], [Packet])."""
    if isinstance(f, Endomorphism):
        f = restrict_infinity(f)
    J = f.A.derivative("x") * f.B.derivative("y") - f.A.derivative("y") * f.B.derivative("x")
    if J.is_zero():
        raise ValueError("constant map has no critical points")
    return binary_roots(J)


# --------------------------------------------------------- power series
class _Series:
    """Truncated power series helpers on coefficient lists (low -> high)."""

    def __init__(self, field, order):
        self.zero = field.zero
        self.one = field.one
        self.n = order + 1

    def trunc(self, a):
        a = list(a[: self.n])
        return a + [self.zero] * (self.n - len(a))

    def add(self, a, b):
        return [x + y for x, y in zip(self.trunc(a), self.trunc(b))]

    def mul(self, a, b):
        out = [self.zero] * self.n
        for i, x in enumerate(a[: self.n]):
            if x == 0:
                continue
            for j in range(min(len(b), self.n - i)):
                out[i + j] = out[i + j] + x * b[j]
        return out

    def inv(self, a):
        if a[0] == 0:
            raise ZeroDivisionError("series with zero constant term")
        out = [self.zero] * self.n
        c0 = self.one / a[0]
        out[0] = c0
        for k in range(1, self.n):
            s = self.zero
            for j in range(1, min(k, len(a) - 1) + 1):
                s = s + a[j] * out[k - j]
            out[k] = -s * c0
        return out

    def poly2(self, p, phi):
        """p(u, phi(u)) for a polynomial p in two variables (u first)."""
        powers = [self.trunc([self.one])]
        out = [self.zero] * self.n
        for e, c in p.terms.items():
            i, j = e
            while len(powers) <= j:
                powers.append(self.mul(powers[-1], phi))
            term = powers[j]
            if i >= self.n:
                continue
            shifted = [self.zero] * i + term[: self.n - i]
            out = [o + c * s for o, s in zip(out, shifted)]
        return out

    def compose(self, phi, U):
        """phi(U(u)) for U with zero constant term."""
        out = [self.zero] * self.n
        for c in reversed(phi[: self.n]):
            out = self.mul(out, U)
            out[0] = out[0] + c
        return out


def _series_of(S, frac, phi):
    num, den = frac
    return S.mul(S.poly2(num, phi), S.inv(S.poly2(den, phi)))


def solve_invariant_graph(U, V, c, K):
    """Coefficients a_0 = c, a_1..a_K of the graph v = phi(u) invariant under (u, v) -> (U, V).

    U and V are (numerator, denominator) pairs of polynomials in (u, v)
    (a bare polynomial means denominator 1), with U(0, v) = 0 so that
    E = {u = 0} is invariant and V(0, c) = c.  Order i is solved from a
    linear equation with coefficient mu^i - lambda, where mu = dU/du(0, c)
    and lambda = dV/dv(0, c); a vanishing coefficient raises :class:`Resonance`.
    """
    U, V = _as_frac(U), _as_frac(V)
    field = U[0].ring.field
    S0 = _Series(field, 0)
    phi0 = [field(c)] if not hasattr(c, "field") else [c]
    if _series_of(S0, U, phi0)[0] != 0:
        raise ValueError("the base point is not on an invariant line u = 0")
    if _series_of(S0, V, phi0)[0] != phi0[0]:
        raise ValueError("the base point is not fixed")
    coeffs = list(phi0)
    for i in range(1, K + 1):
        S = _Series(field, i)
        r = []
        for trial in (field.zero, field.one):
            phi = coeffs + [trial]
            lhs = S.compose(phi, _series_of(S, U, phi))
            rhs = _series_of(S, V, phi)
            r.append(lhs[i] - rhs[i])
        coef = r[1] - r[0]
        if coef == 0:
            raise Resonance(i, r[0] == 0)
        coeffs.append(-r[0] / coef)
        checkpoint(i)
    return coeffs


def _as_frac(p):
    if isinstance(p, tuple):
        return p
    return (p, p.ring.one)


@dataclass(frozen=True)
class JetBranch:
    """v = sum a_i u^i, the invariant branch through ``base`` in the chart ``chart``."""

    base: tuple
    chart: str
    coeffs: tuple
    order: int
    endo: object = None

    def base_text(self):
        X, Y = self.base
        return f"[{X}:{Y}:0]"

    def to_json(self):
        return {"chart": self.chart, "base": self.base_text(),
                "coeffs": [str(c) for c in self.coeffs], "order": self.order}

    def chart_map(self):
        return _chart_map(self.endo, self.base)

    def residual(self):
        """phi(U) - V(u, phi) as a truncated series (all zeros for a genuine jet)."""
        U, V = self.chart_map()
        field = U[0].ring.field
        S = _Series(field, self.order)
        phi = list(self.coeffs)
        lhs = S.compose(phi, _series_of(S, U, phi))
        rhs = _series_of(S, V, phi)
        return [a - b for a, b in zip(lhs, rhs)]


CHARTS = {True: "u=z/x, v=y/x", False: "u=z/y, v=x/y"}


def _chart_map(F, o):
    """(U, V) as fraction pairs for the chart at infinity centred on the line through o."""
    ring = PolyRing(F.field, ("u", "v"))
    u, v = ring.gen("u"), ring.gen("v")
    if o[0] != 0:
        sub = {"x": ring.one, "y": v, "z": u}
        den = F.Ph.compose(sub, ring)
        num_v = F.Qh.compose(sub, ring)
    else:
        sub = {"x": v, "y": ring.one, "z": u}
        den = F.Qh.compose(sub, ring)
        num_v = F.Ph.compose(sub, ring)
    return (u ** F.degree, den), (num_v, den)


def invariant_branch_jet(F, o, K):
    """The invariant branch transverse to the line at infinity at a fixed point o, to order K."""
    f = restrict_infinity(F)
    o = _point(F.field, o)
    if f(o) != o:
        raise ValueError(f"{_text(o)} is not fixed by the map at infinity")
    lam = multiplier(f, [o])
    if lam == 0:
        raise Superattracting(f"{_text(o)} is superattracting; no transverse invariant branch is guaranteed")
    U, V = _chart_map(F, o)
    c = o[1] if o[0] != 0 else o[0]
    coeffs = solve_invariant_graph(U, V, c, K)
    return JetBranch(o, CHARTS[o[0] != 0], tuple(coeffs), K, F)


def required_order(D):
    return D * D + D + 2


def _monomials(D):
    return [(i, j, D - i - j) for i in range(D + 1) for j in range(D + 1 - i)]


def recognize_algebraic(jet, D):
    """A certified invariant curve of degree <= D containing the jet, or None."""
    need = required_order(D)
    if jet.order < need:
        raise ValueError(f"jet order {jet.order} is too short for degree {D}; need at least {need}")
    F = jet.endo
    field = F.field
    S = _Series(field, jet.order)
    phi = list(jet.coeffs)
    u = [field.zero, field.one]
    one = [field.one]
    # (x, y, z) along the branch
    if jet.base[0] != 0:
        xyz = (one, phi, u)
    else:
        xyz = (phi, one, u)
    ring = PolyRing(field, ("x", "y", "z"))
    for d in range(1, D + 1):
        monos = _monomials(d)
        columns = []
        for e in monos:
            s = S.trunc(one)
            for k in range(3):
                for _ in range(e[k]):
                    s = S.mul(s, xyz[k])
            columns.append(s)
        rows = []
        for i in range(jet.order + 1):
            row = {j: col[i] for j, col in enumerate(columns) if col[i] != 0}
            if row:
                rows.append(row)
        basis = linalg.nullspace(rows, len(monos), field)
        if not basis:
            continue
        polys = [ring.zero + sum((ring.monomial(e, c) for e, c in zip(monos, vec) if c != 0), ring.zero)
                 for vec in basis]
        g = polys[0]
        for p in polys[1:]:
            g = gcd(g, p)
        C = ProjCurve(canonical(g))
        if C.is_line_at_infinity() or not invariance_certificate(F, C, 1).holds:
            return None
        return C
    return None
