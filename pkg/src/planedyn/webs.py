"""Symmetric differential forms of webs given by one-parameter families of curves.

A form of degree k is stored as a single polynomial in the coordinates and
the differential symbols dx, dy (and dz for projective forms), homogeneous
of degree k in the symbols.
"""

from dataclasses import dataclass
from fractions import Fraction

from .algebra import QQ, PolyRing, canonical, gcd
from .algebra.ops import DegenerateInput

AFFINE = ("x", "y")
PROJECTIVE = ("x", "y", "z")


class WebError(ValueError):
    """The family does not define a web form with the requested data."""


@dataclass(frozen=True)
class SymmetricForm:
    """omega = sum over symbol monomials of (coefficient polynomial) * dx^i dy^j [dz^l]."""

    poly: object
    coords: tuple
    k: int
    e: int = 1

    @property
    def ring(self):
        return self.poly.ring

    def symbols(self):
        return tuple("d" + v for v in self.coords)

    def coefficients(self):
        """{symbol exponent tuple: coefficient polynomial in the coordinates}."""
        n = len(self.coords)
        cring = PolyRing(self.ring.field, self.coords)
        out = {}
        for ex, c in self.poly.terms.items():
            key = ex[n:]
            out.setdefault(key, {})
            out[key][ex[:n]] = c
        return {key: type(self.poly)(cring, terms) for key, terms in sorted(out.items(), reverse=True)}

    def is_zero(self):
        return self.poly.is_zero()

    def is_degenerate(self):
        """True when all coefficients share a curve (the zero set is not of codimension >= 2)."""
        g = None
        for c in self.coefficients().values():
            g = c if g is None else gcd(g, c)
        return g is None or not g.is_constant()

    def scaled(self, c):
        return SymmetricForm(self.poly * c if not isinstance(c, (int, Fraction)) else self.poly.scale(c),
                             self.coords, self.k, self.e)

    def dehomogenize(self):
        """Affine chart z = 1 (dz kept as a symbol)."""
        return self.poly.compose({"z": self.ring.one})

    def to_json(self):
        return {",".join(map(str, key)): str(c) for key, c in self.coefficients().items()}

    def __eq__(self, other):
        return isinstance(other, SymmetricForm) and self.poly == other.poly and self.coords == other.coords

    def __hash__(self):
        return hash(self.poly)


def form_ring(field=QQ, coords=PROJECTIVE):
    return PolyRing(field, tuple(coords) + tuple("d" + v for v in coords))


def parse_form(text, coords=PROJECTIVE, field=QQ, e=1):
    """A form from text such as ``"x*dy - y*dx"``."""
    ring = form_ring(field, coords)
    p = ring(text)
    return _wrap(p, coords, e)


def _wrap(p, coords, e=1):
    n = len(coords)
    degs = {sum(ex[n:]) for ex in p.terms}
    if len(degs) > 1:
        raise WebError(f"mixed symbol degrees {sorted(degs)}")
    k = degs.pop() if degs else 0
    return SymmetricForm(p, tuple(coords), k, e)


def _differential(c, ring, coords):
    """dc = sum (dc/dv) dv for a polynomial c in the coordinates, lifted to the form ring."""
    out = ring.zero
    for v in coords:
        dv = c.derivative(v)
        if dv.terms:
            out = out + _lift(dv, ring) * ring.gen("d" + v)
    return out


def _lift(c, ring):
    n = c.ring.nvars
    pad = (0,) * (ring.nvars - n)
    return type(c)(ring, {ex + pad: a for ex, a in c.terms.items()})


def _bareiss_det(M):
    """Determinant of a square matrix of polynomials (fraction-free elimination)."""
    n = len(M)
    M = [list(row) for row in M]
    ring = M[0][0].ring
    sign = 1
    prev = ring.one
    for k in range(n - 1):
        if M[k][k].is_zero():
            for i in range(k + 1, n):
                if not M[i][k].is_zero():
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return ring.zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]).exact_div(prev)
        prev = M[k][k]
    d = M[n - 1][n - 1]
    return d if sign > 0 else -d


def _resultant_in_s(P, L, ring):
    """Res_s(P, L) for coefficient lists (low -> high) of polynomials in s."""
    m, n = len(P) - 1, len(L) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([ring.zero] * i + list(reversed(P)) + [ring.zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([ring.zero] * i + list(reversed(L)) + [ring.zero] * (size - n - 1 - i))
    return _bareiss_det(rows)


def _coeffs_in(P, s):
    """Coefficient list (low -> high) in the variable s, over the remaining variables."""
    ring = P.ring
    rest = tuple(v for v in ring.vars if v != s)
    sub = PolyRing(ring.field, rest)
    i = ring.index[s]
    d = P.degree_in(s)
    out = [dict() for _ in range(d + 1)]
    for ex, c in P.terms.items():
        out[ex[i]][ex[:i] + ex[i + 1:]] = c
    return [type(P)(sub, t) for t in out]


def incidence_degree(P, s):
    return P.degree_in(s)


def _uniform_root(P, s, e):
    """Q with Q^e = P up to a unit, as polynomials in s over the coordinate ring."""
    if e == 1:
        return P
    D = P.derivative(s)
    G = gcd(P, D)
    Q = P.exact_div(G)
    if canonical(Q ** e) != canonical(P):
        raise WebError(f"the parameter roots do not all have multiplicity {e}")
    return Q


def build_web_form(P, s, k, e=1, coords=None):
    """The web form of the family {P(x, y[, z]; s) = 0} whose members meet a general point k*e times.

    omega^e is the product over the roots s_r of dP_{s_r}; the product is
    symmetric in the roots and is computed as the resultant in s of P and
    its coordinate differential, which needs no root extraction.  The
    common polynomial content of the coefficients is removed.
    """
    if coords is None:
        coords = PROJECTIVE if "z" in P.ring.vars else AFFINE
    coords = tuple(coords)
    if set(P.ring.vars) != set(coords) | {s}:
        raise WebError(f"expected variables {coords} and the parameter {s}, got {P.ring.vars}")
    n = incidence_degree(P, s)
    if n != k * e:
        raise WebError(f"incidence degree {n} in {s} is not k*e = {k * e}")
    Q = _uniform_root(P, s, e) if e > 1 else P
    Qc = _coeffs_in(Q, s)
    Qc = [c.compose({v: PolyRing(P.ring.field, coords).gen(v) for v in coords}, PolyRing(P.ring.field, coords))
          for c in Qc]
    repeated = _has_repeated_member(Q, s)
    if repeated:
        raise WebError(f"a generic point lies on a repeated member of the family ({repeated})")
    ring = form_ring(P.ring.field, coords)
    lifted = [_lift(c, ring) for c in Qc]
    diffs = [_differential(c, ring, coords) for c in Qc]
    R = _resultant_in_s(lifted, diffs, ring)
    if R.is_zero():
        raise WebError("the product of differentials vanishes identically")
    form = _wrap(R, coords, e)
    return _remove_content(form)


def _has_repeated_member(Q, s):
    """Nonzero text when Q has a repeated root in s for generic coordinates."""
    D = Q.derivative(s)
    if D.is_zero():
        return "constant family"
    try:
        G = gcd(Q, D)
    except DegenerateInput:
        return ""
    if G.degree_in(s) > 0:
        return str(G)
    return ""


def _remove_content(form):
    coeffs = list(form.coefficients().values())
    g = None
    for c in coeffs:
        g = c if g is None else gcd(g, c)
    ring = form.ring
    p = form.poly
    if g is not None and not g.is_constant():
        p = p.exact_div(_lift(g, ring))
    return SymmetricForm(canonical(p), form.coords, form.k, form.e)


def pullback_form(F, omega):
    """F^* omega: coordinates replaced by F and each dv by d(F_v)."""
    ring = omega.ring
    coords = omega.coords
    if coords == PROJECTIVE:
        comps = {"x": F.Ph, "y": F.Qh, "z": F.Ph.ring.gen("z") ** F.degree}
    elif coords == AFFINE:
        comps = {"x": F.P, "y": F.Q}
    else:
        raise WebError(f"unsupported coordinates {coords}")
    if F.field != ring.field:
        raise WebError("form and map are over different fields")
    sub = {}
    for v in coords:
        sub[v] = _lift(comps[v], ring)
        sub["d" + v] = _differential(comps[v], ring, coords)
    return SymmetricForm(omega.poly.compose(sub, ring), coords, omega.k, omega.e)


@dataclass(frozen=True)
class WebInvariance:
    holds: bool
    factor: object = None

    def __bool__(self):
        return self.holds


def is_invariant_web(F, omega):
    """Is F^* omega = h * omega for a polynomial h?  Returns the factor when it is."""
    if omega.is_zero():
        raise WebError("the zero form defines no web")
    pulled = pullback_form(F, omega)
    if pulled.is_zero():
        return WebInvariance(False)
    a = omega.coefficients()
    b = pulled.coefficients()
    if set(b) - set(a):
        return WebInvariance(False)
    key = next(iter(a))
    q, r = b.get(key, omega.ring.zero).divmod(a[key]) if key in b else (None, None)
    if q is None or r.terms:
        return WebInvariance(False)
    h = _lift(q, omega.ring)
    if pulled.poly != omega.poly * h:
        return WebInvariance(False)
    return WebInvariance(True, q)


SAMPLE_POINTS = ((1, 2, 1), (2, -3, 1), (-1, 5, 1), (3, 7, 1), (5, -2, 1), (-4, -7, 1), (7, 11, 1), (2, 9, 1))


def factorization_check(omega, samples=SAMPLE_POINTS):
    """Does omega split into k distinct linear factors at sampled points?

    At each point the form is restricted to the chart z = 1 (dz = 0 for
    projective forms), giving a binary form in (dx, dy); it factors into
    distinct linear forms iff it is squarefree.  Returns a dict with the
    number of samples used and the points where the test failed.
    """
    from .algebra.roots import squarefree_decomposition
    from .algebra import upoly

    coords = omega.coords
    n = len(coords)
    failures = []
    used = 0
    for pt in samples:
        vals = dict(zip(coords, (Fraction(c) for c in pt)))
        coeffs = [Fraction(0)] * (omega.k + 1)
        for ex, c in omega.poly.terms.items():
            sym = ex[n:]
            if "z" in coords and sym[2] > 0:
                continue
            val = Fraction(c)
            for v, p in zip(coords, ex[:n]):
                val *= vals[v] ** p
            coeffs[sym[1]] += val
        if all(c == 0 for c in coeffs):
            continue
        used += 1
        poly = upoly.trim(tuple(coeffs))
        at_infinity = omega.k - upoly.deg(poly)
        decomposition = squarefree_decomposition(poly) if upoly.deg(poly) > 0 else []
        repeated = any(m > 1 for _, m in decomposition) or at_infinity > 1
        if repeated:
            failures.append(pt)
    return {"samples": used, "failures": failures, "factorizable": used > 0 and not failures}
