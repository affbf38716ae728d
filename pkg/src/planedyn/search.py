"""Searching for periodic curves and following degrees along orbits of curves."""

from dataclasses import dataclass, field as dc_field
from math import ceil

from .algebra import (QQ, NFElement, NumberField, PolyRing, RatFunc, RationalFunctionField, canonical, gcd,
                      squarefree_part)
from .budget import BudgetExceeded, checkpoint
from .curve import (ContractedCurve, ProjCurve, digest, infinity_points, invariance_certificate,
                    pushforward_image)
from .endo import iterate, restrict_infinity
from .infinity import (Superattracting, Resonance, _classify_embeddings, _cycle_multiplier,
                       _packet_reports, classify, invariant_branch_jet, periodic_points,
                       recognize_algebraic, required_order)
from .p1 import _coeffs, field_roots, point_text

MAX_DEGREE = 4
MAX_PERIOD = 4


# ----------------------------------------------------------------- helpers
def _descend(C):
    """The same curve over Q when all its coefficients are rational."""
    f = C.field
    if not isinstance(f, NumberField):
        return C
    if all(len(c.c) <= 1 for c in C.g.terms.values()):
        ring = PolyRing(QQ, C.g.ring.vars)
        g = ring.zero + sum((ring.monomial(e, f.to_fraction(c)) for e, c in C.g.terms.items()), ring.zero)
        return ProjCurve(canonical(g))
    return C


def _over(C, field):
    if C.field == field:
        return C
    return ProjCurve(canonical(C.g.change_ring(C.g.ring.with_field(field))))


def _curve_key(C):
    f = C.field
    ftext = "" if f == QQ else repr(f)
    return (C.degree, ftext, str(C.g))


def _own_roots(poly):
    """(K, roots of ``poly`` that lie in K) for K = Q[w]/(poly)."""
    K = NumberField(_coeffs(poly), "w")
    ring = PolyRing(K, poly.ring.vars)
    lifted = poly.change_ring(ring)
    roots, _ = field_roots(lifted, [K.gen()])
    return K, [r for r, _ in roots]


class _Iterates:
    """Memoized F^k over the fields that come up during a search."""

    def __init__(self, F):
        self.F = F
        self.cache = {}

    def get(self, k, field=QQ):
        key = (k, field)
        if key not in self.cache:
            base = self.F if field == self.F.field else self.F.change_field(field)
            self.cache[key] = iterate(base, k)
        return self.cache[key]


def minimal_period(F, C, bound):
    """Least k <= bound with g | g o F^k, or None."""
    for k in range(1, bound + 1):
        if invariance_certificate(_endo_over(F, C.field), C, k).holds:
            return k
    return None


def _endo_over(F, field):
    return F if F.field == field else F.change_field(field)


# ---------------------------------------------------------------- catalog
@dataclass(frozen=True)
class ProfilePoint:
    point: str
    cls: str
    multiplicity: int
    degree: int = 1


@dataclass(frozen=True)
class CatalogEntry:
    curve: ProjCurve
    period: int
    profile: tuple
    certificate: object
    source: str

    def record(self):
        return {
            "curve": self.curve.text(),
            "field": self.curve.field.record(),
            "degree": self.curve.degree,
            "period": self.period,
            "profile": [{"point": p.point, "class": p.cls, "multiplicity": p.multiplicity, "degree": p.degree}
                        for p in self.profile],
            "certificate": digest(self.certificate.cofactor),
            "source": self.source,
        }


@dataclass
class PeriodicCurveCatalog:
    F: object
    degree_bound: int
    period_bound: int
    entries: list = dc_field(default_factory=list)
    scope: list = dc_field(default_factory=list)
    jet_stratum: list = dc_field(default_factory=list)
    partial: bool = False

    def curves(self):
        return [e.curve for e in self.entries]

    def record(self):
        return {
            "map": self.F.text(),
            "degree_bound": self.degree_bound,
            "period_bound": self.period_bound,
            "entries": [e.record() for e in self.entries],
            "jet_stratum": self.jet_stratum,
            "scope": self.scope,
            "partial": self.partial,
        }


def _profile(F, C):
    """Points of C on the line at infinity with their dynamical class."""
    f = restrict_infinity(_endo_over(F, C.field))
    pts, packets = infinity_points(C)
    out = []
    for ip in pts:
        out.append(ProfilePoint(ip.text(), _point_class(f, ip.point), ip.multiplicity))
    for pk in packets:
        cls = None
        if C.field == QQ:
            try:
                reps = _packet_reports(f, pk.poly, pk.multiplicity, _orbit_length(f, pk, 8))
                classes = {r.cls for r in reps}
                cls = classes.pop() if len(classes) == 1 else None
            except ValueError:
                cls = None
        out.append(ProfilePoint(f"roots of {pk.text()}", cls, pk.multiplicity, pk.degree))
    return tuple(out)


def _orbit_length(f, pk, bound):
    """A period n <= bound such that the packet consists of fixed points of f^n."""
    var = pk.poly.ring.vars[0]
    for n in range(1, bound + 1):
        form = f.fixed_point_form(n)
        fk = form.compose({"x": pk.poly.ring.one, "y": pk.poly.ring.gen(var)}, pk.poly.ring)
        if fk.divmod(pk.poly)[1].is_zero():
            return n
    raise ValueError("packet is not periodic within the bound")


def _point_class(f, p, bound=12):
    q = p
    for k in range(1, bound + 1):
        q = f(q)
        if q == p:
            lam = _cycle_multiplier(f, p, k)
            if isinstance(lam, RatFunc) or not hasattr(lam, "c"):
                return classify(lam)
            return _classify_embeddings(lam)
    return "preperiodic or wandering"


def _line_condition(F, its, point, k):
    """Polynomial in c whose roots give the lines through ``point`` with l | l o F^k."""
    field = point[1].field if hasattr(point[1], "field") else QQ
    Fk = its.get(k, field)
    D = Fk.degree
    ring = PolyRing(field, ("x", "z", "c"))
    x, z, c = ring.gens()
    if point[0] != 0:
        m = point[1]
        sub = {"x": x, "y": x * m + z * c, "z": z}
        E = (Fk.Qh - Fk.Ph.scale(m)).compose(sub, ring)
    else:
        sub = {"x": z * c, "y": x, "z": z}
        E = Fk.Ph.compose(sub, ring)
    E = E - c * z ** D
    by_xz = {}
    cring = PolyRing(field, ("c",))
    for e, a in E.terms.items():
        by_xz.setdefault(e[:2], cring.zero)
        by_xz[e[:2]] = by_xz[e[:2]] + cring.monomial((e[2],), a)
    G = cring.zero
    for p in by_xz.values():
        G = gcd(G, p)
        checkpoint(1)
    if G.is_zero():
        raise ValueError("every line through this point is periodic")
    return G


def _line_candidates(F, its, point, k, j=1):
    """Lines through ``point`` at infinity (of period j) with minimal period exactly k."""
    field = point[1].field if hasattr(point[1], "field") else QQ
    G = _line_condition(F, its, point, k)
    if G.degree() < 1:
        return [], []
    G = squarefree_part(G)
    # lines of a smaller period also satisfy the period-k condition
    for i in range(j, k, j):
        if k % i == 0:
            h = gcd(G, _line_condition(F, its, point, i))
            if h.degree() >= 1:
                G = G.exact_div(h)
    if G.degree() < 1:
        return [], []
    roots, packets = field_roots(G)
    lines = []
    pring = PolyRing(field, ("x", "y", "z"))
    X, Y, Z = pring.gens()
    for r, _ in roots:
        if point[0] != 0:
            lines.append(ProjCurve(canonical(Y - X * point[1] - Z * r)))
        else:
            lines.append(ProjCurve(canonical(X - Z * r)))
    return lines, packets


def _lines_through_packet(F, its, point, k, pk):
    """Lines whose constant term runs over a packet (only for rational directions)."""
    K, roots = _own_roots(pk.poly)
    pring = PolyRing(K, ("x", "y", "z"))
    X, Y, Z = pring.gens()
    out = []
    for r in roots:
        if point[0] != 0:
            out.append(ProjCurve(canonical(Y - X * K(point[1]) - Z * r)))
        else:
            out.append(ProjCurve(canonical(X - Z * r)))
    return out, len(roots) < pk.degree


def _periodic_directions(f, N):
    """(point, minimal period, class) for all periodic points at infinity of period <= N."""
    seen = []
    out = []
    for n in range(1, N + 1):
        for r in periodic_points(f, n):
            if r.period != n:
                continue
            if r.packet is None:
                out.append((r.point, n, r.cls, r.multiplier))
                continue
            K, roots = _own_roots(r.packet.poly)
            for w in roots:
                out.append(((K.one, w), n, r.cls, r.multiplier))
            if len(roots) < r.packet.degree:
                seen.append(f"periodic points at infinity {r.packet.text()} only partly split over their own field")
    return out, seen


def find_periodic_curves(F, D=1, N=1, candidates=(), max_degree=MAX_DEGREE, max_period=MAX_PERIOD,
                         jet_order=None):
    """Catalog of periodic curves of degree <= D and period <= N.

    Lines are found by elimination through every periodic direction at
    infinity; other curves come from invariant jets at non-superattracting
    periodic points at infinity, and from ``candidates`` after verification.
    Every entry is certified and the catalog is closed under F.
    ``jet_order`` overrides the default jet length D^2 + D + 2.
    """
    if D > max_degree or N > max_period:
        raise ValueError(f"bounds D={D}, N={N} exceed the configured maximum ({max_degree}, {max_period})")
    cat = PeriodicCurveCatalog(F, D, N)
    its = _Iterates(F)
    f = restrict_infinity(F)
    found = {}

    def add(C, source):
        C = _descend(C)
        if C.is_line_at_infinity() or C.degree > D and source != "candidate" and source != "orbit":
            return
        key = _curve_key(C)
        if key in found:
            return
        k = minimal_period(F, C, N)
        if k is None:
            return
        cert = invariance_certificate(_endo_over(F, C.field), C, k)
        found[key] = CatalogEntry(C, k, _profile(F, C), cert, source)
        # close the cycle under F
        cur = C
        for _ in range(k - 1):
            try:
                cur = _descend(pushforward_image(_endo_over(F, cur.field), cur).image)
            except ContractedCurve:
                break
            add(cur, "orbit")

    try:
        directions, notes = _periodic_directions(f, N)
        cat.scope.extend(notes)
        # lines by elimination
        for point, j, _, _ in directions:
            for k in range(j, N + 1, j):
                lines, packets = _line_candidates(F, its, point, k, j)
                for L in lines:
                    add(L, "line search")
                for pk in packets:
                    if isinstance(point[1], NFElement):
                        cat.scope.append(f"lines through {point_text(point)} with constant term a root of {pk.text()} "
                                         "need a nested extension; not listed")
                        continue
                    more, partial = _lines_through_packet(F, its, point, k, pk)
                    for L in more:
                        add(L, "line search")
                    if partial:
                        cat.scope.append(f"only some roots of {pk.text()} split; conjugate lines may be missing")
        # invariant jets at non-superattracting periodic points
        if D >= 2:
            for point, j, cls, lam in directions:
                label = point_text(point) if not hasattr(point[1], "field") else f"{point[1]} in {point[1].field}"
                if lam == 0:
                    cat.jet_stratum.append({"point": label, "period": j, "result": "superattracting, skipped"})
                    continue
                field = point[1].field if hasattr(point[1], "field") else QQ
                Fj = its.get(j, field)
                try:
                    jet = invariant_branch_jet(Fj, point, jet_order or required_order(D))
                    C = recognize_algebraic(jet, D)
                except (Superattracting, Resonance, ValueError) as exc:
                    cat.jet_stratum.append({"point": label, "period": j, "result": str(exc)})
                    continue
                if C is None:
                    cat.jet_stratum.append({"point": label, "period": j, "result": "no curve of degree <= %d" % D})
                else:
                    cat.jet_stratum.append({"point": label, "period": j, "result": C.text()})
                    add(C, "jet")
        for C in candidates:
            if not isinstance(C, ProjCurve):
                raise TypeError("candidates must be curves")
            before = len(found)
            add(C, "candidate")
            if len(found) == before and _curve_key(_descend(C)) not in found:
                cat.scope.append(f"candidate {C.text()} is not periodic with period <= {N}")
    except BudgetExceeded as exc:
        checkpoint(0)
        cat.partial = True
        cat.scope.append(f"partial catalog: {exc}")
    cat.scope.insert(0, _scope_text(D, N))
    cat.entries = sorted(found.values(), key=lambda e: (e.period, _curve_key(e.curve)))
    return cat


def _scope_text(D, N):
    parts = [f"complete for lines of period <= {N} over Q and over the fields of the periodic points at infinity"]
    if D >= 2:
        parts.append(f"complete for curves of degree <= {D} meeting the line at infinity only at "
                     f"non-superattracting periodic points of period <= {N}")
    parts.append("other curves only when supplied as candidates (plus images of catalog curves)")
    return "; ".join(parts)


# ----------------------------------------------------------- degree orbits
@dataclass
class DegreeSequenceReport:
    curve: ProjCurve
    degrees: list
    deltas: list
    verdict: str
    period: int = None
    truncated: bool = False
    images: list = dc_field(default_factory=list)

    def record(self):
        return {
            "curve": self.curve.text(),
            "degrees": self.degrees,
            "deltas": self.deltas,
            "verdict": self.verdict,
            "pattern_period": self.period,
            "truncated": self.truncated,
            "window": "finite window: the last ceil(k/2) entries must repeat with a period <= k/2",
        }


def degree_verdict(degrees):
    """('stable' | 'periodic' | 'growing' | 'inconclusive', period) for a finite degree sequence."""
    k = len(degrees) - 1
    if k < 1:
        return "inconclusive", None
    w = ceil(k / 2)
    tail = range(len(degrees) - w, len(degrees))
    for p in range(1, max(1, k // 2) + 1):
        if all(i - p >= 0 and degrees[i] == degrees[i - p] for i in tail):
            return ("stable" if p == 1 else "periodic"), p
    if all(degrees[i] <= degrees[i + 1] for i in range(len(degrees) - w - 1, len(degrees) - 1)) \
            and degrees[-1] > degrees[-1 - w]:
        return "growing", None
    return "inconclusive", None


def orbit_degree_sequence(F, C, k_max):
    """Degrees of C, F(C), ..., F^k_max(C) from certified pushforwards."""
    if C.is_line_at_infinity():
        raise ValueError("the line at infinity is totally invariant")
    degrees = [C.degree]
    deltas = []
    images = []
    truncated = False
    cur = C
    for _ in range(k_max):
        try:
            cert = pushforward_image(F, cur)
        except BudgetExceeded:
            truncated = True
            break
        cur = cert.image
        images.append(cert)
        degrees.append(cur.degree)
        deltas.append(cert.delta)
    verdict, period = degree_verdict(degrees)
    if truncated:
        verdict += " (truncated)"
    return DegreeSequenceReport(C, degrees, deltas, verdict, period, truncated, images)


# ------------------------------------------------------ family stabilization
@dataclass
class StabilizationReport:
    family: object
    image: object
    degree_preserved: bool
    reparametrization: object
    status: str
    note: str = ""

    def record(self):
        return {
            "family": str(self.family),
            "image": str(self.image),
            "degree_preserved": self.degree_preserved,
            "reparametrization": None if self.reparametrization is None else str(self.reparametrization),
            "status": self.status,
            "note": self.note,
        }


def _compose_scalar(c, r):
    """c(r) for c in Q(t) and r in Q(t)."""
    field = c.field
    num = field.zero
    for a in reversed(c.num):
        num = num * r + a
    den = field.zero
    for a in reversed(c.den):
        den = den * r + a
    return num / den


def reparametrize(g, r):
    """g(x, y; r(t)) for g over Q(t)."""
    return g.map_coeffs(lambda c: _compose_scalar(c, r))


def stabilization_audit(F, family, max_degree=None):
    """Is F(Z_t) = Z_r(t) for the family Z_t = V(g(x, y; t)) and some rational r?

    ``family`` is an affine polynomial (or curve) over Q(t).  Returns a
    :class:`StabilizationReport`; a failed search is reported as unresolved.
    """
    C = family if isinstance(family, ProjCurve) else ProjCurve(canonical(family.homogenize("z")))
    field = C.field
    if not isinstance(field, RationalFunctionField):
        raise ValueError("the family must have coefficients in Q(t)")
    Ft = _endo_over(F, field)
    cert = pushforward_image(Ft, C)
    H = cert.image.g
    G = C.g
    same = cert.image.degree == C.degree
    bound = max_degree if max_degree is not None else F.degree
    if not same:
        return StabilizationReport(G, H, False, None, "degree changes")
    monos = sorted(set(G.terms) | set(H.terms))
    # the unknown r enters through g's coefficients; cross-multiply against a pivot monomial
    rring = PolyRing(field, ("r",))
    pivot = max(H.terms)
    hp = H.terms[pivot]
    gp = G.terms.get(pivot)
    if gp is None:
        return StabilizationReport(G, H, True, None, "unresolved", "pivot monomial missing from the family")
    gpn, gpd = _rational_in_r(gp, rring)
    eqs = rring.zero
    for e in monos:
        ge = G.terms.get(e, field.zero)
        he = H.terms.get(e, field.zero)
        gen_, ged = _rational_in_r(ge, rring)
        # ge(r)/gp(r) = he/hp
        E = gen_ * gpd * hp - gpn * ged * he
        eqs = gcd(eqs, E)
    if eqs.is_zero():
        t = field.gen()
        return StabilizationReport(G, H, True, t, "found", "every member is invariant (constant family)")
    candidates = []
    if eqs.degree() == 1:
        candidates.append(-eqs.terms.get((0,), field.zero) / eqs.terms[(1,)])
    elif eqs.degree() > 1:
        roots, _ = field_roots(eqs)
        candidates.extend(r for r, _ in roots)
    for r in candidates:
        if max(len(r.num), len(r.den)) - 1 > bound:
            continue
        if canonical(reparametrize(G, r)) == canonical(H):
            return StabilizationReport(G, H, True, r, "found")
    return StabilizationReport(G, H, True, None, "unresolved",
                               f"no rational reparametrization of degree <= {bound} was identified")


def _rational_in_r(c, rring):
    """(num, den) in Q(t)[r] of a coefficient c in Q(t), read as a function of the parameter r."""
    field = rring.field
    num = rring.zero + sum((rring.monomial((i,), field(a)) for i, a in enumerate(c.num) if a), rring.zero)
    den = rring.zero + sum((rring.monomial((i,), field(a)) for i, a in enumerate(c.den) if a), rring.zero)
    return num, den
