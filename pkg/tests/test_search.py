import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planedyn.algebra import PolyRing, RationalFunctionField
from planedyn.curve import new_curve, pushforward_image
from planedyn.endo import new_endomorphism
from planedyn.search import (degree_verdict, find_periodic_curves, minimal_period, orbit_degree_sequence,
                             stabilization_audit)

from conftest import brute_force_periodic_lines, catalog_line_triples, same_triples

TWO_CYCLE = new_endomorphism("x^2", "y^2 - x")
SQUARE = new_endomorphism("x^2", "y^2")
A2_SPLIT = new_endomorphism("x^2 - 2*y", "y^2 - 2*x")


def test_square_catalog_matches_line_oracle():
    cat = find_periodic_curves(SQUARE, 1, 2)
    assert len(cat.entries) == 11
    assert same_triples(catalog_line_triples(cat), brute_force_periodic_lines("x^2", "y^2", 2))
    periods = sorted(e.period for e in cat.entries)
    assert periods == [1] * 5 + [2] * 6
    rational = {e.curve.text() for e in cat.entries if e.period == 1}
    assert rational == {"x", "y", "x - y", "x - z", "y - z"}
    assert all(e.certificate.holds for e in cat.entries)


@settings(max_examples=10)
@given(st.tuples(*[st.integers(-2, 2)] * 4))
def test_split_map_catalogs_match_line_oracle(c):
    P, Q = f"x^2 + ({c[0]})*x + ({c[1]})", f"y^2 + ({c[2]})*y + ({c[3]})"
    cat = find_periodic_curves(new_endomorphism(P, Q), 1, 2)
    assert same_triples(catalog_line_triples(cat), brute_force_periodic_lines(P, Q, 2), 1e-9)


def test_two_cycle_catalog():
    cat = find_periodic_curves(TWO_CYCLE, 2, 2)
    texts = {e.curve.text(): e.period for e in cat.entries}
    assert texts["y"] == 2 and texts["x*z - y^2"] == 2
    # the jet stratum finds nothing: the cycle meets infinity at the superattracting point
    assert all("superattracting" in j["result"] or "no curve" in j["result"] for j in cat.jet_stratum)
    assert "non-superattracting" in cat.scope[0]


def test_candidate_is_certified():
    cat = find_periodic_curves(A2_SPLIT, 1, 1, candidates=[new_curve("y - x")])
    assert [e.curve for e in cat.entries] == [new_curve("y - x")]
    # y^4 - x^2 = (y^2 - x)(y^2 + x)
    cat = find_periodic_curves(SQUARE, 1, 1, candidates=[new_curve("y^2 - x")])
    entry = next(e for e in cat.entries if e.curve == new_curve("y^2 - x"))
    assert entry.source == "candidate" and entry.period == 1
    cat = find_periodic_curves(TWO_CYCLE, 1, 1, candidates=[new_curve("y - 7")])
    assert any("not periodic" in s for s in cat.scope)


def test_bounds_are_enforced():
    with pytest.raises(ValueError):
        find_periodic_curves(SQUARE, 5, 1)


@pytest.mark.parametrize("F", [SQUARE, TWO_CYCLE, A2_SPLIT, new_endomorphism("x^2 - 2", "y^2 + x*y")])
def test_catalog_invariants(F):
    cat = find_periodic_curves(F, 1, 2)
    curves = cat.curves()
    for e in cat.entries:
        assert e.certificate.holds
        assert sum(p.multiplicity * p.degree for p in e.profile) == e.curve.degree
        for p in e.profile:
            if p.cls in ("repelling", "attracting", "indifferent"):
                assert p.multiplicity == 1
        if e.curve.field.record() == "Q":
            image = pushforward_image(F, e.curve).image
            assert image in curves


def test_minimal_period():
    assert minimal_period(TWO_CYCLE, new_curve("y"), 3) == 2
    assert minimal_period(SQUARE, new_curve("y - x"), 3) == 1
    assert minimal_period(SQUARE, new_curve("y - 2*x"), 3) is None


# ------------------------------------------------------------- degree orbits
def test_orbit_degree_sequences():
    r = orbit_degree_sequence(TWO_CYCLE, new_curve("y"), 4)
    assert r.degrees == [1, 2, 1, 2, 1] and r.verdict == "periodic" and r.period == 2
    r = orbit_degree_sequence(SQUARE, new_curve("y - x"), 3)
    assert r.degrees == [1, 1, 1, 1] and r.verdict == "stable"
    K = RationalFunctionField("s")
    R = PolyRing(K, ("x", "y"))
    F = new_endomorphism(R("x^2"), R("y^2 + s*x"))
    r = orbit_degree_sequence(F, new_curve(R("y - s*x")), 2)
    assert r.degrees == [1, 2, 4] and r.verdict == "growing"


def test_degree_verdicts():
    assert degree_verdict([2, 2, 2]) == ("stable", 1)
    assert degree_verdict([1, 2, 1, 2, 1]) == ("periodic", 2)
    assert degree_verdict([1, 2, 4, 8]) == ("growing", None)
    assert degree_verdict([1]) == ("inconclusive", None)


@settings(max_examples=10)
@given(st.integers(0, 10 ** 6))
def test_orbit_degrees_obey_degree_formula(seed):
    rng = random.Random(seed)
    m, c = rng.randint(-2, 2), rng.randint(-2, 2)
    r = orbit_degree_sequence(TWO_CYCLE, new_curve(f"y - ({m})*x - ({c})"), 2)
    for cert in r.images:
        assert cert.delta is None or cert.degree_formula_holds()


# --------------------------------------------------------- stabilization audits
def test_stabilization_audits():
    K = RationalFunctionField("t")
    R = PolyRing(K, ("x", "y"))
    a = stabilization_audit(SQUARE, R("y - t*x"))
    assert a.status == "found" and str(a.reparametrization) == "t^2"
    a = stabilization_audit(SQUARE, R("y - x + 0*t"))
    assert a.status == "found" and str(a.reparametrization) == "t"


def test_line_family_constant_term():
    K = RationalFunctionField("k")
    R = PolyRing(K, ("x", "y"))
    good = stabilization_audit(A2_SPLIT, R("y - k*x - 1/k + k^2"))
    assert good.degree_preserved and str(good.reparametrization) == "k^2"
    bad = stabilization_audit(A2_SPLIT, R("y - k*x - 1/k + 1/k^2"))
    assert not bad.degree_preserved and bad.status == "degree changes"
