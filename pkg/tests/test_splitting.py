from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import connected_posets
from fms.errors import HasBeatPoints, NotACover, NotConnected, NotMaximal
from fms.homology import homology
from fms.homotopy import beat_points, has_beat_points, pi1_status
from fms.models import named_model, sphere_model
from fms.poset import antichain, build_poset, chain, height, is_connected, neighborhoods, product, subspace
from fms.search import enumerate_posets
from fms.splitting import (
    S1,
    S2,
    TRIAD,
    check_triad,
    incomparable_witness,
    lemma_bounds_report,
    lift_certificate,
    make_triad,
    search_certificate,
    splitting_stats,
)


def test_stats_examples():
    st = splitting_stats(named_model("p2_1"))
    assert (st.m, st.n, st.l) == (4, 3, 6)
    assert set(st.alpha.values()) == {2} and set(st.beta.values()) == {2}
    st = splitting_stats(named_model("t2_00"))
    assert (st.m, st.n, st.l) == (4, 4, 8)
    assert set(st.sigma.values()) == {Fraction(2)}
    assert splitting_stats(sphere_model(1)).l == 0
    with pytest.raises(NotConnected):
        splitting_stats(antichain("xy"))


def test_stats_identities(corpus):
    for p in corpus:
        if not is_connected(p):
            continue
        st = splitting_stats(p)
        assert len(st.S) == sum(st.m - st.alpha[b] for b in st.B)
        assert len(st.R) == sum((st.m - st.alpha[b]) * (st.n - st.beta[b]) for b in st.B)
        if not has_beat_points(p):
            assert all(st.alpha[b] >= 2 and st.beta[b] >= 2 for b in st.B)


def test_incomparable_witness():
    p = named_model("p2_1")
    w = incomparable_witness(p, "a1")
    outside = set(p.elements) - neighborhoods(p, "a1").u - {x for x in p.elements if x[0] in "ac"}
    assert w is not None and set(w) <= outside
    assert not (p.lt(*w) or p.lt(w[1], w[0]))
    assert incomparable_witness(chain("xyz"), "z") is None
    t = named_model("t2_00")
    w = incomparable_witness(t, "a1")
    assert set(w) <= {"b5", "b6", "b7", "b8"}
    with pytest.raises(NotMaximal):
        incomparable_witness(p, "b1")


def test_positive_examples():
    p = named_model("p2_2")
    u = neighborhoods(p, "a1").u
    cert = check_triad(p, make_triad(p, set(p.elements) - u, u), S2)
    assert cert.certified
    kinds = sorted(e.kind for e in cert.evidence)
    assert "WeakCircle" in kinds
    # a poset with a maximum
    q = build_poset("abcm", [("a", "m"), ("b", "m"), ("c", "a"), ("c", "b")])
    for prop in (S1, S2):
        assert check_triad(q, make_triad(q, ["m"], q.elements), prop).certified
    # height one
    for r in (sphere_model(1), build_poset("abcxyz", [("x", "a"), ("x", "b"), ("y", "b"), ("y", "c"), ("z", "c"), ("z", "a")])):
        mx = [x for x in r.elements if not r.up[r.idx(x)]]
        for prop in (S1, S2):
            assert check_triad(r, make_triad(r, mx), prop).certified
    # product of the circle and the 3-sphere: both halves simply connected
    x = product(sphere_model(1), sphere_model(3))
    c = [e for e in x.elements if e.startswith("(x0,")]
    assert check_triad(x, make_triad(x, c), S1).certified


def test_triad_errors():
    p = sphere_model(1)
    with pytest.raises(NotACover):
        make_triad(p, ["x0"], ["x1"])
    with pytest.raises(NotACover):
        make_triad(p, p.elements)


def test_few_maximal_points_give_s1():
    for p in (chain("abc"), sphere_model(2), build_poset("abxyz", [("x", "a"), ("y", "a"), ("y", "b"), ("z", "b")])):
        assert search_certificate(p, S1).certified


def test_refutation_by_homology():
    p = named_model("p2_1")
    c = [x for x in p.elements if x.startswith(("a", "b"))]
    cert = check_triad(p, make_triad(p, c, p.elements), S2)
    assert cert.verdict != "certified"


def test_lemma_reports():
    rep = lemma_bounds_report(named_model("p2_1"), S1)
    chk = rep.get("l-vs-mn/((m-2)(n-2))")
    assert chk.holds and chk.equality and chk.equality_condition
    assert chk.values["bound"] == "6"
    for name in ("t2_00", "t2_11", "k_10", "k_01"):
        rep = lemma_bounds_report(named_model(name), S2)
        b = rep.get("B-prime-bound")
        assert b.values == {"lhs": 32, "rhs": 32, "B'": 0, "B''": 8}
        assert b.equality and b.equality_condition
        assert set(rep.stats.sigma.values()) == {Fraction(2)}
        assert rep.all_hold
    rep = lemma_bounds_report(sphere_model(2), S1)
    assert not rep.applicable
    with pytest.raises(HasBeatPoints):
        lemma_bounds_report(chain("abc"), S1)


def test_search_finds_nothing_on_torus_heuristically():
    res = search_certificate(named_model("t2_00"), S2, "heuristic")
    assert not res.certified and res.reason == "candidates-exhausted"
    res = search_certificate(named_model("t2_00"), S2, "exhaustive", budget=50)
    assert res.reason == "budget"


def test_certificate_json_is_stable():
    p = named_model("p2_2")
    a = search_certificate(p, S2).dumps()
    b = search_certificate(p, S2).dumps()
    assert a == b and '"verdict": "certified"' in a


@pytest.fixture(scope="module")
def interesting():
    """Connected posets on 4..7 points whose fundamental group is not visibly trivial."""
    out = []
    for n in range(4, 8):
        for p in enumerate_posets(n, ["connected"]):
            if pi1_status(p).status != "trivial":
                out.append(p)
    return out


def test_s1_certificates_imply_free_abelianization(corpus, interesting):
    seen = 0
    for p in list(interesting) + [q for q in corpus if q.n <= 8 and is_connected(q)]:
        cert = search_certificate(p, S1)
        if cert.certified:
            h = homology(p)
            assert len(h) < 2 or not h[1].torsion
            seen += 1
    assert seen > 200


def test_s2_on_graphs_has_free_h1(corpus, interesting):
    for p in list(interesting) + list(corpus):
        if p.n < 2 or not is_connected(p) or height(p) != 1:
            continue
        if search_certificate(p, S2).certified:
            h = homology(p)
            assert not h[1].torsion and all(g.rank == 0 and not g.torsion for g in h[2:])


def test_beat_point_lifting(interesting):
    lifted = 0
    for p in interesting:
        for x, _ in beat_points(p)[:2]:
            smaller = subspace(p, [e for e in p.elements if e != x])
            for prop in (S1, S2):
                cert = search_certificate(smaller, prop)
                if cert.certified:
                    up = lift_certificate(p, x, cert)
                    assert up.certified, (prop, x)
                    lifted += 1
    assert lifted > 200


@settings(max_examples=40, deadline=None)
@given(connected_posets(min_size=2, max_size=7))
def test_certified_triads_are_consistent(p):
    cert = search_certificate(p, S1)
    if cert.certified:
        again = check_triad(p, cert.triad, S1)
        assert again.certified
        assert check_triad(p, cert.triad, TRIAD).certified
