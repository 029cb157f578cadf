import random

from hypothesis import given, settings

from conftest import connected_posets, fence
from fms.homology import HomologyGroup, barycentric_subdivision, homology
from fms.homotopy import (
    GroupPresentation,
    abelianization,
    beat_points,
    core,
    core_with_log,
    has_beat_points,
    homotopy_equivalent,
    is_contractible,
    pi1_presentation,
    pi1_status,
    simplify_presentation,
)
from fms.models import NAMED_MODELS, named_model, sphere_model
from fms.poset import (
    antichain,
    chain,
    is_connected,
    is_isomorphic,
    maximal_mask,
    non_hausdorff_join,
    subspace,
)


def test_beat_point_examples():
    for n in range(4):
        assert beat_points(sphere_model(n)) == []
    assert sorted(beat_points(chain("xy"))) == [("x", "up"), ("y", "down")]
    for name in NAMED_MODELS:
        assert not has_beat_points(named_model(name))


def test_core_examples():
    q, removed = core_with_log(fence())
    assert q.n == 1 and len(removed) == 4
    p = named_model("p2_1")
    assert core(p) == p
    assert core(antichain("x")).n == 1
    assert homotopy_equivalent(fence(), antichain("x"))
    s = sphere_model(1)
    assert not homotopy_equivalent(s, barycentric_subdivision(s))
    assert homotopy_equivalent(s, s)


def test_core_idempotent_and_beat_free(corpus):
    for p in corpus:
        c = core(p)
        assert not has_beat_points(c)
        assert core(c) == c


def test_core_unique_under_random_orders(corpus):
    rng = random.Random(11)
    for p in corpus:
        ref = core(p)
        for _ in range(100):
            q = core(p, rng)
            assert q.n == ref.n
            if q.n > 3 and q != ref:
                assert is_isomorphic(q, ref)[0]


def _trim(h):
    h = list(h)
    while len(h) > 1 and h[-1] == HomologyGroup():
        h.pop()
    return h


def test_homology_invariant_under_each_beat_point(corpus):
    for p in corpus:
        h = _trim(homology(p, method="direct"))
        for x, _ in beat_points(p):
            q = subspace(p, [e for e in p.elements if e != x])
            assert _trim(homology(q, method="direct")) == h


def test_presentation_examples():
    assert pi1_status(sphere_model(1)).label == "free_of_rank 1"
    assert pi1_status(sphere_model(2)).label == "trivial"
    assert pi1_status(sphere_model(3)).label == "trivial"
    assert pi1_status(chain("abcd")).label == "trivial"
    g = GroupPresentation(["a", "b"], [(1, 2)])
    assert simplify_presentation(g).label == "free_of_rank 1"
    rp2 = simplify_presentation(pi1_presentation(named_model("p2_1")))
    assert rp2.status == "inconclusive" and len(rp2.presentation.generators) == 1
    assert abelianization(pi1_presentation(named_model("p2_1"))) == HomologyGroup(0, (2,))
    t = simplify_presentation(pi1_presentation(named_model("t2_00")))
    assert abelianization(t.presentation) == HomologyGroup(2)
    assert t.status == "inconclusive" and len(t.presentation.generators) == 2 and len(t.presentation.relators) == 1


def test_abelianization_is_h1_on_corpus(corpus):
    for p in corpus:
        if not is_connected(p):
            continue
        h = homology(p)
        h1 = h[1] if len(h) > 1 else HomologyGroup()
        assert abelianization(pi1_presentation(p)) == h1


@settings(max_examples=60)
@given(connected_posets(max_size=8))
def test_simplified_presentation_keeps_abelianization(p):
    raw = pi1_presentation(p)
    res = simplify_presentation(raw)
    assert abelianization(res.presentation) == abelianization(raw)
    if res.status == "free":
        assert abelianization(raw) == HomologyGroup(res.rank)


def test_union_of_two_open_sets_is_a_suspension(corpus):
    """Cores of U_a u U_b and of the suspension of U_a n U_b agree."""
    checked = 0
    for p in corpus:
        mx = [i for i in range(p.n) if maximal_mask(p) >> i & 1]
        for s, a in enumerate(mx):
            for b in mx[s + 1:]:
                ua = p.down[a] | (1 << a)
                ub = p.down[b] | (1 << b)
                union = p.subspace_mask(ua | ub)
                inter = p.subspace_mask(ua & ub)
                susp = non_hausdorff_join(inter, antichain(["*n", "*s"]))
                cu, cs = core(union), core(susp)
                ok = cu.n == cs.n and (cu.n <= 2 or is_isomorphic(cu, cs)[0])
                if not ok:
                    assert homology(union) == homology(susp)
                assert ok
                checked += 1
    assert checked > 100


def test_contractible_detection():
    assert is_contractible(fence())
    assert not is_contractible(sphere_model(1))
    assert not is_contractible(antichain("xy"))
