import pytest

from fms.errors import InvalidIncidence
from fms.homology import HomologyGroup, homology
from fms.models import (
    NAMED_MODELS,
    RegularCWIncidence,
    face_poset,
    model_from_spec,
    moore_model,
    named_model,
    polygon_moore_cw,
    projective_space_model,
    rp2_cw,
    sphere_model,
    torus_power_model,
)
from fms.poset import is_isomorphic, neighborhoods, opposite, quotient_map
from fms.quasicellular import find_quasicellular

Z, ZERO = HomologyGroup(1), HomologyGroup()


def test_sphere_models():
    assert sphere_model(0).n == 2 and not sphere_model(0).covers
    assert homology(sphere_model(1)) == [Z, Z]
    assert homology(sphere_model(2)) == [Z, ZERO, Z]
    for n in range(6):
        assert sphere_model(n).n == 2 * n + 2


def test_transcription_degrees():
    """Every middle point lies under exactly two tops and over exactly two bottoms."""
    for name in NAMED_MODELS:
        p = named_model(name)
        assert p.n in (13, 16)
        for x in p.elements:
            if x.startswith("b"):
                nb = neighborhoods(p, x)
                assert len([y for y in nb.f_hat if y.startswith("a")]) == 2
                assert len([y for y in nb.u_hat if y.startswith("c")]) == 2


def test_face_posets():
    assert is_isomorphic(face_poset(rp2_cw()), named_model("p2_1"))[0]
    assert face_poset(RegularCWIncidence([["v"]])).n == 1
    assert is_isomorphic(face_poset(polygon_moore_cw(2)), named_model("p2_1"))[0]
    with pytest.raises(InvalidIncidence):
        face_poset(RegularCWIncidence([["v"], ["e"]], {"e": ["w"]}))


def test_projective_models():
    for n in range(1, 5):
        assert projective_space_model(n).n == (3 ** (n + 1) - 1) // 2
    assert is_isomorphic(projective_space_model(1), sphere_model(1))[0]
    # under the literal order on the sign set P_2 is the opposite of the figure model
    assert is_isomorphic(projective_space_model(2), opposite(named_model("p2_1")))[0]
    assert homology(projective_space_model(3)) == [Z, HomologyGroup(0, (2,)), ZERO, Z]


def test_projective_quotient_preserves_open_sets():
    """U_q(a) = q(U_a) for the sign quotient, per element."""
    import itertools

    from fms.poset import build_poset

    n = 2
    sym = {-1: "-", 0: "0", 1: "+"}
    tuples = [t for t in itertools.product((-1, 0, 1), repeat=n + 1) if any(t)]
    ids = ["".join(sym[v] for v in t) for t in tuples]
    rels = []
    for t, name in zip(tuples, ids):
        for i, v in enumerate(t):
            if v:
                u = t[:i] + (0,) + t[i + 1:]
                if any(u):
                    rels.append((name, "".join(sym[w] for w in u)))
    s = build_poset(ids, rels)
    neg = {"+": "-", "-": "+", "0": "0"}
    classes = {frozenset((x, "".join(neg[c] for c in x))) for x in ids}
    q, proj = quotient_map(s, [sorted(c) for c in classes])
    for a in s.elements:
        image = {proj[x] for x in neighborhoods(s, a).u}
        assert image == set(neighborhoods(q, proj[a]).u)


def test_torus_powers():
    assert is_isomorphic(torus_power_model(1), sphere_model(1))[0]
    assert is_isomorphic(torus_power_model(2), named_model("t2_00"))[0]
    t3 = torus_power_model(3)
    assert t3.n == 64 and homology(t3) == [Z, HomologyGroup(3), HomologyGroup(3), Z]


def test_moore_models():
    for n in range(2, 7):
        for k in range(1, 4):
            p = moore_model(n, k)
            assert p.n == 4 * n + 2 * k + 3
            assert homology(p)[k] == HomologyGroup(0, (n,))
    assert is_isomorphic(moore_model(2, 1), named_model("p2_1"))[0]
    assert homology(moore_model(3, 1)) == [Z, HomologyGroup(0, (3,)), ZERO]


def test_face_posets_are_quasicellular_by_dimension():
    for n in range(2, 6):
        cw = polygon_moore_cw(n)
        q = find_quasicellular(face_poset(cw))
        assert all(q.rho[c] == d for d, cells in enumerate(cw.cells) for c in cells)


def test_model_specs():
    assert model_from_spec("pn:2").n == 13
    assert model_from_spec("moore:3,2").n == 4 * 3 + 4 + 3
    assert model_from_spec("torus:2").n == 16
    assert model_from_spec("point").n == 1
    with pytest.raises(ValueError):
        model_from_spec("klein")
