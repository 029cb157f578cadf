import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import ZZ, Matrix
from sympy.matrices.normalforms import invariant_factors

from conftest import posets
from fms.errors import NotOpen
from fms.homology import (
    HomologyGroup,
    barycentric_subdivision,
    chain_complex,
    chains_in,
    euler_characteristic,
    format_groups,
    homology,
    homology_over_field,
    order_complex,
    relative_homology,
)
from fms.models import named_model, sphere_model
from fms.poset import antichain, chain, opposite, product, subspace, suspension
from fms.smith import matmul, smith_normal_form, sparse_invariants

Z, ZERO = HomologyGroup(1), HomologyGroup()


def G(rank=0, *tors):
    return HomologyGroup(rank, tors)


# Smith normal form ----------------------------------------------------------

def test_snf_examples():
    s = smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert s.factors == [1, 1, 1] and s.rank == 3
    assert smith_normal_form([[2, 4], [6, 8]]).factors == [2, 4]
    # boundary of the 4-cycle of the circle model: rank 3, all unit factors
    cc = chain_complex(sphere_model(1))
    rank, tors = sparse_invariants(cc.boundary[1])
    assert rank == 3 and tors == []


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@given(matrices)
def test_snf_matches_sympy(a):
    s = smith_normal_form(a, transforms=True)
    ref = [abs(int(d)) for d in invariant_factors(Matrix(a), domain=ZZ) if d != 0]
    assert s.factors == ref
    d = matmul(matmul(s.U, a), s.V)
    for i, row in enumerate(d):
        for j, v in enumerate(row):
            assert v == (s.factors[i] if i == j and i < s.rank else 0)
    cols = [{i: a[i][j] for i in range(len(a)) if a[i][j]} for j in range(len(a[0]))]
    rank, tors = sparse_invariants(cols)
    assert rank == s.rank and tors == s.torsion


# complexes ------------------------------------------------------------------

def test_order_complex_examples():
    assert order_complex(sphere_model(1)).f_vector == (4, 4)
    assert order_complex(chain("abcd")).f_vector == (4, 6, 4, 1)
    k = order_complex(named_model("p2_1"))
    assert k.f_vector == (13, 36, 24)
    assert euler_characteristic(named_model("p2_1")) == 1
    assert euler_characteristic(named_model("t2_00")) == 0
    assert euler_characteristic(named_model("k_10")) == 0
    assert euler_characteristic(antichain("x")) == 1
    assert barycentric_subdivision(sphere_model(1)).n == 8
    assert barycentric_subdivision(antichain("x")).n == 1


@pytest.mark.parametrize("name,expected", [
    ("p2_1", [Z, G(0, 2), ZERO]),
    ("p2_2", [Z, G(0, 2), ZERO]),
    ("t2_00", [Z, G(2), Z]),
    ("t2_11", [Z, G(2), Z]),
    ("k_10", [Z, G(1, 2), ZERO]),
    ("k_01", [Z, G(1, 2), ZERO]),
])
def test_named_model_homology(name, expected):
    p = named_model(name)
    assert homology(p) == expected
    assert homology(p, method="direct") == expected


def test_spheres_and_products():
    assert homology(sphere_model(1)) == [Z, Z]
    assert homology(sphere_model(2)) == [Z, ZERO, Z]
    assert homology(product(sphere_model(1), sphere_model(1))) == [Z, G(2), Z]
    assert format_groups(homology(named_model("t2_00"))) == "H0=Z H1=Z^2 H2=Z"


def test_relative_requires_open_and_fields():
    p = sphere_model(1)
    with pytest.raises(NotOpen):
        homology(p, rel=["x1"])
    assert homology_over_field([Z, G(0, 2), ZERO], 2) == [1, 1, 1]
    assert homology_over_field([Z, G(0, 2), ZERO], 3) == [1, 0, 0]


@settings(max_examples=60)
@given(posets(max_size=8))
def test_boundary_squares_to_zero(p):
    assert chain_complex(p).check()
    assert chain_complex(p, reduced=True).check()


@settings(max_examples=60)
@given(posets(max_size=8))
def test_core_and_direct_agree(p):
    assert homology(p) == homology(p, method="direct")
    assert relative_homology(p, 0, reduced=True) == relative_homology(p, 0, reduced=True, method="direct")


@settings(max_examples=40)
@given(posets(max_size=7), st.data())
def test_relative_cone_trick_matches_direct(p, data):
    seed = data.draw(st.lists(st.sampled_from(p.elements), max_size=3))
    a = p.open_closure(p.mask_of(seed))
    c = p.closed_closure(p.mask_of(seed))
    assert relative_homology(p, a) == relative_homology(p, a, method="direct")
    assert relative_homology(p, c) == relative_homology(p, c, method="direct")


def _chains_ascend(p):
    where = {v: t for t, v in enumerate(p.linear_extension())}
    return all(where[s[k]] < where[s[k + 1]] for dim in chains_in(p) for s in dim for k in range(len(s) - 1))


@given(posets(max_size=7))
def test_simplices_follow_linear_extension(p):
    assert _chains_ascend(p)


def _reduced(p):
    return relative_homology(p, 0, reduced=True) if p.n else []


# corpus-wide invariance suites -----------------------------------------------

def test_opposite_invariance(corpus):
    for p in corpus:
        assert homology(p) == homology(opposite(p))


def test_euler_characteristic_matches_ranks(corpus):
    for p in corpus:
        h = homology(p)
        assert sum((-1) ** k * g.rank for k, g in enumerate(h)) == euler_characteristic(p)


def test_suspension_shift(corpus):
    for p in corpus:
        h = _reduced(p)
        hs = _reduced(suspension(p))
        assert hs[0] == ZERO
        assert hs[1:] == h[: len(hs) - 1]


def test_subdivision_invariance(corpus):
    for p in corpus:
        assert homology(barycentric_subdivision(p)) == homology(p)


def test_product_euler_multiplicative(corpus):
    for p, q in zip(corpus[:60], corpus[60:120]):
        if p.n * q.n > 40:
            continue
        assert euler_characteristic(product(p, q)) == euler_characteristic(p) * euler_characteristic(q)


def test_subdivision_lemma(corpus):
    """H((X - A)') = H(X' - A') for proper subsets A."""
    import random

    rng = random.Random(5)
    for p in corpus[:150]:
        if p.n < 2 or sum(len(d) for d in chains_in(p)) > 200:
            continue
        a = rng.sample(list(p.elements), rng.randint(1, p.n - 1))
        rest = subspace(p, [x for x in p.elements if x not in a])
        sd = barycentric_subdivision(p)
        inside = [c for c in sd.elements if set(c[1:-1].split(",")) <= set(a)]
        assert sd.is_open(sd.mask_of(inside))
        keep = [c for c in sd.elements if c not in inside]
        lhs = homology(barycentric_subdivision(rest))
        rhs = homology(subspace(sd, keep))
        top = max(len(lhs), len(rhs))
        assert lhs + [ZERO] * (top - len(lhs)) == rhs + [ZERO] * (top - len(rhs))
