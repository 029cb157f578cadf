"""Shared fixtures: a seeded random corpus and hypothesis strategies for posets."""

import random

import pytest
from hypothesis import strategies as st

from fms.poset import Poset, build_poset, component_masks, is_connected

CORPUS_SEED = 20240611
CORPUS_SIZE = 500


def random_poset(rng: random.Random, n: int, density: float) -> Poset:
    """Random order: a DAG on a shuffled labeling, transitively closed."""
    ids = [f"p{i}" for i in range(n)]
    rng.shuffle(ids)
    rels = [(ids[i], ids[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    order = ids[:]
    rng.shuffle(order)
    return build_poset(order, rels)


def make_corpus(size: int = CORPUS_SIZE, max_points: int = 10, seed: int = CORPUS_SEED) -> list[Poset]:
    rng = random.Random(seed)
    out = []
    for _ in range(size):
        n = rng.randint(1, max_points)
        out.append(random_poset(rng, n, rng.uniform(0.1, 0.6)))
    return out


@pytest.fixture(scope="session")
def corpus() -> list[Poset]:
    return make_corpus()


@st.composite
def posets(draw, min_size: int = 1, max_size: int = 7) -> Poset:
    n = draw(st.integers(min_size, max_size))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    perm = draw(st.permutations(range(n)))
    ids = [f"v{perm[i]}" for i in range(n)]
    rels = [(ids[i], ids[j]) for (i, j), e in zip(pairs, edges) if e]
    return build_poset(sorted(ids), rels)


@st.composite
def connected_posets(draw, min_size: int = 1, max_size: int = 7) -> Poset:
    p = draw(posets(min_size, max_size))
    # keep the largest component
    comp = max(component_masks(p), key=lambda m: (bin(m).count("1"), -m))
    q = p.subspace_mask(comp)
    assert is_connected(q)
    return q


def fence() -> Poset:
    return build_poset(["a", "b", "c", "x", "y"], [("x", "a"), ("x", "b"), ("y", "b"), ("y", "c")])
