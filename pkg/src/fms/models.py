"""Constructors for named finite models and face posets of regular CW data."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import InvalidIncidence
from .poset import (
    Poset,
    antichain,
    build_poset,
    product,
    quotient,
    suspension,
)


def sphere_model(n: int) -> Poset:
    """The n-fold non-Hausdorff suspension of S^0 (2n+2 points)."""
    if n < 0:
        raise ValueError("dimension must be non-negative")
    ids = []
    rels = []
    for k in range(n + 1):
        ids += [f"x{k}", f"y{k}"]
        if k:
            for lo in (f"x{k-1}", f"y{k-1}"):
                for hi in (f"x{k}", f"y{k}"):
                    rels.append((lo, hi))
    return build_poset(ids, rels)


# Hasse diagrams of the surface models: upper element -> elements it covers.
# Tops are a1..a4, middles b1..b8, bottoms c1..c4.
_SURFACES = {
    "p2_1": (
        {"a1": (1, 3, 6), "a2": (1, 4, 5), "a3": (2, 3, 5), "a4": (2, 4, 6)},
        {"c1": (1, 2, 3, 4), "c2": (1, 2, 5, 6), "c3": (3, 4, 5, 6)},
    ),
    "p2_2": (
        {"a1": (1, 2, 3, 4), "a2": (1, 2, 5, 6), "a3": (3, 4, 5, 6)},
        {"c1": (1, 3, 6), "c2": (1, 4, 5), "c3": (2, 3, 5), "c4": (2, 4, 6)},
    ),
    "t2_00": (
        {"a1": (1, 2, 3, 4), "a2": (1, 2, 5, 6), "a3": (3, 4, 7, 8), "a4": (5, 6, 7, 8)},
        {"c1": (1, 3, 5, 7), "c2": (1, 4, 6, 7), "c3": (2, 3, 5, 8), "c4": (2, 4, 6, 8)},
    ),
    "t2_11": (
        {"a1": (1, 2, 3, 4), "a2": (1, 2, 5, 6), "a3": (3, 5, 7, 8), "a4": (4, 6, 7, 8)},
        {"c1": (1, 4, 5, 7), "c2": (2, 4, 5, 8), "c3": (1, 3, 6, 8), "c4": (2, 3, 6, 7)},
    ),
    "k_10": (
        {"a1": (1, 2, 3, 4), "a2": (1, 2, 5, 6), "a3": (3, 5, 7, 8), "a4": (4, 6, 7, 8)},
        {"c1": (1, 4, 5, 7), "c2": (2, 4, 5, 8), "c3": (1, 3, 6, 7), "c4": (2, 3, 6, 8)},
    ),
    "k_01": (
        {"a1": (1, 2, 3, 4), "a2": (1, 2, 5, 6), "a3": (3, 4, 7, 8), "a4": (5, 6, 7, 8)},
        {"c1": (1, 3, 5, 7), "c2": (1, 4, 6, 7), "c3": (2, 3, 6, 8), "c4": (2, 4, 5, 8)},
    ),
}

NAMED_MODELS = tuple(_SURFACES)


def named_model(name: str) -> Poset:
    """One of the hard-coded surface models p2_1, p2_2, t2_00, t2_11, k_10, k_01."""
    try:
        tops, bottoms = _SURFACES[name]
    except KeyError:
        raise ValueError(f"unknown model {name!r}; expected one of {NAMED_MODELS}") from None
    nb = max(max(v) for v in tops.values())
    cs = sorted(bottoms)
    ids = cs + [f"b{i}" for i in range(1, nb + 1)] + sorted(tops)
    rels = []
    for a, bs in tops.items():
        rels += [(f"b{i}", a) for i in bs]
    for c, bs in bottoms.items():
        rels += [(c, f"b{i}") for i in bs]
    return build_poset(ids, rels)


@dataclass
class RegularCWIncidence:
    """Cells by dimension with, for each cell, the cells of its boundary."""

    cells: list[list[str]]
    boundary: dict[str, list[str]] = field(default_factory=dict)

    def validate(self) -> None:
        dim_of = {}
        for d, cs in enumerate(self.cells):
            for c in cs:
                if c in dim_of:
                    raise InvalidIncidence(f"cell {c!r} listed twice")
                dim_of[c] = d
        if not self.cells or not self.cells[0] and any(self.cells):
            raise InvalidIncidence("dimensions must start at 0")
        for d, cs in enumerate(self.cells):
            if not cs:
                raise InvalidIncidence(f"no cells in dimension {d}")
        for c, bd in self.boundary.items():
            if c not in dim_of:
                raise InvalidIncidence(f"unknown cell {c!r}")
            for f in bd:
                if dim_of.get(f) != dim_of[c] - 1:
                    raise InvalidIncidence(f"{f!r} cannot be a facet of {c!r}")
        for c, d in dim_of.items():
            if d > 0 and not self.boundary.get(c):
                raise InvalidIncidence(f"cell {c!r} of dimension {d} has empty boundary")


def face_poset(cw: RegularCWIncidence) -> Poset:
    cw.validate()
    ids = [c for cs in cw.cells for c in cs]
    rels = [(f, c) for c, bd in cw.boundary.items() for f in bd]
    return build_poset(ids, rels)


def rp2_cw() -> RegularCWIncidence:
    """Regular CW structure on RP^2 with 3 vertices, 6 edges and 4 faces."""
    edges = {"b1": ("c1", "c2"), "b2": ("c1", "c2"), "b3": ("c1", "c3"),
             "b4": ("c1", "c3"), "b5": ("c2", "c3"), "b6": ("c2", "c3")}
    faces = {"a1": ("b1", "b3", "b6"), "a2": ("b1", "b4", "b5"),
             "a3": ("b2", "b3", "b5"), "a4": ("b2", "b4", "b6")}
    bd = {k: list(v) for k, v in {**edges, **faces}.items()}
    return RegularCWIncidence([["c1", "c2", "c3"], sorted(edges), sorted(faces)], bd)


def polygon_moore_cw(n: int) -> RegularCWIncidence:
    """Identified 2n-gon with a central vertex, a regular CW model of M(Z/n, 1).

    Rim vertices alternate between two classes ``v0``/``v1``; rim edges
    c_{2t}c_{2t+1} become ``e0`` and c_{2t-1}c_{2t} become ``e1``.  Spokes and
    triangles stay distinct.
    """
    if n < 2:
        raise ValueError("torsion order must be at least 2")
    m = 2 * n
    bd: dict[str, list[str]] = {"e0": ["v0", "v1"], "e1": ["v0", "v1"]}
    spokes = []
    for t in range(m):
        s = f"s{t}"
        spokes.append(s)
        bd[s] = [f"v{t % 2}", "d"]
    tris = []
    for t in range(m):
        f = f"f{t}"
        tris.append(f)
        rim = "e0" if t % 2 == 0 else "e1"
        bd[f] = [rim, f"s{t}", f"s{(t + 1) % m}"]
    return RegularCWIncidence([["v0", "v1", "d"], ["e0", "e1"] + spokes, tris], bd)


def moore_model(n: int, k: int = 1) -> Poset:
    """Finite model of the Moore space M(Z/n, k) with 4n+2k+3 points."""
    if n < 2 or k < 1:
        raise ValueError("need n >= 2 and k >= 1")
    p = face_poset(polygon_moore_cw(n))
    for _ in range(k - 1):
        p = suspension(p)
    return p


def projective_space_model(n: int) -> Poset:
    """The quotient of {-1,0,1}^(n+1) minus the all-zero tuple by the sign action.

    In each coordinate 0 lies above both 1 and -1.
    """
    if n < 1:
        raise ValueError("dimension must be at least 1")
    sym = {-1: "-", 0: "0", 1: "+"}
    tuples = [t for t in itertools.product((-1, 0, 1), repeat=n + 1) if any(t)]
    ids = ["".join(sym[v] for v in t) for t in tuples]
    rels = []
    for t, name in zip(tuples, ids):
        # covers: flip a single nonzero coordinate to 0, unless that gives all zeros
        for i, v in enumerate(t):
            if v != 0:
                u = t[:i] + (0,) + t[i + 1:]
                if any(u):
                    rels.append((name, "".join(sym[w] for w in u)))
    s = build_poset(ids, rels)
    neg = {"+": "-", "-": "+", "0": "0"}
    seen = set()
    classes = []
    for name in ids:
        if name in seen:
            continue
        other = "".join(neg[ch] for ch in name)
        seen |= {name, other}
        classes.append([name, other])
    return quotient(s, classes, names=lambda m: m[0])


def torus_power_model(n: int) -> Poset:
    """(SS^0)^n with 4^n points."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    base = sphere_model(1)
    p = base
    for _ in range(n - 1):
        p = product(p, base)
    return p


def model_from_spec(spec: str) -> Poset:
    """Parse ``name``, ``sphere:n``, ``pn:k``, ``torus:k`` or ``moore:n,k``."""
    if spec in _SURFACES:
        return named_model(spec)
    kind, _, arg = spec.partition(":")
    try:
        if kind == "sphere":
            return sphere_model(int(arg))
        if kind == "pn":
            return projective_space_model(int(arg))
        if kind == "torus":
            return torus_power_model(int(arg))
        if kind == "moore":
            a, _, b = arg.partition(",")
            return moore_model(int(a), int(b) if b else 1)
        if kind == "point":
            return antichain(["x"])
    except ValueError as exc:
        raise ValueError(f"bad model spec {spec!r}: {exc}") from None
    raise ValueError(f"unknown model {spec!r}")
