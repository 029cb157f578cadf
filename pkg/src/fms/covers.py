"""Finite covering posets built from a spanning tree and generator images.

For a homomorphism alpha from the edge-path group to a finite group G, each
comparable pair x < y gets the label F(x -> y) = alpha(w(x, y))^-1, which is
functorial: F(x -> z) = F(y -> z) F(x -> y).  The cover has points (x, g) with
(x, g) <= (y, h) iff x <= y and h F(x -> y) = g.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product as iproduct

from .canonical import bits
from .errors import InvalidGroup, NotConnected, NotOpen, RelatorNotKilled
from .homology import HomologyGroup, relative_homology
from .homotopy import edge_path_data, pi1_presentation
from .poset import Poset, build_poset, component_masks, is_connected


@dataclass
class FiniteGroup:
    """Group given by a multiplication table on 0..order-1."""

    order: int
    mul: list[list[int]]
    names: list[str] = field(default_factory=list)
    identity: int = 0
    inv: list[int] = field(default_factory=list)

    def __post_init__(self):
        n = self.order
        if n < 1 or n > 64:
            raise InvalidGroup("group order must be between 1 and 64")
        if len(self.mul) != n or any(len(r) != n for r in self.mul):
            raise InvalidGroup("multiplication table has the wrong shape")
        if not self.names:
            self.names = [str(i) for i in range(n)]
        if len(set(self.names)) != n:
            raise InvalidGroup("element names must be distinct")
        ids = [e for e in range(n) if all(self.mul[e][x] == x == self.mul[x][e] for x in range(n))]
        if not ids:
            raise InvalidGroup("no identity element")
        self.identity = ids[0]
        self.inv = []
        for x in range(n):
            cands = [y for y in range(n) if self.mul[x][y] == self.identity]
            if not cands or self.mul[cands[0]][x] != self.identity:
                raise InvalidGroup(f"element {self.names[x]} has no inverse")
            self.inv.append(cands[0])
        for a, b, c in iproduct(range(n), repeat=3):
            if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]]:
                raise InvalidGroup("multiplication is not associative")

    def m(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def element(self, x) -> int:
        if isinstance(x, int):
            return x
        return self.names.index(str(x))

    def to_json(self) -> dict:
        return {"order": self.order, "mul": self.mul, "names": self.names}

    @classmethod
    def from_json(cls, data) -> "FiniteGroup":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        return cls(data["order"], [list(r) for r in data["mul"]], list(data.get("names", [])))


def cyclic_group(k: int) -> FiniteGroup:
    return FiniteGroup(k, [[(a + b) % k for b in range(k)] for a in range(k)])


def trivial_group() -> FiniteGroup:
    return cyclic_group(1)


@dataclass
class CoverSpec:
    base: Poset
    group: FiniteGroup
    tree: list[tuple[str, str]]
    labels: dict[tuple[str, str], int]  # non-tree Hasse edges -> F(edge)
    relation_labels: dict[tuple[int, int], int] = field(repr=False, default_factory=dict)

    def check_functor(self) -> bool:
        """F(x -> z) = F(y -> z) F(x -> y) on every 2-chain."""
        p, G, F = self.base, self.group, self.relation_labels
        for z in range(p.n):
            for y in bits(p.down[z]):
                for x in bits(p.down[y]):
                    if F[(x, z)] != G.m(F[(y, z)], F[(x, y)]):
                        return False
        return True


@dataclass
class CoverPoset:
    total: Poset
    projection: dict[str, str]
    group: FiniteGroup
    base: Poset

    def point(self, x: str, g) -> str:
        return f"{x}@{self.group.names[self.group.element(g)]}"

    @property
    def connected(self) -> bool:
        return is_connected(self.total)

    def fiber(self, x: str) -> list[str]:
        return [self.point(x, g) for g in range(self.group.order)]

    def deck_map(self, g) -> dict[str, str]:
        """(x, h) -> (x, g h)."""
        G = self.group
        g = G.element(g)
        return {self.point(x, h): self.point(x, G.m(g, h)) for x in self.base.elements for h in range(G.order)}


def _word_value(G: FiniteGroup, word, alpha: list[int]) -> int:
    v = G.identity
    for a in word:
        e = alpha[abs(a) - 1]
        v = G.m(v, e if a > 0 else G.inv[e])
    return v


def build_cover(p: Poset, group: FiniteGroup, images: dict) -> tuple[CoverSpec, CoverPoset]:
    """Cover of a connected poset for generator images into a finite group."""
    if not is_connected(p):
        raise NotConnected("covers need a connected base")
    pres = pi1_presentation(p)
    data, gens = edge_path_data(p)
    G = group
    alpha = []
    for name in pres.generators:
        if name not in images:
            raise ValueError(f"no image given for generator {name!r}")
        alpha.append(G.element(images[name]))
    for r in pres.relators:
        if _word_value(G, r, alpha) != G.identity:
            raise RelatorNotKilled(f"relator {pres.word_str(r)} is not sent to the identity")
    F = {pair: G.inv[_word_value(G, w, alpha)] for pair, w in data.words.items()}
    labels = {}
    for (i, j), letter in data.edge_letter.items():
        labels[(p.elements[i], p.elements[j])] = F[(i, j)]
    spec = CoverSpec(p, G, data.tree, labels, F)
    names = G.names
    ids = [f"{x}@{names[g]}" for x in p.elements for g in range(G.order)]
    rels = []
    for x, y in p.sorted_covers():
        i, j = p.idx(x), p.idx(y)
        f = F[(i, j)]
        for h in range(G.order):
            rels.append((f"{x}@{names[G.m(h, f)]}", f"{y}@{names[h]}"))
    total = build_poset(ids, rels)
    proj = {f"{x}@{names[g]}": x for x in p.elements for g in range(G.order)}
    return spec, CoverPoset(total, proj, G, p)


def check_covering(cover: CoverPoset) -> bool:
    """Fibers have |G| points and U_(x,g) maps isomorphically onto U_x."""
    tot, base = cover.total, cover.base
    sizes = {}
    for y in cover.projection.values():
        sizes[y] = sizes.get(y, 0) + 1
    if any(v != cover.group.order for v in sizes.values()):
        return False
    for i, e in enumerate(tot.elements):
        lower = list(bits(tot.down[i])) + [i]
        images = [base.idx(cover.projection[tot.elements[j]]) for j in lower]
        if len(set(images)) != len(images):
            return False
        bi = base.idx(cover.projection[e])
        if set(images) != set(bits(base.down[bi])) | {bi}:
            return False
        # order preserved and reflected
        for a in lower:
            for b in lower:
                ia, ib = base.idx(cover.projection[tot.elements[a]]), base.idx(cover.projection[tot.elements[b]])
                if bool(tot.down[b] >> a & 1) != bool(base.down[ib] >> ia & 1):
                    return False
    return True


def is_automorphism(p: Poset, mapping: dict[str, str]) -> bool:
    if sorted(mapping) != sorted(p.elements) or sorted(mapping.values()) != sorted(p.elements):
        return False
    for x, y in p.relations():
        if not p.lt(mapping[x], mapping[y]):
            return False
    return True


@dataclass
class CoverHomologyReport:
    degrees: list[dict]
    all_equal: bool
    group_order: int
    hypothesis: str

    def to_json(self) -> dict:
        return {"degrees": self.degrees, "all_equal": self.all_equal, "group_order": self.group_order,
                "hypothesis": self.hypothesis}


def verify_cover_homology(p: Poset, c, cover: CoverPoset, certificate=None) -> CoverHomologyReport:
    """Compare H_n(cover, preimage of c) with |G| copies of H_n(p, c).

    ``c`` must be open or closed.  If a splitting certificate is passed its
    verdict is recorded as the status of the theorem's hypothesis.
    """
    cmask = c if isinstance(c, int) else p.mask_of(c)
    if not (p.is_open(cmask) or p.is_closed(cmask)):
        raise NotOpen("the subspace must be open or closed")
    ids = set(p.ids_of(cmask))
    tot = cover.total
    pre = tot.mask_of([e for e in tot.elements if cover.projection[e] in ids])
    lhs = relative_homology(tot, pre)
    rhs_base = relative_homology(p, cmask)
    k = cover.group.order
    rhs = [g.times(k) for g in rhs_base]
    top = max(len(lhs), len(rhs))
    lhs += [HomologyGroup()] * (top - len(lhs))
    rhs += [HomologyGroup()] * (top - len(rhs))
    degrees = [{"n": n, "cover": str(a), "copies": str(b), "equal": a == b} for n, (a, b) in enumerate(zip(lhs, rhs))]
    if certificate is None:
        hyp = "not supplied"
    else:
        hyp = certificate.verdict
    return CoverHomologyReport(degrees, all(d["equal"] for d in degrees), k, hyp)


def abelian_cover(p: Poset, k: int) -> tuple[CoverSpec, CoverPoset] | None:
    """Connected Z/k cover through the abelianization, if a surjection exists."""
    from .homotopy import cyclic_images

    images = cyclic_images(pi1_presentation(p), k)
    if images is None:
        return None
    return build_cover(p, cyclic_group(k), images)
