"""Finite posets viewed as finite T0 spaces.

A :class:`Poset` stores its elements in a fixed order together with strict
down-set and up-set bitmasks (Python ints, so there is no size ceiling).
Open sets are the down-closed subsets: the minimal open set of ``x`` is the
down-set ``U_x`` and the minimal closed set is the up-set ``F_x``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .canonical import bit_list, bits, canonical_labeling, up_masks
from .errors import CycleDetected, DuplicateId, EmptyPoset, UnknownElement


class Poset:
    """Immutable finite strict partial order on string ids."""

    __slots__ = ("elements", "index", "down", "up", "_covers", "_canon", "_hash")

    def __init__(self, elements: Sequence[str], down: Sequence[int]):
        # trusted constructor: ``down`` must already be transitively closed
        self.elements = tuple(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.down = tuple(down)
        self.up = tuple(up_masks(list(self.down)))
        self._covers = None
        self._canon = None
        self._hash = None

    # basic accessors ----------------------------------------------------
    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return self.elements == other.elements and self.down == other.down

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.elements, self.down))
        return self._hash

    def __repr__(self):
        return f"Poset({len(self)} points, {len(self.covers)} covers)"

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.elements)) - 1

    def idx(self, x: str) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise UnknownElement(f"unknown element {x!r}") from None

    def mask_of(self, ids: Iterable[str]) -> int:
        m = 0
        for x in ids:
            m |= 1 << self.idx(x)
        return m

    def ids_of(self, mask: int) -> list[str]:
        return [self.elements[i] for i in bits(mask)]

    def leq(self, x: str, y: str) -> bool:
        i, j = self.idx(x), self.idx(y)
        return i == j or bool(self.down[j] >> i & 1)

    def lt(self, x: str, y: str) -> bool:
        i, j = self.idx(x), self.idx(y)
        return bool(self.down[j] >> i & 1)

    def cover_masks(self) -> list[int]:
        """Per element, the bitmask of elements it covers."""
        out = []
        for d in self.down:
            below = 0
            for j in bits(d):
                below |= self.down[j]
            out.append(d & ~below)
        return out

    @property
    def covers(self) -> frozenset:
        if self._covers is None:
            cm = self.cover_masks()
            self._covers = frozenset(
                (self.elements[j], self.elements[i])
                for i in range(self.n)
                for j in bits(cm[i])
            )
        return self._covers

    def sorted_covers(self) -> list[tuple[str, str]]:
        """Covers ordered by (upper index, lower index); stable for output."""
        cm = self.cover_masks()
        return [
            (self.elements[j], self.elements[i])
            for i in range(self.n)
            for j in bits(cm[i])
        ]

    def relations(self) -> list[tuple[str, str]]:
        return [
            (self.elements[j], self.elements[i])
            for i in range(self.n)
            for j in bits(self.down[i])
        ]

    def linear_extension(self) -> list[int]:
        """Indices sorted so that smaller elements come first."""
        return sorted(range(self.n), key=lambda i: (bin(self.down[i]).count("1"), i))

    def is_open(self, mask: int) -> bool:
        return all(self.down[i] & ~mask == 0 for i in bits(mask))

    def is_closed(self, mask: int) -> bool:
        return all(self.up[i] & ~mask == 0 for i in bits(mask))

    def open_closure(self, mask: int) -> int:
        out = mask
        for i in bits(mask):
            out |= self.down[i]
        return out

    def closed_closure(self, mask: int) -> int:
        out = mask
        for i in bits(mask):
            out |= self.up[i]
        return out

    def canonical(self):
        """Canonical form (hashable) and position map."""
        if self._canon is None:
            self._canon = canonical_labeling(list(self.down))
        return self._canon

    def canonical_form(self):
        return (self.n, self.canonical()[0])

    def subspace_mask(self, mask: int) -> "Poset":
        keep = bit_list(mask)
        if len(keep) == self.n:
            return self
        new = {old: k for k, old in enumerate(keep)}
        down = []
        for old in keep:
            m = 0
            for j in bits(self.down[old] & mask):
                m |= 1 << new[j]
            down.append(m)
        return Poset([self.elements[i] for i in keep], down)

    def relabel(self, mapping: dict) -> "Poset":
        return Poset([mapping[e] for e in self.elements], self.down)

    def to_json(self) -> dict:
        return {"elements": list(self.elements), "relations": [list(c) for c in self.sorted_covers()]}


@dataclass(frozen=True)
class Neighborhoods:
    u: frozenset
    f: frozenset
    c: frozenset
    u_hat: frozenset
    f_hat: frozenset
    c_hat: frozenset


# construction -----------------------------------------------------------

def _closure_from_edges(n: int, preds: list[list[int]], elements) -> list[int]:
    """Transitive closure of the relation j < i for j in preds[i] (Kahn order)."""
    indeg = [len(set(p)) for p in preds]
    succ: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in set(preds[i]):
            succ[j].append(i)
    queue = [i for i in range(n) if indeg[i] == 0]
    down = [0] * n
    seen = 0
    while queue:
        j = queue.pop()
        seen += 1
        for i in succ[j]:
            down[i] |= down[j] | (1 << j)
            indeg[i] -= 1
            if indeg[i] == 0:
                queue.append(i)
    if seen < n:
        stuck = [elements[i] for i in range(n) if indeg[i] > 0]
        raise CycleDetected(f"relations contain a directed cycle through {stuck[:5]}")
    return down


def build_poset(elements: Iterable[str], relations: Iterable[Sequence[str]] = ()) -> Poset:
    """Build a poset from ids and generating pairs ``(x, y)`` meaning x < y."""
    elements = [str(e) for e in elements]
    index: dict[str, int] = {}
    for i, e in enumerate(elements):
        if e in index:
            raise DuplicateId(f"duplicate element id {e!r}")
        index[e] = i
    preds: list[list[int]] = [[] for _ in elements]
    for pair in relations:
        x, y = (str(v) for v in pair)
        for v in (x, y):
            if v not in index:
                raise UnknownElement(f"unknown element {v!r}")
        if x == y:
            raise CycleDetected(f"relation {x!r} < {x!r} is reflexive")
        preds[index[y]].append(index[x])
    return Poset(elements, _closure_from_edges(len(elements), preds, elements))


def empty_poset() -> Poset:
    return Poset([], [])


def antichain(ids: Iterable[str]) -> Poset:
    ids = list(ids)
    return build_poset(ids, [])


def chain(ids: Iterable[str]) -> Poset:
    ids = list(ids)
    return build_poset(ids, list(zip(ids, ids[1:])))


def poset_from_json(data) -> Poset:
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    return build_poset(data["elements"], data.get("relations", []))


def poset_to_json(p: Poset) -> dict:
    return p.to_json()


def dumps(p: Poset) -> str:
    return json.dumps(p.to_json(), sort_keys=True, separators=(",", ":"))


def rank_levels(p: Poset) -> list[int]:
    """Length of the longest chain ending at each element (minimal points have 0)."""
    lvl = [0] * p.n
    for i in p.linear_extension():
        lvl[i] = max((lvl[j] + 1 for j in bits(p.down[i])), default=0)
    return lvl


def to_dot(p: Poset, name: str = "P") -> str:
    """Hasse diagram in DOT, ranked by level and drawn bottom to top."""
    lvl = rank_levels(p)
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for r in sorted(set(lvl)):
        ids = " ".join(json.dumps(p.elements[i]) for i in range(p.n) if lvl[i] == r)
        lines.append(f"  {{ rank=same; {ids} }}")
    for x, y in p.sorted_covers():
        lines.append(f"  {json.dumps(x)} -> {json.dumps(y)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# neighborhoods and derived sets -----------------------------------------

def neighborhoods(p: Poset, x: str) -> Neighborhoods:
    i = p.idx(x)
    u_hat = frozenset(p.ids_of(p.down[i]))
    f_hat = frozenset(p.ids_of(p.up[i]))
    u = u_hat | {x}
    f = f_hat | {x}
    return Neighborhoods(u=u, f=f, c=u | f, u_hat=u_hat, f_hat=f_hat, c_hat=u_hat | f_hat)


def down_set(p: Poset, x: str) -> frozenset:
    return neighborhoods(p, x).u


def up_set(p: Poset, x: str) -> frozenset:
    return neighborhoods(p, x).f


def opposite(p: Poset) -> Poset:
    return Poset(p.elements, p.up)


def subspace(p: Poset, s: Iterable[str]) -> Poset:
    return p.subspace_mask(p.mask_of(s))


def component_masks(p: Poset, mask: int | None = None) -> list[int]:
    """Connected components (of the comparability graph) inside ``mask``."""
    if mask is None:
        mask = p.full_mask
    out = []
    rest = mask
    while rest:
        low = rest & -rest
        comp = low
        frontier = low
        while frontier:
            nxt = 0
            for i in bits(frontier):
                nxt |= p.down[i] | p.up[i]
            nxt &= mask & ~comp
            comp |= nxt
            frontier = nxt
        out.append(comp)
        rest &= ~comp
    return out


def connected_components(p: Poset) -> list[frozenset]:
    """Components ordered by their first element in the element list."""
    return [frozenset(p.ids_of(c)) for c in component_masks(p)]


def is_connected(p: Poset) -> bool:
    return p.n > 0 and len(component_masks(p)) == 1


def height(p: Poset) -> int:
    if p.n == 0:
        raise EmptyPoset("height of the empty poset is undefined")
    return max(rank_levels(p))


def maximal_mask(p: Poset, mask: int | None = None) -> int:
    if mask is None:
        mask = p.full_mask
    return sum(1 << i for i in bits(mask) if p.up[i] & mask == 0)


def minimal_mask(p: Poset, mask: int | None = None) -> int:
    if mask is None:
        mask = p.full_mask
    return sum(1 << i for i in bits(mask) if p.down[i] & mask == 0)


def extremes(p: Poset) -> tuple[frozenset, frozenset]:
    return frozenset(p.ids_of(maximal_mask(p))), frozenset(p.ids_of(minimal_mask(p)))


# constructions ----------------------------------------------------------

def _disjoint_ids(p: Poset, q: Poset) -> tuple[list[str], list[str]]:
    if set(p.elements) & set(q.elements):
        return [f"L:{e}" for e in p.elements], [f"R:{e}" for e in q.elements]
    return list(p.elements), list(q.elements)


def disjoint_union(p: Poset, q: Poset) -> Poset:
    a, b = _disjoint_ids(p, q)
    shift = p.n
    return Poset(a + b, list(p.down) + [d << shift for d in q.down])


def non_hausdorff_join(p: Poset, q: Poset) -> Poset:
    """X ⊛ Y: disjoint union with every point of X below every point of Y."""
    a, b = _disjoint_ids(p, q)
    shift = p.n
    return Poset(a + b, list(p.down) + [(d << shift) | p.full_mask for d in q.down])


def suspension(p: Poset, labels: tuple[str, str] | None = None) -> Poset:
    """Join with a two-point antichain, using fresh ids for the new points."""
    if labels is None:
        k = 0
        while f"s{k}+" in p.index or f"s{k}-" in p.index:
            k += 1
        labels = (f"s{k}+", f"s{k}-")
    return non_hausdorff_join(p, antichain(labels))


def product(p: Poset, q: Poset) -> Poset:
    """Componentwise order on pairs, ids ``(a,b)``."""
    ids = [f"({a},{b})" for a in p.elements for b in q.elements]
    m = q.n
    down = []
    for i in range(p.n):
        di = p.down[i] | (1 << i)
        for j in range(q.n):
            dj = q.down[j] | (1 << j)
            mask = 0
            for a in bits(di):
                mask |= dj << (a * m)
            down.append(mask & ~(1 << (i * m + j)))
    return Poset(ids, down)


def quotient_map(p: Poset, classes: Iterable[Iterable[str]], names=None) -> tuple[Poset, dict]:
    """Quotient by a partition followed by the T0 identification.

    Returns the quotient poset and the projection as a dict id -> id.
    """
    classes = [list(c) for c in classes]
    cls_of = [-1] * p.n
    for k, c in enumerate(classes):
        for x in c:
            i = p.idx(x)
            if cls_of[i] != -1:
                raise ValueError(f"element {x!r} appears in two classes")
            cls_of[i] = k
    if -1 in cls_of:
        missing = [p.elements[i] for i in range(p.n) if cls_of[i] == -1]
        raise ValueError(f"classes do not cover {missing[:5]}")
    k = len(classes)
    # reflexive projected relation, then transitive closure (Warshall on bitmasks)
    leq = [1 << c for c in range(k)]
    for i in range(p.n):
        for j in bits(p.down[i]):
            leq[cls_of[i]] |= 1 << cls_of[j]
    for mid in range(k):
        bm = 1 << mid
        for c in range(k):
            if leq[c] & bm:
                leq[c] |= leq[mid]
    # T0 step: merge classes that are mutually related
    rep = list(range(k))
    for c in range(k):
        for d in bits(leq[c]):
            if d < rep[c] and leq[d] >> c & 1:
                rep[c] = d
    reps = sorted(set(rep))
    pos = {r: t for t, r in enumerate(reps)}
    members: dict[int, list[str]] = {r: [] for r in reps}
    for i in range(p.n):
        members[rep[cls_of[i]]].append(p.elements[i])
    if names is None:
        ids = [m[0] if len(m) == 1 else "{" + "|".join(m) + "}" for m in (members[r] for r in reps)]
    else:
        ids = [names(members[r]) for r in reps]
    down = []
    for r in reps:
        m = 0
        for d in bits(leq[r]):
            if rep[d] != r:
                m |= 1 << pos[rep[d]]
        down.append(m)
    q = Poset(ids, down)
    proj = {p.elements[i]: ids[pos[rep[cls_of[i]]]] for i in range(p.n)}
    return q, proj


def quotient(p: Poset, classes: Iterable[Iterable[str]], names=None) -> Poset:
    return quotient_map(p, classes, names)[0]


def check_quotient_topology(p: Poset, q: Poset, proj: dict) -> bool:
    """Open-set criterion: V open in q iff its preimage is open in p (exhaustive)."""
    pre = [0] * q.n
    for x, y in proj.items():
        pre[q.idx(y)] |= 1 << p.idx(x)
    for sub in range(1 << q.n):
        pm = 0
        for t in bits(sub):
            pm |= pre[t]
        if q.is_open(sub) != p.is_open(pm):
            return False
    return True


# isomorphism ------------------------------------------------------------

def is_isomorphic(p: Poset, q: Poset) -> tuple[bool, dict | None]:
    """Return (True, witness p-id -> q-id) or (False, None)."""
    if p.n != q.n or len(p.covers) != len(q.covers):
        return False, None
    fp, pos_p = p.canonical()
    fq, pos_q = q.canonical()
    if fp != fq:
        return False, None
    inv_q = [0] * q.n
    for i, c in enumerate(pos_q):
        inv_q[c] = i
    witness = {p.elements[i]: q.elements[inv_q[pos_p[i]]] for i in range(p.n)}
    return True, witness


def isomorphic(p: Poset, q: Poset) -> bool:
    return is_isomorphic(p, q)[0]


def canonical_poset(p: Poset) -> Poset:
    """Relabel p into canonical positions with ids "0".."n-1"."""
    form, _ = p.canonical()
    return Poset([str(i) for i in range(p.n)], list(form))


# beat points --------------------------------------------------------------

def beat_kind(p: Poset, i: int, alive: int) -> tuple[bool, bool]:
    """(is down beat point, is up beat point) of element i inside ``alive``."""
    d = p.down[i] & alive
    u = p.up[i] & alive
    down_beat = False
    if d:
        for j in bits(d):
            if (p.down[j] & alive) | (1 << j) == d:
                down_beat = True
                break
    up_beat = False
    if u:
        for j in bits(u):
            if (p.up[j] & alive) | (1 << j) == u:
                up_beat = True
                break
    return down_beat, up_beat


def is_beat_point(p: Poset, i: int, alive: int) -> bool:
    d, u = beat_kind(p, i, alive)
    return d or u


def core_mask(p: Poset, mask: int | None = None, rng=None) -> tuple[int, list[int]]:
    """Remove beat points from ``mask`` until none is left.

    Without ``rng`` the first beat point in element order is removed at each
    step; with a ``random.Random`` it is chosen at random.  Returns the
    surviving mask and the removal sequence.
    """
    alive = p.full_mask if mask is None else mask
    removed = []
    if rng is None:
        changed = True
        while changed:
            changed = False
            for i in bits(alive):
                if is_beat_point(p, i, alive):
                    alive &= ~(1 << i)
                    removed.append(i)
                    changed = True
    else:
        while True:
            cands = [i for i in bits(alive) if is_beat_point(p, i, alive)]
            if not cands:
                break
            i = rng.choice(cands)
            alive &= ~(1 << i)
            removed.append(i)
    return alive, removed
