"""Beat points, cores, and edge-path presentations of the fundamental group."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .canonical import bits
from .errors import NotConnected
from .homology import HomologyGroup
from .poset import Poset, beat_kind, core_mask, is_connected, is_isomorphic
from .smith import smith_normal_form, sparse_invariants


# beat points and cores ------------------------------------------------------

def beat_points(p: Poset) -> list[tuple[str, str]]:
    """All beat points as (id, "up" | "down"); an element may appear twice."""
    out = []
    alive = p.full_mask
    for i in range(p.n):
        d, u = beat_kind(p, i, alive)
        if d:
            out.append((p.elements[i], "down"))
        if u:
            out.append((p.elements[i], "up"))
    return out


def has_beat_points(p: Poset) -> bool:
    alive = p.full_mask
    return any(any(beat_kind(p, i, alive)) for i in range(p.n))


def core(p: Poset, rng=None) -> Poset:
    """Strip beat points until none remain (first in element order, or random)."""
    mask, _ = core_mask(p, rng=rng)
    return p.subspace_mask(mask)


def core_with_log(p: Poset, rng=None) -> tuple[Poset, list[str]]:
    mask, removed = core_mask(p, rng=rng)
    return p.subspace_mask(mask), [p.elements[i] for i in removed]


def is_contractible(p: Poset) -> bool:
    """Contractible finite space: its core is a single point."""
    if p.n == 0:
        return False
    mask, _ = core_mask(p)
    return mask & (mask - 1) == 0


def homotopy_equivalent(p: Poset, q: Poset) -> bool:
    return is_isomorphic(core(p), core(q))[0]


# words ------------------------------------------------------------------

def free_reduce(word) -> tuple[int, ...]:
    out: list[int] = []
    for a in word:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def cyclic_reduce(word) -> tuple[int, ...]:
    w = free_reduce(word)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def inverse(word) -> tuple[int, ...]:
    return tuple(-a for a in reversed(word))


def _cyclic_key(word) -> tuple[int, ...]:
    if not word or len(word) > 200:
        return tuple(word)
    cands = []
    for w in (word, inverse(word)):
        for k in range(len(w)):
            cands.append(w[k:] + w[:k])
    return min(cands)


@dataclass(frozen=True)
class GroupPresentation:
    """Generators by name; relators as words of signed 1-based generator indices."""

    generators: tuple
    relators: tuple

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(tuple(r) for r in self.relators))
        k = len(self.generators)
        for r in self.relators:
            for a in r:
                if a == 0 or abs(a) > k:
                    raise ValueError(f"relator letter {a} does not name a generator")

    def word_str(self, word) -> str:
        if not word:
            return "1"
        return "".join(self.generators[abs(a) - 1] + ("" if a > 0 else "^-1") + " " for a in word).strip()

    def to_json(self) -> dict:
        return {"generators": list(self.generators), "relators": [list(r) for r in self.relators]}

    def __str__(self):
        rels = ", ".join(self.word_str(r) for r in self.relators)
        return f"< {', '.join(self.generators)} | {rels} >"


@dataclass
class EdgePathData:
    """Spanning tree and path words behind a presentation (used by covers)."""

    root: str
    tree: list[tuple[str, str]]
    edge_letter: dict[tuple[int, int], int]
    words: dict[tuple[int, int], tuple[int, ...]]


def _path_words(p: Poset, edge_letter: dict) -> dict[tuple[int, int], tuple[int, ...]]:
    """Word along a canonical saturated chain for every comparable pair."""
    cm_up = [0] * p.n
    for i, cm in enumerate(p.cover_masks()):
        for j in bits(cm):
            cm_up[j] |= 1 << i
    words: dict[tuple[int, int], tuple[int, ...]] = {}
    ext = p.linear_extension()
    where = {v: t for t, v in enumerate(ext)}
    for z in ext:
        # top-down so that words[(c, z)] exists before it is needed
        for x in sorted(bits(p.down[z]), key=where.__getitem__, reverse=True):
            # first upper cover of x that lies below or at z
            reach = cm_up[x] & (p.down[z] | (1 << z))
            c = (reach & -reach).bit_length() - 1
            head = edge_letter.get((x, c))
            head = () if head is None else (head,)
            words[(x, z)] = head if c == z else head + words[(c, z)]
    return words


def edge_path_data(p: Poset) -> tuple[EdgePathData, list[tuple[str, str]]]:
    if not is_connected(p):
        raise NotConnected("fundamental group needs a connected poset")
    root = min(p.elements)
    r = p.idx(root)
    cms = p.cover_masks()
    adj = [0] * p.n
    for i, cm in enumerate(cms):
        adj[i] |= cm
        for j in bits(cm):
            adj[j] |= 1 << i
    seen = 1 << r
    tree = set()
    queue = deque([r])
    while queue:
        v = queue.popleft()
        for w in bits(adj[v] & ~seen):
            seen |= 1 << w
            tree.add((min(v, w), max(v, w)))
            queue.append(w)
    covers = p.sorted_covers()
    edge_letter = {}
    gens = []
    for x, y in covers:
        i, j = p.idx(x), p.idx(y)
        if (min(i, j), max(i, j)) in tree:
            continue
        gens.append((x, y))
        edge_letter[(i, j)] = len(gens)
    words = _path_words(p, edge_letter)
    tree_edges = [(x, y) for x, y in covers if (min(p.idx(x), p.idx(y)), max(p.idx(x), p.idx(y))) in tree]
    return EdgePathData(root, tree_edges, edge_letter, words), gens


def pi1_presentation(p: Poset, x0: str | None = None) -> GroupPresentation:
    """Edge-path presentation of pi_1(K(p)).

    Generators are Hasse edges outside a BFS spanning tree rooted at the
    lexicographically least element; each 2-chain x<y<z contributes the
    relator w(x,y) w(y,z) w(x,z)^-1.
    """
    if x0 is not None:
        p.idx(x0)
    data, gens = edge_path_data(p)
    words = data.words
    rels = []
    seen = set()
    for z in range(p.n):
        for y in bits(p.down[z]):
            wyz = words[(y, z)]
            for x in bits(p.down[y]):
                r = cyclic_reduce(words[(x, y)] + wyz + inverse(words[(x, z)]))
                if r and r not in seen:
                    seen.add(r)
                    rels.append(r)
    return GroupPresentation([f"{x}<{y}" for x, y in gens], rels)


@dataclass
class SimplifyResult:
    presentation: GroupPresentation
    status: str  # "free", "trivial" or "inconclusive"
    rank: int | None
    steps: int

    @property
    def label(self) -> str:
        if self.status == "free":
            return f"free_of_rank {self.rank}"
        return self.status

    def to_json(self) -> dict:
        return {"status": self.label, "rank": self.rank, "steps": self.steps, **self.presentation.to_json()}


def simplify_presentation(g: GroupPresentation, budget: int = 10_000, max_length: int = 100_000) -> SimplifyResult:
    """Tietze simplification: drop trivial relators, eliminate generators.

    A generator occurring exactly once in some relator is solved for and
    substituted everywhere.  The status is sound: "trivial" and "free" are
    only reported when the final presentation has no relators.
    """
    ngen = len(g.generators)
    names = list(g.generators)
    rels = [cyclic_reduce(r) for r in g.relators]
    steps = 0
    while True:
        uniq = {}
        for r in rels:
            if r:
                uniq.setdefault(_cyclic_key(r), r)
        rels = sorted(uniq.values(), key=lambda w: (len(w), w))
        if steps >= budget or not rels:
            break
        total = {}
        for r in rels:
            for a in r:
                total[abs(a)] = total.get(abs(a), 0) + 1
        best = None
        for ri, r in enumerate(rels):
            local = {}
            for a in r:
                local[abs(a)] = local.get(abs(a), 0) + 1
            for gen, c in local.items():
                if c != 1:
                    continue
                growth = (len(r) - 2) * (total[gen] - 1)
                key = (growth, len(r), gen)
                if best is None or key < best[0]:
                    best = (key, ri, gen)
        if best is None:
            break
        _, ri, gen = best
        r = rels[ri]
        k = next(t for t, a in enumerate(r) if abs(a) == gen)
        rot = r[k:] + r[:k]
        rest = rot[1:]
        repl = inverse(rest) if rot[0] > 0 else rest
        repl_inv = inverse(repl)
        new_rels = []
        length = 0
        for t, other in enumerate(rels):
            if t == ri:
                continue
            w = []
            for a in other:
                if a == gen:
                    w.extend(repl)
                elif a == -gen:
                    w.extend(repl_inv)
                else:
                    w.append(a)
            w = cyclic_reduce(w)
            length += len(w)
            new_rels.append(w)
        if length > max_length:
            break
        # renumber generators above gen
        rels = [tuple(a - 1 if a > gen else (a + 1 if a < -gen else a) for a in w) for w in new_rels]
        names.pop(gen - 1)
        ngen -= 1
        steps += 1
    pres = GroupPresentation(names, rels)
    if ngen == 0:
        return SimplifyResult(pres, "trivial", 0, steps)
    if not rels:
        return SimplifyResult(pres, "free", ngen, steps)
    return SimplifyResult(pres, "inconclusive", None, steps)


def relator_matrix(g: GroupPresentation) -> list[list[int]]:
    """Exponent-sum matrix: one row per relator, one column per generator."""
    rows = []
    for r in g.relators:
        row = [0] * len(g.generators)
        for a in r:
            row[abs(a) - 1] += 1 if a > 0 else -1
        rows.append(row)
    return rows


def abelianization(g: GroupPresentation) -> HomologyGroup:
    cols = []
    for r in g.relators:
        col: dict[int, int] = {}
        for a in r:
            col[abs(a) - 1] = col.get(abs(a) - 1, 0) + (1 if a > 0 else -1)
        cols.append(col)
    rank, tors = sparse_invariants(cols)
    return HomologyGroup(len(g.generators) - rank, tuple(tors))


def cyclic_images(g: GroupPresentation, k: int) -> dict[str, int] | None:
    """A surjection onto Z/k as generator images, or None if none exists.

    Read off the Smith form U R V = D of the relator matrix: column i of V
    works whenever k divides d_i (d_i = 0 beyond the rank).
    """
    m = len(g.generators)
    if m == 0:
        return None if k > 1 else {}
    R = relator_matrix(g)
    if not R:
        vec = [1] + [0] * (m - 1)
        return {name: v % k for name, v in zip(g.generators, vec)}
    snf = smith_normal_form(R, transforms=True)
    diag = snf.factors + [0] * (m - snf.rank)
    for i in range(m):
        if diag[i] % k == 0:
            vec = [snf.V[r][i] for r in range(m)]
            return {name: v % k for name, v in zip(g.generators, vec)}
    return None


def pi1_status(p: Poset, budget: int = 10_000) -> SimplifyResult:
    return simplify_presentation(pi1_presentation(p), budget)
