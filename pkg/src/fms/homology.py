"""Order complexes, chain complexes and integral homology of finite posets.

Simplices of the order complex are the nonempty chains, written in
increasing order.  Homology of a pair (X, A) is computed from the relative
chain complex; for open or closed A a cone point is attached instead, which
keeps the computation on a (smaller) core.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

from .canonical import bits
from .errors import NotOpen
from .poset import Poset, core_mask, height
from .smith import sparse_invariants, smith_normal_form


@dataclass(frozen=True)
class HomologyGroup:
    """Finitely generated abelian group Z^rank + sum of Z/d."""

    rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if any(d < 2 for d in self.torsion):
            raise ValueError("torsion coefficients must be at least 2")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError("torsion coefficients must form a divisibility chain")

    @property
    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return "+".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    def direct_sum(self, other: "HomologyGroup") -> "HomologyGroup":
        from .smith import normalize_diagonal

        return HomologyGroup(self.rank + other.rank, tuple(normalize_diagonal(list(self.torsion) + list(other.torsion))))

    def times(self, k: int) -> "HomologyGroup":
        """Direct sum of k copies."""
        return reduce(HomologyGroup.direct_sum, [self] * k, HomologyGroup())


ZERO = HomologyGroup()
Z = HomologyGroup(1)


def groups_from_ranks(ranks, torsion=None) -> list[HomologyGroup]:
    torsion = torsion or {}
    return [HomologyGroup(r, tuple(torsion.get(i, ()))) for i, r in enumerate(ranks)]


@dataclass
class SimplicialComplex:
    """Vertices in a fixed linear order; simplices per dimension."""

    vertices: list[str]
    simplices: list[list[tuple[str, ...]]]

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.simplices)

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1


@dataclass
class ChainComplex:
    """Free chain complex with sparse boundary matrices.

    ``bases[n]`` labels the basis of C_n; ``boundary[n][j]`` is the column of
    the n-th boundary for basis element j, as a dict row index -> entry.
    """

    bases: dict[int, list] = field(default_factory=dict)
    boundary: dict[int, list[dict[int, int]]] = field(default_factory=dict)

    def degrees(self) -> range:
        if not self.bases:
            return range(0)
        return range(min(self.bases), max(self.bases) + 1)

    def rank(self, n: int) -> int:
        return len(self.bases.get(n, ()))

    def check(self) -> bool:
        """True iff every composite of consecutive boundaries is zero."""
        for n, cols in self.boundary.items():
            lower = self.boundary.get(n - 1)
            if lower is None:
                continue
            for col in cols:
                acc: dict[int, int] = {}
                for r, v in col.items():
                    for rr, vv in lower[r].items():
                        acc[rr] = acc.get(rr, 0) + v * vv
                if any(acc.values()):
                    return False
        return True

    def triplets(self, n: int) -> list[tuple[int, int, int]]:
        """Boundary of degree n as (row, col, value) triplets."""
        return [(r, c, v) for c, col in enumerate(self.boundary.get(n, [])) for r, v in sorted(col.items())]

    def homology(self, lo: int | None = None, hi: int | None = None) -> dict[int, HomologyGroup]:
        degs = self.degrees()
        if lo is None:
            lo = degs.start if degs else 0
        if hi is None:
            hi = degs.stop - 1 if degs else -1
        inv = {}

        def invariants(n):
            if n not in inv:
                cols = self.boundary.get(n)
                inv[n] = sparse_invariants(cols) if cols else (0, [])
            return inv[n]

        out = {}
        for n in range(lo, hi + 1):
            r_out, _ = invariants(n)
            r_in, tors = invariants(n + 1)
            out[n] = HomologyGroup(self.rank(n) - r_out - r_in, tuple(tors))
        return out


# chains --------------------------------------------------------------------

def chains_in(p: Poset, mask: int | None = None) -> list[list[tuple[int, ...]]]:
    """Nonempty chains of the subposet on ``mask`` grouped by dimension."""
    if mask is None:
        mask = p.full_mask
    out: list[list[tuple[int, ...]]] = []
    up = p.up

    def extend(ch, last):
        k = len(ch) - 1
        while len(out) <= k:
            out.append([])
        out[k].append(ch)
        for j in bits(up[last] & mask):
            extend(ch + (j,), j)

    for i in p.linear_extension():
        if mask >> i & 1:
            extend((i,), i)
    return out


def chain_counts(p: Poset, mask: int | None = None) -> list[int]:
    """Number of chains per dimension without listing them."""
    if mask is None:
        mask = p.full_mask
    ending: dict[int, list[int]] = {}
    counts: list[int] = []
    for i in p.linear_extension():
        if not mask >> i & 1:
            continue
        vec = [1]
        for j in bits(p.down[i] & mask):
            f = ending[j]
            if len(vec) < len(f) + 1:
                vec += [0] * (len(f) + 1 - len(vec))
            for k, v in enumerate(f):
                vec[k + 1] += v
        ending[i] = vec
        if len(counts) < len(vec):
            counts += [0] * (len(vec) - len(counts))
        for k, v in enumerate(vec):
            counts[k] += v
    return counts


def order_complex(p: Poset) -> SimplicialComplex:
    order = p.linear_extension()
    return SimplicialComplex(
        vertices=[p.elements[i] for i in order],
        simplices=[[tuple(p.elements[i] for i in ch) for ch in dim] for dim in chains_in(p)],
    )


def euler_characteristic(p: Poset) -> int:
    return sum((-1) ** k * c for k, c in enumerate(chain_counts(p)))


def barycentric_subdivision(p: Poset) -> Poset:
    """Poset of nonempty chains ordered by inclusion; ids ``[a,b,...]``."""
    all_chains = [ch for dim in chains_in(p) for ch in dim]
    index = {ch: k for k, ch in enumerate(all_chains)}
    down = []
    for ch in all_chains:
        m = 0
        size = len(ch)
        for sub in range(1, (1 << size) - 1):
            face = tuple(ch[t] for t in range(size) if sub >> t & 1)
            m |= 1 << index[face]
        down.append(m)
    ids = ["[" + ",".join(p.elements[i] for i in ch) + "]" for ch in all_chains]
    return Poset(ids, down)


def chain_complex(p: Poset, mask: int | None = None, rel: int = 0, reduced: bool = False) -> ChainComplex:
    """Simplicial chain complex of the chains in ``mask`` modulo those in ``rel``.

    With ``reduced`` (and empty ``rel``) the empty chain spans degree -1.
    """
    if mask is None:
        mask = p.full_mask
    rel &= mask
    dims = chains_in(p, mask)
    cc = ChainComplex()
    index: list[dict] = []
    for k, simplices in enumerate(dims):
        keep = [s for s in simplices if any(not rel >> v & 1 for v in s)] if rel else simplices
        cc.bases[k] = keep
        index.append({s: j for j, s in enumerate(keep)})
    if reduced and not rel:
        cc.bases[-1] = [()]
        if dims:
            cc.boundary[0] = [{0: 1} for _ in cc.bases[0]]
    for k in range(1, len(dims)):
        lower = index[k - 1]
        cols = []
        for s in cc.bases[k]:
            col = {}
            for t in range(len(s)):
                face = s[:t] + s[t + 1:]
                r = lower.get(face)
                if r is not None:
                    col[r] = -1 if t % 2 else 1
            cols.append(col)
        cc.boundary[k] = cols
    return cc


def _pad(groups: dict[int, HomologyGroup], top: int) -> list[HomologyGroup]:
    return [groups.get(n, ZERO) for n in range(top + 1)]


def _direct(p: Poset, mask: int, rel: int, reduced: bool, top: int) -> list[HomologyGroup]:
    cc = chain_complex(p, mask, rel, reduced)
    return _pad(cc.homology(0, top), top)


def _cone(p: Poset, a: int, above: bool) -> Poset:
    """Attach a point above (a open) or below (a closed) exactly the set a."""
    n = p.n
    v = 1 << n
    if above:
        down = list(p.down) + [a]
    else:
        down = [d | v if a >> i & 1 else d for i, d in enumerate(p.down)] + [0]
    return Poset(list(p.elements) + ["*cone*"], down)


def _reduced_core_homology(p: Poset, top: int) -> list[HomologyGroup]:
    mask, _ = core_mask(p)
    q = p.subspace_mask(mask)
    if q.n == 1:
        return [ZERO] * (top + 1)
    return _direct(q, q.full_mask, 0, True, top)


def relative_homology(p: Poset, a, method: str = "core", reduced: bool = False) -> list[HomologyGroup]:
    """H_n(K(p), K(a)) for any subset ``a`` (ids or bitmask), n = 0..height(p).

    ``method="direct"`` always uses the plain relative chain complex.
    """
    if p.n == 0:
        return []
    amask = a if isinstance(a, int) else p.mask_of(a)
    top = height(p)
    if method == "direct":
        return _direct(p, p.full_mask, amask, reduced, top)
    if amask == 0:
        if reduced:
            return _reduced_core_homology(p, top)
        mask, _ = core_mask(p)
        q = p.subspace_mask(mask)
        return _direct(q, q.full_mask, 0, False, top)
    if amask == p.full_mask:
        return [ZERO] * (top + 1)
    if p.is_open(amask):
        return _reduced_core_homology(_cone(p, amask, True), top)
    if p.is_closed(amask):
        return _reduced_core_homology(_cone(p, amask, False), top)
    return _direct(p, p.full_mask, amask, reduced, top)


def homology(p: Poset, rel=None, reduced: bool = False, method: str = "core") -> list[HomologyGroup]:
    """Integral homology H_0..H_height of K(p), or of the pair (p, rel).

    ``rel`` must be open.  ``method="core"`` first strips beat points, which
    preserves homotopy type; ``method="direct"`` works on p itself.
    """
    if rel is not None:
        amask = rel if isinstance(rel, int) else p.mask_of(rel)
        if not p.is_open(amask):
            raise NotOpen("relative subspace must be down-closed")
        return relative_homology(p, amask, method=method, reduced=reduced)
    return relative_homology(p, 0, method=method, reduced=reduced)


def betti_numbers(groups: list[HomologyGroup]) -> list[int]:
    return [g.rank for g in groups]


def homology_over_field(groups: list[HomologyGroup], prime: int) -> list[int]:
    """Betti numbers with F_p coefficients via universal coefficients."""
    out = []
    for n, g in enumerate(groups):
        tors_here = sum(1 for d in g.torsion if d % prime == 0)
        tors_below = sum(1 for d in groups[n - 1].torsion if d % prime == 0) if n > 0 else 0
        out.append(g.rank + tors_here + tors_below)
    return out


def format_groups(groups: list[HomologyGroup]) -> str:
    return " ".join(f"H{n}={g}" for n, g in enumerate(groups))


def homology_report(p: Poset, groups: list[HomologyGroup] | None = None) -> dict:
    if groups is None:
        groups = homology(p)
    return {"H": [g.to_json() for g in groups], "euler": euler_characteristic(p)}


def dense_boundary(cc: ChainComplex, n: int) -> list[list[int]]:
    rows = cc.rank(n - 1)
    cols = cc.boundary.get(n, [])
    mat = [[0] * len(cols) for _ in range(rows)]
    for j, col in enumerate(cols):
        for r, v in col.items():
            mat[r][j] = v
    return mat
