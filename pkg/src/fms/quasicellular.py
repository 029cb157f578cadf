"""Quasicellular pairs and their small chain complexes.

For an open A and a level map rho on X - A that is strictly increasing and
has H~(U^_x) concentrated in degree rho(x) - 1, the groups
C_n = sum over rho(x) = n of H~_{n-1}(U^_x) form a chain complex whose
homology is H_*(X, A).  Cycle representatives of the local groups are read
off Smith normal form transforms and cached per isomorphism type of U^_x.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .canonical import bit_list, bits
from .errors import InvalidStructure, NotOpen, NotQuasicellular, UnsupportedTorsion
from .homology import ChainComplex, HomologyGroup, ZERO, chain_complex, dense_boundary, relative_homology
from .poset import Poset, height
from .smith import matmul, smith_normal_form


@dataclass
class LocalBasis:
    """Basis of H~_k of a small poset given in canonical labels.

    ``generators`` are integer cycles (dict simplex -> coefficient);
    ``coords`` maps a k-cycle, as a vector over ``simplices``, to its
    coordinates in that basis.
    """

    degree: int
    simplices: list[tuple[int, ...]]
    generators: list[dict[tuple[int, ...], int]]
    coord_matrix: list[list[int]]
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        self.index = {s: j for j, s in enumerate(self.simplices)}

    @property
    def rank(self) -> int:
        return len(self.generators)

    def coords(self, chain: dict[tuple[int, ...], int]) -> list[int]:
        out = [0] * self.rank
        for s, v in chain.items():
            if not v:
                continue
            j = self.index[s]
            for r in range(self.rank):
                c = self.coord_matrix[r][j]
                if c:
                    out[r] += c * v
        return out


_BASIS_CACHE: dict = {}
_LOCAL_CACHE: dict = {}


def _compute_basis(q: Poset, k: int) -> LocalBasis:
    if k == -1:
        return LocalBasis(-1, [()], [{(): 1}], [[1]])
    cc = chain_complex(q, reduced=True)
    simplices = cc.bases.get(k, [])
    a = dense_boundary(cc, k)
    s1 = smith_normal_form(a, transforms=True) if a and a[0] else None
    ncols = len(simplices)
    if s1 is None:
        r = 0
        V = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
        Vi = V
    else:
        r, V, Vi = s1.rank, s1.V, s1.V_inv
    kernel_coords = Vi[r:]  # rows: kernel coordinates of a k-chain
    zcols = [[V[i][j] for j in range(r, ncols)] for i in range(ncols)]  # ncols x dimZ
    dim_z = ncols - r
    b = dense_boundary(cc, k + 1) if cc.bases.get(k + 1) else []
    if b and b[0]:
        bz = matmul(kernel_coords, b)
        s2 = smith_normal_form(bz, transforms=True)
        if s2.torsion:
            raise UnsupportedTorsion(f"local homology in degree {k} has torsion {s2.torsion}")
        r2 = s2.rank
        gens_z = [[s2.U_inv[i][j] for j in range(r2, dim_z)] for i in range(dim_z)]
        coord = matmul(s2.U, kernel_coords)[r2:]
    else:
        gens_z = [[int(i == j) for j in range(dim_z)] for i in range(dim_z)]
        coord = kernel_coords
    gens_vec = matmul(zcols, gens_z) if dim_z else []
    rank = len(coord)
    generators = []
    for g in range(rank):
        generators.append({simplices[i]: gens_vec[i][g] for i in range(ncols) if gens_vec[i][g]})
    return LocalBasis(k, simplices, generators, [list(row) for row in coord])


def local_analysis(p: Poset, i: int):
    """Concentration degree of H~(U^_i) (None if acyclic) and the cached basis key."""
    mask = p.down[i]
    q = p.subspace_mask(mask)
    if q.n == 0:
        return -1, HomologyGroup(1), q
    key = q.canonical_form()
    hit = _LOCAL_CACHE.get(key)
    if hit is None:
        groups = relative_homology(q, 0, reduced=True)
        nz = [(k, g) for k, g in enumerate(groups) if not g.is_zero]
        if not nz:
            hit = (None, ZERO)
        elif len(nz) > 1:
            hit = ("spread", tuple(k for k, _ in nz))
        else:
            hit = nz[0]
        _LOCAL_CACHE[key] = hit
    return hit[0], hit[1], q


def _basis_for(q: Poset, k: int):
    """Basis for H~_k(q) plus the maps canonical label <-> q index."""
    if q.n == 0:
        return _compute_basis(q, -1), [], {}
    form, pos = q.canonical()
    key = (q.n, form, k)
    basis = _BASIS_CACHE.get(key)
    if basis is None:
        canon = Poset([str(t) for t in range(q.n)], list(form))
        basis = _compute_basis(canon, k)
        _BASIS_CACHE[key] = basis
    to_q = [0] * q.n
    for t, c in enumerate(pos):
        to_q[c] = t
    return basis, to_q, {t: c for t, c in enumerate(pos)}


@dataclass
class QuasicellularStructure:
    """Level map rho on X - A, its levels, and local cycle generators.

    ``generators[x]`` lists integer cycles of K(U^_x) written with element
    ids, one per basis element of H~_{rho(x)-1}(U^_x).
    """

    rho: dict[str, int]
    levels: dict[int, frozenset]
    generators: dict[str, list[dict[tuple[str, ...], int]]]
    open_set: frozenset = frozenset()

    def to_json(self) -> dict:
        return {
            "rho": dict(sorted(self.rho.items())),
            "levels": {str(k): sorted(v) for k, v in sorted(self.levels.items())},
            "generators": {
                x: [[[list(s), c] for s, c in sorted(g.items())] for g in gens]
                for x, gens in sorted(self.generators.items())
            },
        }


def _open_mask(p: Poset, a) -> int:
    m = a if isinstance(a, int) else p.mask_of(a)
    if not p.is_open(m):
        raise NotOpen("the subspace A must be down-closed")
    return m


def find_quasicellular(p: Poset, a=()) -> QuasicellularStructure:
    """Greedy level assignment: forced by concentration degree, minimal otherwise."""
    amask = _open_mask(p, a)
    rho_idx: dict[int, int] = {}
    degs: dict[int, int] = {}
    for i in p.linear_extension():
        if amask >> i & 1:
            continue
        deg, grp, _ = local_analysis(p, i)
        if deg == "spread":
            raise NotQuasicellular(
                f"reduced homology of the down-set of {p.elements[i]!r} is not concentrated (degrees {grp})"
            )
        if deg is not None and grp.torsion:
            raise UnsupportedTorsion(f"local homology at {p.elements[i]!r} has torsion {grp.torsion}")
        lb = max((rho_idx[j] + 1 for j in bits(p.down[i] & ~amask)), default=0)
        if deg is None:
            rho_idx[i] = lb
        else:
            if deg + 1 < lb:
                raise NotQuasicellular(
                    f"level of {p.elements[i]!r} forced to {deg + 1} but elements below reach {lb - 1}"
                )
            rho_idx[i] = deg + 1
            degs[i] = deg
    rho = {p.elements[i]: r for i, r in rho_idx.items()}
    levels: dict[int, set] = {}
    for x, r in rho.items():
        levels.setdefault(r, set()).add(x)
    generators = {}
    for i in rho_idx:
        x = p.elements[i]
        if i not in degs:
            generators[x] = []
            continue
        q = p.subspace_mask(p.down[i])
        basis, to_q, _ = _basis_for(q, degs[i])
        qidx = bit_list(p.down[i])
        generators[x] = [
            {tuple(p.elements[qidx[to_q[c]]] for c in s): v for s, v in g.items()} for g in basis.generators
        ]
    return QuasicellularStructure(
        rho=rho,
        levels={k: frozenset(v) for k, v in levels.items()},
        generators=generators,
        open_set=frozenset(p.ids_of(amask)),
    )


def validate_structure(p: Poset, amask: int, q: QuasicellularStructure) -> None:
    rest = p.full_mask & ~amask
    if set(q.rho) != set(p.ids_of(rest)):
        raise InvalidStructure("rho must be defined exactly on X - A")
    for x, r in q.rho.items():
        i = p.idx(x)
        for j in bits(p.down[i] & rest):
            if q.rho[p.elements[j]] >= r:
                raise InvalidStructure(f"rho is not strictly increasing below {x!r}")


def quasicellular_chain_complex(p: Poset, a, q: QuasicellularStructure) -> ChainComplex:
    amask = _open_mask(p, a)
    validate_structure(p, amask, q)
    cc = ChainComplex()
    top = max(q.rho.values(), default=-1)
    info = {}
    for x, r in q.rho.items():
        i = p.idx(x)
        deg, grp, sub = local_analysis(p, i)
        if deg is None:
            continue
        if deg == "spread" or deg != r - 1:
            raise InvalidStructure(f"local homology at {x!r} is not concentrated in degree {r - 1}")
        if len(q.generators.get(x, [])) != grp.rank:
            raise InvalidStructure(f"wrong number of generators at {x!r}")
        basis, to_q, from_q = _basis_for(sub, deg)
        qidx = bit_list(p.down[i])
        info[i] = (basis, [qidx[to_q[c]] for c in range(sub.n)], {qidx[t]: c for t, c in from_q.items()})
    for n in range(top + 1):
        cc.bases[n] = [(p.elements[i], g) for i in sorted(info, key=lambda t: t) if q.rho[p.elements[i]] == n
                       for g in range(info[i][0].rank)]
    offset = {}
    for n in range(top + 1):
        for k, (x, g) in enumerate(cc.bases[n]):
            offset[(p.idx(x), g)] = k
    for n in range(1, top + 1):
        cols = []
        for x, g in cc.bases[n]:
            i = p.idx(x)
            basis, to_x, _ = info[i]
            col: dict[int, int] = {}
            per_y: dict[int, dict] = {}
            for s, v in basis.generators[g].items():
                sx = [to_x[c] for c in s]
                for y in sx:
                    if y not in info or q.rho[p.elements[y]] != n - 1:
                        continue
                    face = [w for w in sx if w != y]
                    sign = -1 if sum(1 for w in face if p.down[y] >> w & 1) % 2 else 1
                    from_y = info[y][2]
                    key = tuple(from_y[w] for w in face)
                    acc = per_y.setdefault(y, {})
                    acc[key] = acc.get(key, 0) + sign * v
            for y, chain in per_y.items():
                for gy, c in enumerate(info[y][0].coords(chain)):
                    if c:
                        col[offset[(y, gy)]] = c
            cols.append(col)
        cc.boundary[n] = cols
    return cc


def quasicellular_homology(p: Poset, a, q: QuasicellularStructure) -> list[HomologyGroup]:
    """Homology of the cellular complex, degrees 0..height(p)."""
    cc = quasicellular_chain_complex(p, a, q)
    if p.n == 0:
        return []
    top = height(p)
    hom = cc.homology(0, top) if cc.bases else {}
    return [hom.get(n, ZERO) for n in range(top + 1)]
