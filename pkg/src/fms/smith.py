"""Smith normal form over the integers.

Two engines:

* :func:`smith_normal_form` works on dense integer matrices (lists of rows)
  and optionally tracks unimodular transforms ``U A V = D`` with inverses.
* :func:`sparse_invariants` eliminates unit pivots on a sparse matrix first
  and hands the (usually tiny) remainder to the dense engine.  This is the
  workhorse for boundary matrices of order complexes.

Python integers are arbitrary precision, so there is no overflow to detect.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


@dataclass
class SNF:
    """Result of a Smith normal form computation.

    ``factors`` are the nonzero diagonal entries d1 | d2 | ... (all positive);
    ``rank`` is their count.  When transforms were requested ``U @ A @ V``
    equals the diagonal matrix and ``U_inv``, ``V_inv`` are the inverses.
    """

    factors: list[int]
    rank: int
    U: list[list[int]] | None = None
    V: list[list[int]] | None = None
    U_inv: list[list[int]] | None = None
    V_inv: list[list[int]] | None = None

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.factors if d > 1]


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(a, transforms: bool = False) -> SNF:
    """Smith normal form of a dense integer matrix given as a list of rows."""
    A = [list(map(int, row)) for row in a]
    m = len(A)
    n = len(A[0]) if m else 0
    if transforms:
        U, Ui = _identity(m), _identity(m)
        V, Vi = _identity(n), _identity(n)

    # row/column primitives mirrored on the transforms
    def row_add(i, j, k):  # row_i += k * row_j
        if k == 0:
            return
        Ai, Aj = A[i], A[j]
        for c in range(n):
            if Aj[c]:
                Ai[c] += k * Aj[c]
        if transforms:
            Ui_, Uj = U[i], U[j]
            for c in range(m):
                if Uj[c]:
                    Ui_[c] += k * Uj[c]
            for r in range(m):
                if Ui[r][i]:
                    Ui[r][j] -= k * Ui[r][i]

    def col_add(i, j, k):  # col_i += k * col_j
        if k == 0:
            return
        for r in range(m):
            if A[r][j]:
                A[r][i] += k * A[r][j]
        if transforms:
            for r in range(n):
                if V[r][j]:
                    V[r][i] += k * V[r][j]
            Vi_, Vj = Vi[i], Vi[j]
            for c in range(n):
                if Vi_[c]:
                    Vj[c] -= k * Vi_[c]

    def row_swap(i, j):
        if i == j:
            return
        A[i], A[j] = A[j], A[i]
        if transforms:
            U[i], U[j] = U[j], U[i]
            for r in range(m):
                Ui[r][i], Ui[r][j] = Ui[r][j], Ui[r][i]

    def col_swap(i, j):
        if i == j:
            return
        for r in range(m):
            A[r][i], A[r][j] = A[r][j], A[r][i]
        if transforms:
            for r in range(n):
                V[r][i], V[r][j] = V[r][j], V[r][i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_neg(i):
        A[i] = [-x for x in A[i]]
        if transforms:
            U[i] = [-x for x in U[i]]
            for r in range(m):
                Ui[r][i] = -Ui[r][i]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for r in range(t, m):
            row = A[r]
            for c in range(t, n):
                v = row[c]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), r, c)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, r, c = best
        row_swap(t, r)
        col_swap(t, c)
        while True:
            p = A[t][t]
            done = True
            for r in range(t + 1, m):
                if A[r][t]:
                    q = A[r][t] // p
                    row_add(r, t, -q)
                    if A[r][t]:
                        done = False
            for c in range(t + 1, n):
                if A[t][c]:
                    q = A[t][c] // p
                    col_add(c, t, -q)
                    if A[t][c]:
                        done = False
            if done:
                # divisibility: every remaining entry must be a multiple of p
                bad = None
                for r in range(t + 1, m):
                    for c in range(t + 1, n):
                        if A[r][c] % p:
                            bad = r
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                row_add(t, bad, 1)
                continue
            # move the smallest nonzero entry of row/column t to the pivot
            best = (abs(A[t][t]), t, t)
            for r in range(t + 1, m):
                v = A[r][t]
                if v and abs(v) < best[0]:
                    best = (abs(v), r, t)
            for c in range(t + 1, n):
                v = A[t][c]
                if v and abs(v) < best[0]:
                    best = (abs(v), t, c)
            row_swap(t, best[1])
            col_swap(t, best[2])
        if A[t][t] < 0:
            row_neg(t)
        t += 1
    factors = [A[i][i] for i in range(t)]
    if transforms:
        return SNF(factors, t, U, V, Ui, Vi)
    return SNF(factors, t)


def normalize_diagonal(diag: list[int]) -> list[int]:
    """Turn nonzero diagonal entries into an invariant-factor chain."""
    d = sorted(abs(x) for x in diag if x)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                if d[j] % d[i]:
                    g = gcd(d[i], d[j])
                    d[i], d[j] = g, d[i] * d[j] // g
                    changed = True
        d.sort()
    return d


def sparse_invariants(columns: list[dict[int, int]]) -> tuple[int, list[int]]:
    """Rank and torsion coefficients of a sparse integer matrix.

    ``columns[c]`` maps row index to entry.  Unit pivots are eliminated
    sparsely (fewest-entries rows first); the remainder goes to the dense
    engine.  Returns ``(rank, torsion)`` with torsion entries >= 2.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for c, col in enumerate(columns):
        live = {r: v for r, v in col.items() if v}
        if not live:
            continue
        cols[c] = set(live)
        for r, v in live.items():
            rows.setdefault(r, {})[c] = v
    rank = 0
    progress = True
    while progress:
        progress = False
        for c in sorted(cols, key=lambda k: len(cols[k])):
            if c not in cols:
                continue
            pivot_row = None
            best = None
            for r in cols[c]:
                v = rows[r][c]
                if v == 1 or v == -1:
                    if best is None or len(rows[r]) < best:
                        best = len(rows[r])
                        pivot_row = r
            if pivot_row is None:
                continue
            prow = rows.pop(pivot_row)
            pv = prow[c]
            for cc in prow:
                cols[cc].discard(pivot_row)
            for r in list(cols[c]):
                row = rows[r]
                f = row[c] * pv
                for cc, vv in prow.items():
                    nv = row.get(cc, 0) - f * vv
                    if nv:
                        if cc not in row:
                            cols[cc].add(r)
                        row[cc] = nv
                    elif cc in row:
                        del row[cc]
                        cols[cc].discard(r)
                if not row:
                    del rows[r]
            del cols[c]
            for cc in list(prow):
                if cc in cols and not cols[cc]:
                    del cols[cc]
            rank += 1
            progress = True
    if not cols:
        return rank, []
    rlist = sorted(rows)
    clist = sorted(cols)
    ridx = {r: i for i, r in enumerate(rlist)}
    cidx = {c: j for j, c in enumerate(clist)}
    dense = [[0] * len(clist) for _ in rlist]
    for r in rlist:
        for c, v in rows[r].items():
            dense[ridx[r]][cidx[c]] = v
    snf = smith_normal_form(dense)
    return rank + snf.rank, snf.torsion


def matmul(a, b):
    if not a:
        return []
    n = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * n
        for k, v in enumerate(row):
            if v:
                bk = b[k]
                for j in range(n):
                    if bk[j]:
                        acc[j] += v * bk[j]
        out.append(acc)
    return out
