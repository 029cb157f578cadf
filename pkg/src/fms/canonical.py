"""Canonical labeling of finite posets.

Color refinement on (color, colors below, colors above) followed by an
individualize-and-refine search.  The search prunes twin elements and uses
automorphisms discovered at equal leaves to skip symmetric branches.

Everything here works on raw bitmask data: ``down[i]`` is the bitmask of
elements strictly below ``i``.  The canonical form is the tuple of relabeled
down-set bitmasks, minimal over the leaves of the search tree.
"""

from __future__ import annotations


def bits(mask: int):
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bit_list(mask: int) -> list[int]:
    return list(bits(mask))


def up_masks(down: list[int]) -> list[int]:
    """Invert a list of strict down-set masks into strict up-set masks."""
    up = [0] * len(down)
    for i, d in enumerate(down):
        b = 1 << i
        for j in bits(d):
            up[j] |= b
    return up


def refine(dl, ul, colors):
    """Equitable refinement of a normalized coloring (colors 0..k-1).

    The relative order of existing cells is preserved, so the result is an
    isomorphism invariant whenever the input coloring is.
    """
    n = len(colors)
    k = len(set(colors))
    while True:
        keys = [
            (
                colors[i],
                tuple(sorted([colors[j] for j in dl[i]])),
                tuple(sorted([colors[j] for j in ul[i]])),
            )
            for i in range(n)
        ]
        uniq = sorted(set(keys))
        if len(uniq) == k:
            return colors
        rank = {key: r for r, key in enumerate(uniq)}
        colors = [rank[key] for key in keys]
        k = len(uniq)


def _individualize(colors, v):
    c = colors[v]
    out = [x + 1 if x > c else x for x in colors]
    for i, x in enumerate(colors):
        if x == c and i != v:
            out[i] = c + 1
    return out


def canonical_labeling(down, colors=None):
    """Return ``(form, pos)`` for the poset given by strict down-set masks.

    ``pos[i]`` is the canonical position of element ``i`` and ``form`` is the
    tuple of down-set masks in canonical positions.  An optional initial
    coloring (normalized ints) restricts labelings to color-preserving ones.
    """
    n = len(down)
    if n == 0:
        return (), []
    up = up_masks(down)
    dl = [bit_list(d) for d in down]
    ul = [bit_list(u) for u in up]
    if colors is None:
        colors = [0] * n
    else:
        uniq = sorted(set(colors))
        r = {c: i for i, c in enumerate(uniq)}
        colors = [r[c] for c in colors]

    best_form = None
    best_inv = None
    autos: list[list[int]] = []

    def leaf(pos):
        nonlocal best_form, best_inv
        form = [0] * n
        for i in range(n):
            m = 0
            for j in dl[i]:
                m |= 1 << pos[j]
            form[pos[i]] = m
        form = tuple(form)
        if best_form is None or form < best_form:
            best_form = form
            best_inv = [0] * n
            for i in range(n):
                best_inv[pos[i]] = i
            best_pos[:] = pos
        elif form == best_form:
            autos.append([best_inv[pos[i]] for i in range(n)])

    best_pos: list[int] = []

    def orbit_rep(members, fixed, explored, v):
        # union-find over the automorphisms that fix the current prefix
        parent = {m: m for m in members}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for g in autos:
            if any(g[s] != s for s in fixed):
                continue
            for m in members:
                gm = g[m]
                if gm in parent:
                    ra, rb = find(m), find(gm)
                    if ra != rb:
                        parent[ra] = rb
        rv = find(v)
        return any(find(u) == rv for u in explored)

    def search(colors, fixed):
        colors = refine(dl, ul, colors)
        counts: dict[int, int] = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        if len(counts) == n:
            leaf(colors)
            return
        target = min(c for c, k in counts.items() if k > 1)
        members = [i for i in range(n) if colors[i] == target]
        explored: list[int] = []
        for v in members:
            if any(down[u] == down[v] and up[u] == up[v] for u in explored):
                continue
            if autos and explored and orbit_rep(members, fixed, explored, v):
                continue
            search(_individualize(colors, v), fixed + [v])
            explored.append(v)

    search(colors, [])
    return best_form, list(best_pos)


def canonical_form(down, colors=None):
    return canonical_labeling(down, colors)[0]
