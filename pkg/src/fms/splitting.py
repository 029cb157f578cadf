"""Splitting triads, S1/S2 certificates and the counting statistics behind them.

A splitting triad (X; C, D) covers X by two subspaces such that every
component of D includes trivially on fundamental groups.  S1 asks the same
of C; S2 asks that the components of C be weakly contractible except for at
most one weak circle.  Certificates are sound but incomplete: a component is
certified only through explicit evidence, and refuted only through homology.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .canonical import bits
from .errors import HasBeatPoints, NotACover, NotConnected, NotMaximal
from .homology import HomologyGroup, homology_over_field, relative_homology
from .homotopy import has_beat_points, pi1_presentation, simplify_presentation
from .poset import Poset, component_masks, core_mask, is_connected, maximal_mask, minimal_mask

S1, S2, TRIAD = "S1", "S2", "triad-validity"
CERTIFIED, REFUTED, INCONCLUSIVE = "certified", "refuted-by-evidence", "inconclusive"


def _popcount(m: int) -> int:
    return bin(m).count("1")


# statistics ------------------------------------------------------------------

@dataclass
class SplittingStats:
    m: int
    n: int
    l: int
    B: frozenset
    mxl: frozenset
    mnl: frozenset
    alpha: dict
    beta: dict
    S: frozenset  # pairs (b, a) with b not below a
    R: frozenset  # pairs (b, (x, y)) with b not below x and not above y
    sigma: dict  # a -> Fraction
    V: dict
    W: dict

    def S_of(self, b) -> set:
        return {a for bb, a in self.S if bb == b}

    def S_inv(self, a) -> set:
        return {b for b, aa in self.S if aa == a}

    def R_inv(self, x, y) -> set:
        return {b for b, xy in self.R if xy == (x, y)}

    def to_json(self) -> dict:
        return {
            "m": self.m, "n": self.n, "l": self.l,
            "B": sorted(self.B),
            "alpha": dict(sorted(self.alpha.items())),
            "beta": dict(sorted(self.beta.items())),
            "sigma": {a: str(v) for a, v in sorted(self.sigma.items())},
            "S_size": len(self.S), "R_size": len(self.R),
        }


def splitting_stats(p: Poset) -> SplittingStats:
    if not is_connected(p):
        raise NotConnected("splitting statistics need a connected poset")
    mx, mn = maximal_mask(p), minimal_mask(p)
    bm = p.full_mask & ~(mx | mn)
    ids = p.elements
    B = [ids[i] for i in bits(bm)]
    mxl = [ids[i] for i in bits(mx)]
    mnl = [ids[i] for i in bits(mn)]
    alpha = {ids[b]: _popcount(p.up[b] & mx) for b in bits(bm)}
    beta = {ids[b]: _popcount(p.down[b] & mn) for b in bits(bm)}
    S = set()
    R = set()
    for b in bits(bm):
        for a in bits(mx):
            if not p.down[a] >> b & 1:
                S.add((ids[b], ids[a]))
                for y in bits(mn):
                    if not p.down[b] >> y & 1:
                        R.add((ids[b], (ids[a], ids[y])))
    s_count = {b: 0 for b in B}
    for b, _ in S:
        s_count[b] += 1
    sigma = {a: Fraction(0) for a in mxl}
    for b, a in S:
        sigma[a] += Fraction(1, s_count[b])
    V, W = {}, {}
    for a in bits(mx):
        u = p.down[a] | (1 << a)
        V[ids[a]] = frozenset(p.ids_of(u | mn))
        W[ids[a]] = frozenset(p.ids_of(u | mn | mx))
    return SplittingStats(
        m=len(mxl), n=len(mnl), l=len(B), B=frozenset(B), mxl=frozenset(mxl), mnl=frozenset(mnl),
        alpha=alpha, beta=beta, S=frozenset(S), R=frozenset(R), sigma=sigma, V=V, W=W,
    )


def incomparable_witness(p: Poset, a: str):
    """First pair of incomparable elements outside W_a, or None."""
    i = p.idx(a)
    if p.up[i]:
        raise NotMaximal(f"{a!r} is not maximal")
    mx, mn = maximal_mask(p), minimal_mask(p)
    rest = p.full_mask & ~(p.down[i] | (1 << i) | mx | mn)
    rl = list(bits(rest))
    for s, x in enumerate(rl):
        for y in rl[s + 1:]:
            if not (p.down[x] >> y & 1 or p.down[y] >> x & 1):
                return p.elements[x], p.elements[y]
    return None


# triads and certificates -------------------------------------------------

@dataclass(frozen=True)
class SplittingTriad:
    C: frozenset
    D: frozenset

    def to_json(self) -> dict:
        return {"C": sorted(self.C), "D": sorted(self.D)}


def make_triad(p: Poset, C, D=None) -> SplittingTriad:
    C = frozenset(C)
    D = frozenset(p.elements) - C if D is None else frozenset(D)
    for x in C | D:
        p.idx(x)
    if not C or not D or (C | D) != frozenset(p.elements):
        raise NotACover("C and D must be nonempty and cover the poset")
    return SplittingTriad(C, D)


@dataclass
class Evidence:
    """Evidence attached to one component of C or D."""

    side: str
    component: tuple
    kind: str
    status: str
    witness: tuple = ()
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"side": self.side, "component": list(self.component), "kind": self.kind, "status": self.status}
        if self.witness:
            out["witness"] = list(self.witness)
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Certificate:
    property: str
    triad: SplittingTriad
    evidence: list[Evidence]
    verdict: str

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED

    def to_json(self) -> dict:
        return {
            "property": self.property,
            "triad": self.triad.to_json(),
            "verdict": self.verdict,
            "components": [e.to_json() for e in self.evidence],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


@dataclass
class NoneFound:
    reason: str  # "exhausted", "candidates-exhausted" or "budget"
    property: str
    examined: int
    refuted: int = 0

    verdict = "none-found"
    certified = False

    def to_json(self) -> dict:
        return {"property": self.property, "verdict": "none-found", "reason": self.reason,
                "examined": self.examined, "refuted": self.refuted}


class _Evaluator:
    """Per-poset caches for component-level certificates."""

    def __init__(self, p: Poset, budget: int = 10_000):
        self.p = p
        self.budget = budget
        self._core: dict[int, int] = {}
        self._pres: dict = {}
        self._hom: dict = {}
        self._trivial: dict[int, Evidence | None] = {}
        self._ambient = None
        self._witnesses = None
        self._h1 = None

    def core(self, mask: int) -> int:
        c = self._core.get(mask)
        if c is None:
            c, _ = core_mask(self.p, mask)
            self._core[mask] = c
        return c

    def contractible(self, mask: int) -> bool:
        c = self.core(mask)
        return c != 0 and c & (c - 1) == 0

    def witnesses(self) -> list[int]:
        """Contractible subspaces used as containers, smallest first."""
        if self._witnesses is None:
            p = self.p
            cands = set()
            full = p.full_mask
            us = [p.down[i] | (1 << i) for i in range(p.n)]
            fs = [p.up[i] | (1 << i) for i in range(p.n)]
            for i in range(p.n):
                cands.add(us[i] | fs[i])  # C_x always contractible
                cands.add(us[i])
                cands.add(fs[i])
            mx = list(bits(maximal_mask(p)))
            mn = list(bits(minimal_mask(p)))
            for s, a in enumerate(mx):
                for b in mx[s + 1:]:
                    if self.contractible(us[a] | us[b]):
                        cands.add(us[a] | us[b])
            for s, a in enumerate(mn):
                for b in mn[s + 1:]:
                    if self.contractible(fs[a] | fs[b]):
                        cands.add(fs[a] | fs[b])
            if self.contractible(full):
                cands.add(full)
            self._witnesses = sorted(cands, key=lambda m: (_popcount(m), m))
        return self._witnesses

    def _canon_core(self, mask: int) -> tuple[Poset, tuple]:
        q = self.p.subspace_mask(self.core(mask))
        return q, q.canonical_form()

    def presentation_status(self, mask: int):
        q, key = self._canon_core(mask)
        st = self._pres.get(key)
        if st is None:
            st = simplify_presentation(pi1_presentation(q), self.budget)
            self._pres[key] = st
        return st

    def reduced_homology(self, mask: int) -> list[HomologyGroup]:
        q, key = self._canon_core(mask)
        h = self._hom.get(key)
        if h is None:
            h = relative_homology(q, 0, reduced=True) if q.n > 1 else []
            self._hom[key] = h
        return h

    def ambient_trivial(self) -> bool:
        if self._ambient is None:
            full = self.p.full_mask
            self._ambient = self.contractible(full) or self.presentation_status(full).status == "trivial"
        return self._ambient

    def trivial_inclusion(self, mask: int, side: str) -> Evidence | None:
        """Certify that the component ``mask`` includes trivially on pi_1."""
        if mask in self._trivial:
            ev = self._trivial[mask]
            return None if ev is None else Evidence(side, ev.component, ev.kind, ev.status, ev.witness, ev.detail)
        p = self.p
        comp = tuple(p.ids_of(mask))
        ev = None
        if self.contractible(mask):
            ev = Evidence(side, comp, "ContractibleCore", CERTIFIED)
        else:
            c = self.core(mask)
            for w in self.witnesses():
                if mask & ~w == 0 or c & ~w == 0:
                    detail = {} if mask & ~w == 0 else {"via": "core of component"}
                    ev = Evidence(side, comp, "ContainedInContractible", CERTIFIED, tuple(p.ids_of(w)), detail)
                    break
            if ev is None and self.ambient_trivial():
                ev = Evidence(side, comp, "PresentationTrivial", CERTIFIED, detail={"scope": "ambient"})
            if ev is None and self.presentation_status(mask).status == "trivial":
                ev = Evidence(side, comp, "PresentationTrivial", CERTIFIED, detail={"scope": "component"})
        self._trivial[mask] = ev
        return ev

    def h1_data(self):
        if self._h1 is None:
            hx = relative_homology(self.p, 0)
            primes = {2, 3}
            for g in hx:
                for d in g.torsion:
                    k = 2
                    while k * k <= d:
                        while d % k == 0:
                            primes.add(k)
                            d //= k
                        k += 1
                    if d > 1:
                        primes.add(d)
            self._h1 = (hx, sorted(primes))
        return self._h1

    def refute_inclusion(self, mask: int, side: str) -> Evidence | None:
        """Nonzero image of H_1(K; F) in H_1(X; F) for F = Q or F_p."""
        hx, primes = self.h1_data()
        if len(hx) < 2:
            return None
        hxk = relative_homology(self.p, mask)
        if len(hxk) < 2:
            return None
        comp = tuple(self.p.ids_of(mask))
        if hx[1].rank - hxk[1].rank > 0:
            return Evidence(side, comp, "NontrivialOnH1", REFUTED, detail={"field": "Q"})
        for q in primes:
            bx = homology_over_field(hx, q)[1]
            bxk = homology_over_field(hxk, q)[1]
            if bx - bxk > 0:
                return Evidence(side, comp, "NontrivialOnH1", REFUTED, detail={"field": f"F{q}"})
        return None

    def classify_s2(self, mask: int) -> Evidence:
        """Weakly contractible, weak circle, refuted by homology, or unknown."""
        p = self.p
        comp = tuple(p.ids_of(mask))
        if self.contractible(mask):
            return Evidence("C", comp, "ContractibleCore", CERTIFIED)
        h = self.reduced_homology(mask)
        nonzero = [(k, g) for k, g in enumerate(h) if not g.is_zero]
        hstr = [str(g) for g in h]
        if not nonzero:
            st = self.presentation_status(mask)
            if st.status == "trivial":
                return Evidence("C", comp, "WeaklyContractible", CERTIFIED, detail={"homology": hstr, "pi1": st.label})
            return Evidence("C", comp, "WeaklyContractible", INCONCLUSIVE, detail={"homology": hstr, "pi1": st.label})
        if len(nonzero) == 1 and nonzero[0][0] == 1 and nonzero[0][1] == HomologyGroup(1):
            st = self.presentation_status(mask)
            if st.status == "free" and st.rank == 1:
                return Evidence("C", comp, "WeakCircle", CERTIFIED, detail={"homology": hstr, "pi1": st.label})
            return Evidence("C", comp, "WeakCircle", INCONCLUSIVE, detail={"homology": hstr, "pi1": st.label})
        return Evidence("C", comp, "HomologyObstruction", REFUTED, detail={"homology": hstr})


def _components(p: Poset, ids) -> list[int]:
    return component_masks(p, p.mask_of(ids))


def _combine(evs: list[Evidence]) -> str:
    if any(e.status == REFUTED for e in evs):
        return REFUTED
    if all(e.status == CERTIFIED for e in evs):
        return CERTIFIED
    return INCONCLUSIVE


def _check(ev: _Evaluator, triad: SplittingTriad, prop: str, refute: bool = True) -> Certificate:
    p = ev.p
    evidence: list[Evidence] = []

    def inclusion(mask, side):
        e = ev.trivial_inclusion(mask, side)
        if e is None and refute:
            e = ev.refute_inclusion(mask, side)
        if e is None:
            e = Evidence(side, tuple(p.ids_of(mask)), "Unknown", INCONCLUSIVE)
        return e

    for mask in _components(p, triad.D):
        evidence.append(inclusion(mask, "D"))
    if prop == S1:
        for mask in _components(p, triad.C):
            evidence.append(inclusion(mask, "C"))
    elif prop == S2:
        cs = [ev.classify_s2(mask) for mask in _components(p, triad.C)]
        circles = [e for e in cs if e.kind in ("WeakCircle", "HomologyObstruction")]
        if len(circles) > 1:
            for e in circles:
                if e.status != REFUTED:
                    e.status = REFUTED
                    e.detail = {**e.detail, "reason": "more than one component with nonzero homology"}
        evidence.extend(cs)
    return Certificate(prop, triad, evidence, _combine(evidence))


def check_triad(p: Poset, t: SplittingTriad, prop: str = S1, budget: int = 10_000) -> Certificate:
    """Certify (or refute) S1, S2 or plain triad validity for a given triad."""
    if prop not in (S1, S2, TRIAD):
        raise ValueError(f"unknown property {prop!r}")
    if not t.C or not t.D or (t.C | t.D) != frozenset(p.elements):
        raise NotACover("C and D must be nonempty and cover the poset")
    return _check(_Evaluator(p, budget), t, prop)


def _heuristic_triads(p: Poset) -> list[tuple[int, int]]:
    """Candidate (C, D) masks drawn from the families used in minimality proofs."""
    full = p.full_mask
    mx, mn = maximal_mask(p), minimal_mask(p)
    us = [p.down[i] | (1 << i) for i in range(p.n)]
    fs = [p.up[i] | (1 << i) for i in range(p.n)]
    out: list[tuple[int, int]] = []

    def add(c, d=None):
        if d is None:
            d = full & ~c
        if c and d and (c | d) == full:
            out.append((c, d))

    add(mx)
    add(mn)
    for a in bits(mx):
        v = us[a] | mn
        w = v | mx
        for c in (v, w, us[a]):
            add(c)
            add(full & ~c)
        add(full & ~us[a], us[a])
        for b in bits(mx):
            if b > a:
                add(us[a], us[b])
        for y in bits(mn):
            g = fs[y] | mx
            add(v, g)
            add(g, v)
    for y in bits(mn):
        g = fs[y] | mx
        add(g)
        add(full & ~g)
        for z in bits(mn):
            if z > y:
                add(fs[y], fs[z])
    for b in range(p.n):
        cb = us[b] | fs[b]
        add(cb)
        add(full & ~cb)
    if _popcount(mx) == 1:
        add(mx, full)
    seen = set()
    uniq = []
    for t in out:
        if t not in seen:
            seen.add(t)
            uniq.append(t)
    return uniq


def search_certificate(p: Poset, prop: str = S1, strategy: str = "heuristic", budget: int = 1 << 20):
    """First certified triad, or :class:`NoneFound`.

    ``exhaustive`` walks every C (as a bitmask over the element order, least
    first) with D = X - C; ``heuristic`` tries proof-inspired families.
    ``budget`` caps the number of triads examined.
    """
    if not is_connected(p):
        raise NotConnected("search needs a connected poset")
    ev = _Evaluator(p)
    full = p.full_mask
    examined = 0
    refuted = 0
    if strategy == "heuristic":
        cands = _heuristic_triads(p)
    elif strategy == "exhaustive":
        cands = ((c, full & ~c) for c in range(1, full))
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    for c, d in cands:
        if examined >= budget:
            return NoneFound("budget", prop, examined, refuted)
        examined += 1
        quick = _quick_pass(ev, p, c, d, prop)
        if quick is not True:
            refuted += quick == REFUTED
            continue
        t = SplittingTriad(frozenset(p.ids_of(c)), frozenset(p.ids_of(d)))
        cert = _check(ev, t, prop, refute=False)
        if cert.certified:
            return cert
    reason = "exhausted" if strategy == "exhaustive" else "candidates-exhausted"
    return NoneFound(reason, prop, examined, refuted)


def _quick_pass(ev: _Evaluator, p: Poset, c: int, d: int, prop: str):
    """Cheap necessary conditions before assembling a certificate.

    Returns True, REFUTED when C's homology rules out S2, or INCONCLUSIVE
    when some component has no trivial-inclusion evidence.
    """
    if prop == S2:
        nonzero = 0
        for mask in component_masks(p, c):
            if ev.contractible(mask):
                continue
            h = ev.reduced_homology(mask)
            nz = [(k, g) for k, g in enumerate(h) if not g.is_zero]
            if nz:
                if len(nz) > 1 or nz[0][0] != 1 or nz[0][1] != HomologyGroup(1):
                    return REFUTED
                nonzero += 1
                if nonzero > 1:
                    return REFUTED
    sides = [d, c] if prop == S1 else [d]
    for side in sides:
        for mask in component_masks(p, side):
            if ev.trivial_inclusion(mask, "D") is None:
                return INCONCLUSIVE
    return True


# lemma predicates ---------------------------------------------------------

@dataclass
class LemmaCheck:
    name: str
    statement: str
    holds: bool | None
    equality: bool | None = None
    equality_condition: bool | None = None
    values: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        if self.holds is False:
            return False
        if self.equality and self.equality_condition is False:
            return False
        return True

    def to_json(self) -> dict:
        return {"name": self.name, "statement": self.statement, "holds": self.holds, "equality": self.equality,
                "equality_condition": self.equality_condition, "values": self.values}


@dataclass
class LemmaReport:
    assume_not: str
    applicable: bool
    checks: list[LemmaCheck]
    stats: SplittingStats

    @property
    def all_hold(self) -> bool:
        return all(c.consistent for c in self.checks)

    def get(self, name: str) -> LemmaCheck:
        return next(c for c in self.checks if c.name == name)

    def to_json(self) -> dict:
        return {"assume_not": self.assume_not, "applicable": self.applicable,
                "checks": [c.to_json() for c in self.checks], "stats": self.stats.to_json()}


def lemma_bounds_report(p: Poset, assume_not: str = S1) -> LemmaReport:
    """Evaluate the counting inequalities that follow from failing S1 or S2.

    Each check records whether the inequality holds on ``p`` and, when it is
    tight, whether the accompanying equality condition is met.  All
    arithmetic is exact.
    """
    if has_beat_points(p):
        raise HasBeatPoints("lemma bounds need a beat-point-free poset")
    st = splitting_stats(p)
    m, n, l = st.m, st.n, st.l
    if m < 3 or n < 3:
        return LemmaReport(assume_not, False, [], st)
    F = Fraction
    checks: list[LemmaCheck] = []
    mxl, mnl, B = sorted(st.mxl), sorted(st.mnl), sorted(st.B)
    alpha, beta = st.alpha, st.beta
    s_size = {b: len(st.S_of(b)) for b in B}
    s_inv = {a: st.S_inv(a) for a in mxl}
    r_inv = {(x, y): st.R_inv(x, y) for x in mxl for y in mnl}
    a2b2 = all(alpha[b] == 2 and beta[b] == 2 for b in B)

    if assume_not == S1:
        wit = {a: incomparable_witness(p, a) for a in mxl}
        cond2 = True
        for a in mxl:
            i = p.idx(a)
            rest = p.full_mask & ~(p.down[i] | (1 << i) | maximal_mask(p) | minimal_mask(p))
            if _popcount(rest) == 2:
                x, y = bits(rest)
                if (p.down[x] | (1 << x)) & (p.down[y] | (1 << y)):
                    cond2 = False
        checks.append(LemmaCheck(
            "incomparable-outside-W",
            "for every maximal a there are incomparable b1, b2 outside W_a; if exactly two, their down-sets are disjoint",
            all(w is not None for w in wit.values()) and cond2,
            values={a: list(w) if w else None for a, w in wit.items()},
        ))
        checks.append(LemmaCheck(
            "R-fibers-nonempty", "every (x, y) in mxl x mnl has some b with b R (x, y)",
            all(r_inv.values()), values={"min_fiber": min(len(v) for v in r_inv.values())},
        ))
        bound = F(2 * m, m - 2)
        eq = F(l) == bound
        checks.append(LemmaCheck(
            "l-vs-2m/(m-2)", "l >= 2m/(m-2), with equality iff alpha_b = 2 for all b and #S^-1(a) = 2 for all a",
            F(l) >= bound, eq,
            all(alpha[b] == 2 for b in B) and all(len(v) == 2 for v in s_inv.values()),
            {"l": l, "bound": str(bound)},
        ))
        if eq != (all(alpha[b] == 2 for b in B) and all(len(v) == 2 for v in s_inv.values())):
            checks[-1].equality_condition = False
        bound = F(m * n, (m - 2) * (n - 2))
        checks.append(LemmaCheck(
            "l-vs-mn/((m-2)(n-2))", "l >= mn/((m-2)(n-2)), with equality only if alpha_b = beta_b = 2",
            F(l) >= bound, F(l) == bound, a2b2, {"l": l, "bound": str(bound)},
        ))
        comparable = any(p.lt(c, d) for c in B for d in B)
        if comparable:
            checks.append(LemmaCheck(
                "l-vs-bound-plus-one", "if B is not an antichain, l >= mn/((m-2)(n-2)) + 1",
                F(l) >= bound + 1, F(l) == bound + 1, a2b2, {"l": l, "bound": str(bound + 1)},
            ))
    elif assume_not == S2:
        ok = True
        for (x, y), fib in r_inv.items():
            if len(fib) >= 2:
                continue
            if len(fib) == 1:
                (b,) = fib
                if min(alpha[b], beta[b]) >= 3:
                    continue
            ok = False
        checks.append(LemmaCheck(
            "R-fibers-S2", "#R^-1(x,y) >= 2, or R^-1(x,y) = {b} with min(alpha_b, beta_b) >= 3",
            ok, values={"min_fiber": min(len(v) for v in r_inv.values())},
        ))
        b1 = [b for b in B if min(alpha[b], beta[b]) >= 3]
        b2 = [b for b in B if b not in b1]
        lhs = 2 * len(b1) * (m - 3) * (n - 3) + len(b2) * (m - 2) * (n - 2)
        rhs = 2 * m * n
        eq = lhs == rhs
        cond = all(alpha[b] == 2 and beta[b] == 2 for b in b2)
        if eq and min(m, n) >= 4:
            cond = cond and all(alpha[b] == 3 and beta[b] == 3 for b in b1)
        checks.append(LemmaCheck(
            "B-prime-bound",
            "2#B'(m-3)(n-3) + #B''(m-2)(n-2) >= 2mn, equality only if alpha = beta = 2 on B'' (and = 3 on B' when min(m,n) >= 4)",
            lhs >= rhs, eq, cond, {"lhs": lhs, "rhs": rhs, "B'": len(b1), "B''": len(b2)},
        ))
        checks.append(LemmaCheck(
            "S-fibers-at-least-two", "#S^-1(a) >= 2 for every maximal a",
            all(len(v) >= 2 for v in s_inv.values()), values={a: len(v) for a, v in s_inv.items()},
        ))
        pair_ok = True
        for a, fib in s_inv.items():
            if len(fib) == 2:
                x, y = sorted(fib)
                ix, iy = p.idx(x), p.idx(y)
                anti = not (p.lt(x, y) or p.lt(y, x))
                common = _popcount(p.up[ix] & p.up[iy] & maximal_mask(p))
                disjoint = ((p.down[ix] | 1 << ix) & (p.down[iy] | 1 << iy)) == 0
                if not (anti and common >= 3 and disjoint and min(beta[x], beta[y]) >= 3):
                    pair_ok = False
        checks.append(LemmaCheck(
            "two-point-S-fiber",
            "if S^-1(a) = {b1, b2}: antichain, >= 3 common maximal points above, disjoint down-sets, min beta >= 3",
            pair_ok,
        ))
        if m >= 4:
            lo = min(F(2, m - 3), F(3, m - 2))
            ok = all(st.sigma[a] >= lo for a in mxl)
            if n <= 5:
                ok = ok and all(st.sigma[a] >= F(2, m - 3) for a in mxl)
                lo = max(lo, F(2, m - 3))
            checks.append(LemmaCheck(
                "sigma-bound", "sigma_a >= min(2/(m-3), 3/(m-2)); sigma_a >= 2/(m-3) when n <= 5",
                ok, all(st.sigma[a] == lo for a in mxl), None,
                {"bound": str(lo), "sigma": {a: str(v) for a, v in st.sigma.items()}},
            ))
            total = sum(st.sigma.values(), F(0))
            bnd = m * min(F(2, m - 3), F(3, m - 2))
            if n <= 5:
                bnd = max(bnd, F(2 * m, m - 3))
            checks.append(LemmaCheck(
                "B-vs-sigma", "#B >= sum of sigma_a >= m * min(2/(m-3), 3/(m-2)) (2m/(m-3) when n <= 5)",
                F(l) >= total >= bnd, F(l) == bnd, None, {"l": l, "sigma_sum": str(total), "bound": str(bnd)},
            ))
    else:
        raise ValueError(f"unknown property {assume_not!r}")
    return LemmaReport(assume_not, True, checks, st)


# beat-point lifting ---------------------------------------------------------

def lift_triad(p: Poset, a: str, t: SplittingTriad) -> SplittingTriad:
    """Extend a triad of p - {a} to p, for a beat point a of p.

    The point a goes to whichever side contains its beating neighbour (the
    maximum of the punctured down-set or minimum of the punctured up-set),
    so that a is again a beat point of that side union {a}.
    """
    from .poset import beat_kind

    i = p.idx(a)
    down_beat, up_beat = beat_kind(p, i, p.full_mask)
    if not (down_beat or up_beat):
        raise HasBeatPoints(f"{a!r} is not a beat point")  # misuse of the helper
    if down_beat:
        lower = p.down[i]
        nb = next(j for j in bits(lower) if (p.down[j] | (1 << j)) == lower)
    else:
        upper = p.up[i]
        nb = next(j for j in bits(upper) if (p.up[j] | (1 << j)) == upper)
    b = p.elements[nb]
    C, D = set(t.C), set(t.D)
    if b in C:
        C.add(a)
    if b in D:
        D.add(a)
    return SplittingTriad(frozenset(C), frozenset(D))


def lift_certificate(p: Poset, a: str, cert: Certificate) -> Certificate:
    """Re-certify the lifted triad on p, reusing containers from ``cert``."""
    t = lift_triad(p, a, cert.triad)
    ev = _Evaluator(p)
    extra = []
    for e in cert.evidence:
        if e.kind == "ContainedInContractible" and e.witness:
            w = set(e.witness)
            m = p.mask_of(w)
            extra.append(m)
            if ev.contractible(m | (1 << p.idx(a))):
                extra.append(m | (1 << p.idx(a)))
    ev._witnesses = sorted(set(ev.witnesses()) | set(extra), key=lambda m: (_popcount(m), m))
    return _check(ev, t, cert.property)
