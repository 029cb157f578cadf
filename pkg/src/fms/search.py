"""Orderly enumeration of unlabeled posets and verification campaigns.

Every poset on k+1 points is obtained from one on k points by adding a new
maximal element over a down-closed subset.  A child is kept only when the new
element lies in the canonical orbit of maximal elements (least down-set
size, then least refined color, then least pointed canonical form), so each
isomorphism class is produced from exactly one parent class.  Isomorphic
children of the same parent are removed by canonical form, which is needed
only when the parent might have nontrivial automorphisms.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from dataclasses import asdict, dataclass, field
from itertools import permutations

from .canonical import _individualize, bit_list, bits, canonical_labeling, refine, up_masks
from .errors import ResumeTokenMismatch
from .homology import HomologyGroup, relative_homology
from .poset import Poset, core_mask, height, is_connected, maximal_mask, minimal_mask

log = logging.getLogger(__name__)

DEFAULT_CEILING = 10


def _pc(m: int) -> int:
    return bin(m).count("1")


# raw generation -----------------------------------------------------------

def _ideals(down: tuple, n: int):
    """All down-closed subsets of the poset on ``down`` (as bitmasks)."""
    closed = [d | (1 << i) for i, d in enumerate(down)]
    out = []

    def rec(start, chosen, ideal):
        out.append(ideal)
        for i in range(start, n):
            # i joins the antichain only if incomparable with every chosen element
            if ideal >> i & 1 or down[i] & chosen:
                continue
            rec(i + 1, chosen | (1 << i), ideal | closed[i])

    rec(0, 0, 0)
    return out


def _coloring(down: list[int]) -> tuple[list[int], list[list[int]], list[list[int]]]:
    n = len(down)
    up = up_masks(down)
    dl = [bit_list(d) for d in down]
    ul = [bit_list(u) for u in up]
    keys = [(_pc(down[i]), _pc(up[i])) for i in range(n)]
    uniq = sorted(set(keys))
    r = {k: t for t, k in enumerate(uniq)}
    colors = refine(dl, ul, [r[k] for k in keys])
    return colors, dl, ul


def _accept(down: list[int], maxmask: int) -> bool:
    """Is the last element in the canonical orbit of maximal elements?"""
    n = len(down)
    m = n - 1
    d = _pc(down[m])
    cands = []
    for j in bits(maxmask):
        if j == m:
            continue
        dj = _pc(down[j])
        if dj < d:
            return False
        if dj == d:
            cands.append(j)
    if not cands:
        return True
    colors, dl, ul = _coloring(down)
    cm = colors[m]
    tied = []
    for j in cands:
        if colors[j] < cm:
            return False
        if colors[j] == cm:
            tied.append(j)
    if not tied:
        return True
    mine = canonical_labeling(down, _individualize(colors, m))[0]
    for j in tied:
        if canonical_labeling(down, _individualize(colors, j))[0] < mine:
            return False
    return True


def _discrete(down: tuple) -> bool:
    colors, _, _ = _coloring(list(down))
    return len(set(colors)) == len(colors)


def _children(down: tuple):
    """Canonical children (as down tuples) of a poset given by ``down``."""
    n = len(down)
    up = up_masks(list(down))
    maxmask = sum(1 << i for i in range(n) if not up[i])
    sym = n > 1 and not _discrete(down)
    seen = set() if sym else None
    for ideal in _ideals(down, n):
        child = list(down) + [ideal]
        cmax = (maxmask & ~ideal) | (1 << n)
        if not _accept(child, cmax):
            continue
        if sym:
            key = canonical_labeling(child)[0]
            if key in seen:
                continue
            seen.add(key)
        yield tuple(child)


def _walk(down: tuple, top: int):
    """Yield ``down`` and every canonical descendant up to ``top`` points."""
    yield down
    if len(down) < top:
        for c in _children(down):
            yield from _walk(c, top)


def _to_poset(down: tuple) -> Poset:
    return Poset([str(i) for i in range(len(down))], list(down))


# filters ------------------------------------------------------------------

@dataclass(frozen=True)
class Filter:
    """Named filter: connected, no-beat-points, or a bound like height<=3."""

    kind: str
    op: str = ""
    value: int = 0

    @classmethod
    def parse(cls, text: str) -> "Filter":
        text = text.strip()
        if text in ("connected", "no-beat-points"):
            return cls(text)
        for op in ("<=", ">="):
            if op in text:
                k, v = text.split(op)
                k = k.strip()
                if k not in ("height", "maximal", "minimal"):
                    break
                return cls(k, op, int(v))
        raise ValueError(f"unknown filter {text!r}")

    def __str__(self):
        return self.kind if not self.op else f"{self.kind}{self.op}{self.value}"

    def accepts(self, p: Poset) -> bool:
        if self.kind == "connected":
            return is_connected(p)
        if self.kind == "no-beat-points":
            mask, _ = core_mask(p)
            return mask == p.full_mask
        v = {"height": lambda: height(p) if p.n else -1,
             "maximal": lambda: _pc(maximal_mask(p)),
             "minimal": lambda: _pc(minimal_mask(p))}[self.kind]()
        return v <= self.value if self.op == "<=" else v >= self.value

    def prunes(self, down: tuple) -> bool:
        """True when no descendant can pass (height and minimal counts never drop)."""
        if self.op != "<=" or self.kind not in ("height", "minimal"):
            return False
        p = _to_poset(down)
        v = height(p) if self.kind == "height" else _pc(minimal_mask(p))
        return v > self.value


def parse_filters(filters) -> list[Filter]:
    if filters is None:
        return []
    if isinstance(filters, str):
        filters = [f for f in filters.split(",") if f.strip()]
    return [f if isinstance(f, Filter) else Filter.parse(f) for f in filters]


def enumerate_posets(n: int, filters=None):
    """Each isomorphism class of n-point posets passing ``filters``, once."""
    if n < 1:
        raise ValueError("n must be at least 1")
    fl = parse_filters(filters)
    stack = [()]
    while stack:
        down = stack.pop()
        if down and any(f.prunes(down) for f in fl):
            continue
        if len(down) == n:
            p = _to_poset(down)
            if all(f.accepts(p) for f in fl):
                yield p
            continue
        stack.extend(reversed(list(_children(down))))


def count_posets(n: int, filters=None) -> int:
    return sum(1 for _ in enumerate_posets(n, filters))


def brute_force_classes(n: int, connected: bool = False) -> set:
    """Independent oracle: all naturally labeled posets, deduplicated by a
    brute-force canonical form (minimum over all n! relabelings)."""
    out = set()

    def rec(down):
        k = len(down)
        if k == n:
            if connected and not is_connected(_to_poset(tuple(down))):
                return
            best = None
            for perm in permutations(range(n)):
                form = [0] * n
                for i in range(n):
                    m = 0
                    for j in bits(down[i]):
                        m |= 1 << perm[j]
                    form[perm[i]] = m
                form = tuple(form)
                if best is None or form < best:
                    best = form
            out.add(best)
            return
        for s in range(1 << k):
            if all(down[j] & ~s == 0 for j in bits(s)):
                rec(down + [s])

    rec([])
    return out


# checks -------------------------------------------------------------------

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"

_SIGNATURES = {
    "S1": "Z,Z", "S2": "Z,0,Z", "S3": "Z,0,0,Z", "point": "Z",
    "RP2": "Z,Z/2", "T2": "Z,Z^2,Z", "K": "Z,Z+Z/2", "S1vS1": "Z,Z^2",
}


def parse_group(text: str) -> HomologyGroup:
    text = text.strip()
    if text == "0":
        return HomologyGroup()
    rank, tors = 0, []
    for part in text.split("+"):
        part = part.strip()
        if part == "Z":
            rank += 1
        elif part.startswith("Z^"):
            rank += int(part[2:])
        elif part.startswith("Z/"):
            tors.append(int(part[2:]))
        else:
            raise ValueError(f"cannot parse group {text!r}")
    from .smith import normalize_diagonal

    return HomologyGroup(rank, tuple(normalize_diagonal(tors)))


def parse_signature(text: str) -> tuple[HomologyGroup, ...]:
    """``S2``, ``RP2`` or an explicit list such as ``Z,0,Z``."""
    text = _SIGNATURES.get(text.strip(), text)
    groups = [parse_group(t) for t in text.split(",")]
    while len(groups) > 1 and groups[-1].is_zero:
        groups.pop()
    return tuple(groups)


def _trim(groups) -> tuple:
    g = list(groups)
    while len(g) > 1 and g[-1].is_zero:
        g.pop()
    return tuple(g)


@dataclass(frozen=True)
class Check:
    name: str
    target: tuple = ()

    @classmethod
    def parse(cls, text: str) -> "Check":
        text = text.strip()
        if text in ("h1-torsion-free", "any-torsion", "s1-certificate"):
            return cls(text)
        for pre in ("homology-signature:", "homology-signature("):
            if text.startswith(pre):
                arg = text[len(pre):].rstrip(")")
                return cls("homology-signature", parse_signature(arg))
        raise ValueError(f"unknown check {text!r}")

    def __str__(self):
        if self.name == "homology-signature":
            return "homology-signature:" + ",".join(str(g) for g in self.target)
        return self.name

    @property
    def homotopy_invariant(self) -> bool:
        return self.name != "s1-certificate"


class _Checker:
    """Evaluates a check, optionally on cores with a per-core cache."""

    def __init__(self, check: Check, mode: str = "cores"):
        if mode not in ("cores", "direct"):
            raise ValueError(f"unknown mode {mode!r}")
        self.check = check
        self.mode = mode if check.homotopy_invariant else "direct"
        self.cache: dict = {}

    def homology(self, p: Poset):
        if self.mode == "direct":
            return relative_homology(p, 0, method="direct")
        mask, _ = core_mask(p)
        if mask & (mask - 1) == 0:
            return [HomologyGroup(1)]
        q = p.subspace_mask(mask)
        key = q.canonical_form()
        h = self.cache.get(key)
        if h is None:
            h = relative_homology(q, 0, method="direct")
            self.cache[key] = h
        return h

    def __call__(self, p: Poset) -> str:
        c = self.check
        if c.name == "s1-certificate":
            from .splitting import S1, search_certificate

            if not is_connected(p):
                return INCONCLUSIVE
            return PASS if search_certificate(p, S1, "heuristic").certified else INCONCLUSIVE
        h = self.homology(p)
        if c.name == "h1-torsion-free":
            return PASS if len(h) < 2 or not h[1].torsion else FAIL
        if c.name == "any-torsion":
            return PASS if all(not g.torsion for g in h) else FAIL
        return PASS if _trim(h) == c.target else FAIL


# campaigns ----------------------------------------------------------------

@dataclass
class CampaignConfig:
    max_points: int
    filters: list = field(default_factory=list)
    check: str = "any-torsion"
    mode: str = "cores"
    workers: int = 1
    min_points: int = 1
    split_level: int = 6
    max_witnesses: int = 20
    allow_large: bool = False
    resume: str | None = None

    def __post_init__(self):
        if self.max_points < 1:
            raise ValueError("max_points must be at least 1")
        if self.max_points > DEFAULT_CEILING and not self.allow_large:
            raise ValueError(f"max_points above {DEFAULT_CEILING} needs allow_large (cost grows about 14x per point)")
        self.filters = [str(f) for f in parse_filters(self.filters)]
        Check.parse(self.check)

    def fingerprint(self) -> str:
        keep = {k: v for k, v in asdict(self).items() if k not in ("workers", "resume", "allow_large")}
        return hashlib.sha256(json.dumps(keep, sort_keys=True).encode()).hexdigest()[:16]


@dataclass
class CampaignReport:
    counts: dict = field(default_factory=dict)  # size -> classes passing filters
    tallies: dict = field(default_factory=lambda: {PASS: 0, FAIL: 0, INCONCLUSIVE: 0})
    witnesses: list = field(default_factory=list)  # failing posets as down-mask lists
    matches: list = field(default_factory=list)  # beat-point-free passes (signature checks)
    wall_time: float = 0.0

    def merge(self, other: "CampaignReport", cap: int) -> None:
        for k, v in other.counts.items():
            self.counts[k] = self.counts.get(k, 0) + v
        for k, v in other.tallies.items():
            self.tallies[k] = self.tallies.get(k, 0) + v
        self.witnesses = sorted(self.witnesses + other.witnesses, key=_wkey)[:cap]
        self.matches = sorted(self.matches + other.matches, key=_wkey)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def to_json(self, include_time: bool = True) -> dict:
        out = {
            "counts": {str(k): v for k, v in sorted(self.counts.items(), key=lambda kv: int(kv[0]))},
            "tallies": dict(sorted(self.tallies.items())),
            "witnesses": [_wjson(w) for w in self.witnesses],
            "matches": [_wjson(w) for w in self.matches],
        }
        if include_time:
            out["wall_time"] = round(self.wall_time, 3)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "CampaignReport":
        r = cls()
        r.counts = {int(k): v for k, v in data.get("counts", {}).items()}
        r.tallies = dict(data.get("tallies", r.tallies))
        r.witnesses = [tuple(w["down"]) for w in data.get("witnesses", [])]
        r.matches = [tuple(w["down"]) for w in data.get("matches", [])]
        return r


def _canon(down: tuple) -> tuple:
    """Canonical relabeling, so stored posets do not depend on the traversal."""
    return tuple(canonical_labeling(list(down))[0])


def _wkey(down: tuple):
    return (len(down), canonical_labeling(list(down))[0])


def _wjson(down: tuple) -> dict:
    p = _to_poset(tuple(down))
    from .poset import poset_to_json

    return {"down": list(down), "poset": poset_to_json(p)}


def _evaluate(down: tuple, cfg_f: list[Filter], checker: _Checker, cfg: CampaignConfig, rep: CampaignReport) -> None:
    k = len(down)
    if k < cfg.min_points:
        return
    p = _to_poset(down)
    if not all(f.accepts(p) for f in cfg_f):
        return
    rep.counts[k] = rep.counts.get(k, 0) + 1
    verdict = checker(p)
    rep.tallies[verdict] += 1
    if verdict == FAIL:
        rep.witnesses.append(_canon(down))
        if len(rep.witnesses) > 10 * cfg.max_witnesses:
            rep.witnesses = sorted(rep.witnesses, key=_wkey)[: cfg.max_witnesses]
    if checker.check.name == "homology-signature" and verdict == PASS:
        mask, _ = core_mask(p)
        if mask == p.full_mask:
            rep.matches.append(_canon(down))


def _run_subtree(args) -> CampaignReport:
    down, cfg_dict, include_root = args
    cfg = CampaignConfig(**cfg_dict)
    fl = parse_filters(cfg.filters)
    checker = _Checker(Check.parse(cfg.check), cfg.mode)
    rep = CampaignReport()
    stack = [down]
    while stack:
        d = stack.pop()
        if d is not down or include_root:
            _evaluate(d, fl, checker, cfg, rep)
        if len(d) < cfg.max_points and not any(f.prunes(d) for f in fl if d):
            stack.extend(reversed(list(_children(d))))
    rep.witnesses = sorted(rep.witnesses, key=_wkey)[: cfg.max_witnesses]
    rep.matches = sorted(rep.matches, key=_wkey)
    return rep


def _frontier(cfg: CampaignConfig) -> tuple[list[tuple], CampaignReport]:
    """Process sizes up to the split level directly; return the units below."""
    fl = parse_filters(cfg.filters)
    checker = _Checker(Check.parse(cfg.check), cfg.mode)
    rep = CampaignReport()
    split = min(cfg.split_level, cfg.max_points)
    units = []
    stack = [()]
    while stack:
        d = stack.pop()
        if d:
            _evaluate(d, fl, checker, cfg, rep)
        if d and any(f.prunes(d) for f in fl):
            continue
        if len(d) == split:
            if split < cfg.max_points:
                units.append(d)
            continue
        stack.extend(reversed(list(_children(d))))
    return units, rep


def _save_token(path: str, data: dict) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(data, fh, sort_keys=True)
    os.replace(tmp, path)


def run_campaign(cfg: CampaignConfig) -> CampaignReport:
    """Enumerate, filter and check; resumable through ``cfg.resume``.

    Subtrees below ``split_level`` points are independent work units.  The
    resume token records finished unit indices and their merged report, and
    is rewritten after every unit.
    """
    t0 = time.time()
    units, head = _frontier(cfg)
    fp = cfg.fingerprint()
    done: set[int] = set()
    body = CampaignReport()
    if cfg.resume and os.path.exists(cfg.resume):
        with open(cfg.resume) as fh:
            tok = json.load(fh)
        if tok.get("fingerprint") != fp:
            raise ResumeTokenMismatch("resume token was written for a different configuration")
        done = set(tok.get("done", []))
        body = CampaignReport.from_json(tok.get("report", {}))
    cfg_dict = asdict(cfg)
    cfg_dict["resume"] = None
    todo = [i for i in range(len(units)) if i not in done]
    jobs = [(units[i], cfg_dict, False) for i in todo]

    def record(i, rep):
        body.merge(rep, cfg.max_witnesses)
        done.add(i)
        if cfg.resume:
            _save_token(cfg.resume, {"fingerprint": fp, "units": len(units), "done": sorted(done),
                                     "report": body.to_json(include_time=False)})

    if cfg.workers > 1 and len(jobs) > 1:
        import multiprocessing as mp

        with mp.get_context("fork").Pool(cfg.workers) as pool:
            for i, rep in zip(todo, pool.imap(_run_subtree, jobs, chunksize=1)):
                record(i, rep)
    else:
        for i, job in zip(todo, jobs):
            record(i, _run_subtree(job))
    head.merge(body, cfg.max_witnesses)
    head.wall_time = time.time() - t0
    log.info("campaign finished: %d classes in %.1fs", head.total, head.wall_time)
    return head


# minimal models -----------------------------------------------------------

@dataclass
class ModelMatch:
    poset: Poset
    status: str  # "confirmed" or "candidate"
    pi1: str

    def to_json(self) -> dict:
        from .poset import poset_to_json

        return {"status": self.status, "pi1": self.pi1, "poset": poset_to_json(self.poset)}


@dataclass
class MinimalModelResult:
    signature: tuple
    size: int | None
    matches: list[ModelMatch]
    searched_up_to: int

    def to_json(self) -> dict:
        return {"signature": [str(g) for g in self.signature], "size": self.size,
                "searched_up_to": self.searched_up_to, "matches": [m.to_json() for m in self.matches]}


def minimal_model_search(signature, max_points: int, pi1: str | None = None,
                         ceiling: int = DEFAULT_CEILING) -> MinimalModelResult:
    """Smallest beat-point-free connected posets with the given homology.

    ``pi1`` ("trivial" or "free_of_rank k") is checked by presentation
    simplification; a match whose presentation stays inconclusive is kept
    as a candidate.
    """
    from .homotopy import pi1_status

    if max_points > ceiling:
        raise ValueError(f"max_points above the ceiling {ceiling}")
    target = parse_signature(signature) if isinstance(signature, str) else _trim(signature)
    if pi1 is None:
        if len(target) <= 2 and (len(target) < 2 or not target[1].torsion):
            r = target[1].rank if len(target) > 1 else 0
            pi1 = "trivial" if r == 0 else f"free_of_rank {r}"
    check = Check("homology-signature", target)
    checker = _Checker(check, "direct")
    for n in range(1, max_points + 1):
        found = []
        for p in enumerate_posets(n, ["connected", "no-beat-points"]):
            if checker(p) != PASS:
                continue
            st = pi1_status(p)
            if pi1 is None or st.label == pi1:
                status = "confirmed" if pi1 is not None else "candidate"
            elif st.status == "inconclusive":
                status = "candidate"
            else:
                continue
            found.append(ModelMatch(p, status, st.label))
        if found:
            return MinimalModelResult(target, n, found, n)
    return MinimalModelResult(target, None, [], max_points)
