"""Command line front end: ``fms <subcommand> ...``.

Exit codes: 0 on success, 1 when an analysis comes back negative (a check
fails or no certificate is found), 2 on usage or input errors.  JSON output
uses sorted keys and is byte-stable; text output is for people.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .errors import FMSError
from .poset import Poset, poset_from_json, poset_to_json, to_dot

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _load(args) -> Poset:
    from .models import model_from_spec

    if getattr(args, "model", None):
        try:
            return model_from_spec(args.model)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if getattr(args, "input", None):
        try:
            with open(args.input) as fh:
                return poset_from_json(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"{args.input} is not a poset JSON file ({exc})") from None
    raise UsageError("give --model or --in")


def _emit(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _poset_text(p: Poset) -> str:
    lines = [f"{p.n} points, {len(p.covers)} covers"]
    lines += [f"  {x} < {y}" for x, y in p.sorted_covers()]
    return "\n".join(lines)


def _ids(text: str | None) -> list[str]:
    return [t for t in (text or "").split(",") if t]


# subcommands --------------------------------------------------------------

def cmd_construct(args) -> int:
    p = _load(args)
    if args.format == "dot":
        _emit(args, to_dot(p))
    elif args.format == "text":
        _emit(args, _poset_text(p))
    else:
        _emit(args, _json(poset_to_json(p)))
    return EXIT_OK


cmd_export = cmd_construct


def cmd_homology(args) -> int:
    from .homology import euler_characteristic, format_groups, homology

    p = _load(args)
    rel = _ids(args.rel) or None
    groups = homology(p, rel=rel, reduced=args.reduced, method=args.method)
    if args.format == "json":
        _emit(args, _json({"H": [g.to_json() for g in groups], "H_str": [str(g) for g in groups],
                           "euler": euler_characteristic(p)}))
    else:
        _emit(args, format_groups(groups))
    return EXIT_OK


def cmd_core(args) -> int:
    import random

    from .homotopy import core_with_log

    p = _load(args)
    rng = random.Random(args.seed) if args.seed is not None else None
    q, removed = core_with_log(p, rng)
    note = f"removed {len(removed)} beat points"
    if args.format == "json":
        _emit(args, _json({"poset": poset_to_json(q), "removed": removed, "note": note}))
    elif args.format == "dot":
        _emit(args, to_dot(q))
    else:
        _emit(args, _poset_text(q) + "\n" + note)
    return EXIT_OK


def cmd_pi1(args) -> int:
    from .homotopy import pi1_presentation, simplify_presentation

    p = _load(args)
    pres = pi1_presentation(p)
    res = simplify_presentation(pres, args.budget)
    if args.format == "json":
        _emit(args, _json({"raw": pres.to_json(), "simplified": res.to_json()}))
    else:
        _emit(args, f"{res.presentation}\nstatus: {res.label}")
    return EXIT_OK


def cmd_splitting(args) -> int:
    from .splitting import check_triad, lemma_bounds_report, make_triad, search_certificate, splitting_stats

    p = _load(args)
    if args.lemmas:
        rep = lemma_bounds_report(p, args.property)
        if args.format == "json":
            _emit(args, _json(rep.to_json()))
        else:
            lines = [f"assume not {rep.assume_not}: {'applicable' if rep.applicable else 'not applicable'}"]
            for c in rep.checks:
                vals = " ".join(f"{k}={v}" for k, v in c.values.items())
                lines.append(f"  {c.name}: holds={c.holds} equality={c.equality} condition={c.equality_condition}"
                             f"  [{vals}]")
            _emit(args, "\n".join(lines))
        return EXIT_OK if rep.all_hold else EXIT_NEGATIVE
    if args.stats:
        st = splitting_stats(p)
        _emit(args, _json(st.to_json()) if args.format == "json" else
              f"m={st.m} n={st.n} l={st.l} sigma={ {a: str(v) for a, v in sorted(st.sigma.items())} }")
        return EXIT_OK
    if args.C:
        D = _ids(args.D) or None
        res = check_triad(p, make_triad(p, _ids(args.C), D), args.property, args.budget)
    else:
        res = search_certificate(p, args.property, args.strategy, args.budget)
    if args.format == "json":
        _emit(args, _json(res.to_json()))
    else:
        lines = [f"{args.property}: {res.verdict}"]
        if hasattr(res, "evidence"):
            for e in res.evidence:
                lines.append(f"  {e.side} {{{','.join(e.component)}}}: {e.kind} ({e.status})")
        else:
            lines.append(f"  {res.reason} after {res.examined} triads, {res.refuted} refuted by homology")
        _emit(args, "\n".join(lines))
    return EXIT_OK if res.certified else EXIT_NEGATIVE


def cmd_cover(args) -> int:
    from .covers import abelian_cover, verify_cover_homology
    from .homology import format_groups, homology

    p = _load(args)
    got = abelian_cover(p, args.order)
    if got is None:
        _emit(args, _json({"cover": None, "reason": f"no surjection onto Z/{args.order}"})
              if args.format == "json" else f"no surjection onto Z/{args.order}")
        return EXIT_NEGATIVE
    spec, cov = got
    out = {"cover": poset_to_json(cov.total), "points": cov.total.n, "connected": cov.connected,
           "homology": [str(g) for g in homology(cov.total)], "labels": {f"{a}<{b}": v for (a, b), v in
                                                                         sorted(spec.labels.items())}}
    ok = True
    if args.rel:
        rep = verify_cover_homology(p, _ids(args.rel), cov)
        out["relative"] = rep.to_json()
        ok = rep.all_equal
    if args.format == "json":
        _emit(args, _json(out))
    else:
        lines = [f"{cov.total.n} points, connected={cov.connected}", format_groups(homology(cov.total))]
        if args.rel:
            lines += [f"  H{d['n']}: cover {d['cover']} vs copies {d['copies']}" for d in out["relative"]["degrees"]]
        _emit(args, "\n".join(lines))
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_enumerate(args) -> int:
    from .search import CampaignConfig, run_campaign

    workers = args.workers
    if workers is None:
        workers = int(os.environ.get("FMS_WORKERS", "1"))
    try:
        cfg = CampaignConfig(
            max_points=args.n, min_points=args.min_n if args.min_n is not None else args.n,
            filters=_ids(args.filter), check=args.check, mode=args.mode, workers=workers,
            resume=args.resume, allow_large=args.allow_large,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep = run_campaign(cfg)
    if args.witness_dir:
        os.makedirs(args.witness_dir, exist_ok=True)
        for k, w in enumerate(rep.to_json()["witnesses"]):
            with open(os.path.join(args.witness_dir, f"witness_{k:03d}.json"), "w") as fh:
                fh.write(json.dumps(w["poset"], sort_keys=True) + "\n")
    if args.format == "json":
        _emit(args, _json(rep.to_json(include_time=args.timing)))
    else:
        _emit(args, f"classes: {rep.total} {dict(sorted(rep.counts.items()))}\n"
                    f"pass={rep.tallies['pass']} fail={rep.tallies['fail']} "
                    f"inconclusive={rep.tallies['inconclusive']} time={rep.wall_time:.1f}s")
    failing = rep.tallies["fail"] > 0 and not cfg.check.startswith("homology-signature")
    return EXIT_NEGATIVE if failing else EXIT_OK


# parser -------------------------------------------------------------------

def _source(sp):
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--model", help="model name or spec: p2_1, sphere:2, pn:3, torus:2, moore:3,1")
    g.add_argument("--in", dest="input", help="poset JSON file")
    sp.add_argument("--out", help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fms", description="Finite spaces: models, homology, splittings, enumeration.",
                                 allow_abbrev=False)
    ap.add_argument("--log-level", default="WARNING")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, fmt="json", formats=("json", "dot", "text"), help=None):
        sp = sub.add_parser(name, help=help, allow_abbrev=False)
        sp.set_defaults(func=fn)
        sp.add_argument("--format", choices=formats, default=fmt)
        return sp

    sp = add("construct", cmd_construct, help="build a model and print it")
    _source(sp)
    sp = add("export", cmd_export, help="re-export a poset")
    _source(sp)
    sp = add("homology", cmd_homology, "text", ("json", "text"), help="integral homology")
    _source(sp)
    sp.add_argument("--rel", help="comma-separated ids of an open subspace")
    sp.add_argument("--reduced", action="store_true")
    sp.add_argument("--method", choices=("core", "direct"), default="core")
    sp = add("core", cmd_core, "text", help="strip beat points")
    _source(sp)
    sp.add_argument("--seed", type=int, help="random removal order")
    sp = add("pi1", cmd_pi1, "text", ("json", "text"), help="fundamental group presentation")
    _source(sp)
    sp.add_argument("--budget", type=int, default=10_000)
    sp = add("splitting", cmd_splitting, "text", ("json", "text"), help="S1/S2 certificates and lemma bounds")
    _source(sp)
    sp.add_argument("--property", choices=("S1", "S2", "triad-validity"), default="S1")
    sp.add_argument("--strategy", choices=("heuristic", "exhaustive"), default="heuristic")
    sp.add_argument("--C", help="check this triad (comma-separated ids)")
    sp.add_argument("--D", help="other side; defaults to the complement of C")
    sp.add_argument("--budget", type=int, default=1 << 20)
    sp.add_argument("--lemmas", action="store_true", help="evaluate the counting lemmas assuming not --property")
    sp.add_argument("--stats", action="store_true")
    sp = add("cover", cmd_cover, "text", ("json", "text"), help="cyclic cover through the abelianization")
    _source(sp)
    sp.add_argument("--order", type=int, default=2)
    sp.add_argument("--rel", help="compare relative homology over this open or closed subspace")
    sp = add("enumerate", cmd_enumerate, "json", ("json", "text"), help="enumerate posets and run a check")
    sp.add_argument("--n", type=int, required=True, help="largest size")
    sp.add_argument("--min-n", type=int, help="smallest size (default: --n)")
    sp.add_argument("--filter", default="", help="comma-separated filters, e.g. connected,no-beat-points")
    sp.add_argument("--check", default="any-torsion",
                    help="h1-torsion-free | any-torsion | s1-certificate | homology-signature:S2")
    sp.add_argument("--mode", choices=("cores", "direct"), default="cores")
    sp.add_argument("--workers", type=int)
    sp.add_argument("--resume", help="resume token path (created if missing)")
    sp.add_argument("--witness-dir", help="dump failing posets here")
    sp.add_argument("--allow-large", action="store_true", help="permit more than 10 points")
    sp.add_argument("--timing", action="store_true", help="include wall time in JSON")
    sp.add_argument("--out")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING))
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"fms: {exc}", file=sys.stderr)
        ap.print_usage(sys.stderr)
        return EXIT_USAGE
    except (FMSError, OSError) as exc:
        print(f"fms: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
