"""Tally S1/S2 certificates over small beat-point-free posets and the surface models.

    python3 scripts/splitting_survey.py --max-points 8
"""

import argparse
import collections
import time

from fms.homology import format_groups, homology
from fms.models import NAMED_MODELS, named_model
from fms.search import enumerate_posets
from fms.splitting import S1, S2, lemma_bounds_report, search_certificate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-points", type=int, default=7)
    ap.add_argument("--strategy", choices=("heuristic", "exhaustive"), default="heuristic")
    args = ap.parse_args()

    print("size  classes  S1-certified  S2-certified  seconds")
    for n in range(1, args.max_points + 1):
        t0 = time.time()
        tally = collections.Counter()
        for p in enumerate_posets(n, ["connected", "no-beat-points"]):
            tally["classes"] += 1
            for prop in (S1, S2):
                tally[prop] += search_certificate(p, prop, args.strategy).certified
        print(f"{n:4d}  {tally['classes']:7d}  {tally[S1]:12d}  {tally[S2]:12d}  {time.time() - t0:7.1f}")

    print("\nsurface models")
    for name in NAMED_MODELS:
        p = named_model(name)
        line = [f"{name:6s} {format_groups(homology(p)):22s}"]
        for prop in (S1, S2):
            res = search_certificate(p, prop, args.strategy)
            rep = lemma_bounds_report(p, prop)
            line.append(f"{prop}: {res.verdict:10s} lemmas(not {prop}) hold={rep.all_hold}")
        print("  ".join(line))


if __name__ == "__main__":
    main()
