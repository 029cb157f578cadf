"""Enumerate connected posets size by size and look for torsion in homology.

    python3 scripts/torsion_campaign.py --max-points 9 --out results/torsion.json
"""

import argparse
import json
import logging
import time
from dataclasses import asdict, dataclass

from fms.search import CampaignConfig, run_campaign


@dataclass
class Experiment:
    max_points: int = 8
    check: str = "any-torsion"
    mode: str = "cores"
    workers: int = 1
    resume: str | None = None


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-points", type=int, default=Experiment.max_points)
    ap.add_argument("--check", default=Experiment.check)
    ap.add_argument("--mode", choices=("cores", "direct"), default=Experiment.mode)
    ap.add_argument("--workers", type=int, default=Experiment.workers)
    ap.add_argument("--resume")
    ap.add_argument("--out")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")
    exp = Experiment(args.max_points, args.check, args.mode, args.workers, args.resume)

    rows = []
    for n in range(1, exp.max_points + 1):
        t0 = time.time()
        rep = run_campaign(CampaignConfig(max_points=n, min_points=n, filters=["connected"], check=exp.check,
                                          mode=exp.mode, workers=exp.workers,
                                          resume=f"{exp.resume}.{n}" if exp.resume else None))
        rows.append({"n": n, "classes": rep.total, **rep.tallies, "seconds": round(time.time() - t0, 2),
                     "witnesses": rep.to_json()["witnesses"]})
        print(f"n={n:2d} classes={rep.total:8d} pass={rep.tallies['pass']:8d} fail={rep.tallies['fail']:3d} "
              f"inconclusive={rep.tallies['inconclusive']:3d} {rows[-1]['seconds']:8.1f}s", flush=True)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"experiment": asdict(exp), "rows": rows}, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
