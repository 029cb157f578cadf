"""Smallest beat-point-free posets with a prescribed homology signature.

    python3 scripts/minimal_models.py S1 S2 S1vS1 RP2 --max-points 9
"""

import argparse
import json

from fms.homology import format_groups
from fms.search import minimal_model_search


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("signatures", nargs="+", help="named (S1, S2, RP2, T2, K, S1vS1) or like Z,Z^2,Z")
    ap.add_argument("--max-points", type=int, default=8)
    ap.add_argument("--out")
    args = ap.parse_args()
    results = []
    for sig in args.signatures:
        res = minimal_model_search(sig, args.max_points)
        results.append(res.to_json())
        if res.size is None:
            print(f"{sig:8s} none up to {res.searched_up_to} points")
            continue
        print(f"{sig:8s} {format_groups(list(res.signature))}: size {res.size}, {len(res.matches)} classes")
        for m in res.matches:
            print(f"    {m.status:9s} pi1={m.pi1:16s} covers={m.poset.sorted_covers()}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(results, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
