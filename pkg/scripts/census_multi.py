"""Periodic points of SC_B for a few pattern sets B, as JSON lines.

    python scripts/census_multi.py --max-n 6
"""
import argparse
import json

from scsort.dynamics import census_multi
from scsort.patterns import parse_patterns

SETS = ["c:231", "c:231,c:132", "c:231,c:321", "c:123,c:321", "c:231,c:312", "c:1234,c:4321"]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=6)
    ap.add_argument("--sets", nargs="*", default=SETS)
    args = ap.parse_args()
    for text in args.sets:
        for n in range(1, args.max_n + 1):
            rep = census_multi(n, parse_patterns(text))
            s = rep.stats
            print(json.dumps({
                "B": text, "n": n,
                "periodic": len(s["periodic"]),
                "periods": s["periods"],
                "candidates": len(s["candidates"]),
                "periodic_not_candidate": len(s["periodic_not_candidate"]),
                "candidate_not_periodic": len(s["candidate_not_periodic"]),
            }))


if __name__ == "__main__":
    main()
