"""Maximum sorting time g(n, sigma) over S_n for every sigma of length 3 (and
optionally 4), written as CSV to stdout.

    python scripts/sorting_time_table.py --max-n 9 [--with-s4] [--workers 4]

n = 10 and beyond runs through the checkpointed search; pass --checkpoint-dir
to make those runs resumable.
"""
import argparse
import csv
import sys
from itertools import permutations
from pathlib import Path

from scsort.search import exhaustive_search


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=8)
    ap.add_argument("--with-s4", action="store_true")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--checkpoint-dir", type=Path)
    args = ap.parse_args()

    sigmas = list(permutations((1, 2, 3)))
    if args.with_s4:
        sigmas += list(permutations((1, 2, 3, 4)))
    w = csv.writer(sys.stdout)
    w.writerow(["sigma", "n", "max_steps", "witnesses", "first_witness"])
    for sigma in sigmas:
        word = "".join(map(str, sigma))
        for n in range(1, args.max_n + 1):
            cp = None
            if args.checkpoint_dir is not None:
                args.checkpoint_dir.mkdir(parents=True, exist_ok=True)
                cp = args.checkpoint_dir / f"sc{word}_n{n}.json"
            res = exhaustive_search(n, f"c:{word}", workers=args.workers, checkpoint_path=cp)
            first = " ".join(map(str, res.records[0].perm))
            w.writerow([word, n, res.max_steps, len(res.records), first])
            sys.stdout.flush()


if __name__ == "__main__":
    main()
