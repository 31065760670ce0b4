"""Iterate SC_231 from the S_11 witness and compare with the published chain.

    python scripts/reproduce_counterexample.py [path/to/golden_orbit_s11.json]
"""
import json
import sys
from pathlib import Path

from scsort.dynamics import orbit
from scsort.patterns import Pattern

WITNESS = (4, 6, 8, 5, 11, 7, 2, 9, 10, 3, 1)
DEFAULT_FIXTURE = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "golden_orbit_s11.json"


def main(fixture=DEFAULT_FIXTURE):
    listed = [tuple(p) for p in json.loads(Path(fixture).read_text())]
    target = [Pattern.consecutive("231"), Pattern.consecutive("132")]
    res = orbit(WITNESS, (2, 3, 1), target=target)
    for t, p in enumerate(res.iterates):
        mark = ""
        if t < len(listed) and tuple(p) != listed[t]:
            mark = f"   <- listed as {' '.join(map(str, listed[t]))}"
        print(f"{t:3d}  {' '.join(map(str, p))}{mark}")
    print(f"hit_time {res.hit_time} (2n-4 = {2 * len(WITNESS) - 4})")
    print(f"cycle_start {res.cycle_start} cycle_length {res.cycle_length}")


if __name__ == "__main__":
    main(*sys.argv[1:])
