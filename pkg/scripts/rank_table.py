#!/usr/bin/env python3
"""Print exact distinguishing round counts for the named small families:
stars, paths, cycles, isolated-edge unions, and doubled cycles."""

import json
import math
import sys

from fodef.families import cycle, path, star, triv, two_cycles
from fodef.oracle import exact_rank


def main() -> int:
    rows = []
    for n in (2, 3, 4, 5):
        r = exact_rank(star(n), star(n + 1), r_max=n, size_budget=2 * n + 1)
        rows.append({"pair": f"K_1,{n-1} vs K_1,{n}", "rank": r.value})
    for n in range(3, 7):
        for m in range(n + 1, 8):
            rp = exact_rank(path(n), path(m), r_max=7, size_budget=15)
            rc = exact_rank(cycle(n), cycle(m), r_max=7, size_budget=15)
            rows.append({"pair": f"P{n} vs P{m}", "rank": rp.value})
            rows.append({"pair": f"C{n} vs C{m}", "rank": rc.value})
    for m in (1, 2):
        r = exact_rank(triv(m, 2 * m), triv(m - 1, 2 * m + 2),
                       r_max=2 * m + 2, size_budget=8 * m)
        rows.append({"pair": f"Triv({m},{2*m}) vs Triv({m-1},{2*m+2})",
                     "rank": r.value})
    for n in (4, 5):
        cap = math.floor(math.log2(n - 1))
        r = exact_rank(two_cycles(n), cycle(n), r_max=cap, size_budget=3 * n)
        rows.append({"pair": f"2C{n} vs C{n}",
                     "rank": f"> {cap}" if r.value is None else r.value})
    for row in rows:
        print(json.dumps(row))
    return 0


if __name__ == "__main__":
    sys.exit(main())
