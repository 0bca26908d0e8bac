#!/usr/bin/env python3
"""Round-bound campaign on random Hamiltonian outerplanar graphs.

    python3 scripts/campaign_hop.py --sizes 16..256 --trials 20 \
        --seed 4000 --out hop.csv
"""

import argparse
import sys

from fodef.cli import _parse_sizes, campaign_rows, write_rows


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="16..256")
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--duplicators", default="greedy,random")
    ap.add_argument("--out", default="")
    args = ap.parse_args()
    rows = campaign_rows("thm43", "hop", _parse_sizes(args.sizes), 3,
                         args.trials, args.seed, args.duplicators.split(","))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            write_rows(rows, fh)
    else:
        write_rows(rows, sys.stdout)
    bad = [r for r in rows if not r.ok]
    print(f"# {len(rows)} rows, {len(bad)} failures", file=sys.stderr)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
