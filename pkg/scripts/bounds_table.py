#!/usr/bin/env python3
"""Print the length-cap and dimension-cap comparison tables.

Table 1: at d = 7, r = 2, the disjoint-group length cap q^2 + q + 3 against
the two prior caps (q^4 - 1)/(q - 1) and 3 q^4 / (2(q - 1)).

Table 2: the dimension cap against the floor of the real-valued cap on a
grid of lengths, showing where the integer cap is strictly tighter.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from lrc7.bounds import (  # noqa: E402
    dim_bound_eq3,
    length_bound_eq5,
    prior_length_bounds,
    wang_bound,
)


def length_table(qs) -> None:
    print(f"{'q':>4}  {'eq5_n_max':>10}  {'chen_n_max':>12}  {'guruswami_n_max':>16}")
    for q in qs:
        guru, chen = prior_length_bounds(7, 2, q)
        print(f"{q:>4}  {length_bound_eq5(q):>10}  {float(chen):>12.1f}  {float(guru):>16.1f}")


def dim_table(qs, rs, n_max: int) -> None:
    print(f"\n{'r':>2} {'q':>4} {'n':>4}  {'eq3_k_max':>9}  {'wang_floor':>10}  tighter")
    for r in rs:
        for q in qs:
            for n in range(r + 1, n_max + 1, r + 1):
                eq3 = dim_bound_eq3(n, r, q)
                wf = wang_bound(n, r, q)[1]
                mark = "yes" if eq3 < wf else ""
                print(f"{r:>2} {q:>4} {n:>4}  {eq3:>9}  {wf:>10}  {mark}")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=str, default="4,5,7,8,9,11,13,16,25,32")
    ap.add_argument("--dim-q", type=str, default="4,8,16")
    ap.add_argument("--r", type=str, default="2,3")
    ap.add_argument("--n-max", type=int, default=60)
    ns = ap.parse_args()
    length_table([int(t) for t in ns.q.split(",")])
    dim_table([int(t) for t in ns.dim_q.split(",")], [int(t) for t in ns.r.split(",")], ns.n_max)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
