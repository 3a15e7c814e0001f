"""Per-block comparison on D^{x,y}_[k]: uniform dual bound, LP, greedy cover and exact OR2."""

import argparse
import time

from rectcover.boolmat import kneser_submatrix
from rectcover.exact import exact_or2
from rectcover.greedy import disjointness_block_cover, mu_lower_bound
from rectcover.lp import cover_lp


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=5)
    ap.add_argument("--budget", type=int, default=20000, help="search nodes before handing a block to the MILP")
    ap.add_argument("--no-milp", action="store_true", help="report the proven bound instead of calling HiGHS")
    args = ap.parse_args()

    print("k,x,y,shape,mu_bound,lp,greedy_cost,or2,proven,solver,seconds")
    for k in range(1, args.kmax + 1):
        for x in range(k + 1):
            for y in range(x + 1):
                if x + y > k:
                    continue
                t0 = time.time()
                A = kneser_submatrix(k, x, y)
                lpv = cover_lp(A, True).value
                res = exact_or2(A, budget=args.budget, fallback=not args.no_milp)
                or2 = res.cost if res.optimal else f"{res.lower_bound}..{res.cost}"
                print(f"{k},{x},{y},{A.m}x{A.n},{mu_lower_bound(k, x, y)},{lpv},"
                      f"{disjointness_block_cover(k, x, y).cost},{or2},{res.optimal},{res.solver},"
                      f"{time.time() - t0:.1f}", flush=True)


if __name__ == "__main__":
    main()
