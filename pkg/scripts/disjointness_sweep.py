"""Cost of the greedy bipartition covering of D_{2^k}, compared with (9/4)^k."""

import argparse
import math

from rectcover.greedy import disjointness_full_cover
from rectcover.covers import covering_cost


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmin", type=int, default=1)
    ap.add_argument("--kmax", type=int, default=12)
    args = ap.parse_args()

    print("k,cost,cost/(9/4)^k,log2(cost)/k,within_(9/4)^k(k+1)^4")
    for k in range(args.kmin, args.kmax + 1):
        cov, blocks = disjointness_full_cover(k)
        c = covering_cost(cov)
        ok = 4**k * c <= 9**k * (k + 1) ** 4
        print(f"{k},{c},{c / 2.25**k:.4f},{math.log2(c) / k:.4f},{'yes' if ok else 'NO'}")
    print(f"# log2(9/4) = {math.log2(2.25):.6f}")


if __name__ == "__main__":
    main()
