"""Run the direct-product inequality chain on random small pairs and on the B family."""

import argparse
import random

from rectcover.boolmat import BooleanMatrix, all_ones, kronecker
from rectcover.exact import exact_or2, verify_direct_product
from rectcover.network import covering_to_depth2, upper_pair_family


def rand_matrix(rng, size):
    m, n = rng.randint(1, size), rng.randint(1, size)
    while True:
        rows = tuple(rng.getrandbits(n) for _ in range(m))
        if any(rows):
            return BooleanMatrix(m, n, rows)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pairs", type=int, default=20)
    ap.add_argument("--size", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--show", action="store_true", help="print the full report of the family example")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    print("K,M,edges,sum_w',frac_rank,min_sub_edges,chain_bound,ok")
    for _ in range(args.pairs):
        K, M = rand_matrix(rng, args.size), rand_matrix(rng, args.size)
        net = covering_to_depth2(exact_or2(kronecker(K, M)).covering)
        rep = verify_direct_product(K, M, net)
        print(f"{K.m}x{K.n},{M.m}x{M.n},{rep.total_edges},{rep.weight_sum},{rep.frac_rank},"
              f"{rep.min_edges},{rep.chain_bound},{rep.ok}")
    K = BooleanMatrix.from_lists([[1, 1], [0, 1]])
    rep = verify_direct_product(K, all_ones(4, 4), upper_pair_family(4))
    print(f"# family(4): {rep.total_edges} edges >= {rep.weight_sum} >= {rep.chain_bound}")
    if args.show:
        print(rep.text())


if __name__ == "__main__":
    main()
