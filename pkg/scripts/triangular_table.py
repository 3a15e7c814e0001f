"""Triangular matrices: s(n) against the exact search, the LP, the certificate and the constructions."""

import argparse
import csv
import sys
import time

from rectcover.boolmat import triangular, triangular_or2
from rectcover.exact import exact_or2
from rectcover.lp import cover_lp, triangular_certificate, verify_certificate
from rectcover.network import triangular_chain
from rectcover.regexlang import divide_and_conquer_regex


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=8, help="largest n for the exact search and the LP")
    ap.add_argument("--cert-nmax", type=int, default=18)
    args = ap.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n", "s", "exact_or2", "lp", "certificate", "divide_conquer", "chain_edges", "seconds"])
    for n in range(2, args.cert_nmax + 1):
        t0 = time.time()
        ex = lpv = ""
        if n <= args.nmax:
            res = exact_or2(triangular(n))
            ex = res.cost if res.optimal else f">={res.lower_bound}"
            lpv = cover_lp(triangular(n), True).value
        chk = verify_certificate(triangular(n), triangular_certificate(n))
        cert = chk.value if chk.feasible else "infeasible"
        w.writerow([n, triangular_or2(n), ex, lpv, cert, divide_and_conquer_regex(n).alphabetic_length(),
                    triangular_chain(n).size, f"{time.time() - t0:.2f}"])


if __name__ == "__main__":
    main()
