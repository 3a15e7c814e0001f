"""Command-line interface.

Exit codes: 0 success, 1 validation failure or bad input, 2 budget exceeded
(including an exact search that stopped before proving optimality).
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

from . import boolmat, covers, exact, greedy, lp, network, regexlang
from .boolmat import FormatError, MatrixSizeError
from .covers import BudgetExceeded, CoveringError

EXIT_OK, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def q(v) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def g9(x: float) -> str:
    return f"{x:.9g}"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(text: str, path: str | None, out) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)


def _matrix(path: str) -> boolmat.BooleanMatrix:
    try:
        return boolmat.parse_bm(_read(path))
    except FormatError as e:
        raise _Fail(EXIT_INVALID, f"{path}: {e}") from None


# -- subcommands ----------------------------------------------------------------


def cmd_gen(a, out) -> int:
    kind = a.kind
    p = a.params
    need = {"triangular": 1, "disjointness": 1, "kneser": 3, "kron": 2, "allones": 2, "certificate": 1,
            "language": 1, "family": 1, "net19": 0, "net20": 0, "chain": 1}
    if len(p) != need[kind]:
        raise _Fail(EXIT_INVALID, f"gen {kind} takes {need[kind]} argument(s), got {len(p)}")
    ints = lambda: [int(v) for v in p]  # noqa: E731
    try:
        if kind == "triangular":
            text = boolmat.format_bm(boolmat.triangular(*ints()))
        elif kind == "disjointness":
            text = boolmat.format_bm(boolmat.disjointness(*ints()))
        elif kind == "kneser":
            text = boolmat.format_bm(boolmat.kneser_submatrix(*ints()))
        elif kind == "allones":
            text = boolmat.format_bm(boolmat.all_ones(*ints()))
        elif kind == "kron":
            text = boolmat.format_bm(boolmat.kronecker(_matrix(p[0]), _matrix(p[1])))
        elif kind == "certificate":
            text = lp.format_dc(lp.triangular_certificate(*ints()))
        elif kind == "language":
            text = regexlang.format_l2(regexlang.language_Ln(*ints()))
        elif kind == "family":
            text = network.format_rn(network.upper_pair_family(*ints()))
        elif kind == "chain":
            text = network.format_rn(network.triangular_chain(*ints()))
        elif kind == "net19":
            text = network.format_rn(network.example_networks()[0])
        else:
            text = network.format_rn(network.example_networks()[1])
    except ValueError as e:
        raise _Fail(EXIT_INVALID, str(e)) from None
    _emit(text, a.output, out)
    return EXIT_OK


def cmd_cover(a, out) -> int:
    A = _matrix(a.matrix)
    if A.ones_count() == 0:
        raise _Fail(EXIT_INVALID, "matrix has no 1-entries")
    weighted = not a.unweighted
    if a.method == "greedy":
        cov = greedy.greedy_rectangle_cover(A, weighted)
        value = covers.covering_cost(cov) if weighted else len(cov)
        if a.output:
            _emit(covers.format_cov(cov), a.output, None)
        out.write(f"{'cost' if weighted else 'rectangles'} {value}\n")
        return EXIT_OK
    if a.method == "lp":
        sol = lp.cover_lp(A, weighted)
        if a.output:
            _emit(covers.format_cov(sol.covering), a.output, None)
        out.write(f"value {q(sol.value)}\n")
        if a.duals:
            cert = lp.DualCertificate(A.m, A.n, {e: v for e, v in sol.duals.items() if v})
            _emit(lp.format_dc(cert), a.duals, None)
        return EXIT_OK
    if weighted:
        res = exact.exact_or2(A, budget=a.bb_budget, fallback=a.milp)
    else:
        res = exact.boolean_rank_result(A, budget=a.bb_budget, fallback=a.milp)
    if a.output:
        _emit(covers.format_cov(res.covering), a.output, None)
    label = "cost" if weighted else "rectangles"
    if res.optimal:
        out.write(f"{label} {res.cost}\n")
        return EXIT_OK
    out.write(f"{label} {res.cost} (not proven optimal; lower bound {res.lower_bound})\n")
    return EXIT_BUDGET


def cmd_verify(a, out) -> int:
    kind = a.kind
    if kind == "covering":
        A = _matrix(a.files[0])
        try:
            c = covers.parse_cov(_read(a.files[1]), A)
        except FormatError as e:
            raise _Fail(EXIT_INVALID, f"{a.files[1]}: {e}") from None
        try:
            if isinstance(c, covers.Covering):
                cost = covers.covering_cost(c)
                part = " partition" if covers.is_partition(c) else ""
                out.write(f"valid{part}, cost {cost}\n")
            else:
                out.write(f"valid fractional, cost {q(covers.fractional_cost(c))}\n")
        except CoveringError as e:
            out.write(f"invalid: {e}\n")
            return EXIT_INVALID
        return EXIT_OK
    if kind == "certificate":
        A = _matrix(a.files[0])
        try:
            cert = lp.parse_dc(_read(a.files[1]))
        except FormatError as e:
            raise _Fail(EXIT_INVALID, f"{a.files[1]}: {e}") from None
        try:
            chk = lp.verify_certificate(A, cert)
        except ValueError as e:
            raise _Fail(EXIT_INVALID, str(e)) from None
        if chk.feasible:
            out.write(f"feasible, value {q(chk.value)}\n")
            return EXIT_OK
        w = chk.witness
        out.write(
            f"infeasible, worst slack {q(chk.worst_slack)} at R={','.join(map(str, w.rows))} "
            f"C={','.join(map(str, w.cols))}\n"
        )
        return EXIT_INVALID
    if kind == "network":
        try:
            net = network.parse_rn(_read(a.files[0]))
        except (FormatError, network.NetworkError) as e:
            raise _Fail(EXIT_INVALID, f"{a.files[0]}: {e}") from None
        M = network.express(net)
        lo, hi = network.depth_profile(net)
        out.write(f"size {net.size}\n")
        out.write(f"depth {lo} {hi}\n")
        out.write(f"unambiguous {'yes' if network.is_unambiguous(net) else 'no'}\n")
        if len(a.files) > 1:
            A = _matrix(a.files[1])
            ok = A == M
            out.write(f"expresses {'yes' if ok else 'no'}\n")
            return EXIT_OK if ok else EXIT_INVALID
        out.write(boolmat.format_bm(M))
        return EXIT_OK
    if kind == "direct-product":
        if len(a.files) != 3:
            raise _Fail(EXIT_INVALID, "verify direct-product needs K.bm M.bm net.rn")
        K, M = _matrix(a.files[0]), _matrix(a.files[1])
        try:
            net = network.parse_rn(_read(a.files[2]))
        except (FormatError, network.NetworkError) as e:
            raise _Fail(EXIT_INVALID, f"{a.files[2]}: {e}") from None
        try:
            rep = exact.verify_direct_product(K, M, net, unambiguous=a.sum)
        except exact.DirectProductError as e:
            out.write(f"invalid: {e}\n")
            return EXIT_INVALID
        out.write(rep.text())
        if a.csv:
            _emit(rep.csv(), a.csv, None)
        return EXIT_OK if rep.ok else EXIT_INVALID
    raise _Fail(EXIT_INVALID, f"unknown verify kind {kind!r}")


def cmd_bounds(a, out) -> int:
    if a.kneser:
        k, x, y = a.kneser
        if x < y:
            x, y = y, x
        ls = greedy.ell_star(k, x, y)
        out.write(f"mu_star {q(greedy.mu(k, x, y, ls))} at ell {ls}\n")
        out.write(f"mu_lower_bound {q(greedy.mu_lower_bound(k, x, y))}\n")
        if (k - x - y) % 2 == 0:
            out.write(f"f {q(greedy.f_value(k, x, y))}\n")
        bc = greedy.disjointness_block_cover(k, x, y)
        out.write(f"greedy_size {bc.size}\n")
        out.write(f"greedy_bound {q(bc.bound())}\n")
        out.write(f"block_cost {bc.cost}\n")
        return EXIT_OK
    if a.kneser_d:
        m, k = a.kneser_d
        out.write(f"d {q(greedy.kneser_d(m, k))}\n")
        return EXIT_OK
    if a.entropy:
        alpha, val = greedy.entropy_exponent()
        out.write(f"alpha {g9(alpha)}\nvalue {g9(val)}\n")
        return EXIT_OK
    if not a.matrix:
        raise _Fail(EXIT_INVALID, "bounds needs a matrix file, --kneser, --kneser-d or --entropy")
    A = _matrix(a.matrix)
    out.write(f"shape {A.m} {A.n}\nones {A.ones_count()}\n")
    if A.ones_count() == 0:
        return EXIT_OK
    if A.is_triangular():
        out.write(f"s(n) {boolmat.triangular_or2(A.n)}\n")
    if a.k and a.l:
        try:
            out.write(f"nechiporuk {q(exact.nechiporuk_bound(A, a.k, a.l))}\n")
        except exact.NechiporukError as e:
            out.write(f"nechiporuk not applicable: {e}\n")
    out.write(f"frac_rank {q(lp.fractional_rank(A))}\n")
    out.write(f"weighted_lp {q(lp.cover_lp(A, True).value)}\n")
    cov = greedy.greedy_rectangle_cover(A)
    out.write(f"greedy_cost {covers.covering_cost(cov)}\n")
    return EXIT_OK


def _language(a) -> regexlang.TwoLetterLanguage:
    if a.family:
        name, n = a.family
        if name != "Ln":
            raise _Fail(EXIT_INVALID, f"unknown family {name!r} (only Ln)")
        return regexlang.language_Ln(int(n))
    if not a.file:
        raise _Fail(EXIT_INVALID, "regex needs a .l2 file or --family Ln N")
    try:
        return regexlang.parse_l2(_read(a.file))
    except FormatError as e:
        raise _Fail(EXIT_INVALID, f"{a.file}: {e}") from None


def cmd_regex(a, out) -> int:
    L = _language(a)
    if a.action == "emit":
        if a.family and a.divide:
            rx = regexlang.divide_and_conquer_regex(int(a.family[1]))
            exact_flag = True
        else:
            rx, exact_flag = regexlang.optimal_regex(L, budget=a.bb_budget)
        out.write(rx.render() + "\n")
        return EXIT_OK if exact_flag else EXIT_BUDGET
    if a.action == "length":
        length, ok = regexlang.optimal_regex_length(L, budget=a.bb_budget)
        out.write(f"{length}\n" if ok else f"{length} (upper bound)\n")
        return EXIT_OK if ok else EXIT_BUDGET
    sizes = regexlang.nfa_sizes(L, budget=a.bb_budget)
    tag = "" if sizes.eps_free_exact else " (upper bound)"
    out.write(f"eps_free {sizes.eps_free_size}{tag}\neps_upper {sizes.eps_upper}\n")
    return EXIT_OK if sizes.eps_free_exact else EXIT_BUDGET


def cmd_table(a, out) -> int:
    if a.blocks is not None:
        out.write(greedy.format_report_csv(greedy.block_report_rows(a.blocks)))
        return EXIT_OK
    base = math.log2(9 / 4)
    out.write("k,cost,cost_over_base,exponent,poly_cap_ok\n")
    for k in range(a.kmin, a.kmax + 1):
        c = greedy.full_cover_cost(k)
        ratio = c / 2 ** (k * base)
        expo = math.log2(c) / k if k else float("nan")
        cap = 4**k * c <= 9**k * (k + 1) ** 4
        out.write(f"{k},{c},{g9(ratio)},{g9(expo)},{'yes' if cap else 'no'}\n")
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rectcover", description="rectangle coverings, LP certificates and rectifier networks")
    p.add_argument("--max-rects", type=int, default=lp.MAX_RECTS, help="rectangle enumeration budget")
    p.add_argument("--max-nodes", type=int, default=None, help="alias for --bb-budget")
    p.add_argument("--bb-budget", type=int, default=exact.DEFAULT_NODE_BUDGET, help="branch-and-bound node budget")
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a matrix, certificate, language or network")
    g.add_argument("kind", choices=["triangular", "disjointness", "kneser", "kron", "allones", "certificate",
                                    "language", "family", "net19", "net20", "chain"])
    g.add_argument("params", nargs="*")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("cover", help="compute a covering")
    c.add_argument("matrix")
    c.add_argument("--method", choices=["greedy", "exact", "lp"], default="exact")
    w = c.add_mutually_exclusive_group()
    w.add_argument("--weighted", action="store_true", default=True)
    w.add_argument("--unweighted", action="store_true")
    c.add_argument("-o", "--output", help="write the covering (.cov)")
    c.add_argument("--duals", help="with --method lp: write the dual solution (.dc)")
    c.add_argument("--milp", action="store_true", help="with --method exact: hand components the search cannot settle to HiGHS")
    c.set_defaults(func=cmd_cover)

    v = sub.add_parser("verify", help="check a covering, certificate, network or direct-product chain")
    v.add_argument("kind", choices=["covering", "certificate", "network", "direct-product"])
    v.add_argument("files", nargs="+")
    v.add_argument("--sum", action="store_true", help="direct-product: require unambiguous networks")
    v.add_argument("--csv", help="direct-product: write the CSV twin of the report")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bounds", help="print bounds for a matrix or a disjointness block")
    b.add_argument("matrix", nargs="?")
    b.add_argument("--k", type=int)
    b.add_argument("--l", type=int)
    b.add_argument("--kneser", type=int, nargs=3, metavar=("K", "X", "Y"))
    b.add_argument("--kneser-d", type=int, nargs=2, metavar=("M", "K"))
    b.add_argument("--entropy", action="store_true")
    b.set_defaults(func=cmd_bounds)

    r = sub.add_parser("regex", help="regular expressions for two-letter languages")
    r.add_argument("action", choices=["emit", "length", "nfa"])
    r.add_argument("file", nargs="?")
    r.add_argument("--family", nargs=2, metavar=("NAME", "N"))
    r.add_argument("--divide", action="store_true", help="emit the divide-and-conquer expression for Ln")
    r.set_defaults(func=cmd_regex)

    t = sub.add_parser("table", help="disjointness sweep or per-block CSV report")
    t.add_argument("--kmin", type=int, default=1)
    t.add_argument("--kmax", type=int, default=10)
    t.add_argument("--blocks", type=int, metavar="K", help="CSV report of all blocks for this k")
    t.set_defaults(func=cmd_table)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INVALID if e.code else EXIT_OK
    if a.max_nodes is not None:
        a.bb_budget = a.max_nodes
    lp.MAX_RECTS = a.max_rects  # read by the LP builders at call time
    try:
        return a.func(a, out)
    except _Fail as e:
        sys.stderr.write(f"error: {e}\n")
        return e.code
    except (BudgetExceeded, MatrixSizeError) as e:
        sys.stderr.write(f"budget exceeded: {e}\n")
        return EXIT_BUDGET
    except (FormatError, CoveringError, network.NetworkError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INVALID
    except OSError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())
