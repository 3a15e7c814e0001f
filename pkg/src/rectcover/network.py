"""Rectifier networks: DAGs whose source-to-sink reachability expresses a matrix.

Nodes are dense integers ``0..node_count-1``.  ``in_map[j]`` is the source
attached to column ``j`` and ``out_map[i]`` the sink attached to row ``i``.
Constructions in this module number input nodes first, then output nodes,
then internal nodes, so serialized networks are byte-stable.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .boolmat import BooleanMatrix, FormatError, all_ones, bits, kronecker, mask_of, triangular
from .covers import Covering, Rectangle


class NetworkError(ValueError):
    pass


@dataclass(frozen=True)
class RectifierNetwork:
    node_count: int
    edges: tuple[tuple[int, int], ...]
    in_map: tuple[int, ...]
    out_map: tuple[int, ...]

    def __post_init__(self):
        edges = tuple(sorted(set((int(u), int(v)) for u, v in self.edges)))
        if len(edges) != len(self.edges):
            raise NetworkError("duplicate edges")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "in_map", tuple(self.in_map))
        object.__setattr__(self, "out_map", tuple(self.out_map))
        V = self.node_count
        for u, v in edges:
            if not (0 <= u < V and 0 <= v < V):
                raise NetworkError(f"edge ({u},{v}) references a node outside 0..{V - 1}")
            if u == v:
                raise NetworkError(f"self-loop at node {u}")
        for name, mp in (("in", self.in_map), ("out", self.out_map)):
            if any(not 0 <= x < V for x in mp):
                raise NetworkError(f"{name}_map references a node outside 0..{V - 1}")
            if len(set(mp)) != len(mp):
                raise NetworkError(f"{name}_map is not injective")
        if set(self.in_map) & set(self.out_map):
            raise NetworkError("a node is attached both as an input and as an output")
        indeg = [0] * V
        outdeg = [0] * V
        for u, v in edges:
            outdeg[u] += 1
            indeg[v] += 1
        for j, s in enumerate(self.in_map):
            if indeg[s]:
                raise NetworkError(f"input {j} is attached to node {s}, which has incoming edges")
        for i, t in enumerate(self.out_map):
            if outdeg[t]:
                raise NetworkError(f"output {i} is attached to node {t}, which has outgoing edges")
        self.topo_order  # raises on cycles

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def inputs(self) -> int:
        return len(self.in_map)

    @property
    def outputs(self) -> int:
        return len(self.out_map)

    @cached_property
    def succ(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.node_count)]
        for u, v in self.edges:
            out[u].append(v)
        return tuple(tuple(x) for x in out)

    @cached_property
    def pred(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.node_count)]
        for u, v in self.edges:
            out[v].append(u)
        return tuple(tuple(x) for x in out)

    @cached_property
    def topo_order(self) -> tuple[int, ...]:
        indeg = [len(p) for p in self.pred]
        stack = [v for v in range(self.node_count - 1, -1, -1) if indeg[v] == 0]
        order = []
        while stack:
            v = stack.pop()
            order.append(v)
            for w in reversed(self.succ[v]):
                indeg[w] -= 1
                if indeg[w] == 0:
                    stack.append(w)
        if len(order) != self.node_count:
            raise NetworkError("cycle detected")
        return tuple(order)

    def reach_rows(self) -> list[int]:
        """For every node, the mask of output rows reachable from it."""
        reach = [0] * self.node_count
        for i, t in enumerate(self.out_map):
            reach[t] |= 1 << i
        for v in reversed(self.topo_order):
            acc = reach[v]
            for w in self.succ[v]:
                acc |= reach[w]
            reach[v] = acc
        return reach

    def reach_cols(self) -> list[int]:
        """For every node, the mask of input columns that reach it."""
        reach = [0] * self.node_count
        for j, s in enumerate(self.in_map):
            reach[s] |= 1 << j
        for v in self.topo_order:
            acc = reach[v]
            for u in self.pred[v]:
                acc |= reach[u]
            reach[v] = acc
        return reach


def express(net: RectifierNetwork, m: int | None = None, n: int | None = None) -> BooleanMatrix:
    """The m x n matrix with entry (i, j) = 1 iff out(i) is reachable from in(j)."""
    m = net.outputs if m is None else m
    n = net.inputs if n is None else n
    if m != net.outputs or n != net.inputs:
        raise NetworkError(
            f"network has {net.inputs} inputs and {net.outputs} outputs, asked for {m}x{n}"
        )
    reach = net.reach_cols()
    return BooleanMatrix(m, n, tuple(reach[t] for t in net.out_map))


def depth_profile(net: RectifierNetwork) -> tuple[int, int]:
    """(min, max) edge count over maximal paths; isolated nodes are ignored."""
    if not net.edges:
        raise NetworkError("network has no edges, hence no maximal paths")
    lo = [0] * net.node_count
    hi = [0] * net.node_count
    for v in reversed(net.topo_order):
        if net.succ[v]:
            lo[v] = 1 + min(lo[w] for w in net.succ[v])
            hi[v] = 1 + max(hi[w] for w in net.succ[v])
    starts = [v for v in range(net.node_count) if not net.pred[v] and net.succ[v]]
    return (min(lo[v] for v in starts), max(hi[v] for v in starts))


def path_counts(net: RectifierNetwork) -> list[list[int]]:
    """counts[i][j] = number of directed paths from in(j) to out(i)."""
    col_of = {s: j for j, s in enumerate(net.in_map)}
    n = net.inputs
    paths: list[list[int] | None] = [None] * net.node_count
    for v in net.topo_order:
        vec = [0] * n
        if v in col_of:
            vec[col_of[v]] = 1
        for u in net.pred[v]:
            pu = paths[u]
            for j in range(n):
                vec[j] += pu[j]
        paths[v] = vec
    return [list(paths[t]) for t in net.out_map]


def is_unambiguous(net: RectifierNetwork) -> bool:
    return all(c <= 1 for row in path_counts(net) for c in row)


# -- depth 2 <-> coverings ----------------------------------------------------


def covering_to_depth2(c: Covering) -> RectifierNetwork:
    """Inputs 0..n-1, outputs n..n+m-1, then one middle node per rectangle."""
    if not c.rectangles:
        raise NetworkError("covering has no rectangles")
    m, n = c.host.m, c.host.n
    edges = []
    for k, r in enumerate(c.rectangles):
        mid = n + m + k
        edges.extend((j, mid) for j in r.cols)
        edges.extend((mid, n + i) for i in r.rows)
    return RectifierNetwork(n + m + len(c.rectangles), tuple(edges), tuple(range(n)), tuple(range(n, n + m)))


def depth2_to_covering(net: RectifierNetwork) -> Covering:
    """One rectangle per middle node: its input predecessors x its output successors."""
    prof = depth_profile(net)
    if prof != (2, 2):
        raise NetworkError(f"network depth profile is {prof}, not (2, 2)")
    col_of = {s: j for j, s in enumerate(net.in_map)}
    row_of = {t: i for i, t in enumerate(net.out_map)}
    rects = []
    for v in range(net.node_count):
        if not net.pred[v] or not net.succ[v]:
            continue
        cols = [col_of[u] for u in net.pred[v] if u in col_of]
        rows = [row_of[w] for w in net.succ[v] if w in row_of]
        if cols and rows:
            rects.append(Rectangle(tuple(rows), tuple(cols)))
    return Covering(express(net), tuple(rects))


# -- constructions ------------------------------------------------------------


def triangular_partition(n: int) -> Covering:
    """Partition of T_n from T_2k = (T_k J; 0 T_k), T_2k+1 = (T_k J_{k,k+1}; 0 T_{k+1})."""
    if n < 1:
        raise ValueError("triangular_partition needs n >= 1")
    rects: list[Rectangle] = []

    def rec(lo: int, size: int):
        if size <= 1:
            return
        top = size // 2
        rects.append(Rectangle(tuple(range(lo, lo + top)), tuple(range(lo + top, lo + size))))
        rec(lo, top)
        rec(lo + top, size - top)

    rec(0, n)
    return Covering(triangular(n), tuple(rects))


def triangular_chain(n: int) -> RectifierNetwork:
    """Unbounded-depth network for T_n with 3n - 4 edges (n >= 2).

    Chain nodes c_1..c_{n-1} with c_j -> c_{j-1}; in(j) -> c_j and c_{i+1} -> out(i).
    """
    if n < 2:
        raise ValueError("triangular_chain needs n >= 2")
    chain = {j: 2 * n + j - 1 for j in range(1, n)}
    edges = [(j, chain[j]) for j in range(1, n)]
    edges += [(chain[j], chain[j - 1]) for j in range(2, n)]
    edges += [(chain[i + 1], n + i) for i in range(n - 1)]
    return RectifierNetwork(3 * n - 1, tuple(edges), tuple(range(n)), tuple(range(n, 2 * n)))


def matrix_B() -> BooleanMatrix:
    """The 8x8 matrix (1 1; 0 1) (x) J_4."""
    return kronecker(BooleanMatrix.from_lists([[1, 1], [0, 1]]), all_ones(4, 4))


def _net19() -> RectifierNetwork:
    # inputs 0..7 (columns), outputs 8..15 (rows); middles n1..n4 = 16..19
    n1, n2, n3, n4 = 16, 17, 18, 19
    edges = [(j, n2) for j in range(4)] + [(j, n4) for j in range(4, 8)]
    edges += [(n2, n1), (n4, n1), (n4, n3)]
    edges += [(n1, 8 + i) for i in range(4)] + [(n3, 8 + i) for i in range(4, 8)]
    return RectifierNetwork(20, tuple(edges), tuple(range(8)), tuple(range(8, 16)))


def _net20() -> RectifierNetwork:
    n1, n2 = 16, 17
    edges = [(j, n1) for j in range(4)] + [(j, n2) for j in range(4, 8)]
    edges += [(n1, 8 + i) for i in range(4)] + [(n2, 8 + i) for i in range(8)]
    return RectifierNetwork(18, tuple(edges), tuple(range(8)), tuple(range(8, 16)))


def upper_pair_family(n: int) -> RectifierNetwork:
    """(4n+1)-edge network for M_n = (1 1; 0 1) (x) J_n.

    The two middle layers of the depth-3 solution are merged into nodes
    a (first row block) and b (second), joined by the single edge b -> a.
    """
    if n < 1:
        raise ValueError("family needs n >= 1")
    a, b = 4 * n, 4 * n + 1
    edges = [(j, a) for j in range(n)] + [(j, b) for j in range(n, 2 * n)]
    edges.append((b, a))
    edges += [(a, 2 * n + i) for i in range(n)] + [(b, 2 * n + i) for i in range(n, 2 * n)]
    return RectifierNetwork(4 * n + 2, tuple(edges), tuple(range(2 * n)), tuple(range(2 * n, 4 * n)))


def upper_pair_matrix(n: int) -> BooleanMatrix:
    return kronecker(BooleanMatrix.from_lists([[1, 1], [0, 1]]), all_ones(n, n))


def example_networks():
    """(depth-3 network with 19 edges, depth-2 network with 20 edges, n -> family(n))."""
    return _net19(), _net20(), upper_pair_family


# -- canonicalization ---------------------------------------------------------


def prune(net: RectifierNetwork) -> RectifierNetwork:
    """Drop edges that lie on no input-to-output path."""
    fwd = net.reach_cols()
    bwd = net.reach_rows()
    keep = tuple((u, v) for u, v in net.edges if fwd[u] and bwd[v])
    if len(keep) == len(net.edges):
        return net
    return RectifierNetwork(net.node_count, keep, net.in_map, net.out_map)


def _classes(vectors: Sequence[int]) -> dict[int, list[int]]:
    groups: dict[int, list[int]] = defaultdict(list)
    for idx, vec in enumerate(vectors):
        groups[vec].append(idx)
    return groups


def canonicalize(net: RectifierNetwork, M: BooleanMatrix) -> RectifierNetwork:
    """Give equal columns identical source wiring and equal rows identical sink wiring.

    Every source in(j) is rewired to the out-neighbourhood X_j' of the
    representative j' of its column class, chosen by minimal (|X_j'|, j');
    sinks are treated the same way with in-neighbourhoods.  Dead edges are
    pruned before and after.
    """
    if express(net) != M:
        raise NetworkError("network does not express the given matrix")
    net = prune(net)
    edges = set(net.edges)

    def rewire(anchors: Sequence[int], vectors: Sequence[int], outgoing: bool):
        nbr = defaultdict(set)
        for u, v in edges:
            if outgoing:
                nbr[u].add(v)
            else:
                nbr[v].add(u)
        for members in _classes(vectors).values():
            rep = min(members, key=lambda idx: (len(nbr[anchors[idx]]), idx))
            target = nbr[anchors[rep]]
            for idx in members:
                node = anchors[idx]
                for w in nbr[node]:
                    edges.discard((node, w) if outgoing else (w, node))
                for w in target:
                    edges.add((node, w) if outgoing else (w, node))

    rewire(net.in_map, M.columns(), outgoing=True)
    rewire(net.out_map, M.rows, outgoing=False)
    out = prune(RectifierNetwork(net.node_count, tuple(edges), net.in_map, net.out_map))
    return out


# -- subnetworks --------------------------------------------------------------


def extract_subnetwork(
    net: RectifierNetwork, sources: Iterable[int], sinks: Iterable[int], in_map, out_map
) -> tuple[RectifierNetwork, list[int]]:
    """Subgraph induced by nodes reachable from ``sources`` that reach ``sinks``.

    Returns the relabelled network (attachment nodes always kept) and the
    list mapping new node ids to original ones.
    """
    fwd = [False] * net.node_count
    for s in sources:
        fwd[s] = True
    for v in net.topo_order:
        if fwd[v]:
            for w in net.succ[v]:
                fwd[w] = True
    bwd = [False] * net.node_count
    for t in sinks:
        bwd[t] = True
    for v in reversed(net.topo_order):
        if bwd[v]:
            continue
        if any(bwd[w] for w in net.succ[v]):
            bwd[v] = True
    inside = {v for v in range(net.node_count) if fwd[v] and bwd[v]}
    keep = sorted(inside | set(in_map) | set(out_map))
    relabel = {v: k for k, v in enumerate(keep)}
    edges = tuple((relabel[u], relabel[v]) for u, v in net.edges if u in inside and v in inside)
    sub = RectifierNetwork(
        len(keep), edges, tuple(relabel[s] for s in in_map), tuple(relabel[t] for t in out_map)
    )
    return sub, keep


# -- .rn text format ----------------------------------------------------------


def format_rn(net: RectifierNetwork) -> str:
    lines = [f"nodes {net.node_count} edges {net.size} in {net.inputs} out {net.outputs}"]
    lines += [f"i {j} {s}" for j, s in enumerate(net.in_map)]
    lines += [f"o {i} {t}" for i, t in enumerate(net.out_map)]
    lines += [f"e {u} {v}" for u, v in net.edges]
    return "\n".join(lines) + "\n"


def parse_rn(text: str) -> RectifierNetwork:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("empty input", 1)
    head = lines[0].split()
    if len(head) != 8 or head[0::2] != ["nodes", "edges", "in", "out"] or not all(
        h.isdigit() for h in head[1::2]
    ):
        raise FormatError(f"header must be 'nodes <c> edges <e> in <n> out <m>', got {lines[0]!r}", 1)
    c, e, n, m = (int(h) for h in head[1::2])
    ins: dict[int, int] = {}
    outs: dict[int, int] = {}
    edges = []
    for k, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 3 or parts[0] not in ("i", "o", "e") or not all(p.isdigit() for p in parts[1:]):
            raise FormatError(f"expected 'i <j> <node>', 'o <i> <node>' or 'e <u> <v>', got {line!r}", k)
        a, b = int(parts[1]), int(parts[2])
        if parts[0] == "e":
            edges.append((a, b))
            continue
        table, limit = (ins, n) if parts[0] == "i" else (outs, m)
        if a >= limit or a in table:
            raise FormatError(f"attachment index {a} out of range or repeated", k)
        table[a] = b
    if len(ins) != n or len(outs) != m:
        raise FormatError("missing input/output attachments", len(lines))
    if len(edges) != e:
        raise FormatError(f"header declares {e} edges, found {len(edges)}", len(lines))
    try:
        return RectifierNetwork(c, tuple(edges), tuple(ins[j] for j in range(n)), tuple(outs[i] for i in range(m)))
    except NetworkError as exc:
        raise FormatError(str(exc)) from None
