"""Acyclic unit-delay multicast network model: multigraph with an ancestral
edge ordering, min-cut, local-kernel network codes, and the per-sink
transfer matrices F(z), F_T(z), M_T(z).
"""

from __future__ import annotations

import heapq
import random
from typing import NamedTuple

import numpy as np

from .galois import Field, Poly, PolyMatrix, ff_matmul, ff_rank


class NetworkFormatError(ValueError):
    """Malformed network description."""


class CycleError(NetworkFormatError):
    """The edge set contains a directed cycle."""


class SingularTransferError(ValueError):
    """Some network transfer matrix is not full rank over F_q(z)."""


class Edge(NamedTuple):
    id: str
    tail: str
    head: str


class NetworkGraph:
    """Directed acyclic multigraph with one source and a set of sinks.

    The stored edge order is ancestral: every edge appears after all edges
    feeding into its tail node. A topologically consistent declaration
    order is kept as-is; otherwise edges are re-sorted (stable), and a
    cycle raises.
    """

    def __init__(self, edges, source, sinks, nodes=(), name=""):
        edges = [Edge(*e) for e in edges]
        if len({e.id for e in edges}) != len(edges):
            raise NetworkFormatError("duplicate edge ids")
        node_set = set(nodes)
        for e in edges:
            node_set.add(e.tail)
            node_set.add(e.head)
        if source not in node_set:
            raise NetworkFormatError(f"unknown source node {source!r}")
        for t in sinks:
            if t not in node_set:
                raise NetworkFormatError(f"unknown sink node {t!r}")
        if any(e.head == source for e in edges):
            raise NetworkFormatError("source must not have incoming edges")
        self.name = name
        self.source = source
        self.sinks = tuple(sinks)
        self.edges = self._ancestral_order(edges)
        self.nodes = tuple(sorted(node_set))
        self.edge_index = {e.id: i for i, e in enumerate(self.edges)}
        self._in = {v: tuple(e for e in self.edges if e.head == v) for v in self.nodes}
        self._out = {v: tuple(e for e in self.edges if e.tail == v) for v in self.nodes}

    @staticmethod
    def _ancestral_order(edges):
        pos = {e.id: i for i, e in enumerate(edges)}
        feeders = {e.id: [] for e in edges}
        for a in edges:
            for b in edges:
                if a.head == b.tail:
                    feeders[b.id].append(a.id)
        if all(all(pos[f] < pos[e.id] for f in feeders[e.id]) for e in edges):
            return tuple(edges)
        # Stable Kahn re-sort over the edge adjacency DAG.
        indeg = {e.id: len(feeders[e.id]) for e in edges}
        succ = {e.id: [] for e in edges}
        for b, fs in feeders.items():
            for f in fs:
                succ[f].append(b)
        ready = [pos[eid] for eid, d in indeg.items() if d == 0]
        heapq.heapify(ready)
        order = []
        by_pos = {pos[e.id]: e for e in edges}
        while ready:
            e = by_pos[heapq.heappop(ready)]
            order.append(e)
            for nxt in succ[e.id]:
                indeg[nxt] -= 1
                if indeg[nxt] == 0:
                    heapq.heappush(ready, pos[nxt])
        if len(order) != len(edges):
            raise CycleError("network contains a directed cycle")
        return tuple(order)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def in_edges(self, node):
        return self._in[node]

    def out_edges(self, node):
        return self._out[node]

    def min_cut(self):
        """Max number of edge-disjoint source->sink paths per sink, and the
        multicast capacity n = min over sinks."""
        per_sink = {}
        for t in self.sinks:
            flow = self._max_flow(t)
            if flow == 0:
                raise NetworkFormatError(f"sink {t!r} unreachable from source")
            per_sink[t] = flow
        return min(per_sink.values()), per_sink

    def _max_flow(self, sink):
        # Unit capacity per edge; BFS augmenting paths on the residual graph.
        used = [False] * len(self.edges)
        flow = 0
        while True:
            parent = {self.source: None}
            path_edge = {}
            queue = [self.source]
            while queue and sink not in parent:
                v = queue.pop(0)
                for e in self._out[v]:
                    i = self.edge_index[e.id]
                    if not used[i] and e.head not in parent:
                        parent[e.head] = v
                        path_edge[e.head] = (i, True)
                        queue.append(e.head)
                for e in self._in[v]:
                    i = self.edge_index[e.id]
                    if used[i] and e.tail not in parent:
                        parent[e.tail] = v
                        path_edge[e.tail] = (i, False)
                        queue.append(e.tail)
            if sink not in parent:
                return flow
            v = sink
            while v != self.source:
                i, forward = path_edge[v]
                used[i] = forward
                v = parent[v]
            flow += 1


class NetworkCode:
    """Local encoding kernels for an n-dimensional network code.

    alpha[(i, edge_id)] couples source input i (0-based) with a source
    outgoing edge; beta[(e, f)] couples adjacent edges at head(e)=tail(f);
    epsilon[sink][(edge_id, j)] couples a sink incoming edge with output j.
    Missing keys are zero.
    """

    def __init__(self, field: Field, n: int, alpha, beta, epsilon):
        self.field = field
        self.n = n
        self.alpha = dict(alpha)
        self.beta = dict(beta)
        self.epsilon = {t: dict(kern) for t, kern in epsilon.items()}

    def validate(self, graph: NetworkGraph):
        minimum, _ = graph.min_cut()
        if self.n > minimum:
            raise NetworkFormatError(f"dimension {self.n} exceeds min-cut {minimum}")
        source_out = {e.id for e in graph.out_edges(graph.source)}
        for (i, eid), v in self.alpha.items():
            self.field.check(v)
            if not 0 <= i < self.n:
                raise NetworkFormatError(f"alpha input index {i + 1} out of range")
            if eid not in source_out:
                raise NetworkFormatError(f"alpha on non-source edge {eid!r}")
        heads = {e.id: e.head for e in graph.edges}
        tails = {e.id: e.tail for e in graph.edges}
        for (a, b), v in self.beta.items():
            self.field.check(v)
            if a not in heads or b not in heads:
                raise NetworkFormatError(f"beta on unknown edge pair ({a!r}, {b!r})")
            if heads[a] != tails[b]:
                raise NetworkFormatError(f"beta on non-adjacent edges ({a!r}, {b!r})")
        for t, kern in self.epsilon.items():
            if t not in graph.sinks:
                raise NetworkFormatError(f"epsilon for unknown sink {t!r}")
            sink_in = {e.id for e in graph.in_edges(t)}
            for (eid, j), v in kern.items():
                self.field.check(v)
                if eid not in sink_in:
                    raise NetworkFormatError(
                        f"epsilon on edge {eid!r} not incoming to sink {t!r}"
                    )
                if not 0 <= j < self.n:
                    raise NetworkFormatError(f"epsilon output index {j + 1} out of range")

    def sink_selection(self, graph: NetworkGraph, sink) -> dict:
        """Effective epsilon for a sink; defaults to identity selection of the
        first n incoming edges in ancestral order."""
        if sink in self.epsilon and self.epsilon[sink]:
            return self.epsilon[sink]
        incoming = graph.in_edges(sink)
        if len(incoming) < self.n:
            raise NetworkFormatError(
                f"sink {sink!r} has in-degree {len(incoming)} < dimension {self.n}"
            )
        return {(incoming[j].id, j): 1 for j in range(self.n)}


class TransferSet:
    """F(z), per-sink F_T(z) and M_T(z), and the network delay spread."""

    def __init__(self, graph, code, f, f_sink, m_sink, t_delay, f_taps, m_taps):
        self.graph = graph
        self.code = code
        self.f = f
        self.f_sink = f_sink
        self.m_sink = m_sink
        self.t_delay = t_delay
        # Coefficient views for the simulator: f_taps[t] has shape (D, |E|, n),
        # m_taps[t] has shape (D, n, n), D = t_delay.
        self.f_taps = f_taps
        self.m_taps = m_taps


def _kernel_matrices(graph: NetworkGraph, code: NetworkCode):
    ne, n = graph.num_edges, code.n
    a = [[0] * ne for _ in range(n)]
    for (i, eid), v in code.alpha.items():
        a[i][graph.edge_index[eid]] = v
    k = [[0] * ne for _ in range(ne)]
    for (e1, e2), v in code.beta.items():
        k[graph.edge_index[e1]][graph.edge_index[e2]] = v
    b = {}
    for t in graph.sinks:
        bt = [[0] * n for _ in range(ne)]
        for (eid, j), v in code.sink_selection(graph, t).items():
            bt[graph.edge_index[eid]][j] = v
        b[t] = bt
    return a, k, b


def compute_transfer(graph: NetworkGraph, code: NetworkCode, require_full_rank=True):
    """F(z) as the finite geometric series of the nilpotent K, and
    F_T(z) = F B^T, M_T(z) = A F_T(z) for every sink."""
    code.validate(graph)
    field = code.field
    ne, n = graph.num_edges, code.n
    a, k, b = _kernel_matrices(graph, code)

    powers = []  # K^l as integer grids, l = 0, 1, ...
    cur = tuple(tuple(1 if i == j else 0 for j in range(ne)) for i in range(ne))
    while any(any(row) for row in cur):
        powers.append(cur)
        if len(powers) > ne:
            raise CycleError("K is not nilpotent; ordering is not ancestral")
        cur = ff_matmul(field, cur, k)
    t_delay = len(powers)

    def poly_from_layers(layers, i, j):
        return Poly(field, [layer[i][j] for layer in layers])

    f = PolyMatrix(
        [[poly_from_layers(powers, i, j) for j in range(ne)] for i in range(ne)]
    )
    f_sink, m_sink, f_taps, m_taps = {}, {}, {}, {}
    for t in graph.sinks:
        fl = [ff_matmul(field, p, b[t]) for p in powers]
        ml = [ff_matmul(field, a, layer) for layer in fl]
        f_sink[t] = PolyMatrix(
            [[poly_from_layers(fl, i, j) for j in range(n)] for i in range(ne)]
        )
        m_sink[t] = PolyMatrix(
            [[poly_from_layers(ml, i, j) for j in range(n)] for i in range(n)]
        )
        f_taps[t] = np.array(fl, dtype=np.uint8)
        m_taps[t] = np.array(ml, dtype=np.uint8)
        if require_full_rank and m_sink[t].det().is_zero():
            raise SingularTransferError(
                f"M_T(z) for sink {t!r} is singular over F_q(z); invalid network code"
            )
    return TransferSet(graph, code, f, f_sink, m_sink, t_delay, f_taps, m_taps)


def instantaneous_transfer(graph: NetworkGraph, code: NetworkCode):
    """Per-sink transfer matrices of the delay-free network built from the
    same kernels; equals M_T(z) evaluated at z = 1."""
    field = code.field
    ne = graph.num_edges
    a, k, b = _kernel_matrices(graph, code)
    f = tuple(tuple(1 if i == j else 0 for j in range(ne)) for i in range(ne))
    acc = f
    cur = f
    for _ in range(ne):
        cur = ff_matmul(field, cur, k)
        if not any(any(row) for row in cur):
            break
        acc = tuple(
            tuple(field.add(x, y) for x, y in zip(ra, rc)) for ra, rc in zip(acc, cur)
        )
    out = {}
    f_out = {}
    for t in graph.sinks:
        ft = ff_matmul(field, acc, b[t])
        f_out[t] = ft
        out[t] = ff_matmul(field, a, ft)
    return out, f_out


def random_network_code(
    graph: NetworkGraph, n: int, field: Field, seed: int, max_tries: int = 200
) -> NetworkCode:
    """Uniformly random local kernels, accepted when every instantaneous
    M_T = M_T(z)|_{z=1} is full rank over F_q (which suffices for the
    unit-delay network). Deterministic given the seed."""
    minimum, _ = graph.min_cut()
    if n > minimum:
        raise NetworkFormatError(f"dimension {n} exceeds min-cut {minimum}")
    rng = random.Random(seed)
    source_out = graph.out_edges(graph.source)
    adjacent = [
        (e.id, f.id)
        for e in graph.edges
        for f in graph.out_edges(e.head)
    ]
    for _ in range(max_tries):
        alpha = {
            (i, e.id): rng.randrange(field.q)
            for i in range(n)
            for e in source_out
        }
        beta = {pair: rng.randrange(field.q) for pair in adjacent}
        code = NetworkCode(field, n, alpha, beta, {})
        inst, _ = instantaneous_transfer(graph, code)
        if all(ff_rank(field, m) == n for m in inst.values()):
            return code
    raise ValueError(
        f"no valid {n}-dimensional network code found in {max_tries} tries "
        f"over {field} (field too small or dimension too large)"
    )


# -- line-oriented network description files ---------------------------------

def parse_network(text: str, name: str = ""):
    """Parse a network document; returns (graph, code-or-None).

    Directives: field, node, edge, source, sink, alpha, beta, epsilon.
    Comments start with '#'. Edge declaration order defines the ancestral
    ordering and is re-sorted only when topologically inconsistent.
    """
    field = None
    nodes, edges, sinks = [], [], []
    source = None
    alpha, beta = {}, {}
    epsilon: dict = {}
    saw_kernels = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key, args = parts[0], parts[1:]
        try:
            if key == "field":
                p = int(args[0])
                if len(args) == 1:
                    field = Field(p)
                else:
                    m = int(args[1])
                    modulus = tuple(int(c) for c in args[2:]) or None
                    field = Field(p, m, modulus)
            elif key == "node":
                nodes.extend(args)
            elif key == "edge":
                eid, tail, head = args
                edges.append((eid, tail, head))
            elif key == "source":
                (source,) = args
            elif key == "sink":
                sinks.extend(args)
            elif key == "alpha":
                i, eid, v = int(args[0]), args[1], int(args[2])
                alpha[(i - 1, eid)] = v
                saw_kernels = True
            elif key == "beta":
                e1, e2, v = args[0], args[1], int(args[2])
                beta[(e1, e2)] = v
                saw_kernels = True
            elif key == "epsilon":
                t, eid, j, v = args[0], args[1], int(args[2]), int(args[3])
                epsilon.setdefault(t, {})[(eid, j - 1)] = v
                saw_kernels = True
            else:
                raise NetworkFormatError(f"unknown directive {key!r}")
        except (ValueError, IndexError) as exc:
            if isinstance(exc, NetworkFormatError):
                raise
            raise NetworkFormatError(f"line {lineno}: malformed {key!r} line") from exc
    if source is None:
        raise NetworkFormatError("missing source line")
    if not sinks:
        raise NetworkFormatError("missing sink line")
    graph = NetworkGraph(edges, source, sinks, nodes=nodes, name=name)
    graph.declared_field = field
    if not saw_kernels:
        return graph, None
    if field is None:
        raise NetworkFormatError("kernel lines require a field line")
    if not alpha:
        raise NetworkFormatError("kernels present but no alpha lines")
    n = max(i for i, _ in alpha) + 1
    code = NetworkCode(field, n, alpha, beta, epsilon)
    code.validate(graph)
    return graph, code


def load_network(path):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_network(text, name=str(path))
