"""Graph families: named constructions, seeded random graphs and exhaustive small-graph lists.

Exhaustive lists are generated by vertex augmentation (every connected graph has a
vertex whose deletion leaves it connected) with isomorphism rejection.  Dedup is only
a speed-up; none of the checks depend on it.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations
from typing import Iterator

import networkx as nx

from occucert.graph import Graph, GraphError, from_edge_list


def empty(n: int) -> Graph:
    return from_edge_list(n, [])


def complete(n: int) -> Graph:
    return from_edge_list(n, combinations(range(n), 2))


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs at least 3 vertices")
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves: int) -> Graph:
    """K_{1,leaves} with centre 0."""
    return from_edge_list(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return from_edge_list(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def disjoint_union(*graphs: Graph) -> Graph:
    pairs, offset = [], 0
    for g in graphs:
        pairs += [(u + offset, v + offset) for u, v in g.edges]
        offset += g.n
    return from_edge_list(offset, pairs)


def gnp(n: int, p: float, rng: random.Random) -> Graph:
    """Erdos-Renyi G(n, p); pairs visited in lexicographic order so the draw is reproducible."""
    return from_edge_list(n, [e for e in combinations(range(n), 2) if rng.random() < p])


def random_connected(n: int, p: float, rng: random.Random, max_tries: int = 10_000) -> Graph:
    for _ in range(max_tries):
        g = gnp(n, p, rng)
        if g.is_connected():
            return g
    raise GraphError(f"no connected G({n}, {p}) sample in {max_tries} tries")


def _invariant(g: Graph) -> tuple:
    d = g.degrees
    return tuple(sorted((d[u], tuple(sorted(d[v] for v in g.neighbors[u]))) for u in range(g.n)))


def _to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def _dedup(candidates: Iterator[Graph]) -> list[Graph]:
    buckets: dict[tuple, list[tuple[Graph, nx.Graph]]] = {}
    out = []
    for g in candidates:
        key = (g.m, _invariant(g))
        bucket = buckets.setdefault(key, [])
        h = _to_nx(g)
        if any(nx.vf2pp_is_isomorphic(h, other) for _, other in bucket):
            continue
        bucket.append((g, h))
        out.append(g)
    return out


def _independent(g: Graph, subset: tuple[int, ...]) -> bool:
    mask = sum(1 << v for v in subset)
    return all(not (g.masks[v] & mask) for v in subset)


@lru_cache(maxsize=None)
def _connected_layer(n: int, triangle_free: bool) -> tuple[Graph, ...]:
    if n == 1:
        return (empty(1),)
    smaller = _connected_layer(n - 1, triangle_free)

    def extend():
        for g in smaller:
            for k in range(1, g.n + 1):
                for nbrs in combinations(range(g.n), k):
                    if triangle_free and not _independent(g, nbrs):
                        continue
                    yield from_edge_list(n, list(g.edges) + [(v, n - 1) for v in nbrs])

    return tuple(_dedup(extend()))


def connected_graphs(n: int) -> list[Graph]:
    """All connected graphs on exactly ``n`` vertices, one per isomorphism class."""
    if n < 1:
        raise GraphError("n must be positive")
    return list(_connected_layer(n, False))


def connected_triangle_free_graphs(n: int) -> list[Graph]:
    """All connected triangle-free graphs on exactly ``n`` vertices, up to isomorphism."""
    if n < 1:
        raise GraphError("n must be positive")
    return list(_connected_layer(n, True))


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t]


def _size_range(text: str) -> range:
    if "-" in text:
        lo, hi = text.split("-")
        return range(int(lo), int(hi) + 1)
    return range(1, int(text) + 1)


def parse_family(spec: str, seed: int = 0) -> list[tuple[str, Graph]]:
    """Expand a family spec into ``(key, graph)`` pairs in deterministic order.

    Single graphs: ``complete:4``, ``cycle:5``, ``path:3``, ``star:2``, ``bipartite:2,3``,
    ``empty:3``, ``gnp:8,0.3`` and ``+``-joined disjoint unions (``complete:2+complete:3``).
    Collections: ``connected:6`` or ``connected:7-8`` (all connected graphs),
    ``trianglefree:9``, ``cliques:2-5`` (every disjoint union of distinct cliques in the
    range), ``random:COUNT,NMIN-NMAX[,P]`` (seeded connected G(n,p) samples).
    """
    kind, _, arg = spec.partition(":")
    if kind == "connected":
        return [(f"connected:{n}:{i}", g) for n in _size_range(arg) for i, g in enumerate(connected_graphs(n))]
    if kind == "trianglefree":
        return [
            (f"trianglefree:{n}:{i}", g)
            for n in _size_range(arg)
            for i, g in enumerate(connected_triangle_free_graphs(n))
        ]
    if kind == "cliques":
        sizes = list(_size_range(arg))
        out = []
        for k in range(1, len(sizes) + 1):
            for combo in combinations(sizes, k):
                out.append(("cliques:" + ",".join(map(str, combo)), disjoint_union(*(complete(s) for s in combo))))
        return out
    if kind == "random":
        parts = arg.split(",")
        count, sizes = int(parts[0]), _size_range(parts[1])
        p = float(parts[2]) if len(parts) > 2 else 0.4
        rng = random.Random(seed)
        out = []
        for i in range(count):
            n = rng.choice(list(sizes))
            out.append((f"random:{i}:n{n}", random_connected(n, p, rng)))
        return out
    return [(spec, single_graph(spec, seed))]


def single_graph(spec: str, seed: int = 0) -> Graph:
    parts = spec.split("+")
    if len(parts) > 1:
        return disjoint_union(*(single_graph(p, seed) for p in parts))
    kind, _, arg = spec.partition(":")
    try:
        if kind == "complete":
            return complete(int(arg))
        if kind == "cycle":
            return cycle(int(arg))
        if kind == "path":
            return path(int(arg))
        if kind == "star":
            return star(int(arg))
        if kind == "empty":
            return empty(int(arg))
        if kind == "bipartite":
            a, b = _ints(arg)
            return complete_bipartite(a, b)
        if kind == "gnp":
            n, p = arg.split(",")
            return gnp(int(n), float(p), random.Random(seed))
    except ValueError as exc:
        raise GraphError(f"bad family spec {spec!r}: {exc}") from exc
    raise GraphError(f"unknown graph family {spec!r}")
