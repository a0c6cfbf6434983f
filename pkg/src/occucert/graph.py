"""Simple undirected graphs and the matrix/density quantities used by the certificates.

Vertices are always labelled ``0..n-1`` and every vector or matrix produced here is
indexed in that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

MAD_MAX_VERTICES = 24


class GraphError(ValueError):
    """Malformed graph input (bad endpoint, self-loop, parse failure)."""


@dataclass(frozen=True)
class DegreeProfile:
    degrees: tuple[int, ...]
    max_degree: int
    disparity_energy: int


@dataclass(frozen=True, eq=True)
class Graph:
    """Immutable simple graph. Build with :func:`from_edge_list`."""

    n: int
    edges: tuple[tuple[int, int], ...]
    _nbrs: tuple[frozenset, ...] = field(repr=False, compare=False)

    @cached_property
    def neighbors(self) -> tuple[frozenset, ...]:
        return self._nbrs

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighbourhood of each vertex as an integer bitmask."""
        return tuple(sum(1 << v for v in nb) for nb in self._nbrs)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(nb) for nb in self._nbrs)

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._nbrs[u]

    def isolated_vertices(self) -> list[int]:
        return [u for u, d in enumerate(self.degrees) if d == 0]

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    def components(self) -> list[list[int]]:
        """Connected components, each sorted, ordered by smallest vertex."""
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                u = stack.pop()
                comp.append(u)
                for v in self._nbrs[u]:
                    if not seen[v]:
                        seen[v] = True
                        stack.append(v)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def is_triangle_free(self) -> bool:
        return all(not (self.masks[u] & self.masks[v]) for u, v in self.edges)

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph relabelled to ``0..k-1``; returns it with the new->old vertex map."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        pairs = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return from_edge_list(len(keep), pairs), keep

    def degree_profile(self) -> DegreeProfile:
        return DegreeProfile(self.degrees, self.max_degree, disparity_energy(self))

    def to_edge_list_text(self) -> str:
        lines = [f"{self.n} {self.m}"]
        lines += [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}


def from_edge_list(n: int, pairs: Iterable[Sequence[int]]) -> Graph:
    """Build a graph on ``0..n-1``; duplicate edges are merged, self-loops rejected."""
    if n < 0:
        raise GraphError(f"vertex count must be nonnegative, got {n}")
    nbrs: list[set] = [set() for _ in range(n)]
    edges = set()
    for pair in pairs:
        u, v = (int(x) for x in pair)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        if u > v:
            u, v = v, u
        edges.add((u, v))
        nbrs[u].add(v)
        nbrs[v].add(u)
    return Graph(n, tuple(sorted(edges)), tuple(frozenset(s) for s in nbrs))


def parse_edge_list(text: str) -> Graph:
    """Parse the ``n m`` header + ``m`` lines of ``u v`` format."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise GraphError("empty edge-list input")
    try:
        header = [int(x) for x in rows[0]]
        if len(header) != 2:
            raise GraphError("header must be 'n m'")
        n, m = header
        pairs = []
        for r in rows[1:]:
            if len(r) != 2:
                raise GraphError(f"edge line must have two entries: {' '.join(r)!r}")
            pairs.append((int(r[0]), int(r[1])))
    except ValueError as exc:
        raise GraphError(f"non-integer token in edge list: {exc}") from exc
    if len(pairs) != m:
        raise GraphError(f"header declares {m} edges but {len(pairs)} were given")
    return from_edge_list(n, pairs)


def read_edge_list(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(g.to_edge_list_text())


def degree_profile_json(g: Graph) -> dict:
    prof = g.degree_profile()
    return {"degrees": list(prof.degrees), "max_degree": prof.max_degree, "disparity_energy": prof.disparity_energy}


def laplacian(g: Graph) -> np.ndarray:
    """Combinatorial Laplacian ``D - A`` as a float matrix."""
    a = g.adjacency().astype(float)
    return np.diag(a.sum(axis=1)) - a


def signless_laplacian(g: Graph) -> np.ndarray:
    a = g.adjacency().astype(float)
    return np.diag(a.sum(axis=1)) + a


def normalized_laplacian(g: Graph) -> np.ndarray:
    """``D^{-1/2} L D^{-1/2}``; undefined when some vertex is isolated."""
    iso = g.isolated_vertices()
    if iso:
        raise GraphError(f"normalized Laplacian needs no isolated vertices; isolated: {iso}")
    s = 1.0 / np.sqrt(np.asarray(g.degrees, dtype=float))
    return s[:, None] * laplacian(g) * s[None, :]


def _mad_masks(n: int, masks: Sequence[int]) -> Fraction:
    if n == 0:
        raise GraphError("mad is undefined for the empty graph")
    if n > MAD_MAX_VERTICES:
        raise GraphError(f"mad enumeration limited to {MAD_MAX_VERTICES} vertices, got {n}")
    # edge and vertex counts of every subset, built one vertex (bit) at a time
    edges = np.zeros(1, dtype=np.int64)
    sizes = np.zeros(1, dtype=np.int64)
    for k in range(n):
        low = np.arange(1 << k, dtype=np.int64)
        gained = np.bitwise_count(low & masks[k]).astype(np.int64)
        edges = np.concatenate([edges, edges + gained])
        sizes = np.concatenate([sizes, sizes + 1])
    ratio = edges[1:] / sizes[1:]
    best = int(np.argmax(ratio)) + 1
    return Fraction(2 * int(edges[best]), int(sizes[best]))


def mad(g: Graph) -> Fraction:
    """Maximum average degree, exact, by enumerating all nonempty vertex subsets (O(2^n))."""
    return _mad_masks(g.n, g.masks)


def neighborhood_mad_profile(g: Graph) -> list[Fraction]:
    """``mad(G[N(u)])`` for each vertex ``u``."""
    iso = g.isolated_vertices()
    if iso:
        raise GraphError(f"neighbourhood mad needs no isolated vertices; isolated: {iso}")
    out = []
    for u in range(g.n):
        sub, _ = g.induced(g.neighbors[u])
        out.append(mad(sub))
    return out


def disparity_energy(g: Graph) -> int:
    """Sum over edges of the squared degree difference."""
    d = g.degrees
    return sum((d[u] - d[v]) ** 2 for u, v in g.edges)
