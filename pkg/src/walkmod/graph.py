"""Simple undirected graphs with a fixed edge enumeration.

Vertices are 0-based indices internally; external string labels are kept
for I/O. The edge order given at construction is the coordinate system for
every density and multiplicity vector, so it is never re-sorted.
"""
from __future__ import annotations

import json
from collections import deque
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .errors import (
    Disconnected,
    DuplicateEdge,
    EmptyGraph,
    EmptyVertexSet,
    SelfLoop,
    UnknownVertex,
)


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple graph.

    Parameters
    ----------
    n : int
        Number of vertices.
    edges : sequence of (int, int)
        Unordered vertex pairs, in index order.
    labels : sequence of str, optional
        External vertex names; defaults to ``"0".."n-1"``.
    require_connected : bool
        Raise :class:`Disconnected` unless every vertex is reachable from
        vertex 0. Induced subgraphs are built with this switched off.
    """

    __slots__ = ("_n", "_edges", "_labels", "_index", "_adj", "_edge_of", "_connected")

    def __init__(
        self,
        n: int,
        edges: Sequence[tuple[int, int]],
        labels: Sequence[str] | None = None,
        *,
        require_connected: bool = True,
    ):
        if n < 1:
            raise EmptyGraph("graph has no vertices")
        if labels is None:
            labels = [str(i) for i in range(n)]
        labels = tuple(str(x) for x in labels)
        if len(labels) != n:
            raise ValueError(f"expected {n} labels, got {len(labels)}")
        if len(set(labels)) != n:
            raise ValueError("vertex labels must be distinct")

        edge_of: dict[tuple[int, int], int] = {}
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        clean = []
        for i, (u, v) in enumerate(edges):
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise UnknownVertex(f"edge {i}: vertex out of range in ({u}, {v})")
            if u == v:
                raise SelfLoop(f"edge {i}: self-loop at {labels[u]}")
            k = _key(u, v)
            if k in edge_of:
                raise DuplicateEdge(
                    f"edge {i}: duplicate of edge {edge_of[k]} {{{labels[u]},{labels[v]}}}"
                )
            edge_of[k] = i
            adj[u].append((v, i))
            adj[v].append((u, i))
            clean.append((u, v))

        self._n = n
        self._edges = tuple(clean)
        self._labels = labels
        self._index = {lab: i for i, lab in enumerate(labels)}
        self._adj = tuple(tuple(a) for a in adj)
        self._edge_of = edge_of
        unreached = self._unreached_from_zero()
        self._connected = not unreached
        if require_connected and unreached:
            names = ", ".join(labels[v] for v in sorted(unreached))
            raise Disconnected(f"vertices {{{names}}} are unreachable from {labels[0]}")

    def _unreached_from_zero(self) -> set[int]:
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for y, _ in self._adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return set(range(self._n)) - seen

    # -- basic accessors -------------------------------------------------
    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def is_connected(self) -> bool:
        return self._connected

    def neighbors(self, v: int) -> tuple[tuple[int, int], ...]:
        """(neighbor, edge_index) pairs incident to ``v``."""
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self._adj], dtype=np.int64)

    def edge_index(self, u: int, v: int) -> int | None:
        return self._edge_of.get(_key(u, v))

    def has_edge(self, u: int, v: int) -> bool:
        return _key(u, v) in self._edge_of

    def index(self, label) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise UnknownVertex(f"no vertex labelled {label!r}") from None

    def indices(self, labels: Iterable) -> frozenset[int]:
        return frozenset(self.index(x) for x in labels)

    def label(self, v: int) -> str:
        return self._labels[v]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self._n, self._edges, self._labels) == (other._n, other._edges, other._labels)

    def __hash__(self) -> int:
        return hash((self._n, self._edges, self._labels))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.m})"

    # -- serialization ---------------------------------------------------
    def to_edge_list(self) -> str:
        return "".join(f"{self._labels[u]} {self._labels[v]}\n" for u, v in self._edges)

    def to_json(self) -> dict:
        return {
            "vertices": list(self._labels),
            "edges": [[self._labels[u], self._labels[v]] for u, v in self._edges],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "Graph":
        if isinstance(data, str):
            data = json.loads(data)
        labels = [str(x) for x in data["vertices"]]
        idx = {lab: i for i, lab in enumerate(labels)}
        try:
            edges = [(idx[str(u)], idx[str(v)]) for u, v in data["edges"]]
        except KeyError as exc:
            raise UnknownVertex(f"edge references unknown vertex {exc.args[0]!r}") from None
        return cls(len(labels), edges, labels)

    @classmethod
    def from_labelled_edges(cls, pairs: Iterable[tuple[str, str]]) -> "Graph":
        labels: list[str] = []
        idx: dict[str, int] = {}
        edges = []
        for a, b in pairs:
            for x in (str(a), str(b)):
                if x not in idx:
                    idx[x] = len(labels)
                    labels.append(x)
            edges.append((idx[str(a)], idx[str(b)]))
        if not labels:
            raise EmptyGraph("no edges given")
        return cls(len(labels), edges, labels)


def parse_edge_list(text: str) -> Graph:
    """Parse whitespace-separated label pairs, one edge per line.

    Vertices are numbered in order of first appearance and edges in line
    order. Blank lines and lines starting with ``#`` are skipped. Errors
    name the offending line.
    """
    labels: list[str] = []
    idx: dict[str, int] = {}
    edges: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected two vertex labels, got {line!r}")
        a, b = parts
        if a == b:
            raise SelfLoop(f"line {lineno}: self-loop at {a}")
        for x in (a, b):
            if x not in idx:
                idx[x] = len(labels)
                labels.append(x)
        k = _key(idx[a], idx[b])
        if k in seen:
            raise DuplicateEdge(f"line {lineno}: edge {{{a},{b}}} already given on line {seen[k]}")
        seen[k] = lineno
        edges.append((idx[a], idx[b]))
    if not edges:
        raise EmptyGraph("edge list contains no edges")
    return Graph(len(labels), edges, labels)


def laplacian(g: Graph, *, as_sparse: bool = False):
    """Combinatorial Laplacian ``D - A`` (dense by default)."""
    if g.m:
        u, v = np.array(g.edges, dtype=np.int64).T
    else:
        u = v = np.zeros(0, dtype=np.int64)
    rows = np.concatenate([u, v, np.arange(g.n)])
    cols = np.concatenate([v, u, np.arange(g.n)])
    vals = np.concatenate([-np.ones(2 * g.m), g.degrees().astype(float)])
    L = sparse.coo_matrix((vals, (rows, cols)), shape=(g.n, g.n)).tocsr()
    return L if as_sparse else L.toarray()


class Subgraph:
    """Vertex-induced subgraph that keeps the parent's edge indices.

    Densities stay positional against the parent enumeration; edges outside
    the subgraph are simply never traversed. Connectivity is not required.
    """

    __slots__ = ("parent", "vertices", "edge_indices", "_mask")

    def __init__(self, parent: Graph, vertices: Iterable[int]):
        vs = frozenset(int(v) for v in vertices)
        if not vs:
            raise EmptyVertexSet("induced subgraph needs at least one vertex")
        bad = [v for v in vs if not 0 <= v < parent.n]
        if bad:
            raise UnknownVertex(f"vertices {sorted(bad)} not in graph")
        self.parent = parent
        self.vertices = vs
        self.edge_indices = tuple(
            i for i, (u, v) in enumerate(parent.edges) if u in vs and v in vs
        )
        mask = np.zeros(parent.m, dtype=bool)
        mask[list(self.edge_indices)] = True
        self._mask = mask

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(self.parent.edges[i] for i in self.edge_indices)

    @property
    def edge_mask(self) -> np.ndarray:
        return self._mask.copy()

    def has_vertex(self, v: int) -> bool:
        return v in self.vertices

    def allows_edge(self, i: int) -> bool:
        return bool(self._mask[i])

    def __repr__(self) -> str:
        return f"Subgraph(|V|={len(self.vertices)}, |E|={len(self.edge_indices)})"


def induced_subgraph(g: Graph, vs: Iterable[int]) -> Subgraph:
    return Subgraph(g, vs)
