"""Walks, densities and the quantities built from them.

Densities are plain 1-D arrays positional against ``Graph.edges``. Object
arrays of :class:`fractions.Fraction` work too, which the tests use for
exact-arithmetic identities.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .errors import DimensionMismatch, InvalidWalk, NegativeEntry
from .graph import Graph


class Walk:
    """A vertex sequence ``x0..xn`` together with the edges between them.

    ``edge_indices`` is reconstructed from the graph when omitted and
    validated when given. A walk with one vertex and no edges is trivial.
    """

    __slots__ = ("graph", "vertices", "edge_indices", "_counts")

    def __init__(self, graph: Graph, vertices: Sequence[int], edge_indices: Sequence[int] | None = None):
        vertices = tuple(int(v) for v in vertices)
        if not vertices:
            raise InvalidWalk("a walk visits at least one vertex")
        for v in vertices:
            if not 0 <= v < graph.n:
                raise InvalidWalk(f"vertex {v} not in graph")
        if edge_indices is None:
            edges = []
            for k in range(1, len(vertices)):
                e = graph.edge_index(vertices[k - 1], vertices[k])
                if e is None:
                    raise InvalidWalk(
                        f"hop {k}: {graph.label(vertices[k - 1])} and "
                        f"{graph.label(vertices[k])} are not adjacent"
                    )
                edges.append(e)
            edge_indices = edges
        else:
            edge_indices = [int(e) for e in edge_indices]
            if len(edge_indices) != len(vertices) - 1:
                raise InvalidWalk("need exactly one edge per hop")
            for k, e in enumerate(edge_indices, start=1):
                if not 0 <= e < graph.m or set(graph.edges[e]) != {vertices[k - 1], vertices[k]}:
                    raise InvalidWalk(f"hop {k}: edge {e} does not join its flanking vertices")
        self.graph = graph
        self.vertices = vertices
        self.edge_indices = tuple(edge_indices)
        self._counts = None

    @classmethod
    def from_labels(cls, graph: Graph, labels: Iterable) -> "Walk":
        return cls(graph, [graph.index(x) for x in labels])

    @classmethod
    def from_json(cls, graph: Graph, data: dict) -> "Walk":
        return cls.from_labels(graph, data["vertices"])

    def to_json(self) -> dict:
        return {"vertices": self.labels()}

    def labels(self) -> list[str]:
        return [self.graph.label(v) for v in self.vertices]

    @property
    def hops(self) -> int:
        return len(self.edge_indices)

    @property
    def is_trivial(self) -> bool:
        return not self.edge_indices

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def is_simple(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)

    def multiplicities(self) -> np.ndarray:
        if self._counts is None:
            counts = np.bincount(np.asarray(self.edge_indices, dtype=np.int64), minlength=self.graph.m)
            counts.setflags(write=False)
            self._counts = counts
        return self._counts

    def concat(self, other: "Walk") -> "Walk":
        if other.graph is not self.graph and other.graph != self.graph:
            raise DimensionMismatch("walks live on different graphs")
        if self.end != other.start:
            raise InvalidWalk("walks do not meet")
        return Walk(self.graph, self.vertices + other.vertices[1:], self.edge_indices + other.edge_indices)

    def reversed(self) -> "Walk":
        return Walk(self.graph, self.vertices[::-1], self.edge_indices[::-1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Walk):
            return NotImplemented
        return self.vertices == other.vertices and self.graph == other.graph

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        return f"Walk({'-'.join(self.labels())})"


def _check_dims(g: Graph, rho) -> np.ndarray:
    arr = np.asarray(rho)
    if arr.ndim != 1 or arr.shape[0] != g.m:
        raise DimensionMismatch(f"density has shape {arr.shape}, graph has {g.m} edges")
    return arr


def as_density(g: Graph, values, *, check_nonnegative: bool = True) -> np.ndarray:
    arr = _check_dims(g, np.asarray(values, dtype=float))
    if check_nonnegative and (arr < 0).any():
        raise NegativeEntry(f"density has negative entries at edges {np.flatnonzero(arr < 0).tolist()}")
    return arr


def density_to_json(rho) -> dict:
    return {"values": [float(x) for x in np.asarray(rho, dtype=float)]}


def density_from_json(g: Graph, data: dict) -> np.ndarray:
    return as_density(g, data["values"])


def rho_length(w: Walk, rho) -> float:
    """Sum of ``rho`` over the edges the walk traverses, repeats included."""
    arr = _check_dims(w.graph, rho)
    if w.is_trivial:
        return 0 if arr.dtype == object else 0.0
    return arr[list(w.edge_indices)].sum()


def multiplicity_vector(w: Walk) -> np.ndarray:
    return w.multiplicities()


def dominates(a: Walk, b: Walk) -> bool:
    """True when ``a`` precedes ``b``: ``x_a <= x_b`` entrywise."""
    if a.graph.m != b.graph.m:
        raise DimensionMismatch("walks live on graphs with different edge counts")
    return bool(np.all(a.multiplicities() <= b.multiplicities()))


def p_energy(rho, p: float = 2.0):
    arr = np.asarray(rho)
    if (arr < 0).any():
        raise NegativeEntry("p-energy is defined for nonnegative densities only")
    return (arr**p).sum()


def multiplicity_matrix(walks: Sequence[Walk], m: int):
    """CSR matrix whose row ``i`` is the multiplicity vector of ``walks[i]``."""
    rows, cols = [], []
    for i, w in enumerate(walks):
        rows.extend([i] * w.hops)
        cols.extend(w.edge_indices)
    data = np.ones(len(rows))
    X = sparse.coo_matrix((data, (rows, cols)), shape=(len(walks), m)).tocsr()
    X.sum_duplicates()
    return X
