"""Graph generators used by the experiments and the ``gen`` subcommand.

Random graphs draw from numpy's PCG64 bit generator
(``numpy.random.default_rng``); the seed is always part of the output.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import Disconnected, InvalidProbability, NTooSmall
from .graph import Graph, parse_edge_list

HOUSE_EDGE_LIST = "1 2\n1 5\n5 2\n1 4\n4 3\n3 2\n"


def house() -> Graph:
    """Square 1-4-3-2 with roof vertex 5 over the edge {1, 2}."""
    return parse_edge_list(HOUSE_EDGE_LIST)


def gen_choked(N: int) -> Graph:
    """Complete graph on nodes 1..N-1 plus node N hanging off node 1."""
    if N < 4:
        raise NTooSmall(f"choked graph needs N >= 4, got {N}")
    edges = [(i, j) for i in range(N - 1) for j in range(i + 1, N - 1)]
    edges.append((0, N - 1))
    return Graph(N, edges, [str(i + 1) for i in range(N)])


def gen_gnp(n: int, p_edge: float, seed=None, *, rng: np.random.Generator | None = None) -> Graph:
    """Erdos-Renyi G(n, p) with vertices labelled 1..n.

    Raises :class:`Disconnected` when the draw is not connected; callers
    resample.
    """
    if not 0 < p_edge <= 1:
        raise InvalidProbability(f"edge probability must lie in (0, 1], got {p_edge}")
    if n < 1:
        raise NTooSmall("need at least one vertex")
    rng = rng if rng is not None else np.random.default_rng(seed)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    keep = rng.random(len(pairs)) < p_edge
    edges = [e for e, k in zip(pairs, keep) if k]
    return Graph(n, edges, [str(i + 1) for i in range(n)])


def sample_connected_gnp(n: int, p_edge: float, rng: np.random.Generator, max_tries: int = 10_000) -> tuple[Graph, int]:
    """Draw G(n, p) until connected; returns the graph and the number of draws."""
    for attempt in range(1, max_tries + 1):
        try:
            return gen_gnp(n, p_edge, rng=rng), attempt
        except Disconnected:
            continue
    raise Disconnected(f"no connected G({n}, {p_edge}) in {max_tries} draws")


def gnp_probability_range(n: int) -> tuple[float, float]:
    return min(2 * math.log(n) / n, 1.0), 1.0
