"""Shortest-walk oracles that define walk families implicitly.

Every family exposes ``shortest(rho)`` returning a member of minimum
rho-length. Ties are broken by fewest hops, then by the lexicographically
smallest vertex-index sequence, so equal densities always give equal walks
and the walk returned at ``rho = 0`` is well defined.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import EmptyFamily, EmptyVertexSet, InvalidWalk, TooLarge, Unreachable
from .graph import Graph, Subgraph
from .walks import Walk, as_density, rho_length


def _vertex_set(g: Graph, vs: Iterable[int], name: str) -> frozenset[int]:
    out = frozenset(int(v) for v in vs)
    if not out:
        raise EmptyVertexSet(f"vertex set {name} is empty")
    for v in out:
        if not 0 <= v < g.n:
            raise InvalidWalk(f"vertex {v} in {name} is not in the graph")
    return out


def dijkstra_shortest(
    g: Graph,
    rho,
    S: Iterable[int],
    T: Iterable[int],
    within: Subgraph | None = None,
) -> Walk:
    """Minimum rho-length walk from any vertex of ``S`` to any vertex of ``T``.

    All sources start at distance zero (virtual super-source). Labels are
    ordered by ``(length, hops, vertex tuple)``; that order is preserved
    under extension, so label-setting stays exact and the result is a
    simple path. ``within`` restricts the search to a subgraph.
    """
    rho = as_density(g, rho)
    S = _vertex_set(g, S, "S")
    T = _vertex_set(g, T, "T")
    if within is not None:
        S = frozenset(s for s in S if within.has_vertex(s))
        T = frozenset(t for t in T if within.has_vertex(t))
        if not S or not T:
            raise Unreachable("source or target set lies outside the subgraph")
    common = S & T
    if common:
        return Walk(g, [min(common)])

    w = rho.tolist()
    best: dict[int, tuple] = {}
    heap: list[tuple] = []
    for s in sorted(S):
        label = (0.0, 0, (s,))
        best[s] = label
        heap.append(label)
    heapq.heapify(heap)
    done = set()
    while heap:
        label = heapq.heappop(heap)
        dist, hops, path = label
        x = path[-1]
        if x in done or best.get(x) != label:
            continue
        done.add(x)
        if x in T:
            return Walk(g, path)
        for y, e in g.neighbors(x):
            if y in done or (within is not None and not within.allows_edge(e)):
                continue
            cand = (dist + w[e], hops + 1, path + (y,))
            cur = best.get(y)
            if cur is None or cand < cur:
                best[y] = cand
                heapq.heappush(heap, cand)
    raise Unreachable("no walk joins the source and target sets")


def via_shortest(
    g: Graph,
    rho,
    A: Iterable[int],
    c: int,
    B: Iterable[int],
    within: Subgraph | None = None,
) -> Walk:
    """Shortest ``A -> c`` walk followed by shortest ``c -> B`` walk.

    The two legs are independent minimizations, so the concatenation is a
    shortest member of the via family. Edges may repeat.
    """
    first = dijkstra_shortest(g, rho, A, [c], within)
    second = dijkstra_shortest(g, rho, [c], B, within)
    return first.concat(second)


def explicit_family_shortest(walks: Sequence[Walk], rho) -> Walk:
    if not walks:
        raise EmptyFamily("explicit family is empty")
    best = walks[0]
    best_len = rho_length(best, rho)
    for w in walks[1:]:
        ell = rho_length(w, rho)
        if ell < best_len:
            best, best_len = w, ell
    return best


# ---------------------------------------------------------------------------
# family objects


@dataclass(frozen=True)
class ConnectingFamily:
    """All walks starting in ``A`` and ending in ``B`` (optionally inside ``within``)."""

    graph: Graph
    A: frozenset[int]
    B: frozenset[int]
    within: Subgraph | None = field(default=None, compare=False)
    kind = "connect"

    def __post_init__(self):
        object.__setattr__(self, "A", _vertex_set(self.graph, self.A, "A"))
        object.__setattr__(self, "B", _vertex_set(self.graph, self.B, "B"))

    def shortest(self, rho) -> Walk:
        return dijkstra_shortest(self.graph, rho, self.A, self.B, self.within)

    def has_constant_walk(self) -> bool:
        common = self.A & self.B
        if self.within is not None:
            common = {v for v in common if self.within.has_vertex(v)}
        return bool(common)

    def candidate_walks(self, limit: int = 5000) -> list[Walk]:
        """Every simple ``A -> B`` path; these dominate all members of the family."""
        return simple_paths(self.graph, self.A, self.B, within=self.within, limit=limit)

    def to_spec(self) -> dict:
        g = self.graph
        return {
            "kind": "connect",
            "A": [g.label(v) for v in sorted(self.A)],
            "B": [g.label(v) for v in sorted(self.B)],
        }


@dataclass(frozen=True)
class ViaFamily:
    """Walks that start in ``A``, visit ``c`` and end in ``B``."""

    graph: Graph
    A: frozenset[int]
    c: int
    B: frozenset[int]
    within: Subgraph | None = field(default=None, compare=False)
    kind = "via"

    def __post_init__(self):
        object.__setattr__(self, "A", _vertex_set(self.graph, self.A, "A"))
        object.__setattr__(self, "B", _vertex_set(self.graph, self.B, "B"))
        _vertex_set(self.graph, [self.c], "c")

    def shortest(self, rho) -> Walk:
        return via_shortest(self.graph, rho, self.A, self.c, self.B, self.within)

    def has_constant_walk(self) -> bool:
        return self.c in self.A and self.c in self.B

    def candidate_walks(self, limit: int = 5000) -> list[Walk]:
        """Concatenations of a simple ``A -> c`` path with a simple ``c -> B`` path."""
        first = simple_paths(self.graph, self.A, [self.c], within=self.within, limit=limit)
        second = simple_paths(self.graph, [self.c], self.B, within=self.within, limit=limit)
        if len(first) * len(second) > limit:
            raise TooLarge(f"via family has {len(first) * len(second)} candidate walks (limit {limit})")
        return [a.concat(b) for a in first for b in second]

    def to_spec(self) -> dict:
        g = self.graph
        return {
            "kind": "via",
            "A": [g.label(v) for v in sorted(self.A)],
            "c": g.label(self.c),
            "B": [g.label(v) for v in sorted(self.B)],
        }


@dataclass(frozen=True)
class ExplicitFamily:
    """A finite, ordered list of walks."""

    walks: tuple[Walk, ...]
    kind = "explicit"

    def __post_init__(self):
        object.__setattr__(self, "walks", tuple(self.walks))
        if not self.walks:
            raise EmptyFamily("explicit family is empty")

    @property
    def graph(self) -> Graph:
        return self.walks[0].graph

    def shortest(self, rho) -> Walk:
        return explicit_family_shortest(self.walks, rho)

    def has_constant_walk(self) -> bool:
        return any(w.is_trivial for w in self.walks)

    def candidate_walks(self, limit: int = 5000) -> list[Walk]:
        return list(self.walks)

    def to_spec(self) -> dict:
        return {"kind": "explicit", "walks": [w.labels() for w in self.walks]}


def simple_paths(
    g: Graph,
    S: Iterable[int],
    T: Iterable[int],
    *,
    within: Subgraph | None = None,
    limit: int = 5000,
) -> list[Walk]:
    """Depth-first enumeration of simple paths from ``S`` to ``T``.

    A path stops at the first target vertex it reaches: any longer
    continuation dominates its own prefix, so it adds no constraint.
    """
    S = sorted(_vertex_set(g, S, "S"))
    T = _vertex_set(g, T, "T")
    out: list[Walk] = []

    def ok_vertex(v):
        return within is None or within.has_vertex(v)

    for s in S:
        if not ok_vertex(s):
            continue
        if s in T:
            out.append(Walk(g, [s]))
            continue
        stack = [(s, [s], [], iter(g.neighbors(s)))]
        on_path = {s}
        while stack:
            x, verts, edges, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                on_path.discard(x)
                continue
            y, e = nxt
            if y in on_path or not ok_vertex(y) or (within is not None and not within.allows_edge(e)):
                continue
            path_v = verts + [y]
            path_e = edges + [e]
            if y in T:
                out.append(Walk(g, path_v, path_e))
                if len(out) > limit:
                    raise TooLarge(f"more than {limit} simple paths")
                continue
            if y in S:
                # a path through another source dominates the one starting there
                continue
            on_path.add(y)
            stack.append((y, path_v, path_e, iter(g.neighbors(y))))
    return out


# ---------------------------------------------------------------------------
# family specifications (JSON / CLI strings)


def family_from_spec(g: Graph, spec) -> ConnectingFamily | ViaFamily | ExplicitFamily:
    """Build a family from a JSON dict or a compact ``kind:...`` string.

    Compact forms: ``connect:A:B`` and ``via:A:c:B`` where ``A`` and ``B``
    are comma-separated labels. A string starting with ``{`` is parsed as
    JSON.
    """
    if isinstance(spec, str):
        text = spec.strip()
        if text.startswith("{"):
            spec = json.loads(text)
        else:
            parts = text.split(":")
            kind = parts[0]
            if kind == "connect" and len(parts) == 3:
                spec = {"kind": "connect", "A": parts[1].split(","), "B": parts[2].split(",")}
            elif kind == "via" and len(parts) == 4:
                spec = {"kind": "via", "A": parts[1].split(","), "c": parts[2], "B": parts[3].split(",")}
            else:
                raise ValueError(f"cannot parse family spec {spec!r}")
    kind = spec.get("kind")
    if kind == "connect":
        return ConnectingFamily(g, g.indices(spec["A"]), g.indices(spec["B"]))
    if kind == "via":
        return ViaFamily(g, g.indices(spec["A"]), g.index(spec["c"]), g.indices(spec["B"]))
    if kind == "explicit":
        return ExplicitFamily(tuple(Walk.from_labels(g, w) for w in spec["walks"]))
    raise ValueError(f"unknown family kind {kind!r}")
