"""Immutable simple graphs and the elementary surgeries used by every pipeline.

Vertices are the integers ``0..n-1``.  Edges are stored as a canonically
sorted tuple of pairs ``(u, v)`` with ``u < v``.  All operations are pure:
they return new graphs, and the surgeries additionally return explicit
vertex maps so callers can track named vertices through a construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property


class GraphError(ValueError):
    """Raised for malformed graph constructions (bad endpoint, loop, duplicate)."""


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1 with a sorted edge tuple."""

    n: int
    edges: tuple[tuple[int, int], ...]

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        """Adjacency as one bitmask per vertex (bit v set iff adjacent to v)."""
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        degs = [0] * self.n
        for u, v in self.edges:
            degs[u] += 1
            degs[v] += 1
        return tuple(degs)

    def neighbors(self, v: int) -> tuple[int, ...]:
        mask = self.neighbor_masks[v]
        out = []
        while mask:
            low = mask & -mask
            out.append(low.bit_length() - 1)
            mask ^= low
        return tuple(out)

    def degree(self, v: int) -> int:
        return self.degrees[v]

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self.edge_set

    @property
    def m(self) -> int:
        return len(self.edges)

    def relabel(self, perm: list[int] | tuple[int, ...]) -> "Graph":
        """Image graph under the vertex map v -> perm[v] (a bijection)."""
        edges = []
        for u, v in self.edges:
            a, b = perm[u], perm[v]
            edges.append((a, b) if a < b else (b, a))
        return Graph(self.n, tuple(sorted(edges)))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class VertexTag:
    """Role of a vertex inside a constructed graph.

    role is one of:
      'core'      vertex of the input graph H (index i = H-vertex id)
      'triangle'  pendant-triangle vertex at core vertex i; j in 1..t numbers
                  the triangle, k in {1, 2} the endvertex within it
      'gadget'    interior vertex of an attached gadget copy; (i, j, k) name
                  the attachment slot and local its index inside the gadget
      'apex'      the distinguished low-degree vertex of a derived gadget
      'subdiv'    subdivision vertex; i names the core vertex whose pendant
                  edge was subdivided, local the position along the path
    """

    role: str
    i: int | None = None
    j: int | None = None
    k: int | None = None
    local: int | None = None

    def token(self) -> str:
        parts = [self.role] + [
            str(x) for x in (self.i, self.j, self.k, self.local) if x is not None
        ]
        return ":".join(parts)

    @staticmethod
    def from_token(tok: str) -> "VertexTag":
        bits = tok.split(":")
        role, idx = bits[0], [int(x) for x in bits[1:]]
        fields: dict = {}
        names = {
            "core": ("i",),
            "triangle": ("i", "j", "k"),
            "gadget": ("i", "j", "k", "local"),
            "apex": ("i",),
            "subdiv": ("i", "local"),
        }
        for name, val in zip(names.get(role, ()), idx):
            fields[name] = val
        return VertexTag(role, **fields)


def build_graph(n: int, edges) -> Graph:
    """Validate and canonicalise an edge list into a Graph.

    Out-of-range endpoints, self-loops and duplicate edges are errors;
    duplicates are never collapsed silently.
    """
    if n < 0:
        raise GraphError("vertex count must be non-negative")
    seen = set()
    canon = []
    for e in edges:
        u, v = e
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u},{v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        if u > v:
            u, v = v, u
        if (u, v) in seen:
            raise GraphError(f"duplicate edge ({u},{v})")
        seen.add((u, v))
        canon.append((u, v))
    return Graph(n, tuple(sorted(canon)))


def complement(g: Graph) -> Graph:
    """Graph on the same vertices with exactly the missing edges."""
    present = g.edge_set
    edges = [
        (u, v)
        for u in range(g.n)
        for v in range(u + 1, g.n)
        if (u, v) not in present
    ]
    return Graph(g.n, tuple(edges))


def is_connected(g: Graph) -> bool:
    """True iff the graph has exactly one component (n >= 1 required)."""
    if g.n < 1:
        raise GraphError("connectivity needs at least one vertex")
    masks = g.neighbor_masks
    seen = 1
    frontier = [0]
    while frontier:
        v = frontier.pop()
        new = masks[v] & ~seen
        seen |= new
        while new:
            low = new & -new
            frontier.append(low.bit_length() - 1)
            new ^= low
    return seen == (1 << g.n) - 1


@dataclass(frozen=True)
class DegreeProfile:
    degrees: tuple[int, ...]      # sorted ascending
    min_degree: int
    max_degree: int
    regular: bool


def degree_profile(g: Graph) -> DegreeProfile:
    """Sorted degree multiset plus min/max and a regularity flag."""
    degs = tuple(sorted(g.degrees))
    if not degs:
        return DegreeProfile((), 0, 0, True)
    return DegreeProfile(degs, degs[0], degs[-1], degs[0] == degs[-1])


def subdivide_edge(g: Graph, e: tuple[int, int], k: int) -> tuple[Graph, tuple[int, ...]]:
    """Replace edge e by a path through k new vertices.

    The new vertices get indices n..n+k-1 in path order from the smaller
    endpoint of e.  Returns (graph, path_vertices); original vertices keep
    their indices.
    """
    u, v = e
    if u > v:
        u, v = v, u
    if k < 1:
        raise GraphError("subdivision needs k >= 1")
    if (u, v) not in g.edge_set:
        raise GraphError(f"({u},{v}) is not an edge")
    path = tuple(range(g.n, g.n + k))
    edges = [x for x in g.edges if x != (u, v)]
    chain = [u, *path, v]
    for a, b in zip(chain, chain[1:]):
        edges.append((a, b) if a < b else (b, a))
    return Graph(g.n + k, tuple(sorted(edges))), path


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    """Relabelled union; g2's vertices are shifted up by g1.n."""
    shift = g1.n
    edges = list(g1.edges) + [(u + shift, v + shift) for u, v in g2.edges]
    return Graph(g1.n + g2.n, tuple(sorted(edges)))


def coalesce(
    g1: Graph, v1: int, g2: Graph, v2: int
) -> tuple[Graph, tuple[int, ...], tuple[int, ...]]:
    """Identify v1 of g1 with v2 of g2 on the disjoint union.

    Returns (graph, map1, map2) where map1/map2 send old vertex ids of
    g1/g2 to ids in the result.  g1 keeps its labels; g2's remaining
    vertices follow in ascending original order.
    """
    if not (0 <= v1 < g1.n):
        raise GraphError(f"root {v1} out of range for first operand")
    if not (0 <= v2 < g2.n):
        raise GraphError(f"root {v2} out of range for second operand")
    map1 = tuple(range(g1.n))
    map2 = []
    nxt = g1.n
    for v in range(g2.n):
        if v == v2:
            map2.append(v1)
        else:
            map2.append(nxt)
            nxt += 1
    map2 = tuple(map2)
    edges = list(g1.edges)
    for u, v in g2.edges:
        a, b = map2[u], map2[v]
        edges.append((a, b) if a < b else (b, a))
    return Graph(g1.n + g2.n - 1, tuple(sorted(edges))), map1, map2
