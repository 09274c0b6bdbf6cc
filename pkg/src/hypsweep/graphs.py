"""Delaunay graph and minimum spanning tree, both read off the Voronoi diagram."""
from __future__ import annotations

from dataclasses import dataclass, field

from .hgeom import PolarPoint, distance
from .sweep import VoronoiDiagram


@dataclass
class DelaunayGraph:
    sites: list[PolarPoint]
    adjacency: dict[tuple[int, int], float] = field(default_factory=dict)

    def neighbours(self, i: int) -> list[int]:
        return sorted(b if a == i else a for a, b in self.adjacency if i in (a, b))


@dataclass
class SpanningTree:
    sites: list[PolarPoint]
    edges: list[tuple[int, int]]
    total_weight: float


def delaunay_from_voronoi(diagram: VoronoiDiagram) -> DelaunayGraph:
    """One Delaunay edge per Voronoi edge, weighted by site distance."""
    sites = diagram.sites
    adj = {}
    for e in diagram.edges:
        key = (e.site_a, e.site_b)
        if key not in adj:
            adj[key] = distance(sites[e.site_a], sites[e.site_b])
    return DelaunayGraph(list(sites), dict(sorted(adj.items())))


def minimum_spanning_tree(graph: DelaunayGraph) -> SpanningTree:
    """Kruskal over the Delaunay edges; ties broken by the site pair."""
    n = len(graph.sites)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    chosen = []
    total = 0.0
    for (a, b), w in sorted(graph.adjacency.items(), key=lambda kv: (kv[1], kv[0])):
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        parent[ra] = rb
        chosen.append((a, b))
        total += w
        if len(chosen) == n - 1:
            break
    if n and len(chosen) != n - 1:
        raise ValueError(f"graph is disconnected: {n - 1 - len(chosen)} components too many")
    return SpanningTree(list(graph.sites), chosen, total)
