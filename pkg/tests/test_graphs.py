import itertools
import math

import numpy as np
import pytest
from scipy.sparse.csgraph import minimum_spanning_tree as scipy_mst

from conftest import TRIAD, random_sites
from hypsweep.graphs import DelaunayGraph, delaunay_from_voronoi, minimum_spanning_tree
from hypsweep.hgeom import PolarPoint, distance
from hypsweep.oracle import brute_force_delaunay
from hypsweep.sweep import compute_voronoi

# acosh(cosh^2 1 + sinh^2 1 / 2), mpmath at 40 digits
TRIAD_SIDE = 1.787744135607193703108


def _complete(sites):
    n = len(sites)
    w = np.zeros((n, n))
    for i, j in itertools.combinations(range(n), 2):
        w[i, j] = distance(sites[i], sites[j])
    return w


def test_two_sites():
    sites = [PolarPoint(1, 0), PolarPoint(2, 1)]
    g = delaunay_from_voronoi(compute_voronoi(sites))
    assert list(g.adjacency) == [(0, 1)]
    t = minimum_spanning_tree(g)
    assert t.edges == [(0, 1)] and t.total_weight == pytest.approx(distance(*sites))


def test_triad_weights():
    g = delaunay_from_voronoi(compute_voronoi(TRIAD))
    assert sorted(g.adjacency) == [(0, 1), (0, 2), (1, 2)]
    for w in g.adjacency.values():
        assert w == pytest.approx(TRIAD_SIDE, abs=1e-13)
    t = minimum_spanning_tree(g)
    assert len(t.edges) == 2
    assert t.total_weight == pytest.approx(2 * TRIAD_SIDE, abs=1e-12)
    assert g.neighbours(0) == [1, 2]


@pytest.mark.parametrize("seed", range(10))
def test_delaunay_matches_brute_force(seed):
    sites = random_sites(4 + seed, 300 + seed)
    g = delaunay_from_voronoi(compute_voronoi(sites))
    assert set(g.adjacency) == brute_force_delaunay(sites)
    assert len(g.adjacency) <= 3 * len(sites) - 6


def test_disconnected_graph_is_rejected():
    sites = [PolarPoint(1, 0), PolarPoint(2, 1), PolarPoint(3, 2)]
    with pytest.raises(ValueError):
        minimum_spanning_tree(DelaunayGraph(sites, {(0, 1): 1.0}))


def test_ties_broken_by_pair():
    sites = [PolarPoint(1, k) for k in range(4)]
    g = DelaunayGraph(sites, {(0, 1): 1.0, (1, 2): 1.0, (0, 2): 1.0, (2, 3): 2.0})
    assert minimum_spanning_tree(g).edges == [(0, 1), (0, 2), (2, 3)]


@pytest.mark.parametrize("seed", range(20))
def test_cut_property(seed):
    sites = random_sites(25, 500 + seed)
    tree = minimum_spanning_tree(delaunay_from_voronoi(compute_voronoi(sites)))
    w = _complete(sites)
    w = w + w.T
    assert tree.total_weight == pytest.approx(sum(w[a, b] for a, b in tree.edges), abs=1e-12)
    for a, b in tree.edges:
        # the two components left after removing (a, b)
        adj = {i: set() for i in range(len(sites))}
        for x, y in tree.edges:
            if (x, y) != (a, b):
                adj[x].add(y)
                adj[y].add(x)
        side, stack = {a}, [a]
        while stack:
            for y in adj[stack.pop()]:
                if y not in side:
                    side.add(y)
                    stack.append(y)
        other = [i for i in range(len(sites)) if i not in side]
        cheapest = min(w[i, j] for i in side for j in other)
        assert w[a, b] <= cheapest + 1e-12


def test_relabelling_keeps_weight():
    sites = random_sites(30, 77)
    perm = np.random.default_rng(1).permutation(len(sites))
    t1 = minimum_spanning_tree(delaunay_from_voronoi(compute_voronoi(sites)))
    t2 = minimum_spanning_tree(delaunay_from_voronoi(compute_voronoi([sites[i] for i in perm])))
    assert t1.total_weight == pytest.approx(t2.total_weight, abs=1e-12)


def test_matches_complete_graph_mst():
    sites = random_sites(40, 8)
    ref = scipy_mst(_complete(sites)).sum()
    assert minimum_spanning_tree(delaunay_from_voronoi(compute_voronoi(sites))).total_weight == pytest.approx(ref, abs=1e-9)
