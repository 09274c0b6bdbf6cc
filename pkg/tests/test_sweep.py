import math

import pytest

from conftest import SQUARE, TRIAD, random_sites
from hypsweep.events import CircleEvent
from hypsweep.hgeom import EPS_GEOM, Geodesic, PolarPoint, distance, heading
from hypsweep.oracle import compare, oracle
from hypsweep.sweep import (
    EPS_MERGE, Sweep, VoronoiDiagram, VoronoiEdge, VoronoiVertex, check_diagram, compute_voronoi,
    edge_samples, merge_duplicate_vertices,
)


def test_single_site():
    d = compute_voronoi([(1, 0)])
    assert d.vertices == [] and d.edges == []
    assert check_diagram(d).ok


def test_two_sites():
    d = compute_voronoi([(1, 0), (2, 1)])
    assert d.vertices == []
    assert d.edges == [VoronoiEdge(0, 1, None, None)]
    assert check_diagram(d).ok


def test_symmetric_triad():
    d = compute_voronoi(TRIAD)
    (v,) = d.vertices
    assert v.position.r == pytest.approx(0, abs=1e-12)
    assert v.witness_radius == pytest.approx(1)
    # clockwise from the polar axis: 0, then 4pi/3, then 2pi/3
    assert v.incident_sites == (0, 2, 1)
    assert len(d.edges) == 3
    for e in d.edges:
        assert sorted([e.endpoint_a, e.endpoint_b], key=lambda x: x is None) == [0, None]
    assert check_diagram(d).ok


def test_incidence_tuple_is_clockwise_from_far_point():
    for seed in range(10):
        d = compute_voronoi(random_sites(8, seed))
        for v in d.vertices:
            far = PolarPoint(v.position.r + v.witness_radius, v.position.phi)
            base = heading(v.position, far)
            # clockwise angle from the far point direction, seen from the vertex
            cw = [(base - heading(v.position, d.sites[i])) % (2 * math.pi) for i in v.incident_sites]
            assert cw == sorted(cw)


def test_square_merges_at_pole():
    d = compute_voronoi(SQUARE)
    (v,) = d.vertices
    assert v.position.r == pytest.approx(0, abs=1e-12)
    assert sorted(v.incident_sites) == [0, 1, 2, 3]
    assert len(d.edges) == 4
    assert check_diagram(d).ok


def test_cocircular_off_pole():
    center = PolarPoint(1.5, 0.7)
    sites = [Geodesic(center, h).at(0.8) for h in (0.3, 1.9, 3.4, 5.0)]
    sites += [PolarPoint(3.5, 3.0), PolarPoint(0.2, 4.0)]
    raw = compute_voronoi(sites, merge=False)
    d = merge_duplicate_vertices(raw)
    assert len(d.vertices) == len(raw.vertices) - 1
    quad = [v for v in d.vertices if len(v.incident_sites) == 4]
    assert len(quad) == 1 and distance(quad[0].position, center) < 1e-9
    assert compare(d, oracle(sites)).ok
    assert check_diagram(d).ok


def _diagram_with_pair(gap):
    sites = [PolarPoint(1, 0), PolarPoint(1, 2), PolarPoint(1, 4)]
    p = PolarPoint(0.5, 1.0)
    q = Geodesic(p, 0.3).at(gap)
    verts = [VoronoiVertex(0, p, (0, 1, 2), 1.0), VoronoiVertex(1, q, (0, 1, 2), 1.0)]
    edges = [VoronoiEdge(0, 1, 0, 1), VoronoiEdge(0, 1, 0, None), VoronoiEdge(0, 1, 1, None), VoronoiEdge(1, 2, 1, None)]
    return VoronoiDiagram(sites, verts, edges)


def test_merge_thresholds():
    far = _diagram_with_pair(10 * EPS_MERGE)
    assert merge_duplicate_vertices(far) == far
    near = merge_duplicate_vertices(_diagram_with_pair(0.1 * EPS_MERGE))
    assert len(near.vertices) == 1
    # the zero-length edge goes, the two rays collapse into one
    assert near.edges == [VoronoiEdge(0, 1, 0, None), VoronoiEdge(1, 2, 0, None)]


def test_generic_diagram_unchanged_by_merge():
    d = compute_voronoi(random_sites(40, 3), merge=False)
    assert merge_duplicate_vertices(d) == d


@pytest.mark.parametrize("seed", range(30))
def test_matches_oracle(seed):
    sites = random_sites(3 + seed % 10, 1000 + seed)
    d = compute_voronoi(sites)
    assert compare(d, oracle(sites)).ok
    assert check_diagram(d).ok


@pytest.mark.parametrize("n,R", [(200, 5.0), (300, 12.0), (200, 2.0)])
def test_self_check_larger(n, R):
    d = compute_voronoi(random_sites(n, 7, R=R))
    rep = check_diagram(d, samples_per_edge=4)
    assert rep.ok, rep.first


def test_check_detects_perturbed_vertex():
    d = compute_voronoi(random_sites(12, 5))
    v = d.vertices[0]
    moved = VoronoiVertex(v.id, Geodesic(v.position, 1.0).at(1e-3), v.incident_sites, v.witness_radius)
    bad = VoronoiDiagram(d.sites, [moved] + d.vertices[1:], d.edges)
    rep = check_diagram(bad)
    assert not rep.ok and rep.first


def test_edge_samples_are_equidistant():
    d = compute_voronoi(random_sites(20, 9))
    for e in d.edges:
        for p in edge_samples(d, e, 5):
            a, b = d.sites[e.site_a], d.sites[e.site_b]
            assert abs(distance(p, a) - distance(p, b)) <= EPS_GEOM * max(1.0, distance(p, a))


@pytest.mark.parametrize("seed", range(15))
def test_breakpoints_approach_vertex_along_bisector(seed):
    sites = random_sites(7, 40 + seed)
    sw = Sweep(sites)
    seen = 0
    while sw.queue.peek_priority() is not None:
        ev = sw.queue.heap[0][-1]
        if isinstance(ev, CircleEvent) and ev.priority - sw.sweep_radius > 1e-6:
            curve, v = sw.curve, ev.circle.center
            now = curve.sweep_radius
            third = {ev.left: ev.right.right, ev.right: ev.left.left}
            for node in (ev.left, ev.right):
                a, b = sites[node.left], sites[node.right]
                ha, hb = heading(v, a), heading(v, b)
                dirs = []
                for k in range(10):
                    curve.sweep_radius = now + (ev.priority - now) * k / 10
                    p = curve.realize(node)
                    # on the bisector through v, coming from a fixed side
                    mid = ha + 0.5 * math.atan2(math.sin(hb - ha), math.cos(hb - ha))
                    if distance(p, v) > 1e-7:
                        dirs.append(math.cos(heading(v, p) - mid))
                        assert abs(math.sin(heading(v, p) - mid)) <= 1e-6
                    # the third site is strictly farther than the defining pair
                    assert distance(p, sites[third[node]]) > distance(p, a)
                assert all(d > 0 for d in dirs) or all(d < 0 for d in dirs)
            curve.sweep_radius = now
            seen += 1
        sw.step()
    assert seen or not compute_voronoi(sites).vertices


def test_event_stats():
    d = compute_voronoi(random_sites(100, 1))
    s = d.stats
    assert s["site_events"] == 100
    assert s["events"] == s["site_events"] + s["circle_events"] + s["structure_events"]
