import math

import pytest

from conftest import TRIAD, random_sites
from hypsweep.beach import BeachCurve, Direction, breakpoint_angle
from hypsweep.events import (
    CircleEvent, EventQueue, Kind, Position, SiteEvent, StructureEvent, invalidate, pop_next,
    predict_circle_event, predict_structure_event, schedule_sites,
)
from hypsweep.hgeom import Circumcircle, GeometryError, PolarPoint, circumcenter, distance, far_point_radius
from hypsweep.sweep import Sweep, compute_voronoi


def test_schedule_sites():
    assert pop_next(schedule_sites([])) is None
    q = schedule_sites([(1, 0)])
    ev = pop_next(q)
    assert isinstance(ev, SiteEvent) and ev.priority == 1 and pop_next(q) is None
    q = schedule_sites([(2, 1), (1, 3), (1.5, 0)])
    assert [pop_next(q).priority for _ in range(3)] == [1, 1.5, 2]
    with pytest.raises(GeometryError):
        schedule_sites([(1, 0), (1, 0)])
    with pytest.raises(GeometryError):
        schedule_sites([(0, 0)])
    with pytest.raises(GeometryError):
        schedule_sites([(51, 0)])


def _nodes(sites):
    curve = BeachCurve(sites)
    nodes = [curve._new_node(0, 1), curve._new_node(1, 2)]
    return curve, nodes


def test_pop_order_and_ties():
    q = EventQueue()
    _, (a, b) = _nodes([PolarPoint(1, 0), PolarPoint(2, 1), PolarPoint(3, 2)])
    circle = Circumcircle(PolarPoint(1, 0), 1.0)
    q.push(StructureEvent(2.0, a, Direction.FIRST_TO_LAST))
    q.push(CircleEvent(2.0, circle, (0, 1, 2), a, b))
    q.push(SiteEvent(2.0, 5, 0.3))
    q.push(SiteEvent(1.0, 4, 0.1))
    kinds = [(e.priority, e.kind) for e in iter(q.pop_next, None)]
    assert kinds == [(1.0, Kind.SITE), (2.0, Kind.SITE), (2.0, Kind.CIRCLE), (2.0, Kind.STRUCTURE)]
    assert q.pop_next() is None


def test_invalidate_skips_stale_events():
    q = EventQueue()
    _, (a, b) = _nodes([PolarPoint(1, 0), PolarPoint(2, 1), PolarPoint(3, 2)])
    q.push(CircleEvent(1.0, Circumcircle(PolarPoint(0.5, 0), 0.5), (0, 1, 2), a, b))
    q.push(SiteEvent(3.0, 0, 0.0))
    invalidate(q, a)
    invalidate(q, 12345)  # unknown handle: nothing to cancel
    ev = pop_next(q)
    assert isinstance(ev, SiteEvent)
    assert q.stale_dropped == 1


def test_collinear_triple_has_no_event():
    sites = [PolarPoint(1, 0), PolarPoint(2, 0), PolarPoint(3, 0)]
    _, (a, b) = _nodes(sites)
    assert predict_circle_event(a, b, 3.0, sites) is None


def test_symmetric_triple_gives_pole_vertex():
    # all three on the first sweep circle: the vertex comes from the start of the sweep
    d = compute_voronoi(TRIAD)
    (v,) = d.vertices
    assert v.position.r == pytest.approx(0, abs=1e-12)
    assert v.witness_radius == pytest.approx(1, abs=1e-12)
    assert far_point_radius(Circumcircle(v.position, v.witness_radius)) == pytest.approx(1)


def test_false_circle_event_never_converges():
    sites = random_sites(6, 1)
    sw = Sweep(sites)
    checked = 0
    while sw.step():
        c = sw.curve
        for x in list(c) if len(c) >= 3 else []:
            y = c.succ(x)
            if len({x.left, x.right, y.right}) < 3:
                continue
            cc = circumcenter(sites[x.left], sites[x.right], sites[y.right])
            if cc is None or far_point_radius(cc) < c.sweep_radius + 0.05:
                continue
            if predict_circle_event(x, y, c.sweep_radius, sites) is not None:
                continue
            # at the far-point radius the two breakpoints are not at the center
            now = c.sweep_radius
            c.sweep_radius = far_point_radius(cc)
            apart = max(distance(c.realize(x), cc.center), distance(c.realize(y), cc.center))
            c.sweep_radius = now
            assert apart > 1e-3
            checked += 1
    assert checked > 0


def _bp_angle(left, right, rho):
    a = breakpoint_angle(left, right, rho)
    return a - 2 * math.pi if a > math.pi else a


def test_structure_event_matches_stepped_crossing():
    sites = [PolarPoint(1.0, 1.0), PolarPoint(1.5, 5.5)]
    sw = Sweep(sites, record=True).run()
    ((_, priority, (left, right)),) = [e for e in sw.log if e[0] is Kind.STRUCTURE]
    l, r = sites[left], sites[right]
    grid = [1.5 + 1e-3 * k for k in range(1, 8000)]
    lo = next(g for g, h in zip(grid, grid[1:]) if _bp_angle(l, r, g) * _bp_angle(l, r, h) <= 0)
    hi = lo + 1e-3
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _bp_angle(l, r, lo) * _bp_angle(l, r, mid) <= 0:
            hi = mid
        else:
            lo = mid
    assert priority == pytest.approx(0.5 * (lo + hi), abs=1e-6)


def test_structure_event_absent_without_axis_crossing():
    # the bisector of sites mirrored across the polar axis is the axis itself
    sites = [PolarPoint(1.0, 0.5), PolarPoint(1.0, 2 * math.pi - 0.5)]
    curve = BeachCurve(sites)
    curve.seed([0, 1])
    for node in curve:
        for pos in Position:
            assert predict_structure_event(node, pos, 1.0, sites) is None
    sites = [PolarPoint(1.0, 2.0), PolarPoint(2.0, 2.5)]
    curve = BeachCurve(sites)
    node = curve._new_node(0, 1)
    assert predict_structure_event(node, Position.FIRST, 2.0, sites) is None


@pytest.mark.parametrize("seed", range(12))
def test_split_arc_cancels_pending_event(seed):
    sites = random_sites(4, seed)
    sw = Sweep(sites)
    pushed, fired = [], []
    push, circle = sw.queue.push, sw._circle
    sw.queue.push = lambda ev: (pushed.append(ev), push(ev))
    sw._circle = lambda ev: (fired.append(ev), circle(ev))
    cancelled = []
    while sw.queue.peek_priority() is not None:
        at_site = isinstance(sw.queue.heap[0][-1], SiteEvent)
        live = [e for e in pushed if isinstance(e, CircleEvent) and not sw.queue.is_stale(e)
                and not any(f is e for f in fired)]
        sw.step()
        if at_site:
            cancelled += [e for e in live if sw.queue.is_stale(e)]
    assert not any(any(f is c for f in fired) for c in cancelled)


def test_some_pending_event_is_cancelled_by_a_site():
    for seed in range(60):
        sw = Sweep(random_sites(4, seed))
        sw.run()
        if sw.queue.stale_dropped:
            return
    pytest.fail("no cancelled event in the sample")


@pytest.mark.parametrize("seed", range(20))
def test_no_event_fires_early(seed):
    sw = Sweep(random_sites(30, seed))
    while True:
        before = sw.sweep_radius
        nxt = sw.queue.peek_priority()
        if nxt is None:
            break
        assert nxt >= before - 1e-9
        sw.step()
