"""Voronoi diagrams by an expanding sweep circle.

The sweep circle is centred at the pole and grows from radius 0.  Sites
join the beach curve when the circle reaches them; an arc of the curve
vanishes when the circle reaches the far point of the witness circle of
its site and its two neighbours, which is where a Voronoi vertex lies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .beach import EPS_EVENT, BeachCurve, BeachIntersection, Direction, InconsistencyError
from .events import (
    CircleEvent,
    EventQueue,
    Kind,
    Position,
    SiteEvent,
    StructureEvent,
    predict_circle_event,
    predict_structure_event,
    schedule_sites,
    validate_sites,
)
from .hgeom import (
    EPS_GEOM,
    TAU,
    PolarPoint,
    Side,
    angle_at_vertex,
    bisector_geodesic,
    distance,
    side_of_diameter,
    to_hyperboloid,
)

EPS_MERGE = 1e-7
UNBOUNDED = None


@dataclass(frozen=True)
class VoronoiVertex:
    id: int
    position: PolarPoint
    incident_sites: tuple[int, ...]
    witness_radius: float


@dataclass(frozen=True)
class VoronoiEdge:
    """A piece of the bisector of ``site_a < site_b``.

    Walking from ``endpoint_a`` to ``endpoint_b`` keeps ``site_a`` on the
    left.  ``None`` marks an end running off to infinity.
    """

    site_a: int
    site_b: int
    endpoint_a: Optional[int]
    endpoint_b: Optional[int]


@dataclass
class VoronoiDiagram:
    sites: list[PolarPoint]
    vertices: list[VoronoiVertex] = field(default_factory=list)
    edges: list[VoronoiEdge] = field(default_factory=list)
    stats: dict = field(default_factory=dict, compare=False)


def incidence_tuple(position: PolarPoint, incident: Sequence[int], sites: Sequence[PolarPoint]) -> tuple[int, ...]:
    """Incident sites in clockwise order, starting from the far point.

    At the pole there is no far point; the polar axis is used instead.
    """

    def key(i):
        s = sites[i]
        if position.r == 0.0:
            return ((-s.phi) % TAU, i)
        d = distance(position, s)
        try:
            gamma = angle_at_vertex(s.r, position.r, d)
        except Exception:
            gamma = 0.0
        side = side_of_diameter(position, s)
        # gamma is measured from the direction back to the pole
        cw = math.pi + gamma if side is Side.LEFT else math.pi - gamma
        return (cw % TAU, i)

    return tuple(sorted(set(incident), key=key))


def _edge_slots(node: BeachIntersection) -> tuple[int, int]:
    """(slot the breakpoint traces, slot it started from) in an edge record.

    A breakpoint (L, R) walks its bisector with R on its left, i.e. towards
    endpoint_b when R is the smaller id.
    """
    return (3, 2) if node.right < node.left else (2, 3)


class Sweep:
    """One run of the sweep, steppable by radius."""

    def __init__(self, sites: Sequence, record: bool = False):
        self.sites = validate_sites(sites)
        self.curve = BeachCurve(self.sites)
        self._xyz = [to_hyperboloid(p) for p in self.sites]
        self.vertices: list[list] = []  # [position, incident, witness]
        self.edges: list[list] = []  # [a, b, end_a, end_b]
        self.counts = {k: 0 for k in Kind}
        self.log: Optional[list] = [] if record else None
        self.max_beach = 0
        self._ends: dict[int, Optional[StructureEvent]] = {}
        self._first: Optional[BeachIntersection] = None
        self._last: Optional[BeachIntersection] = None

        seeded: list[int] = []
        if len(self.sites) >= 2:
            r0 = min(p.r for p in self.sites)
            group = [i for i, p in enumerate(self.sites) if p.r == r0]
            if len(group) >= 2:
                seeded = group
        self.queue: EventQueue = schedule_sites(self.sites, skip=seeded)
        if seeded:
            self._seed(seeded)

    @property
    def sweep_radius(self) -> float:
        return self.curve.sweep_radius

    # -- bookkeeping ------------------------------------------------------------

    def _new_edge(self, a: int, b: int) -> int:
        self.edges.append([min(a, b), max(a, b), None, None])
        return len(self.edges) - 1

    def _attach(self, node: BeachIntersection, edge: int, start: Optional[int]) -> None:
        trace, origin = _edge_slots(node)
        node.edge = edge
        node.slot = trace
        if start is not None:
            self.edges[edge][origin] = start

    def _record(self, kind: Kind, priority: float, info) -> None:
        self.counts[kind] += 1
        if self.log is not None:
            self.log.append((kind, priority, info))

    def _seed(self, group: list[int]) -> None:
        curve = self.curve
        nodes = curve.seed(group)
        r0 = self.sites[group[0]].r
        for i in group:
            self._record(Kind.SITE, r0, i)
        if len(nodes) == 2:
            e = self._new_edge(nodes[0].left, nodes[0].right)
            for n in nodes:
                self._attach(n, e, None)
        else:
            v = len(self.vertices)
            self.vertices.append([PolarPoint(0.0, 0.0), list(group), r0])
            for n in nodes:
                self._attach(n, self._new_edge(n.left, n.right), v)
            for n in nodes:
                self._predict_pair(n, curve.succ(n))
        self._refresh_ends()

    def _predict_pair(self, left: BeachIntersection, right: BeachIntersection) -> None:
        ev = predict_circle_event(left, right, self.curve.sweep_radius, self.sites, self._xyz)
        if ev is not None:
            self.queue.push(ev)

    def _refresh_ends(self) -> None:
        """Keep one structure event each for the current first and last breakpoint."""
        curve = self.curve
        if curve.size < 2:
            self._first = self._last = None
            return
        for position, node, attr in ((Position.FIRST, curve.head, "_first"), (Position.LAST, curve.tail, "_last")):
            if getattr(self, attr) is node:
                continue
            setattr(self, attr, node)
            ev = predict_structure_event(node, position, curve.sweep_radius, self.sites)
            if ev is not None:
                self.queue.push(ev)

    def _kill(self, node: BeachIntersection) -> None:
        self.queue.invalidate(node.handle)
        if self._first is node:
            self._first = None
        if self._last is node:
            self._last = None

    # -- event handlers -----------------------------------------------------------

    def _site(self, ev: SiteEvent) -> None:
        curve = self.curve
        curve.sweep_radius = max(curve.sweep_radius, ev.priority)
        self._record(Kind.SITE, ev.priority, ev.site)
        split, pair = curve.insert_arc(ev.site)
        if not pair:
            return
        n1, n2 = pair
        e = self._new_edge(split, ev.site)
        self._attach(n1, e, None)
        self._attach(n2, e, None)
        if curve.size == 2:
            self._refresh_ends()
            return
        p, q = curve.pred(n1), curve.succ(n2)
        # the arc between p and q is split, so their pending event is false
        self._kill(p)
        self._kill(q)
        pairs = {}
        for a, b in ((curve.pred(p), p), (p, n1), (n2, q), (q, curve.succ(q))):
            pairs[(a.handle, b.handle)] = (a, b)
        for a, b in pairs.values():
            self._predict_pair(a, b)
        self._refresh_ends()

    def _circle(self, ev: CircleEvent) -> None:
        curve = self.curve
        x, y = ev.left, ev.right
        if not (x.alive and y.alive and curve.succ(x) is y):
            raise InconsistencyError("circle event on non-adjacent breakpoints", ev.priority)
        curve.sweep_radius = max(curve.sweep_radius, ev.priority)
        self._record(Kind.CIRCLE, ev.priority, ev.sites)
        center = ev.circle.center
        v = len(self.vertices)
        self.vertices.append([center, list(ev.sites), ev.circle.radius])
        self.edges[x.edge][x.slot] = v
        self.edges[y.edge][y.slot] = v
        w, z = curve.pred(x), curve.succ(y)
        self._kill(x)
        self._kill(y)
        node = curve.remove_arc(x, y, center)
        self._attach(node, self._new_edge(node.left, node.right), v)
        if curve.size >= 2:
            w, z = curve.pred(node), curve.succ(node)
            pairs = {(w.handle, node.handle): (w, node), (node.handle, z.handle): (node, z)}
            for a, b in pairs.values():
                self._predict_pair(a, b)
        self._refresh_ends()

    def _structure(self, ev: StructureEvent) -> None:
        curve = self.curve
        node = ev.node
        expected = curve.head if ev.direction is Direction.FIRST_TO_LAST else curve.tail
        if node is not expected or curve.size < 2:
            return
        curve.sweep_radius = max(curve.sweep_radius, ev.priority)
        self._record(Kind.STRUCTURE, ev.priority, (node.left, node.right))
        curve.rotate_extremes(ev.direction)
        self._first = self._last = None
        self._refresh_ends()

    def step(self) -> bool:
        """Process one event; False once the queue is exhausted."""
        ev = self.queue.pop_next()
        if ev is None:
            return False
        if ev.priority < self.curve.sweep_radius - EPS_EVENT:
            raise InconsistencyError(f"event at {ev.priority!r} is behind the sweep", self.curve.sweep_radius)
        if isinstance(ev, SiteEvent):
            self._site(ev)
        elif isinstance(ev, CircleEvent):
            self._circle(ev)
        else:
            self._structure(ev)
        if self.curve.size > self.max_beach:
            self.max_beach = self.curve.size
        return True

    def advance_to(self, radius: float) -> None:
        """Process every event up to ``radius`` and park the sweep there."""
        while True:
            nxt = self.queue.peek_priority()
            if nxt is None or nxt > radius:
                break
            self.step()
        if radius > self.curve.sweep_radius:
            self.curve.sweep_radius = radius

    def run(self) -> "Sweep":
        while self.step():
            pass
        return self

    def diagram(self, merge: bool = True, tol: float = EPS_MERGE) -> VoronoiDiagram:
        """The diagram built so far; open edge ends count as unbounded."""
        verts = [
            VoronoiVertex(i, pos, incidence_tuple(pos, inc, self.sites), w)
            for i, (pos, inc, w) in enumerate(self.vertices)
        ]
        edges = [VoronoiEdge(a, b, ea, eb) for a, b, ea, eb in self.edges]
        stats = {
            "site_events": self.counts[Kind.SITE],
            "circle_events": self.counts[Kind.CIRCLE],
            "structure_events": self.counts[Kind.STRUCTURE],
            "stale_events": self.queue.stale_dropped,
            "max_beach": self.max_beach,
        }
        stats["events"] = stats["site_events"] + stats["circle_events"] + stats["structure_events"]
        d = VoronoiDiagram(list(self.sites), verts, edges, stats)
        return merge_duplicate_vertices(d, tol) if merge else d


def compute_voronoi(sites: Sequence, merge: bool = True, tol: float = EPS_MERGE) -> VoronoiDiagram:
    """Voronoi diagram of ``sites`` (pairs ``(r, phi)`` or :class:`PolarPoint`)."""
    return Sweep(sites).run().diagram(merge=merge, tol=tol)


# -- post-processing --------------------------------------------------------------


def merge_duplicate_vertices(diagram: VoronoiDiagram, tol: float = EPS_MERGE) -> VoronoiDiagram:
    """Unify vertices closer than ``tol`` and clean up the edges between them."""
    verts = diagram.vertices
    parent = list(range(len(verts)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    order = sorted(range(len(verts)), key=lambda i: verts[i].position.r)
    for k, i in enumerate(order):
        ri = verts[i].position.r
        for m in range(k + 1, len(order)):
            j = order[m]
            if verts[j].position.r - ri > tol:
                break
            if distance(verts[i].position, verts[j].position) <= tol:
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    if all(find(i) == i for i in range(len(verts))):
        return VoronoiDiagram(diagram.sites, list(verts), list(diagram.edges), diagram.stats)

    groups: dict[int, list[int]] = {}
    for i in range(len(verts)):
        groups.setdefault(find(i), []).append(i)
    new_id = {root: k for k, root in enumerate(sorted(groups))}
    new_verts = []
    for root in sorted(groups):
        members = groups[root]
        v = verts[root]
        if len(members) == 1:
            new_verts.append(VoronoiVertex(new_id[root], v.position, v.incident_sites, v.witness_radius))
            continue
        incident = sorted({s for m in members for s in verts[m].incident_sites})
        # the witness circle must stay empty, so it shrinks to the nearest
        # incident site
        w = min(distance(v.position, diagram.sites[s]) for s in incident)
        new_verts.append(VoronoiVertex(
            new_id[root], v.position, incidence_tuple(v.position, incident, diagram.sites), w,
        ))
    remap = {i: new_id[find(i)] for i in range(len(verts))}
    seen = set()
    new_edges = []
    for e in diagram.edges:
        ea = None if e.endpoint_a is None else remap[e.endpoint_a]
        eb = None if e.endpoint_b is None else remap[e.endpoint_b]
        if ea is not None and ea == eb:
            continue
        key = (e.site_a, e.site_b, ea, eb)
        if key in seen:
            continue
        seen.add(key)
        new_edges.append(VoronoiEdge(e.site_a, e.site_b, ea, eb))
    return VoronoiDiagram(diagram.sites, new_verts, new_edges, diagram.stats)


# -- self-check ---------------------------------------------------------------------


@dataclass
class CheckReport:
    ok: bool
    violations: list[str]

    @property
    def first(self) -> Optional[str]:
        return self.violations[0] if self.violations else None

    def __bool__(self) -> bool:
        return self.ok


def _sinh_half_sq(r1, p1, r2, p2):
    s = np.sinh(0.5 * (r1 - r2))
    h = np.sin(0.5 * (p1 - p2))
    return s * s + np.sinh(r1) * np.sinh(r2) * h * h


def nearest_distances(points: Sequence[PolarPoint], sites: Sequence[PolarPoint], chunk: int = 1024) -> np.ndarray:
    """Distance from each point to its nearest site, shape ``(len(points),)``."""
    if not points:
        return np.zeros(0)
    sr = np.array([s.r for s in sites])
    sp = np.array([s.phi for s in sites])
    out = np.empty(len(points))
    for lo in range(0, len(points), chunk):
        block = points[lo:lo + chunk]
        pr = np.array([p.r for p in block])[:, None]
        pp = np.array([p.phi for p in block])[:, None]
        d = 2.0 * np.arcsinh(np.sqrt(_sinh_half_sq(pr, pp, sr[None, :], sp[None, :]).min(axis=1)))
        out[lo:lo + chunk] = d
    return out


def edge_geodesic(diagram: VoronoiDiagram, edge: VoronoiEdge, reach: float = 2.0):
    """The bisector carrying ``edge`` and the parameter range of the edge.

    The geodesic starts at one of the edge's vertices when it has one.
    Unbounded ends are cut ``reach`` beyond the last vertex.
    """
    a, b = diagram.sites[edge.site_a], diagram.sites[edge.site_b]
    va = None if edge.endpoint_a is None else diagram.vertices[edge.endpoint_a].position
    vb = None if edge.endpoint_b is None else diagram.vertices[edge.endpoint_b].position
    if va is None and vb is None:
        return bisector_geodesic(a, b), -reach, reach
    geo = bisector_geodesic(a, b, through=va or vb)
    if va is None:
        return geo, -reach, 0.0
    if vb is None:
        return geo, 0.0, reach
    return geo, 0.0, geo.parameter_of(vb)


def edge_samples(diagram: VoronoiDiagram, edge: VoronoiEdge, k: int, reach: float = 2.0) -> list[PolarPoint]:
    """``k`` points strictly inside an edge; unbounded ends are cut at ``reach``."""
    geo, ta, tb = edge_geodesic(diagram, edge, reach)
    return [geo.at(ta + (tb - ta) * (j + 1) / (k + 1)) for j in range(k)]


def check_diagram(diagram: VoronoiDiagram, sites: Optional[Sequence[PolarPoint]] = None,
                  samples_per_edge: int = 8, tol: float = EPS_GEOM, sample_tol: float = EPS_GEOM,
                  merge_tol: float = EPS_MERGE) -> CheckReport:
    """Verify the defining properties of a Voronoi diagram.

    Vertices must be equidistant from their incident sites with no site
    closer; sampled edge points must have their two sites as nearest
    sites; ids must resolve; sizes must respect planarity.  Vertices with
    more than three sites are the product of merging and are allowed an
    incident-distance spread of ``2 * merge_tol``.
    """
    sites = list(diagram.sites if sites is None else sites)
    bad: list[str] = []
    n, nv = len(sites), len(diagram.vertices)
    for k, v in enumerate(diagram.vertices):
        if v.id != k:
            bad.append(f"vertex {k} has id {v.id}")
    for v in diagram.vertices:
        if len(v.incident_sites) < 3:
            bad.append(f"vertex {v.id}: only {len(v.incident_sites)} incident sites")
        slack = tol if len(v.incident_sites) <= 3 else 2.0 * merge_tol
        for s in v.incident_sites:
            d = distance(v.position, sites[s])
            if abs(d - v.witness_radius) > slack * max(1.0, v.witness_radius):
                bad.append(f"vertex {v.id}: site {s} at {d!r}, witness radius {v.witness_radius!r}")
    if nv:
        near = nearest_distances([v.position for v in diagram.vertices], sites)
        for v, d in zip(diagram.vertices, near):
            if d < v.witness_radius - tol * max(1.0, v.witness_radius):
                bad.append(f"vertex {v.id}: empty-witness violation, nearest site at {d!r} < {v.witness_radius!r}")
    pairs = set()
    degree = [0] * nv
    for e in diagram.edges:
        if not e.site_a < e.site_b:
            bad.append(f"edge {e}: sites not in canonical order")
        if (e.site_a, e.site_b) in pairs:
            bad.append(f"edge {e}: second edge for the same site pair")
        pairs.add((e.site_a, e.site_b))
        for end in (e.endpoint_a, e.endpoint_b):
            if end is not None:
                if not 0 <= end < nv:
                    bad.append(f"edge {e}: unknown vertex {end}")
                else:
                    degree[end] += 1
    for v in diagram.vertices:
        if degree[v.id] != len(v.incident_sites):
            bad.append(f"vertex {v.id}: {degree[v.id]} edges for {len(v.incident_sites)} incident sites")
    if n >= 3:
        if nv > 2 * n - 5:
            bad.append(f"{nv} vertices exceed 2n-5")
        if len(diagram.edges) > 3 * n - 6:
            bad.append(f"{len(diagram.edges)} edges exceed 3n-6")
    if samples_per_edge > 0 and not bad:
        pts, owners = [], []
        for e in diagram.edges:
            for p in edge_samples(diagram, e, samples_per_edge):
                pts.append(p)
                owners.append(e)
        near = nearest_distances(pts, sites)
        for p, e, d in zip(pts, owners, near):
            da, db = distance(p, sites[e.site_a]), distance(p, sites[e.site_b])
            scale = sample_tol * max(1.0, da)
            if abs(da - db) > scale:
                bad.append(f"edge ({e.site_a},{e.site_b}): sample {tuple(p)} off the bisector by {da - db!r}")
            elif d < min(da, db) - scale:
                bad.append(f"edge ({e.site_a},{e.site_b}): sample {tuple(p)} has a closer site")
    return CheckReport(not bad, bad)
