"""Event queue and event prediction for the sweep circle.

Events are never removed from the heap.  Each breakpoint handle carries a
generation counter; an event remembers the generations it was scheduled
under and is silently dropped at pop time once any of them moved on.
"""
from __future__ import annotations

import enum
import heapq
import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .beach import EPS_EVENT, BeachIntersection, Direction
from .hgeom import (
    R_MAX,
    Circumcircle,
    GeometryError,
    PolarPoint,
    Side,
    bisector_geodesic,
    bisector_point_at_angle,
    circumcenter,
    normalize_angle,
    rough_circumcenter,
    TAU,
    distance,
    far_point_radius,
    side_of_diameter,
)


# Slack for filtering candidates with an unpolished circumcenter.
_ROUGH_ANGLE = 1e-8
_ROUGH_RADIUS = 1e-6


class Kind(enum.IntEnum):
    """Event kinds; the values are the tie order at equal priority."""

    SITE = 0
    CIRCLE = 1
    STRUCTURE = 2


class Position(enum.Enum):
    FIRST = "first"
    LAST = "last"


@dataclass
class SiteEvent:
    priority: float
    site: int
    angle: float

    kind = Kind.SITE

    def handles(self) -> tuple:
        return ()


@dataclass
class CircleEvent:
    priority: float
    circle: Circumcircle
    sites: tuple[int, int, int]
    left: BeachIntersection
    right: BeachIntersection
    stamps: tuple[int, ...] = ()

    kind = Kind.CIRCLE

    @property
    def angle(self) -> float:
        return self.circle.center.phi

    def handles(self) -> tuple:
        return (self.left.handle, self.right.handle)


@dataclass
class StructureEvent:
    priority: float
    node: BeachIntersection
    direction: Direction
    stamps: tuple[int, ...] = ()

    kind = Kind.STRUCTURE
    angle = 0.0

    def handles(self) -> tuple:
        return (self.node.handle,)


Event = Union[SiteEvent, CircleEvent, StructureEvent]


@dataclass
class EventQueue:
    """Min-priority queue with lazy invalidation by generation stamps."""

    heap: list = field(default_factory=list)
    generations: dict = field(default_factory=dict)
    stale_dropped: int = 0
    _seq: itertools.count = field(default_factory=itertools.count)

    def __len__(self) -> int:
        return len(self.heap)

    def stamp(self, handle: int) -> int:
        return self.generations.get(handle, 0)

    def push(self, event: Event) -> None:
        if not isinstance(event, SiteEvent):
            event.stamps = tuple(self.generations.get(h, 0) for h in event.handles())
        heapq.heappush(self.heap, (event.priority, event.kind, event.angle, next(self._seq), event))

    def invalidate(self, handle: int) -> None:
        g = self.generations
        if handle in g:
            g[handle] += 1
        else:
            g[handle] = 1

    def is_stale(self, event: Event) -> bool:
        if isinstance(event, SiteEvent):
            return False
        g = self.generations
        return any(g.get(h, 0) != s for h, s in zip(event.handles(), event.stamps))

    def peek_priority(self) -> Optional[float]:
        while self.heap and self.is_stale(self.heap[0][-1]):
            heapq.heappop(self.heap)
            self.stale_dropped += 1
        return self.heap[0][0] if self.heap else None

    def pop_next(self) -> Optional[Event]:
        while self.heap:
            event = heapq.heappop(self.heap)[-1]
            if self.is_stale(event):
                self.stale_dropped += 1
                continue
            return event
        return None


def validate_sites(sites: Sequence) -> list[PolarPoint]:
    """Coerce to points and check radii and distinctness."""
    pts = [p if isinstance(p, PolarPoint) else PolarPoint(*p) for p in sites]
    seen = set()
    for i, p in enumerate(pts):
        if not 0.0 < p.r <= R_MAX:
            raise GeometryError(f"site {i}: radius {p.r} outside (0, {R_MAX}]")
        if p in seen:
            raise GeometryError(f"site {i}: duplicate coordinates {tuple(p)}")
        seen.add(p)
    return pts


def schedule_sites(sites: Sequence, skip: Sequence[int] = ()) -> EventQueue:
    """A queue holding one site event per site (except those in ``skip``)."""
    pts = validate_sites(sites)
    queue = EventQueue()
    skip = set(skip)
    queue.heap = [
        (p.r, Kind.SITE, p.phi, next(queue._seq), SiteEvent(p.r, i, p.phi))
        for i, p in enumerate(pts) if i not in skip
    ]
    heapq.heapify(queue.heap)
    return queue


def invalidate(queue: EventQueue, handle) -> None:
    queue.invalidate(handle.handle if isinstance(handle, BeachIntersection) else handle)


def pop_next(queue: EventQueue) -> Optional[Event]:
    return queue.pop_next()


def _on_side(node: BeachIntersection, p: PolarPoint, sites: Sequence[PolarPoint]) -> bool:
    side = side_of_diameter(sites[node.dominant], p)
    return side is node.side or side is Side.ON


def _clearly_off_side(node: BeachIntersection, p: PolarPoint, sites: Sequence[PolarPoint]) -> bool:
    # cheap pre-filter on an unpolished center, with a generous margin
    if p.r == 0.0:
        return False
    d = normalize_angle(p.phi - sites[node.dominant].phi)
    if min(d, abs(d - math.pi), TAU - d) <= _ROUGH_ANGLE:
        return False
    return (Side.LEFT if d < math.pi else Side.RIGHT) is not node.side


def predict_circle_event(left: BeachIntersection, right: BeachIntersection, sweep: float,
                         sites: Sequence[PolarPoint], xyz: Optional[Sequence] = None) -> Optional[CircleEvent]:
    """The circle event of the arc between ``left`` and ``right``, if true.

    The two breakpoints converge iff the circumcenter lies on each one's
    own side of its dominant diameter; a breakpoint never leaves that side,
    so otherwise they cannot meet there.  ``xyz`` optionally caches the
    sites' hyperboloid coordinates.
    """
    s1, s2, s3 = left.left, left.right, right.right
    if s1 == s3 or s1 == s2 or s2 == s3:
        return None
    a, b, c = sites[s1], sites[s2], sites[s3]
    if a.r == b.r == c.r:
        # centred at the pole; such vertices only arise among the innermost
        # sites, which the initial seeding handles all at once
        return None
    rough = rough_circumcenter(a, b, c, None if xyz is None else (xyz[s1], xyz[s2], xyz[s3]))
    if rough is None:
        return None
    if rough.r + distance(rough, b) < sweep - _ROUGH_RADIUS:
        return None
    if _clearly_off_side(left, rough, sites) or _clearly_off_side(right, rough, sites):
        return None
    circle = circumcenter(a, b, c, rough)
    if circle is None:
        return None
    priority = far_point_radius(circle)
    if priority < sweep - EPS_EVENT:
        return None
    center = circle.center
    if not (_on_side(left, center, sites) and _on_side(right, center, sites)):
        return None
    return CircleEvent(max(priority, sweep), circle, (s1, s2, s3), left, right)


def predict_structure_event(node: BeachIntersection, position: Position, sweep: float,
                            sites: Sequence[PolarPoint]) -> Optional[StructureEvent]:
    """When ``node``, first or last on the curve, crosses the polar axis."""
    sl, sr = sites[node.left], sites[node.right]
    if sl.r == sr.r:
        return None  # a fixed diameter never crosses anything
    try:
        p = bisector_point_at_angle(sl, sr, 0.0)
    except GeometryError:
        return None
    if p is None or p.r == 0.0:
        return None
    if side_of_diameter(sites[node.dominant], p) is not node.side:
        return None
    priority = p.r + distance(p, sl)
    if not math.isfinite(priority) or priority < sweep - EPS_EVENT:
        return None
    # the breakpoint walks its bisector with the right site on its left
    ccw = math.sin(bisector_geodesic(sr, sl, through=p).direction) > 0.0
    if ccw != (position is Position.LAST):
        return None
    direction = Direction.FIRST_TO_LAST if position is Position.FIRST else Direction.LAST_TO_FIRST
    return StructureEvent(max(priority, sweep), node, direction)
