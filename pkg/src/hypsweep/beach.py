"""The beach curve of the expanding sweep circle.

The curve is the outer envelope of the beach ellipses of all sites inside
the sweep circle.  It is stored as the circular sequence of its
breakpoints, each known only by the ordered pair of sites whose arcs meet
there; angles are recomputed from the current sweep radius when needed.

The sequence lives in a treap (for the binary search at site events)
threaded by a doubly linked list (for constant-time neighbours).  The
linear order is by angle in ``[0, 2*pi)``; the circular wrap sits between
the last and the first element.
"""
from __future__ import annotations

import enum
import math
import random
from typing import Iterator, Optional, Sequence

from .hgeom import (
    EPS_ANGLE,
    EPS_GEOM,
    POLE,
    TAU,
    GeometryError,
    PolarPoint,
    Side,
    normalize_angle,
    side_of_diameter,
)

EPS_EVENT = 1e-9
# Breakpoints whose angle lies within this of a site angle count as "on"
# the diameter when deriving their sector.
_NUDGE = 1e-7


class InconsistencyError(RuntimeError):
    """A numerically guaranteed configuration was not found."""

    def __init__(self, message: str, sweep_radius: Optional[float] = None):
        if sweep_radius is not None:
            message = f"{message} (sweep radius {sweep_radius!r})"
        super().__init__(message)
        self.sweep_radius = sweep_radius


class Sector(enum.IntEnum):
    """Angular intervals cut by the diameter through a dominant site.

    The integer values give the order of the intervals along ``[0, 2*pi)``.
    """

    S2 = 0  # polar-axis side, below the diameter
    S1 = 1  # far side of the diameter from the polar axis
    S3 = 2  # polar-axis side, above the diameter


class Order(enum.Enum):
    BEFORE = "before"
    AFTER = "after"


class Direction(enum.Enum):
    FIRST_TO_LAST = "first_to_last"
    LAST_TO_FIRST = "last_to_first"


# -- ellipse geometry -----------------------------------------------------------


def _ellipse_radius(r: float, phi_s: float, phi: float, sweep: float) -> float:
    # 0.5 * log((D + N) / (D - N)) == atanh(N / D) without cancellation
    k = math.sinh(0.5 * (sweep - r))
    m = 0.5 * (sweep + r)
    h = math.sin(0.5 * (phi - phi_s))
    t = math.sinh(r) * h * h
    return 0.5 * math.log((k * math.exp(m) + t) / (k * math.exp(-m) + t))


def ellipse_radius(s: PolarPoint, phi: float, sweep: float) -> float:
    """Radius of the point at angle ``phi`` on the beach ellipse of ``s``.

    Such a point is equidistant from ``s`` and the sweep circle.
    """
    if not 0.0 < s.r < sweep:
        raise GeometryError(f"ellipse needs 0 < r(s) < sweep, got r={s.r}, sweep={sweep}")
    return _ellipse_radius(s.r, s.phi, phi, sweep)


def _mid_angle(phi_l: float, phi_r: float) -> float:
    return normalize_angle(phi_l + 0.5 * normalize_angle(phi_r - phi_l))


def _descending_root(rl, phl, rr, phr, sweep, shs, chs) -> float:
    """Angle where the arc of the left site hands over to the right site.

    ``rho_l - rho_r`` has the sign of
    ``a cos(phi - phl) - b cos(phi - phr) + c``; collapsing the two cosines
    into one sinusoid ``amp * cos(phi - theta) + c`` leaves two roots and
    the breakpoint is the one where the sign goes from + to -.
    """
    al = 2.0 * math.sinh(0.5 * (sweep + rl)) * math.sinh(0.5 * (sweep - rl))
    ar = 2.0 * math.sinh(0.5 * (sweep + rr)) * math.sinh(0.5 * (sweep - rr))
    a = ar * math.sinh(rl)
    b = al * math.sinh(rr)
    c = 2.0 * math.sinh(0.5 * (rr + rl)) * math.sinh(0.5 * (rr - rl)) * shs
    x = a * math.cos(phl) - b * math.cos(phr)
    y = a * math.sin(phl) - b * math.sin(phr)
    amp = math.hypot(x, y)
    if amp == 0.0:
        raise InconsistencyError("beach ellipses do not intersect", sweep)
    q = -c / amp
    if q > 1.0 or q < -1.0:
        if abs(q) - 1.0 > EPS_GEOM:
            raise InconsistencyError(f"beach ellipses do not intersect (ratio {q!r})", sweep)
        q = 1.0 if q > 0.0 else -1.0
    return normalize_angle(math.atan2(y, x) + math.acos(q))


def breakpoint_angle(left: PolarPoint, right: PolarPoint, sweep: float) -> float:
    """Angle of the breakpoint where ``left``'s arc ends and ``right``'s begins."""
    if left.r == right.r:
        return _mid_angle(left.phi, right.phi)
    if right.r >= sweep:
        return right.phi
    if left.r >= sweep:
        return left.phi
    return _descending_root(left.r, left.phi, right.r, right.phi, sweep, math.sinh(sweep), math.cosh(sweep))


def _point_at(site: PolarPoint, phi: float, sweep: float) -> PolarPoint:
    if site.r >= sweep:
        return PolarPoint(0.0, phi)
    return PolarPoint(_ellipse_radius(site.r, site.phi, phi, sweep), phi)


def ellipse_intersections(s: PolarPoint, t: PolarPoint, sweep: float) -> list[PolarPoint]:
    """All intersection points of the beach ellipses of ``s`` and ``t``.

    Two points if both sites are strictly inside the sweep circle, one if
    exactly one of them lies on it, and the pole if both do.
    """
    if s == t:
        raise GeometryError("sites must be distinct")
    if s.r <= 0.0 or t.r <= 0.0 or s.r > sweep or t.r > sweep:
        raise GeometryError("ellipse_intersections needs 0 < r(s), r(t) <= sweep")
    ds, dt = s.r >= sweep, t.r >= sweep
    if ds and dt:
        return [POLE]
    if dt:
        return [_point_at(s, t.phi, sweep)]
    if ds:
        return [_point_at(t, s.phi, sweep)]
    return [
        _point_at(s, breakpoint_angle(s, t, sweep), sweep),
        _point_at(s, breakpoint_angle(t, s, sweep), sweep),
    ]


def classify_sector(phi: float, dominant: PolarPoint) -> Sector:
    """Sector of angle ``phi`` relative to the diameter through ``dominant``."""
    if dominant.r == 0.0:
        raise GeometryError("dominant site must not be the pole")
    lo = dominant.phi if dominant.phi < math.pi else dominant.phi - math.pi
    hi = lo + math.pi
    phi = normalize_angle(phi)
    if phi <= lo:
        return Sector.S2
    if phi < hi:
        return Sector.S1
    return Sector.S3


def dominant_of(sites: Sequence[PolarPoint], i: int, j: int) -> int:
    """Larger radius wins; equal radii go to the larger angle."""
    a, b = sites[i], sites[j]
    if (a.r, a.phi) >= (b.r, b.phi):
        return i
    return j


# -- breakpoints ----------------------------------------------------------------


class BeachIntersection:
    """A breakpoint of the beach curve, stored as its site pair.

    ``side`` is the side of the diameter through the dominant site the
    breakpoint lives on; it never changes.  ``sector`` caches the interval
    used by the binary search and changes only at structure events.
    """

    __slots__ = (
        "handle", "left", "right", "dominant", "side", "sector", "birth",
        "fixed_angle", "edge", "slot",
        "prio", "lc", "rc", "par", "prev", "next", "alive",
    )

    def __init__(self, handle: int, left: int, right: int, sites: Sequence[PolarPoint], birth: float):
        if left == right:
            raise ValueError("a breakpoint needs two distinct sites")
        self.handle = handle
        self.left = left
        self.right = right
        self.dominant = dominant_of(sites, left, right)
        # left arc hands over to right: the breakpoint runs clockwise of the
        # dominant diameter when the right site dominates
        self.side = Side.RIGHT if self.dominant == right else Side.LEFT
        sl, sr = sites[left], sites[right]
        self.fixed_angle = _mid_angle(sl.phi, sr.phi) if sl.r == sr.r else None
        self.birth = birth
        self.sector = Sector.S1
        self.edge = None
        self.slot = None
        self.prio = 0.0
        self.lc = self.rc = self.par = None
        self.prev = self.next = None
        self.alive = True

    @property
    def left_site(self) -> int:
        return self.left

    @property
    def right_site(self) -> int:
        return self.right

    @property
    def dominant_site(self) -> int:
        return self.dominant

    @property
    def birth_sweep_radius(self) -> float:
        return self.birth

    def __repr__(self) -> str:
        return f"<BP#{self.handle} ({self.left},{self.right}) {self.sector.name}>"


def _sector_for(node: BeachIntersection, angle: float, dominant: PolarPoint) -> Sector:
    # a breakpoint sitting on its dominant diameter (just born) is moved a
    # hair towards the side it is known to occupy
    d = normalize_angle(angle - dominant.phi)
    if min(d, abs(d - math.pi), TAU - d) <= _NUDGE:
        step = 10.0 * _NUDGE
        angle = angle + step if node.side is Side.LEFT else angle - step
        if abs(d - math.pi) <= _NUDGE:
            angle = dominant.phi + math.pi + (step if node.side is Side.LEFT else -step)
        else:
            angle = dominant.phi + (step if node.side is Side.LEFT else -step)
    return classify_sector(angle, dominant)


class BeachCurve:
    """Circular sequence of breakpoints at the current sweep radius."""

    def __init__(self, sites: Sequence[PolarPoint], seed: int = 0x5EED):
        self.sites = list(sites)
        self._r = [p.r for p in self.sites]
        self._phi = [p.phi for p in self.sites]
        self.root: Optional[BeachIntersection] = None
        self.head: Optional[BeachIntersection] = None
        self.tail: Optional[BeachIntersection] = None
        self.size = 0
        self.sole_site: Optional[int] = None
        self.members: set[int] = set()
        self._handles = 0
        self._rng = random.Random(seed)
        self._sweep = 0.0
        self._sh = 0.0
        self._ch = 1.0

    # -- sweep radius ---------------------------------------------------------

    @property
    def sweep_radius(self) -> float:
        return self._sweep

    @sweep_radius.setter
    def sweep_radius(self, value: float) -> None:
        self._sweep = value
        self._sh = math.sinh(value)
        self._ch = math.cosh(value)

    # -- realized geometry ----------------------------------------------------

    def angle(self, node: BeachIntersection) -> float:
        """Current angle of a breakpoint."""
        if node.fixed_angle is not None:
            return node.fixed_angle
        rho = self._sweep
        L, R = node.left, node.right
        rl, rr = self._r[L], self._r[R]
        if rr >= rho:
            return self._phi[R]
        if rl >= rho:
            return self._phi[L]
        return _descending_root(rl, self._phi[L], rr, self._phi[R], rho, self._sh, self._ch)

    def realize(self, node: BeachIntersection) -> PolarPoint:
        """Current position of a breakpoint."""
        phi = self.angle(node)
        site = self.sites[node.left]
        if site.r >= self._sweep:
            site = self.sites[node.right]
        return _point_at(site, phi, self._sweep)

    # -- sequence access ------------------------------------------------------

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[BeachIntersection]:
        node = self.head
        while node is not None:
            yield node
            node = node.next

    def succ(self, node: BeachIntersection) -> BeachIntersection:
        return node.next if node.next is not None else self.head

    def pred(self, node: BeachIntersection) -> BeachIntersection:
        return node.prev if node.prev is not None else self.tail

    def arc_sites(self) -> list[int]:
        """Sites of the arcs in counterclockwise order, starting after the wrap."""
        if self.size == 0:
            return [] if self.sole_site is None else [self.sole_site]
        return [n.right for n in self]

    def tuples(self) -> list[tuple[int, int]]:
        return [(n.left, n.right) for n in self]

    # -- treap plumbing -------------------------------------------------------

    def _new_node(self, left: int, right: int) -> BeachIntersection:
        self._handles += 1
        node = BeachIntersection(self._handles, left, right, self.sites, self._sweep)
        node.prio = self._rng.random()
        return node

    def _rotate_up(self, x: BeachIntersection) -> None:
        p = x.par
        g = p.par
        if p.lc is x:
            p.lc = x.rc
            if x.rc is not None:
                x.rc.par = p
            x.rc = p
        else:
            p.rc = x.lc
            if x.lc is not None:
                x.lc.par = p
            x.lc = p
        p.par = x
        x.par = g
        if g is None:
            self.root = x
        elif g.lc is p:
            g.lc = x
        else:
            g.rc = x

    def _link_after(self, pred: Optional[BeachIntersection], node: BeachIntersection) -> None:
        node.lc = node.rc = None
        if self.root is None:
            self.root = node
            node.par = None
        elif pred is None:
            h = self.head
            h.lc = node
            node.par = h
        elif pred.rc is None:
            pred.rc = node
            node.par = pred
        else:
            s = pred.next
            s.lc = node
            node.par = s
        nxt = self.head if pred is None else pred.next
        node.prev = pred
        node.next = nxt
        if pred is None:
            self.head = node
        else:
            pred.next = node
        if nxt is None:
            self.tail = node
        else:
            nxt.prev = node
        self.size += 1
        while node.par is not None and node.par.prio < node.prio:
            self._rotate_up(node)

    def _unlink(self, node: BeachIntersection) -> None:
        while node.lc is not None or node.rc is not None:
            if node.rc is None or (node.lc is not None and node.lc.prio > node.rc.prio):
                self._rotate_up(node.lc)
            else:
                self._rotate_up(node.rc)
        p = node.par
        if p is None:
            self.root = None
        elif p.lc is node:
            p.lc = None
        else:
            p.rc = None
        node.par = None
        if node.prev is None:
            self.head = node.next
        else:
            node.prev.next = node.next
        if node.next is None:
            self.tail = node.prev
        else:
            node.next.prev = node.prev
        node.prev = node.next = None
        self.size -= 1

    def _set_sector(self, node: BeachIntersection, angle: float) -> None:
        node.sector = _sector_for(node, angle, self.sites[node.dominant])

    # -- comparisons ------------------------------------------------------------

    def compare(self, phi_new: float, existing: BeachIntersection) -> Order:
        """Order a known angle against a breakpoint whose angle is implicit.

        Different sectors decide immediately; only breakpoints in the same
        sector as ``phi_new`` have their angle computed.  A tie puts the
        new angle after the breakpoint.
        """
        dom = self.sites[existing.dominant]
        s_new = classify_sector(phi_new, dom)
        if s_new != existing.sector:
            return Order.BEFORE if s_new < existing.sector else Order.AFTER
        diff = self.angle(existing) - phi_new
        if diff > math.pi:
            diff -= TAU
        elif diff <= -math.pi:
            diff += TAU
        return Order.BEFORE if diff > 0.0 else Order.AFTER

    def locate(self, phi_new: float) -> Optional[BeachIntersection]:
        """Last breakpoint not after ``phi_new`` (``None``: before the first)."""
        node = self.root
        pred = None
        while node is not None:
            if self.compare(phi_new, node) is Order.BEFORE:
                node = node.lc
            else:
                pred = node
                node = node.rc
        return pred

    # -- structural operations ----------------------------------------------------

    def seed(self, group: Sequence[int]) -> list[BeachIntersection]:
        """Start the curve from sites sharing the smallest radius.

        With all such sites on the sweep circle at once their mutual
        breakpoints sit on the bisecting diameters, i.e. at the angular
        midpoints between consecutive sites.
        """
        if self.size or self.sole_site is not None:
            raise ValueError("seed() needs an empty curve")
        group = sorted(group, key=lambda i: self._phi[i])
        if len(group) == 1:
            self.sole_site = group[0]
            self.members.add(group[0])
            return []
        self.sweep_radius = self._r[group[0]]
        nodes = []
        k = len(group)
        for i in range(k):
            nodes.append(self._new_node(group[i], group[(i + 1) % k]))
        nodes.sort(key=lambda n: n.fixed_angle)
        pred = None
        for n in nodes:
            self._set_sector(n, n.fixed_angle)
            self._link_after(pred, n)
            pred = n
        self.members.update(group)
        return nodes

    def insert_arc(self, new_site: int) -> tuple[int, tuple[BeachIntersection, BeachIntersection]]:
        """Split the arc hit by the segment from the pole to ``new_site``.

        The sweep radius must equal the site's radius.  Returns the split
        site and the two new breakpoints ``(split, new)`` and
        ``(new, split)``; the latter pair is empty for the first site.
        """
        if new_site in self.members:
            raise ValueError(f"site {new_site} is already on the beach curve")
        r_new, phi_new = self._r[new_site], self._phi[new_site]
        if abs(r_new - self._sweep) > EPS_EVENT:
            raise ValueError(f"site radius {r_new} does not match sweep radius {self._sweep}")
        self.members.add(new_site)
        if self.size == 0 and self.sole_site is None:
            self.sole_site = new_site
            return new_site, ()
        if self.size == 0:
            split = self.sole_site
            self.sole_site = None
            pred = None
        else:
            pred = self.locate(phi_new)
            split = self.tail.right if pred is None else pred.right
        n1 = self._new_node(split, new_site)
        n2 = self._new_node(new_site, split)
        self._set_sector(n1, phi_new)
        self._set_sector(n2, phi_new)
        if phi_new == 0.0:
            # (split, new) heads clockwise past the polar axis at once
            self._link_after(None, n2)
            self._link_after(self.tail, n1)
        else:
            self._link_after(pred, n1)
            self._link_after(n1, n2)
        return split, (n1, n2)

    def remove_arc(self, left: BeachIntersection, right: BeachIntersection,
                   at: Optional[PolarPoint] = None) -> BeachIntersection:
        """Merge two breakpoints around a vanishing arc into one.

        ``at`` is the merge point; its angle seeds the new breakpoint's
        sector.  Without it the angle is computed from the sweep radius.
        """
        if self.succ(left) is not right or left.right != right.left or left is right:
            raise ValueError("remove_arc needs adjacent breakpoints around one arc")
        if left.left == right.right:
            raise ValueError("merging would pair a site with itself")
        wrapped = left.next is None
        pred = left.prev
        self._unlink(left)
        self._unlink(right)
        left.alive = right.alive = False
        node = self._new_node(left.left, right.right)
        angle = at.phi if at is not None else self.angle(node)
        self._set_sector(node, angle)
        if wrapped:
            # the arc vanished across the polar axis
            pred = None if node.sector is Sector.S2 or (node.sector is Sector.S1 and angle < math.pi) else self.tail
        self._link_after(pred, node)
        return node

    def rotate_extremes(self, direction: Direction) -> BeachIntersection:
        """Move the first breakpoint to the end, or the last to the front."""
        if self.size < 2:
            raise ValueError("rotation needs at least two breakpoints")
        if direction is Direction.FIRST_TO_LAST:
            node = self.head
            self._unlink(node)
            self._link_after(self.tail, node)
            node.sector = Sector.S3 if node.sector is Sector.S2 else node.sector
        else:
            node = self.tail
            self._unlink(node)
            self._link_after(None, node)
            node.sector = Sector.S2 if node.sector is Sector.S3 else node.sector
        return node

    # -- debugging --------------------------------------------------------------

    def check(self, tol: float = 1e-7) -> None:
        """Assert contiguity, sortedness and treap consistency."""
        nodes = list(self)
        assert len(nodes) == self.size
        for i, n in enumerate(nodes):
            m = nodes[(i + 1) % len(nodes)]
            assert n.right == m.left, f"arcs not contiguous at {n} -> {m}"
        angles = [self.angle(n) for n in nodes]
        for a, b in zip(angles, angles[1:]):
            assert a <= b + tol, f"breakpoints out of order: {angles}"
        # in-order traversal of the treap must match the linked list
        order = []
        stack, node = [], self.root
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = node.lc
            node = stack.pop()
            order.append(node)
            node = node.rc
        assert order == nodes, "treap order differs from the linked list"


# -- functional front ends ------------------------------------------------------


def compare_breakpoint(phi_new: float, existing: BeachIntersection, curve: BeachCurve) -> Order:
    return curve.compare(phi_new, existing)


def insert_arc(curve: BeachCurve, new_site: int, at: Optional[PolarPoint] = None):
    """Insert ``new_site``; returns ``(curve, split_site, new_intersections)``."""
    if at is not None and abs(at.r - curve.sweep_radius) > EPS_EVENT:
        raise ValueError(f"site radius {at.r} does not match sweep radius {curve.sweep_radius}")
    split, pair = curve.insert_arc(new_site)
    return curve, split, pair


def remove_arc(curve: BeachCurve, left: BeachIntersection, right: BeachIntersection,
               at: Optional[PolarPoint] = None):
    return curve, curve.remove_arc(left, right, at)


def rotate_extremes(curve: BeachCurve, direction: Direction) -> BeachCurve:
    curve.rotate_extremes(direction)
    return curve
