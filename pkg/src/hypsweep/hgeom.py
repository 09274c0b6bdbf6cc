"""Hyperbolic plane primitives in native polar coordinates.

A point is stored as ``(r, phi)``: its hyperbolic distance to the pole and
its counterclockwise angle from the polar axis.  Everything here is a pure
function of its arguments.

Distances use the half-angle form of the law of cosines,

    sinh^2(d/2) = sinh^2((r1 - r2)/2) + sinh r1 sinh r2 sin^2(dphi/2),

which is algebraically identical to the acosh form but does not cancel
catastrophically for nearby points.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

TAU = 2.0 * math.pi

R_MAX = 50.0
EPS_GEOM = 1e-9
# Angular slack for "exactly on a line" decisions.
EPS_ANGLE = 1e-12
# Circle events whose far point lies beyond this are treated as absent;
# cosh overflows near 710 and nothing meaningful happens that far out.
FAR_LIMIT = 300.0


class GeometryError(ValueError):
    """Input violates a geometric precondition."""


def normalize_angle(phi: float) -> float:
    """Map ``phi`` into ``[0, 2*pi)``."""
    phi = math.fmod(phi, TAU)
    if phi < 0.0:
        phi += TAU
    if phi >= TAU:
        phi = 0.0
    return phi


class _PolarPoint(NamedTuple):
    r: float
    phi: float


class PolarPoint(_PolarPoint):
    """A point ``(r, phi)``; ``phi`` is normalized on construction."""

    __slots__ = ()

    def __new__(cls, r: float, phi: float) -> "PolarPoint":
        r = float(r)
        if not math.isfinite(r) or r < 0.0:
            raise GeometryError(f"radius must be finite and >= 0, got {r!r}")
        if not math.isfinite(phi):
            raise GeometryError(f"angle must be finite, got {phi!r}")
        return super().__new__(cls, r, normalize_angle(float(phi)))

    def __repr__(self) -> str:
        return f"PolarPoint(r={self.r!r}, phi={self.phi!r})"


POLE = PolarPoint(0.0, 0.0)


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    ON = "on"


@dataclass(frozen=True)
class Circumcircle:
    center: PolarPoint
    radius: float


def angular_distance(a: PolarPoint, b: PolarPoint) -> float:
    return math.pi - abs(math.pi - abs(a.phi - b.phi))


def _half_sinh_sq(r1: float, r2: float, dphi: float) -> float:
    # sinh^2(d/2) for the triangle with sides r1, r2 and included angle dphi
    s = math.sinh(0.5 * (r1 - r2))
    h = math.sin(0.5 * dphi)
    return s * s + math.sinh(r1) * math.sinh(r2) * h * h


def distance(a: PolarPoint, b: PolarPoint) -> float:
    """Hyperbolic distance between two points."""
    return 2.0 * math.asinh(math.sqrt(_half_sinh_sq(a.r, b.r, a.phi - b.phi)))


def side_length(b: float, c: float, gamma: float) -> float:
    """Length of the side opposite ``gamma`` in a triangle with sides b, c."""
    return 2.0 * math.asinh(math.sqrt(_half_sinh_sq(b, c, gamma)))


def angle_at_vertex(a: float, b: float, c: float) -> float:
    """Angle opposite side ``a`` in the triangle with side lengths a, b, c.

    Inverse of :func:`side_length`.  Raises :class:`GeometryError` if the
    lengths violate the triangle inequality by more than ``EPS_GEOM``.
    """
    if min(a, b, c) < 0.0:
        raise GeometryError("side lengths must be nonnegative")
    if a > b + c + EPS_GEOM or a < abs(b - c) - EPS_GEOM:
        raise GeometryError(f"({a}, {b}, {c}) violates the triangle inequality")
    denom = math.sinh(b) * math.sinh(c)
    if denom == 0.0:
        raise GeometryError("degenerate triangle: a side adjacent to the angle is zero")
    sa = math.sinh(0.5 * a)
    sd = math.sinh(0.5 * (b - c))
    h = (sa * sa - sd * sd) / denom  # sin^2(gamma / 2)
    h = min(max(h, 0.0), 1.0)
    return 2.0 * math.asin(math.sqrt(h))


def distance_to_origin_circle(p: PolarPoint, rho: float) -> float:
    if p.r > rho:
        raise GeometryError(f"point radius {p.r} exceeds circle radius {rho}")
    return rho - p.r


def side_of_diameter(s: PolarPoint, p: PolarPoint) -> Side:
    """Which side of the full line through the pole and ``s`` is ``p`` on?

    LEFT is the counterclockwise side (angles in ``(phi(s), phi(s) + pi)``).
    """
    if s.r == 0.0:
        raise GeometryError("the diameter through the pole is undefined")
    if p.r == 0.0:
        return Side.ON
    d = normalize_angle(p.phi - s.phi)
    if d <= EPS_ANGLE or TAU - d <= EPS_ANGLE or abs(d - math.pi) <= EPS_ANGLE:
        return Side.ON
    return Side.LEFT if d < math.pi else Side.RIGHT


def bisector_point_at_angle(s: PolarPoint, t: PolarPoint, phi: float) -> Optional[PolarPoint]:
    """The point of the bisector of ``s`` and ``t`` on the ray at angle ``phi``.

    Equal radii make the bisector a line through the pole, at angles
    ``m`` and ``m + pi`` with ``m`` the mean of the site angles; then the
    pole itself is returned when ``phi`` lies on that line, else ``None``.
    """
    if s.r <= 0.0 or t.r <= 0.0:
        raise GeometryError("bisector_point_at_angle requires r > 0")
    if s == t:
        raise GeometryError("sites must be distinct")
    phi = normalize_angle(phi)
    if s.r == t.r:
        m = normalize_angle(0.5 * (s.phi + t.phi))
        d = normalize_angle(phi - m)
        if min(d, abs(d - math.pi), TAU - d) <= EPS_ANGLE:
            return PolarPoint(0.0, phi)
        return None
    num = math.cosh(s.r) - math.cosh(t.r)
    den = math.sinh(s.r) * math.cos(phi - s.phi) - math.sinh(t.r) * math.cos(phi - t.phi)
    if den == 0.0:
        return None
    q = num / den
    if not 0.0 <= q < 1.0:
        return None
    return PolarPoint(math.atanh(q), phi)


# -- hyperboloid coordinates -------------------------------------------------
#
# (sinh r cos phi, sinh r sin phi, cosh r) puts the plane on the upper sheet
# of z^2 - x^2 - y^2 = 1.  Used only for linear algebra on the same
# coordinates; results are always returned in polar form.


def to_hyperboloid(p: PolarPoint) -> tuple[float, float, float]:
    sr = math.sinh(p.r)
    return (sr * math.cos(p.phi), sr * math.sin(p.phi), math.cosh(p.r))


def from_hyperboloid(x: float, y: float, z: float) -> PolarPoint:
    return PolarPoint(math.asinh(math.hypot(x, y)), math.atan2(y, x))


def minkowski(u: Sequence[float], v: Sequence[float]) -> float:
    return u[2] * v[2] - u[0] * v[0] - u[1] * v[1]


def _cross(u: Sequence[float], v: Sequence[float]) -> tuple[float, float, float]:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def minkowski_normal(u: Sequence[float], v: Sequence[float]) -> tuple[float, float, float]:
    """A vector Minkowski-orthogonal to both ``u`` and ``v``."""
    return _cross((-u[0], -u[1], u[2]), (-v[0], -v[1], v[2]))


def rough_circumcenter(s1: PolarPoint, s2: PolarPoint, s3: PolarPoint, xyz: Optional[Sequence] = None) -> Optional[PolarPoint]:
    """Unpolished center of the circle through three points, if it exists.

    Each equidistance constraint is linear in hyperboloid coordinates, so
    the center spans the line where two constraint planes meet.  If that
    line misses the hyperboloid the three bisectors do not meet and
    ``None`` is returned.  ``xyz`` may supply the three points' hyperboloid
    coordinates.
    """
    x1, x2, x3 = xyz or (to_hyperboloid(s1), to_hyperboloid(s2), to_hyperboloid(s3))
    u = (x1[0] - x2[0], x1[1] - x2[1], x1[2] - x2[2])
    w = (x1[0] - x3[0], x1[1] - x3[1], x1[2] - x3[2])
    n = minkowski_normal(u, w)
    q = minkowski(n, n)
    scale = n[0] * n[0] + n[1] * n[1] + n[2] * n[2]
    if not q > 1e-24 * scale:
        return None
    k = math.sqrt(q)
    if n[2] < 0.0:
        k = -k
    center = from_hyperboloid(n[0] / k, n[1] / k, n[2] / k)
    if center.r > FAR_LIMIT:
        return None
    return center


def circumcenter(s1: PolarPoint, s2: PolarPoint, s3: PolarPoint,
                 rough: Optional[PolarPoint] = None) -> Optional[Circumcircle]:
    """Center and radius of the circle through three points, if it exists.

    ``rough`` may pass in an already known :func:`rough_circumcenter`.
    """
    center = rough if rough is not None else rough_circumcenter(s1, s2, s3)
    if center is None:
        return None
    center, radius = _polish_center(center, s1, s2, s3)
    if center.r + radius > FAR_LIMIT:
        return None
    return Circumcircle(center, radius)


def _polish_center(c: PolarPoint, s1: PolarPoint, s2: PolarPoint, s3: PolarPoint) -> tuple[PolarPoint, float]:
    # Far from the pole the hyperboloid coordinates are huge and the cross
    # product loses digits; a few Newton steps on the polar distance
    # differences recover them.
    def dists(r, phi):
        if r < 0.0:
            r, phi = -r, phi + math.pi
        return (
            2.0 * math.asinh(math.sqrt(_half_sinh_sq(r, s1.r, phi - s1.phi))),
            2.0 * math.asinh(math.sqrt(_half_sinh_sq(r, s2.r, phi - s2.phi))),
            2.0 * math.asinh(math.sqrt(_half_sinh_sq(r, s3.r, phi - s3.phi))),
        )

    r, phi = c.r, c.phi
    d = dists(r, phi)
    tol = 1e-14 * max(1.0, r)
    for _ in range(4):
        f1, f2 = d[1] - d[0], d[2] - d[0]
        err = max(abs(f1), abs(f2))
        if err <= tol:
            break
        hr = 1e-7
        hp = 1e-7 / max(math.sinh(r), 1e-7)
        g = dists(r + hr, phi)
        k = dists(r, phi + hp)
        a, b = (g[1] - g[0] - f1) / hr, (k[1] - k[0] - f1) / hp
        cc, dd = (g[2] - g[0] - f2) / hr, (k[2] - k[0] - f2) / hp
        det = a * dd - b * cc
        if det == 0.0 or not math.isfinite(det):
            break
        nr = r - (dd * f1 - b * f2) / det
        nphi = phi - (a * f2 - cc * f1) / det
        nd = dists(nr, nphi)
        if max(abs(nd[1] - nd[0]), abs(nd[2] - nd[0])) >= err:
            break
        r, phi, d = nr, nphi, nd
    if r < 0.0:
        r, phi = -r, phi + math.pi
    return PolarPoint(r, phi), (d[0] + d[1] + d[2]) / 3.0


def far_point_radius(c: Circumcircle) -> float:
    """Radial coordinate of the point of ``c`` farthest from the pole."""
    return c.center.r + c.radius


# -- geodesics ----------------------------------------------------------------


def orientation(p: PolarPoint, q: PolarPoint, a: PolarPoint) -> float:
    """Positive if ``a`` is left of the directed geodesic from ``p`` to ``q``."""
    x, y, z = to_hyperboloid(p), to_hyperboloid(q), to_hyperboloid(a)
    c = _cross(x, y)
    return c[0] * z[0] + c[1] * z[1] + c[2] * z[2]


def heading(v: PolarPoint, s: PolarPoint) -> float:
    """Direction at ``v`` of the geodesic towards ``s``.

    Measured counterclockwise from the outward radial direction at ``v``
    (from the polar axis when ``v`` is the pole).  Both components are
    written so that nothing cancels for nearby points.
    """
    if v.r == 0.0:
        return normalize_angle(s.phi)
    dphi = s.phi - v.phi
    h = math.sin(0.5 * dphi)
    shs = math.sinh(s.r)
    y = shs * math.sin(dphi)
    x = math.sinh(s.r - v.r) - 2.0 * shs * math.cosh(v.r) * h * h
    return math.atan2(y, x)


class Geodesic(NamedTuple):
    """Unit-speed geodesic leaving ``origin`` in direction ``direction``.

    ``direction`` follows the convention of :func:`heading`.
    """

    origin: PolarPoint
    direction: float

    def at(self, t: float) -> PolarPoint:
        o, h = self.origin, self.direction
        if t < 0.0:
            t, h = -t, h + math.pi
        if o.r == 0.0:
            return PolarPoint(t, h)
        h = math.atan2(math.sin(h), math.cos(h))
        r = side_length(o.r, t, math.pi - abs(h))
        # position in the frame that puts the origin on the polar axis
        sht = math.sinh(t)
        x = math.cosh(t) * math.sinh(o.r) + sht * math.cos(h) * math.cosh(o.r)
        y = sht * math.sin(h)
        return PolarPoint(r, o.phi + math.atan2(y, x))

    def parameter_of(self, p: PolarPoint) -> float:
        """Signed distance along the geodesic of a point lying on it."""
        d = distance(self.origin, p)
        if d == 0.0:
            return 0.0
        return d if math.cos(heading(self.origin, p) - self.direction) >= 0.0 else -d


def _on_left(h_site: float, h_line: float) -> bool:
    return math.sin(h_site - h_line) > 0.0


def bisector_geodesic(a: PolarPoint, b: PolarPoint, through: Optional[PolarPoint] = None) -> Geodesic:
    """The bisector of ``a`` and ``b``, traversed with ``a`` on its left.

    It starts from the midpoint of ``a`` and ``b`` unless ``through``, a
    point on the bisector, is given.
    """
    if through is None:
        through = Geodesic(a, heading(a, b)).at(0.5 * distance(a, b))
        h = heading(through, b) + 0.5 * math.pi
    else:
        ha, hb = heading(through, a), heading(through, b)
        # the bisector halves the angle a-through-b
        h = ha + 0.5 * math.atan2(math.sin(hb - ha), math.cos(hb - ha))
        if not _on_left(ha, h):
            h += math.pi
    return Geodesic(through, math.atan2(math.sin(h), math.cos(h)))
