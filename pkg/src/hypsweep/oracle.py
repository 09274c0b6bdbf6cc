"""Brute-force ground truth for small site sets.

Everything here is deliberately naive and independent of the sweep: the
Voronoi vertices come from testing every site triple's circumcircle for
emptiness, the Delaunay edges from scanning each bisector for the center
of an empty circle.  Arithmetic is in numpy's extended precision.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment, minimize_scalar

from .hgeom import EPS_GEOM, FAR_LIMIT, PolarPoint, distance
from .sweep import EPS_MERGE, VoronoiDiagram

MAX_N = 64
LD = np.longdouble
_TAU = 2 * LD(np.pi)


@dataclass
class OracleVertex:
    position: PolarPoint
    sites: frozenset
    witness_radius: float
    cocircular: bool = False


@dataclass
class OracleResult:
    vertices: list[OracleVertex] = field(default_factory=list)
    delaunay_edges: set = field(default_factory=set)


def _polar(sites) -> tuple[np.ndarray, np.ndarray]:
    pts = [p if isinstance(p, PolarPoint) else PolarPoint(*p) for p in sites]
    return np.array([p.r for p in pts], dtype=LD), np.array([p.phi for p in pts], dtype=LD)


def _dist(r1, p1, r2, p2):
    # half-angle law of cosines, broadcasting
    s = np.sinh((r1 - r2) / 2)
    h = np.sin((p1 - p2) / 2)
    return 2 * np.arcsinh(np.sqrt(s * s + np.sinh(r1) * np.sinh(r2) * h * h))


def _check_size(n: int) -> None:
    if n > MAX_N:
        raise ValueError(f"oracle is limited to {MAX_N} sites, got {n}")


def brute_force_vertices(sites: Sequence, with_delaunay: bool = True) -> OracleResult:
    """Voronoi vertices as centers of empty circles through three sites."""
    n = len(sites)
    _check_size(n)
    r, phi = _polar(sites)
    result = OracleResult()
    if n >= 3:
        tri = np.array(list(itertools.combinations(range(n), 3)))
        x = np.sinh(r) * np.cos(phi)
        y = np.sinh(r) * np.sin(phi)
        z = np.cosh(r)
        i, j, k = tri[:, 0], tri[:, 1], tri[:, 2]
        u = np.stack([x[i] - x[j], y[i] - y[j], z[i] - z[j]])
        w = np.stack([x[i] - x[k], y[i] - y[k], z[i] - z[k]])
        # normal to both difference vectors in the Minkowski sense
        ju, jw = u * np.array([-1, -1, 1], dtype=LD)[:, None], w * np.array([-1, -1, 1], dtype=LD)[:, None]
        nx = ju[1] * jw[2] - ju[2] * jw[1]
        ny = ju[2] * jw[0] - ju[0] * jw[2]
        nz = ju[0] * jw[1] - ju[1] * jw[0]
        q = nz * nz - nx * nx - ny * ny
        ok = q > LD(1e-30) * (nx * nx + ny * ny + nz * nz)
        kk = np.sqrt(np.where(ok, q, 1)) * np.sign(np.where(nz == 0, 1, nz))
        cx, cy = nx / kk, ny / kk
        cr = np.arcsinh(np.hypot(cx, cy))
        cp = np.mod(np.arctan2(cy, cx), _TAU)
        ok &= cr <= FAR_LIMIT
        d = _dist(cr[:, None], cp[:, None], r[None, :], phi[None, :])
        rad = (d[np.arange(len(tri)), i] + d[np.arange(len(tri)), j] + d[np.arange(len(tri)), k]) / 3
        ok &= cr + rad <= FAR_LIMIT
        nearest = d.min(axis=1)
        ok &= nearest >= rad - EPS_GEOM
        for t in np.nonzero(ok)[0]:
            on = np.nonzero(np.abs(d[t] - rad[t]) <= EPS_GEOM)[0]
            pos = PolarPoint(float(cr[t]), float(cp[t]))
            for v in result.vertices:
                if distance(v.position, pos) <= EPS_MERGE:
                    v.sites = v.sites | frozenset(int(s) for s in on)
                    v.cocircular = len(v.sites) > 3
                    break
            else:
                result.vertices.append(OracleVertex(pos, frozenset(int(s) for s in on), float(rad[t]), len(on) > 3))
    if with_delaunay:
        result.delaunay_edges = brute_force_delaunay(sites)
    return result


def _bisector_frames(r, phi, pairs):
    """Midpoints and unit tangents of the bisectors of ``pairs``, on the hyperboloid."""
    a, b = pairs[:, 0], pairs[:, 1]
    x = np.stack([np.sinh(r) * np.cos(phi), np.sinh(r) * np.sin(phi), np.cosh(r)], axis=1)
    m = x[a] + x[b]
    m = m / np.sqrt(m[:, 2] ** 2 - m[:, 0] ** 2 - m[:, 1] ** 2)[:, None]
    sign = np.array([-1, -1, 1], dtype=LD)
    jm, jd = m * sign, (x[a] - x[b]) * sign
    u = np.cross(jm, jd)
    u = u / np.sqrt(u[:, 0] ** 2 + u[:, 1] ** 2 - u[:, 2] ** 2)[:, None]
    return m, u


def _margins(r, phi, pairs, m, u, t):
    """Emptiness margin of the circle centred at parameter ``t`` on each bisector.

    The margin is the distance to the nearest third site minus the radius;
    the circle through the pair is empty iff it is positive.  ``t`` has
    shape ``(len(pairs), k)``.
    """
    c = np.cosh(t)[..., None] * m[:, None, :] + np.sinh(t)[..., None] * u[:, None, :]
    cr = np.arcsinh(np.hypot(c[..., 0], c[..., 1]))
    cp = np.arctan2(c[..., 1], c[..., 0])
    d = _dist(cr[..., None], cp[..., None], r, phi)
    a, b = pairs[:, 0], pairs[:, 1]
    idx = np.arange(len(pairs))
    da = d[idx, :, a]
    d[idx, :, a] = np.inf
    d[idx, :, b] = np.inf
    return d.min(axis=2) - da


def brute_force_delaunay(sites: Sequence, samples: int = 4096, span: float = 25.0, refine: int = 3) -> set:
    """Site pairs admitting an empty circle through both.

    Candidate centers are sampled along each bisector; the best few local
    maxima of the emptiness margin are refined to 1e-10 in the parameter.
    The margin is 2-Lipschitz in the parameter, so a pair whose sampled
    maximum is well below zero needs no refinement.
    """
    n = len(sites)
    _check_size(n)
    if n < 2:
        return set()
    if n == 2:
        return {(0, 1)}
    r, phi = _polar(sites)
    pairs = np.array(list(itertools.combinations(range(n), 2)))
    m, u = _bisector_frames(r, phi, pairs)
    # the coarse scan only has to locate peaks, so plain doubles will do;
    # everything near the decision threshold is refined in extended precision
    ts = np.linspace(-span, span, samples)
    step = float(ts[1] - ts[0])
    r64, phi64, m64, u64 = (x.astype(np.float64) for x in (r, phi, m, u))
    vals = np.concatenate([
        _margins(r64, phi64, pairs[lo:lo + 64], m64[lo:lo + 64], u64[lo:lo + 64],
                 np.broadcast_to(ts, (len(pairs[lo:lo + 64]), samples)))
        for lo in range(0, len(pairs), 64)
    ])
    edges = set()
    for k, (a, b) in enumerate(pairs.tolist()):
        v = vals[k]
        best = float(v.max())
        if -2.0 * step <= best <= 0.05:
            inner = (v[1:-1] >= v[:-2]) & (v[1:-1] >= v[2:])
            peaks = np.nonzero(inner)[0] + 1
            peaks = peaks[np.argsort(v[peaks])[::-1][:refine]]
            pk, mk, uk = pairs[k:k + 1], m[k:k + 1], u[k:k + 1]
            for p in peaks:
                res = minimize_scalar(
                    lambda t: -float(_margins(r, phi, pk, mk, uk, np.array([[t]], dtype=LD))[0, 0]),
                    bounds=(float(ts[p]) - step, float(ts[p]) + step),
                    method="bounded", options={"xatol": 1e-10},
                )
                best = max(best, -float(res.fun))
        if best > EPS_GEOM:
            edges.add((a, b))
    return edges


def nearest_site(p: PolarPoint, sites: Sequence) -> tuple[frozenset, float]:
    """Nearest sites to ``p`` (all ties within EPS_GEOM) and their distance."""
    if not sites:
        raise ValueError("no sites")
    r, phi = _polar(sites)
    d = _dist(LD(p.r), LD(p.phi), r, phi)
    m = d.min()
    return frozenset(int(i) for i in np.nonzero(d <= m + EPS_GEOM)[0]), float(m)


def oracle(sites: Sequence) -> OracleResult:
    return brute_force_vertices(sites, with_delaunay=True)


@dataclass
class CompareReport:
    ok: bool
    mismatches: list[str]

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "PASS" if self.ok else "FAIL: " + "; ".join(self.mismatches)


def compare(diagram: VoronoiDiagram, result: OracleResult, tol: float = 1e-6) -> CompareReport:
    """Match vertices one-to-one and compare incidences and Delaunay edges."""
    bad = []
    sv, ov = diagram.vertices, result.vertices
    if sv and ov:
        cost = np.array([[distance(a.position, b.position) for b in ov] for a in sv])
        rows, cols = linear_sum_assignment(cost)
    else:
        rows, cols = np.array([], dtype=int), np.array([], dtype=int)
    matched_s, matched_o = set(rows.tolist()), set(cols.tolist())
    for i, j in zip(rows, cols):
        if cost[i, j] > tol:
            bad.append(f"vertex {sv[i].id} at {tuple(sv[i].position)} is {cost[i, j]:.3g} from nearest oracle vertex")
        elif set(sv[i].incident_sites) != set(ov[j].sites):
            bad.append(f"vertex {sv[i].id}: sites {sorted(sv[i].incident_sites)} != oracle {sorted(ov[j].sites)}")
    for i in range(len(sv)):
        if i not in matched_s:
            bad.append(f"unmatched sweep vertex {sv[i].id} at {tuple(sv[i].position)}")
    for j in range(len(ov)):
        if j not in matched_o:
            bad.append(f"unmatched oracle vertex at {tuple(ov[j].position)} with sites {sorted(ov[j].sites)}")
    mine = {(e.site_a, e.site_b) for e in diagram.edges}
    theirs = set(result.delaunay_edges)
    for e in sorted(mine - theirs):
        bad.append(f"Delaunay edge {e} not in oracle")
    for e in sorted(theirs - mine):
        bad.append(f"oracle Delaunay edge {e} missing")
    return CompareReport(not bad, bad)


def brute_force_beach(sites: Sequence[PolarPoint], sweep: float) -> list[int]:
    """Sites of the beach curve's arcs in counterclockwise order from angle 0.

    Candidate breakpoints are all pairwise ellipse intersections; between
    consecutive candidates the outermost ellipse is found by direct
    evaluation.  Consecutive repeats are collapsed, including across the
    wrap, so the result is the circular arc sequence started at the arc
    covering angle 0.
    """
    from .beach import ellipse_intersections

    inside = [i for i, s in enumerate(sites) if s.r < sweep]
    if not inside:
        return []
    if len(inside) == 1:
        return inside
    cand = {0.0}
    for i, j in itertools.combinations(inside, 2):
        for p in ellipse_intersections(sites[i], sites[j], sweep):
            cand.add(p.phi)
    cand = np.array(sorted(cand))
    mids = (cand + np.append(cand[1:], cand[0] + 2 * math.pi)) / 2
    sr = np.array([sites[i].r for i in inside])[:, None]
    sp = np.array([sites[i].phi for i in inside])[:, None]
    k = np.sinh((sweep - sr) / 2)
    mm = (sweep + sr) / 2
    h = np.sin((mids[None, :] - sp) / 2)
    t = np.sinh(sr) * h * h
    rho = 0.5 * np.log((k * np.exp(mm) + t) / (k * np.exp(-mm) + t))
    arcs = [inside[i] for i in rho.argmax(axis=0)]
    out = [a for idx, a in enumerate(arcs) if idx == 0 or a != arcs[idx - 1]]
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out
