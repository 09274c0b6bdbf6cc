"""SVG drawings of diagrams in the Euclidean picture of polar coordinates.

A point ``(r, phi)`` is drawn at Euclidean polar position ``(r, phi)``,
so geodesics come out curved.  Unbounded edges stop at one unit past the
outermost site.
"""
from __future__ import annotations

import math
from typing import Optional

from .hgeom import Geodesic, PolarPoint
from .sweep import VoronoiDiagram, edge_geodesic


def _fmt(x: float) -> str:
    s = f"{x:.9f}"
    return "0.000000000" if s == "-0.000000000" else s


def _xy(p: PolarPoint) -> tuple[float, float]:
    return p.r * math.cos(p.phi), p.r * math.sin(p.phi)


def _exit_parameter(geo: Geodesic, t0: float, sign: float, bound: float) -> float:
    """First parameter past ``t0`` (in direction ``sign``) at radius ``bound``."""
    if geo.at(t0).r >= bound:
        return t0
    step = 0.25
    while geo.at(t0 + sign * step).r < bound:
        step *= 2.0
        if step > 1024.0:
            return t0 + sign * step
    lo, hi = 0.0, step
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if geo.at(t0 + sign * mid).r < bound:
            lo = mid
        else:
            hi = mid
    return t0 + sign * hi


def edge_polyline(diagram: VoronoiDiagram, k: int, edge_index: int, bound: float) -> list[PolarPoint]:
    """``k`` points along an edge, unbounded ends cut at radius ``bound``."""
    e = diagram.edges[edge_index]
    geo, ta, tb = edge_geodesic(diagram, e)
    if e.endpoint_a is None:
        ta = _exit_parameter(geo, tb if e.endpoint_b is not None else 0.0, -1.0, bound)
    if e.endpoint_b is None:
        tb = _exit_parameter(geo, ta if e.endpoint_a is not None else 0.0, 1.0, bound)
    if k == 1:
        return [geo.at(0.5 * (ta + tb))]
    return [geo.at(ta + (tb - ta) * j / (k - 1)) for j in range(k)]


def render_svg(diagram: VoronoiDiagram, width: int = 800, samples_per_edge: int = 128,
               bound: Optional[float] = None) -> str:
    """The diagram as an SVG document; a pure function of its arguments."""
    if bound is None:
        bound = max((p.r for p in diagram.sites), default=0.0) + 1.0
    extent = max([bound] + [v.position.r for v in diagram.vertices]) * 1.05
    dot = extent / 150.0
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{width}" '
        f'viewBox="{_fmt(-extent)} {_fmt(-extent)} {_fmt(2 * extent)} {_fmt(2 * extent)}">',
        '<g transform="scale(1,-1)">',
        f'<g id="axes" fill="none" stroke="#bbbbbb" stroke-width="{_fmt(dot / 4)}">',
        f'<circle cx="0" cy="0" r="{_fmt(bound)}"/>',
        f'<line x1="0" y1="0" x2="{_fmt(bound)}" y2="0"/>',
        "</g>",
        f'<g id="edges" fill="none" stroke="#1f4e9c" stroke-width="{_fmt(dot / 2)}">',
    ]
    for i, e in enumerate(diagram.edges):
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in map(_xy, edge_polyline(diagram, samples_per_edge, i, bound)))
        out.append(f'<polyline data-sites="{e.site_a} {e.site_b}" points="{pts}"/>')
    out.append("</g>")
    out.append('<g id="sites" fill="#c0392b">')
    for i, p in enumerate(diagram.sites):
        x, y = _xy(p)
        out.append(f'<circle data-id="{i}" cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(dot)}"/>')
    out.append("</g>")
    out.append('<g id="vertices" fill="#222222">')
    for v in diagram.vertices:
        x, y = _xy(v.position)
        out.append(f'<circle data-id="{v.id}" cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(dot * 0.7)}"/>')
    out.append("</g>")
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
