"""Text formats: plain site lists and JSON diagram documents."""
from __future__ import annotations

import json
import math
from typing import Optional, Sequence

from .graphs import DelaunayGraph, SpanningTree
from .hgeom import R_MAX, GeometryError, PolarPoint
from .sweep import VoronoiDiagram, VoronoiEdge, VoronoiVertex

UNBOUNDED_TAG = "unbounded"


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, source: str = "<input>"):
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)
        self.line = line


# -- site files -------------------------------------------------------------------


def parse_sites(text: str, source: str = "<input>") -> tuple[list[PolarPoint], dict]:
    """Parse ``r phi`` lines; returns the sites and ``key=value`` pairs from comments."""
    sites: list[PolarPoint] = []
    seen: dict[PolarPoint, int] = {}
    meta: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line, _, comment = raw.partition("#")
        for tok in comment.split():
            k, eq, v = tok.partition("=")
            if eq:
                meta[k] = v
        fields = line.split()
        if not fields:
            continue
        if len(fields) != 2:
            raise ParseError(f"expected 'r phi', got {len(fields)} fields", lineno, source)
        try:
            r, phi = float(fields[0]), float(fields[1])
        except ValueError:
            raise ParseError(f"not a number in {line.strip()!r}", lineno, source) from None
        if not (math.isfinite(r) and math.isfinite(phi)):
            raise ParseError("coordinates must be finite", lineno, source)
        if not 0.0 < r <= R_MAX:
            raise ParseError(f"radius {r} outside (0, {R_MAX}]", lineno, source)
        p = PolarPoint(r, phi)
        if p in seen:
            raise ParseError(f"duplicate of the site on line {seen[p]}", lineno, source)
        seen[p] = lineno
        sites.append(p)
    return sites, meta


def read_sites(path: str) -> tuple[list[PolarPoint], dict]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(str(exc), source=path) from None
    return parse_sites(text, path)


def format_sites(sites: Sequence[PolarPoint], header: Sequence[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    lines += [f"{p.r!r} {p.phi!r}" for p in sites]
    return "\n".join(lines) + "\n"


# -- diagram documents --------------------------------------------------------------


def _end(v: Optional[int]):
    return UNBOUNDED_TAG if v is None else v


def diagram_to_dict(diagram: VoronoiDiagram, meta: Optional[dict] = None,
                    delaunay: Optional[DelaunayGraph] = None, mst: Optional[SpanningTree] = None) -> dict:
    doc = {
        "meta": dict(meta or {}),
        "sites": [{"id": i, "r": p.r, "phi": p.phi} for i, p in enumerate(diagram.sites)],
        "vertices": [
            {"id": v.id, "r": v.position.r, "phi": v.position.phi,
             "sites": list(v.incident_sites), "witness_radius": v.witness_radius}
            for v in diagram.vertices
        ],
        "edges": [
            {"a": e.site_a, "b": e.site_b, "from": _end(e.endpoint_a), "to": _end(e.endpoint_b)}
            for e in diagram.edges
        ],
    }
    if delaunay is not None:
        doc["delaunay"] = [{"a": a, "b": b, "weight": w} for (a, b), w in delaunay.adjacency.items()]
    if mst is not None:
        doc["mst"] = {"edges": [[a, b] for a, b in mst.edges], "total_weight": mst.total_weight}
    return doc


def dumps_diagram(diagram: VoronoiDiagram, **kw) -> str:
    return json.dumps(diagram_to_dict(diagram, **kw), indent=1) + "\n"


def _field(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    val = obj[key]
    if kind is float and isinstance(val, int) and not isinstance(val, bool):
        val = float(val)
    if not isinstance(val, kind) or isinstance(val, bool):
        raise ParseError(f"{where}: field {key!r} has the wrong type")
    return val


def dict_to_diagram(doc: dict) -> VoronoiDiagram:
    """Rebuild a diagram, checking that every id resolves."""
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    try:
        sites = []
        for k, s in enumerate(doc.get("sites", [])):
            if _field(s, "id", int, f"sites[{k}]") != k:
                raise ParseError(f"sites[{k}]: ids must be 0..n-1 in order")
            sites.append(PolarPoint(_field(s, "r", float, f"sites[{k}]"), _field(s, "phi", float, f"sites[{k}]")))
        n = len(sites)
        verts = []
        for k, v in enumerate(doc.get("vertices", [])):
            where = f"vertices[{k}]"
            if _field(v, "id", int, where) != k:
                raise ParseError(f"{where}: ids must be 0..m-1 in order")
            inc = tuple(_field(v, "sites", list, where))
            if not all(isinstance(i, int) and 0 <= i < n for i in inc):
                raise ParseError(f"{where}: unknown site id")
            verts.append(VoronoiVertex(
                k, PolarPoint(_field(v, "r", float, where), _field(v, "phi", float, where)),
                inc, _field(v, "witness_radius", float, where),
            ))
        edges = []
        for k, e in enumerate(doc.get("edges", [])):
            where = f"edges[{k}]"
            a, b = _field(e, "a", int, where), _field(e, "b", int, where)
            if not (0 <= a < n and 0 <= b < n):
                raise ParseError(f"{where}: unknown site id")
            ends = []
            for key in ("from", "to"):
                val = e.get(key) if isinstance(e, dict) else None
                if val == UNBOUNDED_TAG:
                    ends.append(None)
                elif isinstance(val, int) and not isinstance(val, bool) and 0 <= val < len(verts):
                    ends.append(val)
                else:
                    raise ParseError(f"{where}: bad endpoint {key!r}: {val!r}")
            edges.append(VoronoiEdge(a, b, ends[0], ends[1]))
    except GeometryError as exc:
        raise ParseError(str(exc)) from None
    return VoronoiDiagram(sites, verts, edges)


def loads_diagram(text: str, source: str = "<input>") -> tuple[VoronoiDiagram, dict]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, source) from None
    try:
        return dict_to_diagram(doc), doc
    except ParseError as exc:
        raise ParseError(str(exc), source=source) from None


def read_diagram(path: str) -> tuple[VoronoiDiagram, dict]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(str(exc), source=path) from None
    return loads_diagram(text, path)
