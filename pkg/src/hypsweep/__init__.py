"""Voronoi diagrams, Delaunay graphs and spanning trees in the polar model
of the hyperbolic plane, built by an expanding sweep circle."""
from .hgeom import PolarPoint, distance
from .sweep import VoronoiDiagram, VoronoiEdge, VoronoiVertex, compute_voronoi

__all__ = ["PolarPoint", "distance", "compute_voronoi", "VoronoiDiagram", "VoronoiEdge", "VoronoiVertex"]
