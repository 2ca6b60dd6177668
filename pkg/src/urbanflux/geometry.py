"""Small point/segment helpers shared by the geometric modules.

Points are plain tuples of floats; everything is generic over the ambient
dimension (2 by default throughout the toolkit).
"""
from __future__ import annotations

import math

Point = tuple

#: Default tolerance for merging coincident points.
SNAP = 1e-9


def sub(p: Point, q: Point) -> Point:
    return tuple(a - b for a, b in zip(p, q))


def add(p: Point, q: Point) -> Point:
    return tuple(a + b for a, b in zip(p, q))


def scale(p: Point, s: float) -> Point:
    return tuple(a * s for a in p)


def dot(p: Point, q: Point) -> float:
    return sum(a * b for a, b in zip(p, q))


def norm(p: Point) -> float:
    return math.sqrt(sum(a * a for a in p))


def dist(p: Point, q: Point) -> float:
    return norm(sub(p, q))


def lerp(p: Point, q: Point, t: float) -> Point:
    return tuple(a + t * (b - a) for a, b in zip(p, q))


def unit(p: Point, q: Point) -> Point:
    """Unit vector pointing from p to q."""
    d = dist(p, q)
    if d == 0.0:
        raise ZeroDivisionError("unit vector of coincident points")
    return tuple((b - a) / d for a, b in zip(p, q))


def snap_key(p: Point, snap: float = SNAP) -> tuple:
    """Integer grid key used for exact point comparison after snapping."""
    return tuple(round(a / snap) for a in p)


def project_param(p: Point, q: Point, x: Point) -> float:
    """Parameter t of the orthogonal projection of x onto the line through p, q."""
    pq = sub(q, p)
    denom = dot(pq, pq)
    if denom == 0.0:
        return 0.0
    return dot(sub(x, p), pq) / denom


def point_segment_distance(p: Point, q: Point, x: Point) -> float:
    """Euclidean distance from x to the segment [p, q]."""
    t = min(1.0, max(0.0, project_param(p, q, x)))
    return dist(x, lerp(p, q, t))


def on_segment(p: Point, q: Point, x: Point, tol: float = SNAP) -> bool:
    """True if x lies within tol of the segment [p, q]."""
    return point_segment_distance(p, q, x) <= tol


def polyline_length(points) -> float:
    return sum(dist(points[i], points[i + 1]) for i in range(len(points) - 1))
