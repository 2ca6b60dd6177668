"""Street networks, the augmented routing graph, and the discrete urban metric.

A street network is a finite list of straight segments with per-segment
friction b in [0, a] plus an ambient cost a for travel off the network.
The continuum metric (infimum of path costs over Lipschitz paths) is
approximated by shortest paths on a routing graph: travel along segments at
their friction, and straight off-network hops between any two graph nodes at
cost a per unit length.  This is an upper-bound discretization; the
refinement parameter adds equispaced entry/exit nodes on every segment and
tightens it.  Networks with infinitely many segments are out of scope; every
sublevel set of the friction has finite length by construction.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from . import geometry
from .errors import (DegeneratePolyline, RefinementTooLarge, UnknownNode,
                     UrbanFluxError)

INF = math.inf

#: Merge tolerance for coincident nodes.
NODE_SNAP = 1e-9

MAX_REFINEMENT = 16


@dataclass(frozen=True)
class Segment:
    p: tuple
    q: tuple
    b: float

    def length(self) -> float:
        return geometry.dist(self.p, self.q)


@dataclass(frozen=True)
class StreetNetwork:
    """Polyline segments with per-segment friction and an ambient cost a."""

    segments: tuple
    a: float

    def __post_init__(self):
        segments = tuple(
            s if isinstance(s, Segment) else Segment(tuple(s[0]), tuple(s[1]), float(s[2]))
            for s in self.segments)
        object.__setattr__(self, "segments", segments)
        if self.a < 0.0:
            raise UrbanFluxError("ambient cost a must be >= 0")
        for seg in segments:
            if seg.length() <= 0.0:
                raise UrbanFluxError(f"segment {seg.p} -> {seg.q} has zero length")
            if seg.b < 0.0 or seg.b > self.a:
                raise UrbanFluxError(
                    f"friction {seg.b} outside [0, a] = [0, {self.a}]")

    def sublevel_length(self, lam: float) -> float:
        """Total length of the sublevel network {segments with b <= lam}.

        Finite for every lam < a (trivially, the segment list is finite);
        this is the named finiteness check on street networks.
        """
        return sum(s.length() for s in self.segments if s.b <= lam)

    def has_finite_sublevel_sets(self) -> bool:
        return all(math.isfinite(self.sublevel_length(s.b))
                   for s in self.segments)

    def total_length(self) -> float:
        return sum(s.length() for s in self.segments)


def empty_network(a: float) -> StreetNetwork:
    return StreetNetwork(segments=(), a=a)


@dataclass(frozen=True)
class GraphEdge:
    u: int
    v: int
    length: float
    unit_cost: float
    segment: int  # segment index, or -1 for off-network edges

    @property
    def on_network(self) -> bool:
        return self.segment >= 0


@dataclass(frozen=True)
class RoutingGraph:
    """Immutable embedded graph; symmetric for metric queries."""

    nodes: tuple
    edges: tuple
    network: StreetNetwork

    def node_index(self, point) -> int:
        key = geometry.snap_key(tuple(point), NODE_SNAP)
        idx = self._index.get(key)
        if idx is None:
            raise UnknownNode(f"{tuple(point)} is not a graph node")
        return idx

    def __post_init__(self):
        index = {geometry.snap_key(p, NODE_SNAP): i for i, p in enumerate(self.nodes)}
        object.__setattr__(self, "_index", index)
        adjacency = [[] for _ in self.nodes]
        for e in self.edges:
            adjacency[e.u].append((e.v, e.length * e.unit_cost))
            adjacency[e.v].append((e.u, e.length * e.unit_cost))
        object.__setattr__(self, "_adjacency", tuple(map(tuple, adjacency)))


def build_routing_graph(net: StreetNetwork, terminals,
                        refinement: int = 0) -> RoutingGraph:
    """Discretize the urban metric onto a finite graph.

    Nodes: segment endpoints, the given terminals, equispaced subdivision
    points per segment (grids for every level up to ``refinement``, so a
    deeper refinement only ever adds nodes and shortest paths can only
    shorten), and the clamped orthogonal projection of every terminal onto
    every segment.  Edges: consecutive nodes along each segment at that
    segment's friction, plus (for finite a) the complete off-network layer
    of straight hops at unit cost a.
    """
    if refinement < 0 or refinement > MAX_REFINEMENT:
        raise RefinementTooLarge(f"refinement {refinement} outside [0, {MAX_REFINEMENT}]")
    terminals = [tuple(float(c) for c in t) for t in terminals]

    nodes: list = []
    index: dict = {}

    def intern(point) -> int:
        key = geometry.snap_key(point, NODE_SNAP)
        if key in index:
            return index[key]
        index[key] = len(nodes)
        nodes.append(point)
        return index[key]

    for seg in net.segments:
        intern(seg.p)
        intern(seg.q)
    for seg in net.segments:
        for level in range(1, refinement + 1):
            for i in range(1, level + 1):
                intern(geometry.lerp(seg.p, seg.q, i / (level + 1)))
    for t in terminals:
        intern(t)
    for t in terminals:
        for seg in net.segments:
            s = min(1.0, max(0.0, geometry.project_param(seg.p, seg.q, t)))
            intern(geometry.lerp(seg.p, seg.q, s))

    edges: list = []
    for si, seg in enumerate(net.segments):
        length = seg.length()
        on_seg = []
        for i, p in enumerate(nodes):
            if geometry.point_segment_distance(seg.p, seg.q, p) <= NODE_SNAP:
                on_seg.append((geometry.project_param(seg.p, seg.q, p), i))
        on_seg.sort()
        for (t0, u), (t1, v) in zip(on_seg, on_seg[1:]):
            piece = (t1 - t0) * length
            if piece > NODE_SNAP:
                edges.append(GraphEdge(u, v, piece, seg.b, si))
    if math.isfinite(net.a):
        for u in range(len(nodes)):
            for v in range(u + 1, len(nodes)):
                edges.append(GraphEdge(u, v, geometry.dist(nodes[u], nodes[v]),
                                       net.a, -1))

    return RoutingGraph(nodes=tuple(nodes), edges=tuple(edges), network=net)


def _dijkstra(g: RoutingGraph, start: int):
    dist = [INF] * len(g.nodes)
    prev = [-1] * len(g.nodes)
    dist[start] = 0.0
    heap = [(0.0, start)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in g._adjacency[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                prev[v] = u
                heapq.heappush(heap, (nd, v))
    return dist, prev


def urban_distance(g: RoutingGraph, x, y):
    """Shortest-path travel cost between two graph nodes, with the path.

    Returns (value, path) where path is the node point sequence; value is
    inf and the path empty when unreachable.  Endpoints are canonicalized
    so the result is exactly symmetric in x and y.
    """
    xi, yi = g.node_index(x), g.node_index(y)
    if xi == yi:
        return 0.0, (g.nodes[xi],)
    flip = yi < xi
    if flip:
        xi, yi = yi, xi
    dist, prev = _dijkstra(g, xi)
    if math.isinf(dist[yi]):
        return INF, ()
    path = [yi]
    while path[-1] != xi:
        path.append(prev[path[-1]])
    path.reverse()
    if flip:
        path.reverse()
    return dist[yi], tuple(g.nodes[i] for i in path)


def distance_matrix(g: RoutingGraph, sources, targets):
    """Pairwise urban distances between two node lists (values only)."""
    rows = []
    for x in sources:
        dist, _ = _dijkstra(g, g.node_index(x))
        rows.append([dist[g.node_index(y)] for y in targets])
    return rows


def path_length_L(net: StreetNetwork, polyline) -> float:
    """Travel cost of a polyline: friction on-network, ambient cost off.

    Pieces straddling on/off network are split at segment boundaries; where
    several segments overlap, the cheapest friction applies.  Counts
    multiplicity (a path crossing itself pays twice).
    """
    points = [tuple(float(c) for c in p) for p in polyline]
    if len(points) < 2:
        raise DegeneratePolyline("polyline needs at least 2 points")
    total = 0.0
    for u, v in zip(points, points[1:]):
        piece_len = geometry.dist(u, v)
        if piece_len <= NODE_SNAP:
            continue
        # parameter intervals of [u, v] covered by each segment
        covered = []
        for seg in net.segments:
            t_u = geometry.project_param(seg.p, seg.q, u)
            t_v = geometry.project_param(seg.p, seg.q, v)
            lo_t, hi_t = sorted((t_u, t_v))
            lo_t, hi_t = max(0.0, lo_t), min(1.0, hi_t)
            if hi_t - lo_t <= 0.0:
                continue
            # piece parameters of the overlap window
            denom = t_v - t_u
            if denom == 0.0:
                continue
            s0 = (lo_t - t_u) / denom
            s1 = (hi_t - t_u) / denom
            s0, s1 = sorted((min(1.0, max(0.0, s0)), min(1.0, max(0.0, s1))))
            if s1 - s0 <= 0.0:
                continue
            mid = geometry.lerp(u, v, 0.5 * (s0 + s1))
            ends_on = (geometry.point_segment_distance(seg.p, seg.q, geometry.lerp(u, v, s0))
                       <= NODE_SNAP
                       and geometry.point_segment_distance(seg.p, seg.q, geometry.lerp(u, v, s1))
                       <= NODE_SNAP
                       and geometry.point_segment_distance(seg.p, seg.q, mid) <= NODE_SNAP)
            if ends_on:
                covered.append((s0, s1, seg.b))
        cuts = sorted({0.0, 1.0, *(s for s0, s1, _ in covered for s in (s0, s1))})
        for lo, hi in zip(cuts, cuts[1:]):
            if hi - lo <= 0.0:
                continue
            mid = 0.5 * (lo + hi)
            rate = net.a
            for s0, s1, b in covered:
                if s0 - 1e-12 <= mid <= s1 + 1e-12:
                    rate = min(rate, b)
            if math.isinf(rate):
                return INF
            total += rate * (hi - lo) * piece_len
    return total
