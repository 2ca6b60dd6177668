"""Polyhedral mass fluxes: divergence, energies, cycle removal, path
decomposition, and the linear Beckmann min-cost-flow solver.

A flux is a finite set of weighted oriented segments.  Its distributional
divergence puts +m at each tail and -m at each head, so a flux is admissible
for a source/sink pair exactly when the divergence equals their difference.
Both energies depend on masses only through their magnitude: the Gilbert
(branched transport) energy prices each edge at tau(m)*length, the Beckmann
energy at friction*m*length on the network and ambient_cost*m*length off it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import geometry
from .cost import CostFunction
from .errors import CyclicFlux, Infeasible, UnclassifiableEdge
from .measures import SignedDiscreteMeasure, make_signed
from .network import NODE_SNAP, RoutingGraph, StreetNetwork
from .transport import MinCostFlowEngine

INF = math.inf

#: Edge masses at or below this vanish during netting.
MASS_TOL = 1e-12


@dataclass(frozen=True)
class FluxEdge:
    tail: tuple
    head: tuple
    mass: float

    def length(self) -> float:
        return geometry.dist(self.tail, self.head)

    def direction(self) -> tuple:
        return geometry.unit(self.tail, self.head)


@dataclass(frozen=True)
class MassFlux:
    """Weighted directed geometric edges in canonical orientation.

    Antiparallel duplicates are netted on construction, zero-length and
    zero-mass edges dropped, and each edge is oriented so its mass is
    positive.  Edge order is deterministic (lexicographic by endpoints).
    """

    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "edges", _canonicalize(self.edges))

    def __len__(self) -> int:
        return len(self.edges)

    def vertices(self) -> tuple:
        seen: dict = {}
        for e in self.edges:
            for p in (e.tail, e.head):
                seen.setdefault(geometry.snap_key(p, NODE_SNAP), p)
        return tuple(seen.values())

    def total_length(self) -> float:
        return sum(e.length() for e in self.edges)


def _canonicalize(edges) -> tuple:
    net: dict = {}
    points: dict = {}
    for e in edges:
        if not isinstance(e, FluxEdge):
            e = FluxEdge(tuple(e[0]), tuple(e[1]), float(e[2]))
        tk = geometry.snap_key(e.tail, NODE_SNAP)
        hk = geometry.snap_key(e.head, NODE_SNAP)
        if tk == hk:
            continue
        points.setdefault(tk, e.tail)
        points.setdefault(hk, e.head)
        if tk <= hk:
            key, sign = (tk, hk), 1.0
        else:
            key, sign = (hk, tk), -1.0
        net[key] = net.get(key, 0.0) + sign * e.mass
    out = []
    for (ak, bk), m in net.items():
        if abs(m) <= MASS_TOL:
            continue
        if m > 0.0:
            out.append(FluxEdge(points[ak], points[bk], m))
        else:
            out.append(FluxEdge(points[bk], points[ak], -m))
    out.sort(key=lambda e: (e.tail, e.head))
    return tuple(out)


def make_flux(edges) -> MassFlux:
    """Build a flux from (tail, head, mass) triples."""
    return MassFlux(edges=tuple(edges))


def divergence(f: MassFlux) -> SignedDiscreteMeasure:
    """Distributional divergence: +m at each tail, -m at each head.

    Vertices with net zero are omitted; interior Kirchhoff balance is
    exactly the statement that they do not appear.
    """
    atoms = []
    for e in f.edges:
        atoms.append((e.tail, e.mass))
        atoms.append((e.head, -e.mass))
    return make_signed(atoms, snap=NODE_SNAP)


def gilbert_energy(f: MassFlux, cost: CostFunction) -> float:
    """Branched transport cost sum_e tau(m_e) * length(e)."""
    return sum(cost.tau(e.mass) * e.length() for e in f.edges)


def _segment_of_edge(net: StreetNetwork, e: FluxEdge):
    """Index of the cheapest segment fully containing e, or -1 if off-network.

    Raises UnclassifiableEdge when the edge only partially overlaps a
    segment (callers must pre-split such edges).
    """
    best = -1
    best_b = INF
    partially = False
    for i, seg in enumerate(net.segments):
        t_on = geometry.on_segment(seg.p, seg.q, e.tail, NODE_SNAP)
        h_on = geometry.on_segment(seg.p, seg.q, e.head, NODE_SNAP)
        mid_on = geometry.on_segment(seg.p, seg.q,
                                     geometry.lerp(e.tail, e.head, 0.5), NODE_SNAP)
        if t_on and h_on and mid_on:
            if seg.b < best_b:
                best, best_b = i, seg.b
        elif mid_on and (t_on or h_on):
            partially = True
    if best < 0 and partially:
        raise UnclassifiableEdge(
            f"edge {e.tail} -> {e.head} straddles a segment boundary")
    return best


def beckmann_energy(f: MassFlux, net: StreetNetwork) -> float:
    """Flow cost sum b*m*len on the network plus a * (off-network mass length).

    Infinite when the ambient cost is infinite and any off-network mass
    exists; an empty off-network part costs 0 even then.
    """
    total = 0.0
    for e in f.edges:
        si = _segment_of_edge(net, e)
        if si >= 0:
            total += net.segments[si].b * e.mass * e.length()
        else:
            if math.isinf(net.a):
                return INF
            total += net.a * e.mass * e.length()
    return total


def _adjacency(edges):
    out: dict = {}
    for i, e in enumerate(edges):
        out.setdefault(geometry.snap_key(e.tail, NODE_SNAP), []).append(i)
    return out


def _find_cycle(edges):
    """A directed cycle as a list of edge indices, or None."""
    out = _adjacency(edges)
    color: dict = {}  # 0 active, 1 done
    stack_edges: list = []

    def dfs(vk):
        color[vk] = 0
        for ei in out.get(vk, ()):
            hk = geometry.snap_key(edges[ei].head, NODE_SNAP)
            if color.get(hk) == 0:
                stack_edges.append(ei)
                return hk
            if hk not in color:
                stack_edges.append(ei)
                found = dfs(hk)
                if found is not None:
                    return found
                stack_edges.pop()
        color[vk] = 1
        return None

    for i, e in enumerate(edges):
        vk = geometry.snap_key(e.tail, NODE_SNAP)
        if vk not in color:
            stack_edges.clear()
            hit = dfs(vk)
            if hit is not None:
                # trim the tail of the walk that precedes the cycle entry
                cycle = []
                for ei in reversed(stack_edges):
                    cycle.append(ei)
                    if geometry.snap_key(edges[ei].tail, NODE_SNAP) == hit:
                        break
                cycle.reverse()
                return cycle
    return None


def remove_cycles(f: MassFlux) -> MassFlux:
    """Cancel divergence-free circulation; never increases either energy.

    Repeatedly subtracts the bottleneck mass along any directed cycle.
    Acyclic input is returned unchanged; the operation is idempotent and
    preserves the divergence exactly.
    """
    edges = list(f.edges)
    changed = False
    while True:
        cycle = _find_cycle(edges)
        if cycle is None:
            break
        changed = True
        delta = min(edges[i].mass for i in cycle)
        kept = []
        cycle_set = set(cycle)
        for i, e in enumerate(edges):
            if i in cycle_set:
                m = e.mass - delta
                if m > MASS_TOL:
                    kept.append(FluxEdge(e.tail, e.head, m))
            else:
                kept.append(e)
        edges = kept
    return MassFlux(edges=tuple(edges)) if changed else f


def is_acyclic(f: MassFlux) -> bool:
    return _find_cycle(list(f.edges)) is None


def decompose_paths(f: MassFlux):
    """Split an acyclic flux into weighted source-to-sink polylines.

    Returns a list of (polyline, weight) whose weighted edge indicators
    reproduce every edge mass; each path starts at a positive-divergence
    vertex and ends at a negative one.  At most |edges| + |divergence
    atoms| paths are produced.
    """
    if not is_acyclic(f):
        raise CyclicFlux("decompose_paths requires an acyclic flux")
    div = divergence(f)
    supply = {geometry.snap_key(p, NODE_SNAP): m for p, m in div.atoms}
    residual = {i: e.mass for i, e in enumerate(f.edges)}
    out: dict = {}
    for i, e in enumerate(f.edges):
        out.setdefault(geometry.snap_key(e.tail, NODE_SNAP), []).append(i)

    def next_edge(vk):
        cands = [i for i in out.get(vk, ()) if residual[i] > MASS_TOL]
        if not cands:
            return None
        return min(cands, key=lambda i: (f.edges[i].head, i))

    paths = []
    sources = sorted((p for p, m in div.atoms if m > 0.0))
    for start in sources:
        sk = geometry.snap_key(start, NODE_SNAP)
        while supply.get(sk, 0.0) > MASS_TOL:
            polyline = [start]
            edge_ids = []
            vk = sk
            while True:
                ei = next_edge(vk)
                if ei is None:
                    break
                edge_ids.append(ei)
                polyline.append(f.edges[ei].head)
                vk = geometry.snap_key(f.edges[ei].head, NODE_SNAP)
            if not edge_ids:
                raise CyclicFlux("stranded supply, divergence out of balance")
            weight = min(supply[sk], -supply.get(vk, 0.0),
                         min(residual[i] for i in edge_ids))
            if weight <= MASS_TOL:
                raise CyclicFlux("degenerate path weight, flux inconsistent")
            for i in edge_ids:
                residual[i] -= weight
            supply[sk] -= weight
            supply[vk] += weight
            paths.append((tuple(polyline), weight))
    return paths


def solve_beckmann(g: RoutingGraph, mu_plus, mu_minus):
    """Minimize flow cost over the routing graph subject to the divergence.

    Atoms of both measures must be graph nodes.  Returns (flux, value);
    infeasible instances (only possible when the ambient cost is infinite
    and the graph disconnects the atoms) yield an empty flux and value inf.
    The optimal value equals the transport value on the urban-distance cost
    matrix of the same graph.
    """
    n = len(g.nodes)
    supplies = [0.0] * n
    for p, m in mu_plus.atoms:
        supplies[g.node_index(p)] += m
    for p, m in mu_minus.atoms:
        supplies[g.node_index(p)] -= m

    engine = MinCostFlowEngine(n)
    arc_pairs = []
    for e in g.edges:
        cost = e.length * e.unit_cost
        fw = engine.add_arc(e.u, e.v, cost)
        bw = engine.add_arc(e.v, e.u, cost)
        arc_pairs.append((e, fw, bw))
    ok, _, _ = engine.solve(supplies)
    if not ok:
        return MassFlux(edges=()), INF

    edges = []
    value = 0.0
    for e, fw, bw in arc_pairs:
        flow = engine.flow[fw] - engine.flow[bw]
        if abs(flow) <= MASS_TOL:
            continue
        value += e.length * e.unit_cost * abs(flow)
        if flow > 0.0:
            edges.append(FluxEdge(g.nodes[e.u], g.nodes[e.v], flow))
        else:
            edges.append(FluxEdge(g.nodes[e.v], g.nodes[e.u], -flow))
    return MassFlux(edges=tuple(edges)), value
