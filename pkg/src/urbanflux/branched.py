"""Desk-scale branched transport solver and junction optimality diagnostics.

No general algorithm exists for branched transport; this solver exhausts a
finite topology class and is therefore an upper-bound oracle: it enumerates
every labeled tree (via Pruefer sequences) on the terminal atoms plus up to
``max_steiner`` movable branch points, forces the unique Kirchhoff-balanced
edge masses of each tree, and optimizes branch-point positions by
Weiszfeld-style coordinate descent (the energy is convex in positions for
fixed masses).  Forests are covered automatically because zero-mass edges
cost nothing.  The returned value is exact whenever the optimal topology
lies in the enumerated class, which holds for the bundled fixtures.
"""
from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field

from . import geometry
from .cost import CostFunction
from .errors import TerminalVertex, TooManyAtoms
from .flow import MASS_TOL, FluxEdge, MassFlux, divergence
from .measures import DiscreteMeasure
from .network import NODE_SNAP

#: Largest number of Pruefer sequences enumerated before giving up.
MAX_TOPOLOGIES = 5_000_000

MAX_ATOMS = 8


@dataclass(frozen=True)
class BranchedConfig:
    max_steiner: int = 0
    grid_seed_count: int = 5
    descent_tol: float = 1e-9
    report_ties: bool = False
    tie_tol: float = 1e-9

    def __post_init__(self):
        if self.max_steiner < 0 or self.max_steiner > 2:
            raise ValueError("max_steiner must lie in {0, 1, 2}")


@dataclass(frozen=True)
class BranchedResult:
    flux: MassFlux
    value: float
    ties: tuple = field(default=())

    def __iter__(self):
        return iter((self.flux, self.value))


def _prufer_decode(seq, n):
    """Edge list of the labeled tree with Pruefer sequence seq on n vertices."""
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    leaf_heap = sorted(v for v in range(n) if degree[v] == 1)
    heapq.heapify(leaf_heap)
    for v in seq:
        leaf = heapq.heappop(leaf_heap)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaf_heap, v)
    u = heapq.heappop(leaf_heap)
    w = heapq.heappop(leaf_heap)
    edges.append((u, w))
    return edges


def _tree_masses(edges, div, n):
    """Signed mass on each tree edge forced by Kirchhoff balance.

    Positive mass flows from the first to the second vertex of the edge
    after reorientation; returns a list of (u, v, mass >= 0).
    """
    adj = [[] for _ in range(n)]
    for ei, (u, v) in enumerate(edges):
        adj[u].append((v, ei))
        adj[v].append((u, ei))
    # subtree sums via iterative post-order from root 0
    parent = [-1] * n
    parent_edge = [-1] * n
    order = [0]
    seen = [False] * n
    seen[0] = True
    for u in order:
        for v, ei in adj[u]:
            if not seen[v]:
                seen[v] = True
                parent[v] = u
                parent_edge[v] = ei
                order.append(v)
    subtree = list(div)
    oriented = [None] * len(edges)
    for u in reversed(order[1:]):
        p = parent[u]
        sigma = subtree[u]
        # surplus in the subtree flows out of it, towards the parent side
        if sigma >= 0.0:
            oriented[parent_edge[u]] = (u, p, sigma)
        else:
            oriented[parent_edge[u]] = (p, u, -sigma)
        subtree[p] += sigma
    return oriented


def _energy(oriented, positions, cost):
    total = 0.0
    for u, v, m in oriented:
        if m <= MASS_TOL:
            continue
        total += cost.tau(m) * geometry.dist(positions[u], positions[v])
    return total


def _weiszfeld_step(point, anchors, weights):
    """One weighted geometric-median update; returns the old point at a pit."""
    num = [0.0] * len(point)
    den = 0.0
    pull = [0.0] * len(point)
    pinned_weight = 0.0
    for x, w in zip(anchors, weights):
        d = geometry.dist(point, x)
        if d < 1e-14:
            pinned_weight += w
            continue
        for k in range(len(point)):
            num[k] += w * x[k] / d
            pull[k] += w * (x[k] - point[k]) / d
        den += w / d
    if den == 0.0:
        return point
    if pinned_weight > 0.0:
        # sitting on an anchor: stay iff the residual pull is dominated
        if geometry.norm(tuple(pull)) <= pinned_weight:
            return point
        step = min(1e-6, 1.0 / den)
        return tuple(p + step * g for p, g in zip(point, pull))
    return tuple(c / den for c in num)


def _descend_steiner(oriented, positions, steiner_ids, cost, tol, max_sweeps=300):
    """Coordinate descent over branch-point positions; monotone in energy."""
    positions = list(positions)
    energy = _energy(oriented, positions, cost)
    for _ in range(max_sweeps):
        moved = 0.0
        for s in steiner_ids:
            anchors, weights = [], []
            for u, v, m in oriented:
                if m <= MASS_TOL:
                    continue
                if u == s:
                    anchors.append(positions[v])
                    weights.append(cost.tau(m))
                elif v == s:
                    anchors.append(positions[u])
                    weights.append(cost.tau(m))
            if not anchors:
                continue
            candidate = _weiszfeld_step(positions[s], anchors, weights)
            old = positions[s]
            positions[s] = candidate
            new_energy = _energy(oriented, positions, cost)
            while new_energy > energy + 1e-15:
                candidate = geometry.lerp(old, candidate, 0.5)
                if geometry.dist(old, candidate) < 1e-15:
                    candidate = old
                    positions[s] = candidate
                    new_energy = energy
                    break
                positions[s] = candidate
                new_energy = _energy(oriented, positions, cost)
            moved = max(moved, geometry.dist(old, candidate))
            energy = new_energy
        if moved < tol:
            break
    return positions, energy


def _flux_from_tree(oriented, positions):
    edges = []
    for u, v, m in oriented:
        if m <= MASS_TOL:
            continue
        if geometry.dist(positions[u], positions[v]) <= NODE_SNAP:
            continue
        edges.append(FluxEdge(positions[u], positions[v], m))
    return MassFlux(edges=tuple(edges))


def _seed_positions(terminals, n_steiner, count):
    """Deterministic Steiner seeds: centroid plus a ring of perturbations."""
    dim = len(terminals[0])
    centroid = tuple(sum(t[k] for t in terminals) / len(terminals)
                     for k in range(dim))
    spread = max((geometry.dist(t, centroid) for t in terminals), default=1.0)
    spread = max(spread, 1e-3)
    seeds = []
    for i in range(count):
        positions = []
        for s in range(n_steiner):
            if i == 0:
                offset = tuple(0.01 * spread * (s + 1) if k == 0 else 0.0
                               for k in range(dim))
            else:
                angle = 2.0 * math.pi * (i - 1) / max(1, count - 1) + s
                radius = 0.35 * spread
                offset = tuple(radius * math.cos(angle) if k == 0
                               else radius * math.sin(angle) if k == 1 else 0.0
                               for k in range(dim))
            positions.append(geometry.add(centroid, offset))
        seeds.append(positions)
    return seeds


def solve_branched(mu_plus: DiscreteMeasure, mu_minus: DiscreteMeasure,
                   cost: CostFunction,
                   config: BranchedConfig | None = None) -> BranchedResult:
    """Minimize the Gilbert energy over enumerated tree topologies.

    Edge masses on each tree are uniquely forced by Kirchhoff balance;
    Steiner positions are optimized by coordinate descent.  The best flux
    and value are returned; near-optimal distinct fluxes are listed in
    ``ties`` when ``config.report_ties`` is set.
    """
    cfg = config or BranchedConfig()
    terminals = list(mu_plus.points) + list(mu_minus.points)
    if len(terminals) > MAX_ATOMS:
        raise TooManyAtoms(f"{len(terminals)} atoms exceed the limit {MAX_ATOMS}")
    div_terminal = list(mu_plus.masses) + [-m for m in mu_minus.masses]

    best_value = math.inf
    candidates = []  # (value, canonical key, flux)

    for n_steiner in range(cfg.max_steiner + 1):
        t = len(terminals)
        n = t + n_steiner
        if n < 2:
            continue
        n_seqs = n ** max(0, n - 2)
        if n_seqs > MAX_TOPOLOGIES:
            raise TooManyAtoms(
                f"{n_seqs} topologies for {t} atoms + {n_steiner} branch "
                "points; lower max_steiner")
        div = div_terminal + [0.0] * n_steiner
        steiner_ids = list(range(t, n))
        seeds = (_seed_positions(terminals, n_steiner, cfg.grid_seed_count)
                 if n_steiner else [[]])
        for seq in itertools.product(range(n), repeat=max(0, n - 2)):
            if n_steiner and any(seq.count(s) < 2 for s in steiner_ids):
                continue  # branch points of degree < 3 never help
            edges = _prufer_decode(seq, n)
            oriented = _tree_masses(edges, div, n)
            if n_steiner and any(
                    sum(1 for u, v, m in oriented if m > MASS_TOL and s in (u, v)) < 3
                    for s in steiner_ids):
                continue  # covered by a smaller topology
            best_for_topology = None
            for seed in seeds:
                positions = list(terminals) + list(seed)
                if n_steiner:
                    positions, value = _descend_steiner(
                        oriented, positions, steiner_ids, cost, cfg.descent_tol)
                else:
                    value = _energy(oriented, positions, cost)
                if best_for_topology is None or value < best_for_topology[0]:
                    best_for_topology = (value, positions)
            value, positions = best_for_topology
            if value < best_value + cfg.tie_tol:
                flux = _flux_from_tree(oriented, positions)
                key = tuple((geometry.snap_key(e.tail, 1e-6),
                             geometry.snap_key(e.head, 1e-6),
                             round(e.mass / 1e-9)) for e in flux.edges)
                candidates.append((value, key, flux))
                best_value = min(best_value, value)

    if not candidates:
        raise TooManyAtoms("no admissible topology found")
    keep = {}
    for value, key, flux in candidates:
        if value <= best_value + cfg.tie_tol and (
                key not in keep or value < keep[key][0]):
            keep[key] = (value, flux)
    ranked = sorted(keep.values(), key=lambda it: (it[0], tuple(
        (e.tail, e.head) for e in it[1].edges)))
    best_value, best_flux = ranked[0]
    ties = tuple(f for _, f in ranked) if cfg.report_ties else ()
    return BranchedResult(flux=best_flux, value=best_value, ties=ties)


def momentum_residual(f: MassFlux, cost: CostFunction, vertex) -> tuple:
    """Net pull of weighted edge directions at an interior junction.

    Sums tau(m_e) times the unit vector pointing away from the vertex over
    all incident edges (equivalently: outgoing weighted directions minus
    incoming ones).  A near-zero norm certifies local optimality of the
    junction position; the residual equals minus the position gradient of
    the Gilbert energy.
    """
    v = tuple(float(c) for c in vertex)
    vk = geometry.snap_key(v, NODE_SNAP)
    for p, m in divergence(f).atoms:
        if geometry.snap_key(p, NODE_SNAP) == vk and abs(m) > 1e-9:
            raise TerminalVertex(f"{v} carries divergence {m}")
    dim = len(v)
    residual = [0.0] * dim
    incident = 0
    for e in f.edges:
        if geometry.snap_key(e.tail, NODE_SNAP) == vk:
            away = e.direction()
            incident += 1
        elif geometry.snap_key(e.head, NODE_SNAP) == vk:
            away = geometry.scale(e.direction(), -1.0)
            incident += 1
        else:
            continue
        w = cost.tau(e.mass)
        for k in range(dim):
            residual[k] += w * away[k]
    if incident == 0:
        raise TerminalVertex(f"{v} is not a vertex of the flux")
    return tuple(residual)
