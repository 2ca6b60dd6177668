"""Exact optimal transport between discrete measures; urban Wasserstein distance.

The solver is a successive-shortest-paths min-cost-flow routine with node
potentials (Dijkstra on reduced costs).  Arcs with infinite cost are omitted
structurally rather than penalized; infeasible instances yield value inf.
Ties are broken by lowest node index so plans are deterministic.  Intended
for desk-scale instances (up to 64 x 64 atoms).
"""
from __future__ import annotations

import heapq
import math

import numpy as np

from . import network as net_mod
from .errors import DimensionMismatch
from .measures import DiscreteMeasure, TransportPlan

INF = math.inf

_EPS = 1e-13  # residual supplies below this count as exhausted


class MinCostFlowEngine:
    """Uncapacitated min-cost flow on a directed graph with nonnegative costs."""

    def __init__(self, n_nodes: int):
        self.n = n_nodes
        self.arcs = []       # (u, v, cost)
        self.flow = []       # flow on each arc
        self.out = [[] for _ in range(n_nodes)]  # arc ids leaving u
        self.inc = [[] for _ in range(n_nodes)]  # arc ids entering u

    def add_arc(self, u: int, v: int, cost: float) -> int:
        if cost < 0.0 or math.isinf(cost):
            raise ValueError("arc costs must be finite and nonnegative")
        aid = len(self.arcs)
        self.arcs.append((u, v, cost))
        self.flow.append(0.0)
        self.out[u].append(aid)
        self.inc[v].append(aid)
        return aid

    def solve(self, supplies):
        """Route the supplies (sum must be ~0); returns (ok, cost, potentials).

        ok is False when some supply cannot reach any deficit node, in which
        case the partial flow is meaningless and cost is inf.
        """
        n = self.n
        excess = [float(s) for s in supplies]
        pot = [0.0] * n
        max_rounds = 4 * (n + len(self.arcs) + 1) * (n + 1)
        for _ in range(max_rounds):
            sources = [v for v in range(n) if excess[v] > _EPS]
            if not sources:
                break
            dist = [INF] * n
            # predecessor encoding: 0 none, +(aid+1) forward, -(aid+1) backward
            prev_arc = [0] * n
            heap = []
            for s in sources:
                dist[s] = 0.0
                heapq.heappush(heap, (0.0, s))
            visited = [False] * n
            target = -1
            while heap:
                d, u = heapq.heappop(heap)
                if visited[u]:
                    continue
                visited[u] = True
                if excess[u] < -_EPS:
                    target = u
                    break
                for aid in self.out[u]:
                    _, v, c = self.arcs[aid]
                    if visited[v]:
                        continue
                    nd = d + c + pot[u] - pot[v]
                    if nd < dist[v] - 1e-15:
                        dist[v] = nd
                        prev_arc[v] = aid + 1
                        heapq.heappush(heap, (nd, v))
                for aid in self.inc[u]:
                    w, _, c = self.arcs[aid]
                    if self.flow[aid] > _EPS and not visited[w]:
                        nd = d - c + pot[u] - pot[w]
                        if nd < dist[w] - 1e-15:
                            dist[w] = nd
                            prev_arc[w] = -(aid + 1)
                            heapq.heappush(heap, (nd, w))
            if target < 0:
                return False, INF, pot
            d_t = dist[target]
            for v in range(n):
                pot[v] += min(dist[v], d_t)
            # walk back to the originating source, collecting the bottleneck
            path = []
            v = target
            while prev_arc[v] != 0:
                code = prev_arc[v]
                aid = abs(code) - 1
                if code > 0:
                    path.append((aid, +1))
                    v = self.arcs[aid][0]
                else:
                    path.append((aid, -1))
                    v = self.arcs[aid][1]
            source = v
            delta = min(excess[source], -excess[target])
            for aid, sign in path:
                if sign < 0:
                    delta = min(delta, self.flow[aid])
            for aid, sign in path:
                self.flow[aid] += sign * delta
            excess[source] -= delta
            excess[target] += delta
        else:
            raise RuntimeError("min-cost flow failed to converge")
        self._rederive_flows(supplies)
        # fsum: correctly rounded, so the value is invariant under relabeling
        cost = math.fsum(self.flow[a] * self.arcs[a][2]
                         for a in range(len(self.arcs)) if self.flow[a] > 0.0)
        return True, cost, pot

    def _rederive_flows(self, supplies):
        """Recompute support flows exactly from the supplies.

        The support of a non-degenerate optimum is a forest, so flows follow
        from leaf-stripping as plain signed sums of the original supplies;
        this removes the rounding drift of the augmentation order.  Kept as
        a no-op when the support contains a cycle (degenerate ties).
        """
        support = [a for a in range(len(self.arcs)) if self.flow[a] > _EPS]
        arcs_at = {}
        for a in support:
            u, v, _ = self.arcs[a]
            arcs_at.setdefault(u, set()).add(a)
            arcs_at.setdefault(v, set()).add(a)
        residual = {v: float(supplies[v]) for v in arcs_at}
        exact = {}
        leaves = [v for v, arcs in arcs_at.items() if len(arcs) == 1]
        while leaves:
            v = leaves.pop()
            if v not in arcs_at or len(arcs_at[v]) != 1:
                continue
            a = next(iter(arcs_at[v]))
            tail, head, _ = self.arcs[a]
            x = residual[v] if tail == v else -residual[v]
            exact[a] = max(0.0, x)
            other = head if tail == v else tail
            residual[other] += x if tail == v else -x
            arcs_at[other].discard(a)
            del arcs_at[v]
            if len(arcs_at[other]) == 1:
                leaves.append(other)
            elif not arcs_at[other]:
                del arcs_at[other]
        if any(arcs for arcs in arcs_at.values()):
            return  # cycle in the support: keep accumulated flows
        for a in range(len(self.arcs)):
            self.flow[a] = exact.get(a, 0.0)


def _solve_transport(mu_plus: DiscreteMeasure, mu_minus: DiscreteMeasure, cost):
    c = np.asarray(cost, dtype=float)
    m, n = len(mu_plus), len(mu_minus)
    if c.shape != (m, n):
        raise DimensionMismatch(f"cost shape {c.shape}, expected {(m, n)}")

    engine = MinCostFlowEngine(m + n)
    arc_of = {}
    for i in range(m):
        for j in range(n):
            if math.isfinite(c[i, j]):
                arc_of[(i, j)] = engine.add_arc(i, m + j, float(c[i, j]))
    supplies = list(mu_plus.masses) + [-g for g in mu_minus.masses]
    ok, value, pot = engine.solve(supplies)
    if not ok:
        return None, INF, None, None
    weights = np.zeros((m, n))
    for (i, j), aid in arc_of.items():
        weights[i, j] = max(0.0, engine.flow[aid])
    plan = TransportPlan(source=mu_plus, target=mu_minus, weights=weights)
    # complementary slackness: flow sits on tight arcs, so the potentials
    # u_i = -pot[i], v_j = pot[m+j] are dual feasible with matching objective
    u = [-pot[i] for i in range(m)]
    v = [pot[m + j] for j in range(n)]
    return plan, value, u, v


def solve_ot(mu_plus: DiscreteMeasure, mu_minus: DiscreteMeasure, cost):
    """Optimal transport plan and value for an extended-real cost matrix.

    Entries with infinite cost carry no plan mass; when no finite-cost
    feasible plan exists the value is inf and the plan is None.
    """
    plan, value, _, _ = _solve_transport(mu_plus, mu_minus, cost)
    return plan, value


def dual_bound(mu_plus: DiscreteMeasure, mu_minus: DiscreteMeasure, cost):
    """A dual-feasible potential bound certifying the optimal value."""
    c = np.asarray(cost, dtype=float)
    m, n = len(mu_plus), len(mu_minus)
    plan, value, u, v = _solve_transport(mu_plus, mu_minus, cost)
    if plan is None:
        return INF
    shift = max((u[i] + v[j] - c[i, j] for i in range(m) for j in range(n)
                 if math.isfinite(c[i, j])), default=0.0)
    u = [ui - max(0.0, shift) for ui in u]
    return (sum(f * ui for f, ui in zip(mu_plus.masses, u))
            + sum(g * vj for g, vj in zip(mu_minus.masses, v)))


def wasserstein_urban(net: net_mod.StreetNetwork, mu_plus: DiscreteMeasure,
                      mu_minus: DiscreteMeasure, refinement: int = 0):
    """Wasserstein distance of the discrete urban metric.

    Builds the routing graph over the network plus all atoms, fills the
    cost matrix with urban distances, and solves the transport problem.
    Returns (value, plan, graph).
    """
    terminals = list(mu_plus.points) + list(mu_minus.points)
    graph = net_mod.build_routing_graph(net, terminals, refinement)
    cost = net_mod.distance_matrix(graph, mu_plus.points, mu_minus.points)
    plan, value = solve_ot(mu_plus, mu_minus, cost)
    return value, plan, graph
