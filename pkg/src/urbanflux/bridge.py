"""The two constructive directions between branched transport and urban
planning, plus the equivalence verifier.

Flux to network: after stripping divergence-free circulation, each edge of
mass m becomes a street with friction b = tau'_+(m), the ambient cost is
a = tau'(0), and the Fenchel-Young equality tau(m) = b*m + epsilon(b) makes
the urban planning cost of the pair no larger than the Gilbert energy.

Network to flux: an optimal Beckmann flow on the routing graph becomes a
flux whose Gilbert energy is bounded by the urban planning cost, edgewise
via the Fenchel-Young inequality tau(m) <= b*m + epsilon(b).

Composing the two yields a sandwich of the optimal values; the verifier
reports it and passes when the spread collapses.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .branched import BranchedConfig, solve_branched
from .cost import (CostFunction, MaintenanceCost, friction_from_mass,
                   tau_prime_zero)
from .errors import AmbientCostMismatch, Infeasible, InfiniteEnergy
from .flow import (MassFlux, divergence, gilbert_energy, remove_cycles,
                   solve_beckmann)
from .measures import DiscreteMeasure, make_measure
from .network import Segment, StreetNetwork, build_routing_graph
from .transport import wasserstein_urban

INF = math.inf

#: Frictions within this of the ambient cost are pruned from built networks.
PRUNE_TOL = 1e-12


@dataclass(frozen=True)
class Certificate:
    """One proof direction, serialized so it can be re-checked without solving."""

    direction: str              # "U<=J" or "J<=U"
    urban_cost: float           # U = W + maintenance
    gilbert_cost: float         # J
    wasserstein: float
    maintenance: float
    residuals: tuple            # per-edge Fenchel-Young residuals
    tolerance: float = 1e-8

    @property
    def holds(self) -> bool:
        if self.direction == "U<=J":
            return self.urban_cost <= self.gilbert_cost + self.tolerance
        return self.gilbert_cost <= self.urban_cost + self.tolerance


def _measures_from_flux(f: MassFlux):
    """Normalized source/sink of a flux plus the total mass it moves.

    Returns (mu_plus, mu_minus, total), or None for a divergence-free flux.
    The Wasserstein distance scales linearly in the common total, so
    callers multiply by ``total`` to price the original masses.
    """
    div = divergence(f)
    pos = div.positive_part()
    neg = div.negative_part()
    if not pos or not neg:
        return None
    mu_plus = make_measure(pos, normalize=True)
    mu_minus = make_measure(neg, normalize=True)
    total = sum(m for _, m in pos)
    return mu_plus, mu_minus, total


def urban_cost(net: StreetNetwork, mc: MaintenanceCost,
               mu_plus: DiscreteMeasure, mu_minus: DiscreteMeasure,
               refinement: int = 0, mass_scale: float = 1.0):
    """U[S, b] = Wasserstein + maintenance integral; returns (U, W, M)."""
    w, _, _ = wasserstein_urban(net, mu_plus, mu_minus, refinement)
    w *= mass_scale
    maintenance = 0.0
    for seg in net.segments:
        eps = mc.epsilon(seg.b)
        if math.isinf(eps):
            return INF, w, INF
        maintenance += eps * seg.length()
    return w + maintenance, w, maintenance


def flux_to_urban(f: MassFlux, cost: CostFunction, prune: bool = True,
                  refinement: int = 0):
    """Build the street network induced by a finite-energy flux.

    Cycles are removed first; each surviving edge of mass m becomes a
    segment with friction tau'_+(m) and the ambient cost is tau'(0).
    Segments whose friction equals the ambient cost are pruned (they are
    free to maintain and no better than off-network travel) unless
    ``prune`` is False.  Returns (network, certificate).
    """
    f = remove_cycles(f)
    j = gilbert_energy(f, cost)
    if math.isinf(j):
        raise InfiniteEnergy("flux has infinite branched transport cost")
    a = tau_prime_zero(cost)
    mc = MaintenanceCost(cost)

    segments = []
    residuals = []
    for e in f.edges:
        b = friction_from_mass(cost, e.mass)
        residuals.append(b * e.mass + mc.epsilon(b) - cost.tau(e.mass))
        if prune and math.isfinite(a) and abs(b - a) <= max(PRUNE_TOL, PRUNE_TOL * a):
            continue
        segments.append(Segment(e.tail, e.head, b))
    net = StreetNetwork(segments=tuple(segments), a=a)

    marginals = _measures_from_flux(f)
    if marginals is None:
        cert = Certificate(direction="U<=J", urban_cost=0.0, gilbert_cost=j,
                           wasserstein=0.0, maintenance=0.0, residuals=())
        return net, cert
    mu_plus, mu_minus, total = marginals
    u, w, maintenance = urban_cost(net, mc, mu_plus, mu_minus, refinement,
                                   mass_scale=total)
    cert = Certificate(direction="U<=J", urban_cost=u, gilbert_cost=j,
                       wasserstein=w, maintenance=maintenance,
                       residuals=tuple(residuals))
    return net, cert


def urban_to_flux(net: StreetNetwork, cost: CostFunction,
                  mu_plus: DiscreteMeasure, mu_minus: DiscreteMeasure,
                  refinement: int = 0):
    """Extract a flux from a street network via the Beckmann problem.

    Requires the network's ambient cost to equal tau'(0), the pairing the
    equivalence demands.  Returns (flux, certificate) where the certificate
    bounds the Gilbert energy by the urban planning cost.
    """
    a = tau_prime_zero(cost)
    both_inf = math.isinf(net.a) and math.isinf(a)
    if not both_inf and abs(net.a - a) > 1e-9 * max(1.0, abs(a)):
        raise AmbientCostMismatch(
            f"network ambient cost {net.a} differs from tau'(0) = {a}")
    terminals = list(mu_plus.points) + list(mu_minus.points)
    graph = build_routing_graph(net, terminals, refinement)
    flux, w = solve_beckmann(graph, mu_plus, mu_minus)
    if math.isinf(w):
        raise Infeasible("no finite-cost flow between the measures")
    mc = MaintenanceCost(cost)
    maintenance = 0.0
    for seg in net.segments:
        eps = mc.epsilon(seg.b)
        if math.isinf(eps):
            maintenance = INF
            break
        maintenance += eps * seg.length()
    u = w + maintenance
    j = gilbert_energy(flux, cost)
    residuals = []
    for e in flux.edges:
        b = friction_from_mass(cost, e.mass)
        residuals.append(b * e.mass + mc.epsilon(b) - cost.tau(e.mass))
    cert = Certificate(direction="J<=U", urban_cost=u, gilbert_cost=j,
                       wasserstein=w, maintenance=maintenance,
                       residuals=tuple(residuals))
    return flux, cert


@dataclass(frozen=True)
class Scenario:
    """A triple (tau, mu_plus, mu_minus) with optional solver settings."""

    cost: CostFunction
    mu_plus: DiscreteMeasure
    mu_minus: DiscreteMeasure
    network: StreetNetwork | None = None
    flux: MassFlux | None = None
    branched_config: BranchedConfig = field(default_factory=BranchedConfig)
    refinement: int = 0


@dataclass(frozen=True)
class EquivalenceReport:
    j_star: float
    u_value: float
    j_roundtrip: float
    passed: bool
    spread: float
    residuals: tuple
    network: StreetNetwork
    flux: MassFlux

    def to_dict(self) -> dict:
        return {
            "J_star": self.j_star,
            "U": self.u_value,
            "J_roundtrip": self.j_roundtrip,
            "pass": bool(self.passed),
            "spread": self.spread,
            "residuals": list(self.residuals),
        }


def verify_equivalence(scenario: Scenario, tolerance: float = 1e-6) -> EquivalenceReport:
    """Run the full chain J* >= U[S, b] >= J[f''] and report the sandwich.

    PASS means the spread J* - J'' is at most the tolerance, certifying
    that the equivalence holds on this instance up to solver accuracy.
    On non-optimal inputs only the one-directional inequalities are
    guaranteed; equality needs the branched solver's class to contain an
    optimizer, which holds for the bundled fixtures.
    """
    if scenario.flux is not None:
        flux_star = remove_cycles(scenario.flux)
        j_star = gilbert_energy(flux_star, scenario.cost)
    else:
        result = solve_branched(scenario.mu_plus, scenario.mu_minus,
                                scenario.cost, scenario.branched_config)
        flux_star, j_star = result.flux, result.value

    net, cert_down = flux_to_urban(flux_star, scenario.cost,
                                   refinement=scenario.refinement)
    u_value = cert_down.urban_cost
    flux_back, cert_up = urban_to_flux(net, scenario.cost, scenario.mu_plus,
                                       scenario.mu_minus, scenario.refinement)
    j_roundtrip = cert_up.gilbert_cost
    spread = j_star - j_roundtrip
    chain_ok = (u_value <= j_star + 1e-8) and (j_roundtrip <= u_value + 1e-8)
    passed = chain_ok and abs(spread) <= tolerance
    return EquivalenceReport(
        j_star=j_star, u_value=u_value, j_roundtrip=j_roundtrip,
        passed=passed, spread=spread,
        residuals=cert_down.residuals + cert_up.residuals,
        network=net, flux=flux_back)
