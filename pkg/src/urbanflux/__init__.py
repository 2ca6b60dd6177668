"""urbanflux: branched transport, urban planning networks, and the
constructive bridge between them, on finite geometric instances."""

from .branched import (BranchedConfig, BranchedResult, momentum_residual,
                       solve_branched)
from .bridge import (Certificate, EquivalenceReport, Scenario, flux_to_urban,
                     urban_cost, urban_to_flux, verify_equivalence)
from .cost import (AffineCappedCost, CostFunction, DiscreteCost,
                   MaintenanceCost, Piece, PiecewiseCost, PowerCost,
                   eval_epsilon, eval_tau, example_kink_cost,
                   fenchel_young_residual, friction_from_mass,
                   maintenance_cost, min_cap_cost, strip_jump,
                   tau_prime_zero)
from .flow import (FluxEdge, MassFlux, beckmann_energy, decompose_paths,
                   divergence, gilbert_energy, is_acyclic, make_flux,
                   remove_cycles, solve_beckmann)
from .measures import (DiscreteMeasure, SignedDiscreteMeasure, TransportPlan,
                       make_measure, make_signed, measure_difference,
                       plan_cost, signed_close)
from .network import (GraphEdge, RoutingGraph, Segment, StreetNetwork,
                      build_routing_graph, distance_matrix, empty_network,
                      path_length_L, urban_distance)
from .transport import dual_bound, solve_ot, wasserstein_urban

__version__ = "0.1.0"

__all__ = [
    "AffineCappedCost", "BranchedConfig", "BranchedResult", "Certificate",
    "CostFunction", "DiscreteCost", "DiscreteMeasure", "EquivalenceReport",
    "FluxEdge", "GraphEdge", "MaintenanceCost", "MassFlux", "Piece",
    "PiecewiseCost", "PowerCost", "RoutingGraph", "Scenario", "Segment",
    "SignedDiscreteMeasure", "StreetNetwork", "TransportPlan",
    "beckmann_energy", "build_routing_graph", "decompose_paths",
    "distance_matrix", "divergence", "dual_bound", "empty_network",
    "eval_epsilon", "eval_tau", "example_kink_cost",
    "fenchel_young_residual", "flux_to_urban", "friction_from_mass",
    "gilbert_energy", "is_acyclic", "maintenance_cost", "make_flux",
    "make_measure", "make_signed", "measure_difference", "min_cap_cost",
    "momentum_residual", "path_length_L", "plan_cost", "remove_cycles",
    "signed_close", "solve_beckmann", "solve_branched", "solve_ot",
    "strip_jump", "tau_prime_zero", "urban_cost", "urban_distance",
    "urban_to_flux", "verify_equivalence", "wasserstein_urban",
]
