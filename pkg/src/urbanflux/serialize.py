"""JSON (de)serialization for costs, measures, networks, fluxes, reports.

Floats are emitted with 12 significant digits and keys sorted so identical
inputs always produce byte-identical output; infinity round-trips as the
string "inf".
"""
from __future__ import annotations

import csv
import json
import math

from .branched import BranchedConfig
from .bridge import Scenario
from .cost import (AffineCappedCost, CostFunction, DiscreteCost, Piece,
                   PiecewiseCost, PowerCost)
from .flow import FluxEdge, MassFlux
from .measures import DiscreteMeasure, make_measure
from .network import Segment, StreetNetwork


def _enc(x):
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(f"{x:.12g}")
    if isinstance(x, dict):
        return {k: _enc(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_enc(v) for v in x]
    return x


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, 12 significant digits)."""
    return json.dumps(_enc(obj), sort_keys=True, indent=2) + "\n"


def _num(x) -> float:
    if x == "inf":
        return math.inf
    if x == "-inf":
        return -math.inf
    return float(x)


# --- cost functions --------------------------------------------------------

def cost_to_dict(cost: CostFunction) -> dict:
    if isinstance(cost, PowerCost):
        return {"family": "power", "alpha": cost.alpha}
    if isinstance(cost, AffineCappedCost):
        return {"family": "affine_capped", "a_bar": cost.a_bar,
                "b_bar": cost.b_bar, "c_bar": cost.c_bar}
    if isinstance(cost, DiscreteCost):
        return {"family": "discrete", "c_bar": cost.c_bar}
    if isinstance(cost, PiecewiseCost):
        return {"family": "piecewise", "jump_at_zero": cost.jump_at_zero,
                "pieces": [{"start": p.start, "kind": p.kind, "c0": p.c0,
                            "c1": p.c1, "c2": p.c2} for p in cost.pieces]}
    raise ValueError(f"unknown cost type {type(cost).__name__}")


def cost_from_dict(data: dict) -> CostFunction:
    family = data["family"]
    if family == "power":
        return PowerCost(alpha=_num(data["alpha"]))
    if family == "affine_capped":
        return AffineCappedCost(a_bar=_num(data["a_bar"]),
                            b_bar=_num(data["b_bar"]), c_bar=_num(data["c_bar"]))
    if family == "discrete":
        return DiscreteCost(c_bar=_num(data["c_bar"]))
    if family == "piecewise":
        pieces = tuple(Piece(start=_num(p["start"]), kind=p["kind"],
                             c0=_num(p["c0"]), c1=_num(p["c1"]),
                             c2=_num(p.get("c2", 0.0)))
                       for p in data["pieces"])
        return PiecewiseCost(pieces=pieces,
                             jump_at_zero=_num(data.get("jump_at_zero", 0.0)))
    raise ValueError(f"unknown cost family {family!r}")


# --- measures ---------------------------------------------------------------

def measure_to_dict(mu: DiscreteMeasure) -> dict:
    return {"atoms": [{"p": list(p), "m": m} for p, m in mu.atoms]}


def measure_from_dict(data: dict) -> DiscreteMeasure:
    return make_measure([(tuple(a["p"]), _num(a["m"])) for a in data["atoms"]])


# --- networks ---------------------------------------------------------------

def network_to_dict(net: StreetNetwork) -> dict:
    return {"a": net.a,
            "segments": [{"p": list(s.p), "q": list(s.q), "b": s.b}
                         for s in net.segments]}


def network_from_dict(data: dict) -> StreetNetwork:
    segments = tuple(Segment(tuple(s["p"]), tuple(s["q"]), _num(s["b"]))
                     for s in data.get("segments", []))
    return StreetNetwork(segments=segments, a=_num(data["a"]))


# --- fluxes -----------------------------------------------------------------

def flux_to_dict(f: MassFlux) -> dict:
    return {"edges": [{"tail": list(e.tail), "head": list(e.head), "m": e.mass}
                      for e in f.edges]}


def flux_from_dict(data: dict) -> MassFlux:
    edges = tuple(FluxEdge(tuple(e["tail"]), tuple(e["head"]), _num(e["m"]))
                  for e in data.get("edges", []))
    return MassFlux(edges=edges)


def flux_to_csv(f: MassFlux, path, unit_costs=None):
    """Per-edge (length, mass, unit cost) table."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["length", "mass", "unit_cost"])
        for i, e in enumerate(f.edges):
            cost = unit_costs[i] if unit_costs is not None else ""
            writer.writerow([f"{e.length():.12g}", f"{e.mass:.12g}", cost])


# --- scenarios --------------------------------------------------------------

def scenario_from_dict(data: dict) -> Scenario:
    cfg = data.get("config", {})
    branched = BranchedConfig(
        max_steiner=int(cfg.get("max_steiner", 0)),
        grid_seed_count=int(cfg.get("grid_seed_count", 5)),
        descent_tol=_num(cfg.get("descent_tol", 1e-9)),
        report_ties=bool(cfg.get("report_ties", False)))
    return Scenario(
        cost=cost_from_dict(data["tau"]),
        mu_plus=measure_from_dict(data["mu_plus"]),
        mu_minus=measure_from_dict(data["mu_minus"]),
        network=(network_from_dict(data["network"])
                 if data.get("network") else None),
        flux=flux_from_dict(data["flux"]) if data.get("flux") else None,
        branched_config=branched,
        refinement=int(cfg.get("refinement", 0)))
