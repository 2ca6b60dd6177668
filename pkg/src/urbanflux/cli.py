"""Command-line scenario runner; the only I/O surface of the toolkit.

All numerics live in the library, the CLI parses scenario JSON, dispatches,
and writes deterministic JSON/CSV/SVG output.  Exit codes: 0 success,
1 verification failure, 2 malformed input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import serialize
from .branched import solve_branched
from .bridge import Scenario, flux_to_urban, urban_to_flux, verify_equivalence
from .cost import MaintenanceCost
from .errors import UrbanFluxError
from .fixtures import run_all
from .flow import solve_beckmann
from .measures import make_measure
from .network import build_routing_graph, urban_distance
from .render import render_svg
from .transport import wasserstein_urban


def _load_json(path: str) -> dict:
    with open(path) as handle:
        return json.load(handle)


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as handle:
            handle.write(text)


def _load_scenario(path: str) -> Scenario:
    return serialize.scenario_from_dict(_load_json(path))


def _parse_point(text: str):
    return tuple(float(c) for c in text.split(","))


def _parse_range(text: str):
    """Parse 'lo:hi:count' (or 'lo..hi' with 50 points) into a grid."""
    if ":" in text:
        lo, hi, count = text.split(":")
        count = int(count)
    else:
        lo, hi = text.split("..")
        count = 50
    lo, hi = float(lo), float(hi)
    if count < 2:
        return [lo]
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def cmd_cost(args) -> int:
    cost = serialize.cost_from_dict(_load_json(args.spec))
    mc = MaintenanceCost(cost)
    key, _, grid = args.table.partition("=")
    values = _parse_range(grid)
    rows = ["b,epsilon" if key == "b" else "m,tau"]
    for x in values:
        y = mc.epsilon(x) if key == "b" else cost.tau(x)
        y_text = "inf" if math.isinf(y) else f"{y:.12g}"
        rows.append(f"{x:.12g},{y_text}")
    _write(args.out, "\n".join(rows) + "\n")
    return 0


def cmd_distance(args) -> int:
    net = serialize.network_from_dict(_load_json(args.network))
    x, y = _parse_point(args.x), _parse_point(args.y)
    graph = build_routing_graph(net, [x, y], args.refinement)
    value, path = urban_distance(graph, x, y)
    _write(args.out, serialize.dumps(
        {"value": value, "path": [list(p) for p in path]}))
    return 0


def cmd_wasserstein(args) -> int:
    sc = _load_scenario(args.scenario)
    if sc.network is None:
        raise UrbanFluxError("scenario needs a network for `wasserstein`")
    value, plan, _ = wasserstein_urban(sc.network, sc.mu_plus, sc.mu_minus,
                                       sc.refinement)
    out = {"value": value}
    if plan is not None:
        out["plan"] = [[float(w) for w in row] for row in plan.weights]
    _write(args.out, serialize.dumps(out))
    return 0


def cmd_beckmann(args) -> int:
    sc = _load_scenario(args.scenario)
    if sc.network is None:
        raise UrbanFluxError("scenario needs a network for `beckmann`")
    terminals = list(sc.mu_plus.points) + list(sc.mu_minus.points)
    graph = build_routing_graph(sc.network, terminals, sc.refinement)
    flux, value = solve_beckmann(graph, sc.mu_plus, sc.mu_minus)
    out = {"value": value, "flux": serialize.flux_to_dict(flux)}
    _write(args.out, serialize.dumps(out))
    return 0


def cmd_branched(args) -> int:
    sc = _load_scenario(args.scenario)
    result = solve_branched(sc.mu_plus, sc.mu_minus, sc.cost,
                            sc.branched_config)
    out = {"value": result.value, "flux": serialize.flux_to_dict(result.flux)}
    if sc.branched_config.report_ties:
        out["ties"] = [serialize.flux_to_dict(f) for f in result.ties]
    _write(args.out, serialize.dumps(out))
    return 0


def cmd_bridge(args) -> int:
    sc = _load_scenario(args.scenario)
    if sc.flux is not None:
        net, cert = flux_to_urban(sc.flux, sc.cost, refinement=sc.refinement)
        out = {"network": serialize.network_to_dict(net),
               "certificate": _cert_dict(cert)}
    elif sc.network is not None:
        flux, cert = urban_to_flux(sc.network, sc.cost, sc.mu_plus,
                                   sc.mu_minus, sc.refinement)
        out = {"flux": serialize.flux_to_dict(flux),
               "certificate": _cert_dict(cert)}
    else:
        raise UrbanFluxError("scenario needs a flux or a network for `bridge`")
    _write(args.out, serialize.dumps(out))
    return 0


def _cert_dict(cert) -> dict:
    return {"direction": cert.direction, "U": cert.urban_cost,
            "J": cert.gilbert_cost, "W": cert.wasserstein,
            "maintenance": cert.maintenance, "holds": cert.holds,
            "residuals": list(cert.residuals)}


def cmd_verify(args) -> int:
    results = run_all()
    if args.fixtures != "all":
        wanted = set(args.fixtures.split(","))
        results = [r for r in results if r[0] in wanted]
    failures = 0
    lines = []
    for name, passed, detail in results:
        status = "PASS" if passed else "FAIL"
        failures += 0 if passed else 1
        lines.append(f"{status} {name}: {detail}")
    _write(args.out, "\n".join(lines) + "\n")
    return 1 if failures else 0


def cmd_render(args) -> int:
    sc = _load_scenario(args.scenario)
    svg = render_svg(net=sc.network, flux=sc.flux,
                     mu_plus=sc.mu_plus, mu_minus=sc.mu_minus)
    _write(args.out, svg)
    return 0


def cmd_report(args) -> int:
    sc = _load_scenario(args.scenario)
    report = verify_equivalence(sc)
    _write(args.out, serialize.dumps(report.to_dict()))
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="urbanflux",
        description="branched transport / urban planning toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cost", help="tabulate tau or its conjugate")
    p.add_argument("--spec", required=True)
    p.add_argument("--table", default="b=0.1:2:50",
                   help="'b=lo:hi:count' or 'm=lo:hi:count'")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("distance", help="urban metric between two points")
    p.add_argument("--network", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("-k", "--refinement", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_distance)

    for name, func in (("wasserstein", cmd_wasserstein),
                       ("beckmann", cmd_beckmann),
                       ("branched", cmd_branched),
                       ("bridge", cmd_bridge),
                       ("render", cmd_render),
                       ("report", cmd_report)):
        p = sub.add_parser(name)
        p.add_argument("--scenario", required=True)
        p.add_argument("--out", default=None)
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="run the bundled fixture battery")
    p.add_argument("--fixtures", default="all")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UrbanFluxError, OSError, KeyError, ValueError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
