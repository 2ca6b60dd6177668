"""Bundled verification fixtures with closed-form reference values.

Each check returns (name, passed, detail) so both the CLI ``verify``
command and the test suite can run the same battery:

* conjugate tables for the power and affine-capped families,
* the piecewise cost whose conjugate has a kink at 1/2,
* a four-terminal diamond with linear cost (a continuum of optimal fluxes),
* a six-atom instance with two symmetric optima and a unique network,
* a two-point instance where every constant friction in [0, 1] is optimal,
* the vee staircase whose Beckmann values approach but never reach 1.
"""
from __future__ import annotations

import math

from .branched import BranchedConfig, solve_branched
from .bridge import Scenario, verify_equivalence
from .cost import (AffineCappedCost, MaintenanceCost, PowerCost,
                   example_kink_cost, min_cap_cost)
from .flow import make_flux, gilbert_energy, solve_beckmann
from .measures import make_measure
from .network import StreetNetwork, build_routing_graph, empty_network

SQRT2 = math.sqrt(2.0)
SQRT5 = math.sqrt(5.0)


def diamond_measures():
    """Two sources on the axis, two sinks above and below; all pair
    distances sqrt(2)."""
    mu_plus = make_measure([((0.0, 0.0), 0.5), ((2.0, 0.0), 0.5)])
    mu_minus = make_measure([((1.0, 1.0), 0.5), ((1.0, -1.0), 0.5)])
    return mu_plus, mu_minus


def diamond_flux(m: float):
    """The one-parameter family of optimal fluxes on the diamond."""
    edges = [
        ((0.0, 0.0), (1.0, 1.0), m),
        ((0.0, 0.0), (1.0, -1.0), 0.5 - m),
        ((2.0, 0.0), (1.0, 1.0), 0.5 - m),
        ((2.0, 0.0), (1.0, -1.0), m),
    ]
    return make_flux([e for e in edges if e[2] > 0.0])


def double_column_measures(ell: float = 2.0):
    """Three sources below, three sinks above; the middle pair is remote."""
    mu_plus = make_measure([((0.0, 0.0), 0.4), ((1.0, -ell), 0.2),
                            ((2.0, 0.0), 0.4)])
    mu_minus = make_measure([((0.0, 1.0), 0.4), ((1.0, 1.0 + ell), 0.2),
                             ((2.0, 1.0), 0.4)])
    return mu_plus, mu_minus


def double_column_network():
    """The unique optimal network: two unit verticals at friction 1/2."""
    return StreetNetwork(segments=(
        ((0.0, 0.0), (0.0, 1.0), 0.5),
        ((2.0, 0.0), (2.0, 1.0), 0.5),
    ), a=1.0)


DOUBLE_COLUMN_VALUE = 0.4 * SQRT5 + 0.8
DOUBLE_COLUMN_WASSERSTEIN = 0.4 * SQRT5 + 0.5


def two_point_measures(distance: float = 2.0):
    mu_plus = make_measure([((0.0, 0.0), 1.0)])
    mu_minus = make_measure([((distance, 0.0), 1.0)])
    return mu_plus, mu_minus


def vee_network(j: int, a: float = math.inf, friction: float = 1.0):
    """j nested vee detours between (0,0) and (1,0) through (1/2, 1/i)."""
    segments = []
    for i in range(1, j + 1):
        z = (0.5, 1.0 / i)
        segments.append(((0.0, 0.0), z, friction))
        segments.append((z, (1.0, 0.0), friction))
    return StreetNetwork(segments=tuple(segments), a=a)


def vee_value(j: int) -> float:
    return math.sqrt(1.0 + 4.0 / (j * j))


# ---------------------------------------------------------------------------
# fixture battery
# ---------------------------------------------------------------------------

def _check(name, passed, detail=""):
    return (name, bool(passed), detail)


def check_conjugate_tables():
    """Closed-form conjugates match the golden-section maximizer.

    Grids start at b = 0.05 for the smooth families so the maximizer stays
    inside the numeric search window [0, m_max].
    """
    worst = 0.0
    for cost, lo in ((PowerCost(alpha=0.5), 0.05),
                     (AffineCappedCost(a_bar=1.8, b_bar=1.0, c_bar=1.0), 1.0),
                     (min_cap_cost(), 0.0),
                     (example_kink_cost(), 0.05)):
        mc = MaintenanceCost(cost)
        for i in range(100):
            b = lo + (2.0 - lo) * i / 99.0
            exact = mc.epsilon(b)
            numeric = mc.epsilon_numeric(b)
            if math.isinf(exact) or math.isinf(numeric):
                ok = math.isinf(exact) == math.isinf(numeric)
                if not ok:
                    return _check("conjugate_tables", False,
                                  f"{cost} at b={b}: {exact} vs {numeric}")
                continue
            worst = max(worst, abs(exact - numeric))
    return _check("conjugate_tables", worst <= 1e-8, f"max gap {worst:.2e}")


def check_kink_conjugate():
    """The piecewise cost's conjugate: closed form and kink slopes at 1/2."""
    mc = MaintenanceCost(example_kink_cost())
    worst = 0.0
    for i in range(50):
        b = 0.02 + (1.4 - 0.02) * i / 49.0
        if b <= 0.5:
            ref = 0.25 / b - 0.55 + 0.4 * b
        elif b <= 1.0:
            ref = b * b / 5.0 - 0.6 * b + 0.4
        else:
            ref = 0.0
        worst = max(worst, abs(mc.epsilon(b) - ref))
    h = 1e-6
    left = (mc.epsilon(0.5) - mc.epsilon(0.5 - h)) / h
    right = (mc.epsilon(0.5 + h) - mc.epsilon(0.5)) / h
    ok = worst <= 1e-8 and abs(left + 0.6) <= 1e-4 and abs(right + 0.4) <= 1e-4
    return _check("kink_conjugate", ok,
                  f"max gap {worst:.2e}, slopes {left:.6f}/{right:.6f}")


def check_diamond():
    """Linear cost: value sqrt(2), every interpolated flux ties, chain closes."""
    mu_plus, mu_minus = diamond_measures()
    cost = PowerCost(alpha=1.0)
    for k in range(6):
        m = 0.1 * k
        energy = gilbert_energy(diamond_flux(m), cost)
        if abs(energy - SQRT2) > 1e-12:
            return _check("diamond", False, f"flux m={m}: {energy}")
    report = verify_equivalence(Scenario(cost=cost, mu_plus=mu_plus,
                                         mu_minus=mu_minus))
    ok = report.passed and abs(report.j_star - SQRT2) <= 1e-9
    return _check("diamond", ok, f"J*={report.j_star:.12f}")


def check_double_column():
    """Two symmetric optima; sandwich closes at 0.4*sqrt(5) + 0.8."""
    mu_plus, mu_minus = double_column_measures()
    cost = example_kink_cost()
    result = solve_branched(mu_plus, mu_minus, cost,
                            BranchedConfig(report_ties=True))
    report = verify_equivalence(Scenario(cost=cost, mu_plus=mu_plus,
                                         mu_minus=mu_minus))
    ok = (abs(result.value - DOUBLE_COLUMN_VALUE) <= 1e-6
          and len(result.ties) == 2 and report.passed)
    return _check("double_column", ok,
                  f"value {result.value:.9f}, {len(result.ties)} optima, "
                  f"spread {report.spread:.2e}")


def check_two_point():
    """Every constant friction in [0, 1] yields the same urban cost."""
    from .bridge import urban_cost
    mu_plus, mu_minus = two_point_measures()
    cost = min_cap_cost()
    mc = MaintenanceCost(cost)
    for b in (0.0, 0.25, 0.5, 0.75, 1.0):
        net = StreetNetwork(segments=(((0.0, 0.0), (2.0, 0.0), b),), a=1.0)
        u, _, _ = urban_cost(net, mc, mu_plus, mu_minus)
        if abs(u - 2.0) > 1e-10:
            return _check("two_point", False, f"b={b}: U={u}")
    report = verify_equivalence(Scenario(cost=cost, mu_plus=mu_plus,
                                         mu_minus=mu_minus))
    ok = report.passed and abs(report.j_star - 2.0) <= 1e-12
    return _check("two_point", ok, f"J*={report.j_star:.12f}")


def check_staircase():
    """Beckmann values decrease strictly toward the unattained infimum 1."""
    mu_plus, mu_minus = two_point_measures(distance=1.0)
    previous = math.inf
    for j in range(2, 21):
        net = vee_network(j)
        graph = build_routing_graph(net, [(0.0, 0.0), (1.0, 0.0)])
        _, value = solve_beckmann(graph, mu_plus, mu_minus)
        if abs(value - vee_value(j)) > 1e-8:
            return _check("staircase", False, f"j={j}: {value}")
        if not (value < previous and value > 1.0):
            return _check("staircase", False, f"j={j}: not decreasing to >1")
        previous = value
    return _check("staircase", True, f"final gap {previous - 1.0:.2e}")


ALL_CHECKS = (
    check_conjugate_tables,
    check_kink_conjugate,
    check_diamond,
    check_double_column,
    check_two_point,
    check_staircase,
)


def run_all():
    """Run the battery; returns the list of (name, passed, detail)."""
    return [check() for check in ALL_CHECKS]
