"""JSON round trips and deterministic formatting."""
import json
import math

import pytest

from urbanflux import serialize
from urbanflux.cost import (AffineCappedCost, DiscreteCost, PowerCost,
                            example_kink_cost)
from urbanflux.fixtures import (diamond_flux, diamond_measures,
                                double_column_network, vee_network)
from urbanflux.measures import make_measure


@pytest.mark.parametrize("cost", [
    PowerCost(alpha=0.5),
    AffineCappedCost(a_bar=1.8, b_bar=1.0, c_bar=1.0),
    DiscreteCost(c_bar=0.3),
    example_kink_cost(),
])
def test_cost_roundtrip(cost):
    assert serialize.cost_from_dict(serialize.cost_to_dict(cost)) == cost


def test_cost_json_shapes():
    data = serialize.cost_to_dict(PowerCost(alpha=0.5))
    assert data == {"family": "power", "alpha": 0.5}
    data = serialize.cost_to_dict(AffineCappedCost(a_bar=1.8, b_bar=1.0, c_bar=1.0))
    assert data["family"] == "affine_capped" and data["a_bar"] == 1.8


def test_measure_roundtrip():
    mu, _ = diamond_measures()
    back = serialize.measure_from_dict(serialize.measure_to_dict(mu))
    assert back == mu


def test_network_roundtrip_with_infinite_ambient():
    net = vee_network(3)
    text = serialize.dumps(serialize.network_to_dict(net))
    assert '"a": "inf"' in text
    back = serialize.network_from_dict(json.loads(text))
    assert math.isinf(back.a)
    assert back == net


def test_network_roundtrip_finite():
    net = double_column_network()
    back = serialize.network_from_dict(serialize.network_to_dict(net))
    assert back == net


def test_flux_roundtrip():
    f = diamond_flux(0.25)
    back = serialize.flux_from_dict(serialize.flux_to_dict(f))
    assert back == f


def test_dumps_deterministic():
    net = double_column_network()
    a = serialize.dumps(serialize.network_to_dict(net))
    b = serialize.dumps(serialize.network_to_dict(net))
    assert a == b


def test_dumps_rounds_to_twelve_significant_digits():
    text = serialize.dumps({"x": math.sqrt(2.0)})
    assert "1.41421356237" in text


def test_flux_csv(tmp_path):
    f = diamond_flux(0.25)
    path = tmp_path / "flux.csv"
    serialize.flux_to_csv(f, path)
    rows = path.read_text().strip().splitlines()
    assert rows[0] == "length,mass,unit_cost"
    assert len(rows) == 1 + len(f.edges)


def test_scenario_parsing():
    doc = {
        "tau": {"family": "power", "alpha": 1.0},
        "mu_plus": {"atoms": [{"p": [0, 0], "m": 1.0}]},
        "mu_minus": {"atoms": [{"p": [1, 0], "m": 1.0}]},
        "config": {"max_steiner": 1, "report_ties": True, "refinement": 2},
    }
    sc = serialize.scenario_from_dict(doc)
    assert sc.cost == PowerCost(alpha=1.0)
    assert sc.branched_config.max_steiner == 1
    assert sc.branched_config.report_ties is True
    assert sc.refinement == 2
    assert sc.network is None and sc.flux is None
