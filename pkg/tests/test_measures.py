"""Discrete measures, signed measures, transport plans."""
import math

import numpy as np
import pytest

from urbanflux.errors import (DimensionMismatch, EmptyMeasure,
                              NonPositiveMass, UnnormalizedMass)
from urbanflux.measures import (TransportPlan, make_measure, make_signed,
                                measure_difference, plan_cost, signed_close)


def test_single_atom():
    mu = make_measure([((0.0, 0.0), 1.0)])
    assert len(mu) == 1
    assert mu.total_mass() == pytest.approx(1.0, abs=1e-12)


def test_duplicates_merge():
    mu = make_measure([((0.0, 0.0), 0.5), ((0.0, 0.0), 0.5)])
    assert len(mu) == 1
    assert mu.masses == (1.0,)


def test_unnormalized_rejected():
    with pytest.raises(UnnormalizedMass):
        make_measure([((0.0, 0.0), 0.4), ((1.0, 0.0), 0.4)])


def test_normalize_flag():
    mu = make_measure([((0.0, 0.0), 0.4), ((1.0, 0.0), 0.4)], normalize=True)
    assert mu.masses == (0.5, 0.5)


def test_empty_rejected():
    with pytest.raises(EmptyMeasure):
        make_measure([])


def test_nonpositive_rejected():
    with pytest.raises(NonPositiveMass):
        make_measure([((0.0, 0.0), 0.0), ((1.0, 0.0), 1.0)])


def test_signed_zero_atoms_dropped():
    nu = make_signed([((0.0, 0.0), 0.5), ((0.0, 0.0), -0.5), ((1.0, 1.0), 0.2)])
    assert len(nu) == 1
    assert nu.atoms[0][1] == pytest.approx(0.2)


def test_measure_difference_and_parts():
    mu = make_measure([((0.0, 0.0), 0.7), ((1.0, 0.0), 0.3)])
    nu = make_measure([((1.0, 0.0), 0.3), ((2.0, 0.0), 0.7)])
    diff = measure_difference(mu, nu)
    assert dict(diff.positive_part()) == {(0.0, 0.0): pytest.approx(0.7)}
    assert dict(diff.negative_part()) == {(2.0, 0.0): pytest.approx(0.7)}
    assert signed_close(diff, diff)


def test_plan_marginals_validated():
    mu = make_measure([((0.0, 0.0), 0.5), ((1.0, 0.0), 0.5)])
    nu = make_measure([((2.0, 0.0), 1.0)])
    TransportPlan(source=mu, target=nu, weights=np.array([[0.5], [0.5]]))
    with pytest.raises(UnnormalizedMass):
        TransportPlan(source=mu, target=nu, weights=np.array([[0.4], [0.5]]))
    with pytest.raises(DimensionMismatch):
        TransportPlan(source=mu, target=nu, weights=np.array([[0.5, 0.5]]))


def test_plan_cost_identity_zero_diagonal():
    mu = make_measure([((0.0, 0.0), 0.5), ((1.0, 0.0), 0.5)])
    plan = TransportPlan(source=mu, target=mu, weights=np.diag([0.5, 0.5]))
    assert plan_cost(plan, [[0.0, 7.0], [9.0, 0.0]]) == 0.0


def test_plan_cost_all_pairs_equal():
    # four-terminal diamond: every route has length sqrt(2)
    mu = make_measure([((0.0, 0.0), 0.5), ((2.0, 0.0), 0.5)])
    nu = make_measure([((1.0, 1.0), 0.5), ((1.0, -1.0), 0.5)])
    m = 0.25
    plan = TransportPlan(source=mu, target=nu,
                         weights=np.array([[m, 0.5 - m], [0.5 - m, m]]))
    c = math.sqrt(2.0)
    assert plan_cost(plan, [[c, c], [c, c]]) == pytest.approx(c, abs=1e-12)


def test_plan_cost_infinite_route():
    mu = make_measure([((0.0, 0.0), 0.5), ((1.0, 0.0), 0.5)])
    nu = make_measure([((2.0, 0.0), 1.0)])
    plan = TransportPlan(source=mu, target=nu, weights=np.array([[0.5], [0.5]]))
    assert math.isinf(plan_cost(plan, [[math.inf], [1.0]]))


def test_plan_cost_zero_times_infinity():
    # infinite cost on zero-mass cells is harmless
    mu = make_measure([((0.0, 0.0), 0.5), ((1.0, 0.0), 0.5)])
    nu = make_measure([((2.0, 0.0), 0.5), ((3.0, 0.0), 0.5)])
    plan = TransportPlan(source=mu, target=nu, weights=np.diag([0.5, 0.5]))
    cost = [[1.0, math.inf], [math.inf, 1.0]]
    assert plan_cost(plan, cost) == pytest.approx(1.0)
