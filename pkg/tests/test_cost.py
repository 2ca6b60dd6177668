"""Transportation costs, conjugates, Fenchel-Young machinery."""
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from urbanflux.cost import (AffineCappedCost, DiscreteCost, MaintenanceCost,
                            Piece, PiecewiseCost, PowerCost, eval_epsilon,
                            eval_tau, example_kink_cost,
                            fenchel_young_residual, friction_from_mass,
                            maintenance_cost, min_cap_cost, strip_jump,
                            tau_prime_zero)
from urbanflux.errors import NegativeMass, ZeroMass

ALL_FAMILIES = [
    PowerCost(alpha=0.5),
    PowerCost(alpha=0.75),
    PowerCost(alpha=1.0),
    AffineCappedCost(a_bar=1.8, b_bar=1.0, c_bar=1.0),
    min_cap_cost(),
    DiscreteCost(c_bar=1.0),
    example_kink_cost(),
]


# --- eval_tau ---------------------------------------------------------------

def test_tau_power_sqrt():
    assert eval_tau(PowerCost(alpha=0.5), 4.0) == 2.0


def test_tau_affine_capped_at_crossing():
    # min(1.8m, m + 1) crosses at m = 1.25
    assert eval_tau(AffineCappedCost(a_bar=1.8, b_bar=1.0, c_bar=1.0), 1.25) == 2.25


def test_tau_kink_cost_on_sqrt_piece():
    assert eval_tau(example_kink_cost(), 0.6) == pytest.approx(0.45, abs=1e-12)


def test_tau_zero_is_exact():
    for cost in ALL_FAMILIES:
        assert eval_tau(cost, 0.0) == 0.0


def test_tau_negative_mass_raises():
    with pytest.raises(NegativeMass):
        eval_tau(PowerCost(alpha=0.5), -1.0)


@pytest.mark.parametrize("cost", ALL_FAMILIES)
def test_tau_nondecreasing_and_concave(cost):
    grid = [0.001 * k for k in range(1, 2001)]
    values = [eval_tau(cost, m) for m in grid]
    for v1, v2 in zip(values, values[1:]):
        assert v1 <= v2 + 1e-12
    derivs = [friction_from_mass(cost, m) for m in grid]
    for d1, d2 in zip(derivs, derivs[1:]):
        assert d2 <= d1 + 1e-9


# --- tau_prime_zero ---------------------------------------------------------

def test_tau_prime_zero_linear():
    assert tau_prime_zero(PowerCost(alpha=1.0)) == 1.0


def test_tau_prime_zero_sqrt_diverges():
    assert tau_prime_zero(PowerCost(alpha=0.5)) == math.inf


def test_tau_prime_zero_kink_cost():
    assert tau_prime_zero(example_kink_cost()) == 1.0


def test_tau_prime_zero_jump_diverges():
    assert tau_prime_zero(DiscreteCost(c_bar=2.0)) == math.inf


def test_tau_prime_zero_matches_small_mass_ratio():
    for cost in ALL_FAMILIES:
        a = tau_prime_zero(cost)
        if math.isinf(a):
            # the ratio tau(m)/m diverges as m shrinks
            assert (eval_tau(cost, 1e-12) / 1e-12
                    > 10.0 * eval_tau(cost, 1e-6) / 1e-6)
        else:
            ratio = eval_tau(cost, 1e-9) / 1e-9
            assert ratio == pytest.approx(a, rel=1e-6)


# --- eval_epsilon -----------------------------------------------------------

def test_epsilon_kink_cost_left_branch():
    mc = maintenance_cost(example_kink_cost())
    assert eval_epsilon(mc, 0.5) == pytest.approx(0.25 / 0.5 - 0.55 + 0.4 * 0.5,
                                                  abs=1e-12)


def test_epsilon_min_cap():
    mc = maintenance_cost(min_cap_cost())
    assert eval_epsilon(mc, 0.3) == pytest.approx(0.7, abs=1e-12)


def test_epsilon_power_stationary_point():
    # stationary point m = 1/(4 b^2), value 1/(4b); golden-section agrees
    mc = maintenance_cost(PowerCost(alpha=0.5))
    assert eval_epsilon(mc, 2.0) == pytest.approx(0.125, abs=1e-12)
    assert mc.epsilon_numeric(2.0) == pytest.approx(0.125, abs=1e-10)


def test_epsilon_negative_b_is_infinite():
    for cost in ALL_FAMILIES:
        assert math.isinf(maintenance_cost(cost).epsilon(-0.1))


def test_epsilon_nonincreasing_and_convex():
    for cost in ALL_FAMILIES:
        mc = maintenance_cost(cost)
        grid = [0.05 + 0.01 * k for k in range(300)]
        vals = [mc.epsilon(b) for b in grid]
        finite = [(b, v) for b, v in zip(grid, vals) if math.isfinite(v)]
        for (_, v1), (_, v2) in zip(finite, finite[1:]):
            assert v2 <= v1 + 1e-12
        for i in range(1, len(finite) - 1):
            b0, v0 = finite[i - 1]
            b1, v1 = finite[i]
            b2, v2 = finite[i + 1]
            if abs((b2 - b0) - 2 * (b1 - b0)) < 1e-12:  # equispaced triple
                assert v1 <= 0.5 * (v0 + v2) + 1e-10


@pytest.mark.parametrize("cost,lo", [
    (PowerCost(alpha=0.5), 0.05),
    (PowerCost(alpha=1.0), 0.05),
    (AffineCappedCost(a_bar=1.8, b_bar=1.0, c_bar=1.0), 1.0),
    (min_cap_cost(), 0.0),
    (DiscreteCost(c_bar=1.0), 0.0),
    (example_kink_cost(), 0.05),
])
def test_conjugate_closed_form_matches_golden_section(cost, lo):
    """Numeric golden-section oracle vs closed form on 100 grid points."""
    mc = maintenance_cost(cost)
    for i in range(100):
        b = lo + (2.0 - lo) * i / 99.0
        exact = mc.epsilon(b)
        numeric = mc.epsilon_numeric(b)
        if math.isinf(exact):
            assert math.isinf(numeric)
        else:
            assert numeric == pytest.approx(exact, abs=1e-8)


def test_a_consistency():
    """epsilon(a) = 0 and epsilon(a - delta) > 0 whenever a is finite."""
    for cost in ALL_FAMILIES:
        a = tau_prime_zero(cost)
        if math.isinf(a):
            continue
        mc = maintenance_cost(cost)
        assert mc.epsilon(a) == pytest.approx(0.0, abs=1e-12)
        assert mc.epsilon(a - 1e-3) > 0.0


def test_shift_identity_discrete():
    """For a pure jump, the conjugate is constant at the jump height."""
    cost = DiscreteCost(c_bar=0.7)
    tilde = strip_jump(cost)
    mc, mc_tilde = maintenance_cost(cost), maintenance_cost(tilde)
    for b in (0.0, 0.1, 1.0, 10.0):
        assert mc_tilde.epsilon(b) == 0.0
        assert mc.epsilon(b) == pytest.approx(0.7, abs=1e-12)


def test_shift_identity_jumpy_piecewise():
    """eps(b) = eps~(b) + tau_+(0) wherever eps~ > 0."""
    jumpy = PiecewiseCost(pieces=(Piece(0.0, "sqrt", 0.5, 1.0, 0.0),),
                          jump_at_zero=0.5)
    tilde = strip_jump(jumpy)
    mc, mc_tilde = maintenance_cost(jumpy), maintenance_cost(tilde)
    for k in range(1, 20):
        b = 0.1 * k
        et = mc_tilde.epsilon(b)
        assert et == pytest.approx(0.25 / b, abs=1e-12)
        if et > 0.0:
            assert mc.epsilon(b) == pytest.approx(et + 0.5, abs=1e-12)


# --- friction_from_mass -----------------------------------------------------

def test_friction_min_cap_at_kink():
    assert friction_from_mass(min_cap_cost(), 1.0) == 0.0


def test_friction_kink_cost_at_breakpoint():
    # right piece derivative 1.5 - 2.5 m evaluated at m = 0.2
    assert friction_from_mass(example_kink_cost(), 0.2) == pytest.approx(1.0, abs=1e-12)


def test_friction_power():
    assert friction_from_mass(PowerCost(alpha=0.5), 1.0) == 0.5


def test_friction_zero_mass_raises():
    with pytest.raises(ZeroMass):
        friction_from_mass(PowerCost(alpha=0.5), 0.0)


def test_friction_within_zero_and_ambient():
    for cost in ALL_FAMILIES:
        a = tau_prime_zero(cost)
        for m in (0.01, 0.2, 0.5, 1.0, 3.0):
            b = friction_from_mass(cost, m)
            assert 0.0 <= b <= a


# --- fenchel_young_residual -------------------------------------------------

def test_residual_on_flat_piece():
    assert fenchel_young_residual(min_cap_cost(), 2.0, 0.0) == pytest.approx(0.0, abs=1e-12)


def test_residual_positive_off_subgradient():
    assert fenchel_young_residual(min_cap_cost(), 2.0, 0.5) == pytest.approx(0.5, abs=1e-12)


def test_residual_zero_at_subgradient_kink_cost():
    cost = example_kink_cost()
    b = friction_from_mass(cost, 0.5)
    assert b == pytest.approx(0.5, abs=1e-12)
    assert fenchel_young_residual(cost, 0.5, b) == pytest.approx(0.0, abs=1e-10)


@pytest.mark.parametrize("cost", ALL_FAMILIES)
def test_residual_zero_at_subgradient_grid(cost):
    for m in (0.05, 0.21, 0.4, 0.77, 1.0, 2.5):
        b = friction_from_mass(cost, m)
        r = fenchel_young_residual(cost, m, b)
        assert -1e-12 <= r <= 1e-10


@settings(max_examples=200, deadline=None)
@given(m=st.floats(0.0, 50.0), b=st.floats(0.0, 5.0),
       pick=st.integers(0, len(ALL_FAMILIES) - 1))
def test_residual_nonnegative_everywhere(m, b, pick):
    r = fenchel_young_residual(ALL_FAMILIES[pick], m, b)
    assert r >= -1e-12


@settings(max_examples=100, deadline=None)
@given(m1=st.floats(1e-6, 10.0), m2=st.floats(1e-6, 10.0),
       pick=st.integers(0, len(ALL_FAMILIES) - 1))
def test_subadditivity(m1, m2, pick):
    cost = ALL_FAMILIES[pick]
    assert eval_tau(cost, m1 + m2) <= eval_tau(cost, m1) + eval_tau(cost, m2) + 1e-12


# --- construction validation ------------------------------------------------

def test_piecewise_rejects_discontinuity():
    with pytest.raises(ValueError, match="discontinuity"):
        PiecewiseCost(pieces=(Piece(0.0, "affine", 0.0, 1.0),
                              Piece(1.0, "affine", 5.0, 0.1)))


def test_piecewise_rejects_convex_kink():
    with pytest.raises(ValueError, match="convex kink"):
        PiecewiseCost(pieces=(Piece(0.0, "affine", 0.0, 0.5),
                              Piece(1.0, "affine", -0.5, 1.0)))


def test_piecewise_rejects_jump_mismatch():
    with pytest.raises(ValueError, match="jump"):
        PiecewiseCost(pieces=(Piece(0.0, "affine", 0.3, 1.0),), jump_at_zero=0.0)


def test_power_alpha_validation():
    with pytest.raises(ValueError):
        PowerCost(alpha=1.5)
    with pytest.raises(ValueError):
        PowerCost(alpha=0.0)
