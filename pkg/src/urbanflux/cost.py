"""Concave transportation costs and their maintenance-cost conjugates.

A transportation cost tau is a nondecreasing concave function on [0, inf)
with tau(0) = 0; it prices moving a bulk mass m per unit distance.  Its
conjugate, the maintenance cost

    epsilon(b) = sup_{m >= 0} tau(m) - b*m,

prices sustaining a unit length of road with friction coefficient b.  The
ambient travel cost a = tau'(0) (right derivative at 0, possibly infinite)
satisfies a = inf epsilon^{-1}(0).

Four families cover every cost used in the fixture suite: a power law,
an affine-capped cost, a purely discrete (per-road) cost, and a general
piecewise form with affine / quadratic / shifted-sqrt pieces.  All closed
forms are cross-checked against a golden-section maximizer, available via
``epsilon_numeric``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import NegativeMass, ZeroMass

INF = math.inf

_VALUE_TOL = 1e-9  # continuity check at interior breakpoints
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------------------
# piece closed forms for the piecewise family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Piece:
    """One closed-form piece, valid on (start, next start].

    kind "affine":    c0 + c1*m
    kind "quadratic": c0 + c1*m + c2*m^2   (c2 <= 0 for concavity)
    kind "sqrt":      c0 + c1*sqrt(m + c2) (c1 >= 0, m + c2 >= 0 on the piece)
    """

    start: float
    kind: str
    c0: float
    c1: float
    c2: float = 0.0

    def value(self, m: float) -> float:
        if self.kind == "affine":
            return self.c0 + self.c1 * m
        if self.kind == "quadratic":
            return self.c0 + self.c1 * m + self.c2 * m * m
        if self.kind == "sqrt":
            return self.c0 + self.c1 * math.sqrt(m + self.c2)
        raise ValueError(f"unknown piece kind {self.kind!r}")

    def derivative(self, m: float) -> float:
        if self.kind == "affine":
            return self.c1
        if self.kind == "quadratic":
            return self.c1 + 2.0 * self.c2 * m
        if self.kind == "sqrt":
            root = math.sqrt(m + self.c2)
            return INF if root == 0.0 else self.c1 / (2.0 * root)
        raise ValueError(f"unknown piece kind {self.kind!r}")

    def slope_at_infinity(self) -> float:
        if self.kind == "affine":
            return self.c1
        if self.kind == "quadratic":
            return -INF if self.c2 < 0.0 else self.c1
        if self.kind == "sqrt":
            return 0.0
        raise ValueError(f"unknown piece kind {self.kind!r}")

    def max_minus_linear(self, b: float, lo: float, hi: float) -> float:
        """sup of value(m) - b*m over [lo, hi]; hi may be inf."""
        cands = [lo] if math.isinf(hi) else [lo, hi]
        if self.kind == "affine":
            slope = self.c1 - b
            if math.isinf(hi) and slope > 0.0:
                return INF
            if math.isinf(hi) and slope == 0.0:
                return self.c0
        elif self.kind == "quadratic":
            if self.c2 < 0.0:
                m_star = (b - self.c1) / (2.0 * self.c2)
                if lo < m_star < hi:
                    cands.append(m_star)
            elif math.isinf(hi) and self.c1 - b > 0.0:
                return INF
        elif self.kind == "sqrt":
            if b <= 0.0:
                if math.isinf(hi):
                    return INF if (self.c1 > 0.0 or b < 0.0) else self.value(lo)
            else:
                try:
                    m_star = (self.c1 / (2.0 * b)) ** 2 - self.c2
                except OverflowError:
                    m_star = INF
                if math.isinf(m_star):
                    if math.isinf(hi):
                        return INF  # sup runs away along the unbounded tail
                elif lo < m_star < hi:
                    cands.append(m_star)
        return max(self.value(m) - b * m for m in cands)


# ---------------------------------------------------------------------------
# cost families
# ---------------------------------------------------------------------------

class CostFunction:
    """Base class; immutable after construction, safe to share across threads."""

    jump_at_zero: float = 0.0

    def tau(self, m: float) -> float:
        raise NotImplementedError

    def tau_right_derivative(self, m: float) -> float:
        """Right derivative tau'_+(m) for m > 0."""
        raise NotImplementedError

    def tau_prime_zero(self) -> float:
        """a = lim_{m -> 0+} tau(m)/m, possibly inf."""
        raise NotImplementedError

    def slope_at_infinity(self) -> float:
        """lim_{m -> inf} tau(m)/m; epsilon(b) is finite iff b >= this."""
        raise NotImplementedError

    def epsilon(self, b: float) -> float:
        """Closed-form conjugate sup_{m>=0} tau(m) - b*m."""
        raise NotImplementedError


@dataclass(frozen=True)
class PowerCost(CostFunction):
    """tau(m) = m**alpha for alpha in (0, 1]."""

    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must lie in (0, 1]")

    def tau(self, m: float) -> float:
        _check_mass(m)
        return m ** self.alpha

    def tau_right_derivative(self, m: float) -> float:
        _check_positive_mass(m)
        return self.alpha * m ** (self.alpha - 1.0)

    def tau_prime_zero(self) -> float:
        return 1.0 if self.alpha == 1.0 else INF

    def slope_at_infinity(self) -> float:
        return 1.0 if self.alpha == 1.0 else 0.0

    def epsilon(self, b: float) -> float:
        if self.alpha == 1.0:
            return 0.0 if b >= 1.0 else INF
        if b <= 0.0:
            return INF
        try:
            m_star = (self.alpha / b) ** (1.0 / (1.0 - self.alpha))
        except OverflowError:
            return INF
        if not math.isfinite(m_star):
            return INF
        return m_star ** self.alpha - b * m_star


@dataclass(frozen=True)
class AffineCappedCost(CostFunction):
    """tau(m) = min(a_bar*m, b_bar*m + c_bar), the classical urban planning cost."""

    a_bar: float
    b_bar: float
    c_bar: float

    def __post_init__(self):
        if self.a_bar <= 0.0 or self.b_bar < 0.0 or self.c_bar <= 0.0:
            raise ValueError("require a_bar > 0, b_bar >= 0, c_bar > 0")

    @property
    def crossing(self) -> float:
        """Mass at which the two branches of the min meet (inf if degenerate)."""
        if self.a_bar <= self.b_bar:
            return INF
        return self.c_bar / (self.a_bar - self.b_bar)

    def tau(self, m: float) -> float:
        _check_mass(m)
        return min(self.a_bar * m, self.b_bar * m + self.c_bar)

    def tau_right_derivative(self, m: float) -> float:
        _check_positive_mass(m)
        return self.a_bar if m < self.crossing else self.b_bar

    def tau_prime_zero(self) -> float:
        return self.a_bar

    def slope_at_infinity(self) -> float:
        return self.a_bar if math.isinf(self.crossing) else self.b_bar

    def epsilon(self, b: float) -> float:
        if math.isinf(self.crossing):
            return 0.0 if b >= self.a_bar else INF
        if b >= self.a_bar:
            return 0.0
        if b >= self.b_bar:
            return self.c_bar * (self.a_bar - b) / (self.a_bar - self.b_bar)
        return INF


@dataclass(frozen=True)
class DiscreteCost(CostFunction):
    """tau(m) = c_bar for m > 0 and tau(0) = 0; the Steiner-problem cost."""

    c_bar: float

    def __post_init__(self):
        if self.c_bar <= 0.0:
            raise ValueError("require c_bar > 0")
        object.__setattr__(self, "jump_at_zero", self.c_bar)

    def tau(self, m: float) -> float:
        _check_mass(m)
        return self.c_bar if m > 0.0 else 0.0

    def tau_right_derivative(self, m: float) -> float:
        _check_positive_mass(m)
        return 0.0

    def tau_prime_zero(self) -> float:
        return INF

    def slope_at_infinity(self) -> float:
        return 0.0

    def epsilon(self, b: float) -> float:
        # sup over m > 0 of c_bar - b*m is approached as m -> 0.
        return self.c_bar if b >= 0.0 else INF


@dataclass(frozen=True)
class PiecewiseCost(CostFunction):
    """Contiguous closed-form pieces, optionally with a jump at zero.

    Piece i is valid on (pieces[i].start, pieces[i+1].start]; the last piece
    extends to infinity.  The first start must be 0 and the piece values must
    satisfy p_1(0+) = jump_at_zero, i.e. the pieces describe tau on (0, inf)
    while tau(0) = 0 is implicit.
    """

    pieces: tuple
    jump_at_zero: float = 0.0

    def __post_init__(self):
        pieces = tuple(self.pieces)
        object.__setattr__(self, "pieces", pieces)
        if not pieces:
            raise ValueError("at least one piece required")
        if pieces[0].start != 0.0:
            raise ValueError("first piece must start at 0")
        if self.jump_at_zero < 0.0:
            raise ValueError("jump_at_zero must be >= 0")
        self._validate()

    def _validate(self):
        pieces = self.pieces
        if abs(pieces[0].value(0.0) - self.jump_at_zero) > _VALUE_TOL:
            raise ValueError("first piece must start at the jump value")
        for left, right in zip(pieces, pieces[1:]):
            if right.start <= left.start:
                raise ValueError("piece breakpoints must be strictly increasing")
            gap = left.value(right.start) - right.value(right.start)
            if abs(gap) > _VALUE_TOL:
                raise ValueError(f"discontinuity at interior breakpoint {right.start}")
            # concavity across the breakpoint: left slope >= right slope
            if right.derivative(right.start) > left.derivative(right.start) + _VALUE_TOL:
                raise ValueError(f"convex kink at breakpoint {right.start}")
        for piece in pieces:
            if piece.kind == "quadratic" and piece.c2 > 0.0:
                raise ValueError("quadratic pieces must be concave (c2 <= 0)")
            if piece.kind == "sqrt" and piece.c1 < 0.0:
                raise ValueError("sqrt pieces must be nondecreasing (c1 >= 0)")
        last = pieces[-1]
        if last.slope_at_infinity() < 0.0:
            raise ValueError("final piece must be nondecreasing at infinity")

    def _piece_at(self, m: float) -> Piece:
        """Piece whose half-open interval (start, next] contains m > 0."""
        chosen = self.pieces[0]
        for piece in self.pieces:
            if piece.start < m:
                chosen = piece
            else:
                break
        return chosen

    def _piece_right_of(self, m: float) -> Piece:
        """Piece valid just right of m >= 0."""
        chosen = self.pieces[0]
        for piece in self.pieces:
            if piece.start <= m:
                chosen = piece
            else:
                break
        return chosen

    def tau(self, m: float) -> float:
        _check_mass(m)
        if m == 0.0:
            return 0.0
        return self._piece_at(m).value(m)

    def tau_right_derivative(self, m: float) -> float:
        _check_positive_mass(m)
        return self._piece_right_of(m).derivative(m)

    def tau_prime_zero(self) -> float:
        if self.jump_at_zero > 0.0:
            return INF
        return self.pieces[0].derivative(0.0)

    def slope_at_infinity(self) -> float:
        return self.pieces[-1].slope_at_infinity()

    def epsilon(self, b: float) -> float:
        if b < 0.0:
            return INF
        if b < self.slope_at_infinity():
            return INF
        best = max(0.0, self.jump_at_zero)  # m = 0 and the limit m -> 0+
        pieces = self.pieces
        for i, piece in enumerate(pieces):
            hi = pieces[i + 1].start if i + 1 < len(pieces) else INF
            best = max(best, piece.max_minus_linear(b, piece.start, hi))
        return best


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def _check_mass(m: float):
    if m < 0.0:
        raise NegativeMass(f"mass must be nonnegative, got {m}")


def _check_positive_mass(m: float):
    if m < 0.0:
        raise NegativeMass(f"mass must be nonnegative, got {m}")
    if m == 0.0:
        raise ZeroMass("friction is undefined at zero mass")


def eval_tau(cost: CostFunction, m: float) -> float:
    """Transportation cost tau(m); tau(0) = 0 exactly."""
    return cost.tau(m)


def tau_prime_zero(cost: CostFunction) -> float:
    """Ambient cost a = lim_{m->0+} tau(m)/m, possibly inf."""
    return cost.tau_prime_zero()


def friction_from_mass(cost: CostFunction, m: float) -> float:
    """Friction coefficient induced by a mass m > 0.

    Equals the right derivative tau'_+(m); for concave tau this is
    -max of the subdifferential of -tau at m, the friction the
    flux-to-network construction assigns to an edge of mass m.
    """
    return cost.tau_right_derivative(m)


@dataclass(frozen=True)
class MaintenanceCost:
    """Conjugate epsilon of a transportation cost with a numeric fallback.

    epsilon is nonincreasing, convex on its effective domain, +inf on
    (-inf, 0), and vanishes exactly on [a, inf) with a = tau'(0) whenever
    a is finite.
    """

    source: CostFunction
    m_max: float = 1e3
    tolerance: float = 1e-12
    use_closed_form: bool = True
    a: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "a", self.source.tau_prime_zero())

    def __call__(self, b: float) -> float:
        return self.epsilon(b)

    def epsilon(self, b: float) -> float:
        if self.use_closed_form:
            return self.source.epsilon(b)
        return self.epsilon_numeric(b)

    def epsilon_numeric(self, b: float) -> float:
        """Golden-section maximization of the concave map m -> tau(m) - b*m."""
        if b < 0.0:
            return INF
        if b < self.source.slope_at_infinity():
            return INF
        lo, hi = 0.0, self.m_max
        g = lambda m: self.source.tau(m) - b * m
        x1 = hi - _GOLDEN * (hi - lo)
        x2 = lo + _GOLDEN * (hi - lo)
        f1, f2 = g(x1), g(x2)
        while hi - lo > self.tolerance:
            if f1 < f2:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + _GOLDEN * (hi - lo)
                f2 = g(x2)
            else:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - _GOLDEN * (hi - lo)
                f1 = g(x1)
        best = max(f1, f2, 0.0)
        # a jump at zero is approached as m -> 0+ but never attained
        if self.source.jump_at_zero > 0.0:
            best = max(best, self.source.jump_at_zero)
        return best


def maintenance_cost(cost: CostFunction, m_max: float = 1e3,
                     tolerance: float = 1e-12) -> MaintenanceCost:
    """Build the maintenance cost (conjugate) of a transportation cost."""
    return MaintenanceCost(cost, m_max=m_max, tolerance=tolerance)


def eval_epsilon(mc: MaintenanceCost, b: float) -> float:
    """Maintenance cost epsilon(b) = sup_{m>=0} tau(m) - b*m."""
    return mc.epsilon(b)


def fenchel_young_residual(cost: CostFunction, m: float, b: float) -> float:
    """b*m + epsilon(b) - tau(m); nonnegative, zero iff b is a friction for m."""
    eps = cost.epsilon(b)
    if math.isinf(eps):
        return INF
    return b * m + eps - cost.tau(m)


def strip_jump(cost: CostFunction) -> CostFunction:
    """The shifted cost tau~ = tau - tau_+(0) on (0, inf), continuous at 0.

    Its conjugate satisfies epsilon~(b) = epsilon(b) - tau_+(0) wherever
    epsilon~ is positive.
    """
    j = cost.jump_at_zero
    if j == 0.0:
        return cost
    if isinstance(cost, DiscreteCost):
        return PiecewiseCost(pieces=(Piece(0.0, "affine", 0.0, 0.0),))
    if isinstance(cost, PiecewiseCost):
        shifted = tuple(
            Piece(p.start, p.kind, p.c0 - j, p.c1, p.c2) for p in cost.pieces
        )
        return PiecewiseCost(pieces=shifted, jump_at_zero=0.0)
    raise ValueError(f"cannot strip jump from {type(cost).__name__}")


def example_kink_cost() -> PiecewiseCost:
    """The differentiable piecewise cost whose conjugate has a kink at 1/2.

    tau(m) = m on [0, 1/5], a concave parabola on (1/5, 2/5], an affine
    stretch of slope 1/2 on (2/5, 3/5], and -11/20 + sqrt(m + 2/5) beyond.
    """
    return PiecewiseCost(pieces=(
        Piece(0.0, "affine", 0.0, 1.0),
        Piece(0.2, "quadratic", -0.05, 1.5, -1.25),
        Piece(0.4, "affine", 0.15, 0.5),
        Piece(0.6, "sqrt", -0.55, 1.0, 0.4),
    ))


def min_cap_cost() -> AffineCappedCost:
    """tau(m) = min(m, 1), whose kink at m = 1 admits every friction in [0, 1]."""
    return AffineCappedCost(a_bar=1.0, b_bar=0.0, c_bar=1.0)
