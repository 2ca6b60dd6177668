"""Discrete probability measures, signed divergence measures, transport plans."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry
from .errors import (DimensionMismatch, EmptyMeasure, NonPositiveMass,
                     UnnormalizedMass)

#: Grid used for exact point comparison when merging duplicate atoms.
MERGE_SNAP = 1e-12

#: Signed atoms with magnitude at or below this are treated as zero.
ZERO_MASS_TOL = 1e-12


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite weighted point atoms with positive masses summing to one."""

    atoms: tuple  # tuple of (point, mass)

    @property
    def points(self) -> tuple:
        return tuple(p for p, _ in self.atoms)

    @property
    def masses(self) -> tuple:
        return tuple(m for _, m in self.atoms)

    def total_mass(self) -> float:
        return sum(self.masses)

    def __len__(self) -> int:
        return len(self.atoms)


@dataclass(frozen=True)
class SignedDiscreteMeasure:
    """Signed atoms; zero-mass entries are dropped.  Houses divergence values."""

    atoms: tuple  # tuple of (point, signed mass)

    def positive_part(self):
        return tuple((p, m) for p, m in self.atoms if m > 0.0)

    def negative_part(self):
        """Atoms of the negative part, with positive masses."""
        return tuple((p, -m) for p, m in self.atoms if m < 0.0)

    def __len__(self) -> int:
        return len(self.atoms)


def _merge_atoms(atoms, snap: float):
    merged: dict = {}
    order: list = []
    for point, mass in atoms:
        point = tuple(float(c) for c in point)
        key = geometry.snap_key(point, snap)
        if key in merged:
            p, m = merged[key]
            merged[key] = (p, m + mass)
        else:
            merged[key] = (point, float(mass))
            order.append(key)
    return [merged[k] for k in order]


def make_measure(atoms, normalize: bool = False,
                 snap: float = MERGE_SNAP) -> DiscreteMeasure:
    """Build a discrete probability measure, merging duplicate points.

    Raises UnnormalizedMass when the total deviates from 1 by more than
    1e-9 and ``normalize`` is not set; otherwise the masses are rescaled
    so the total is exactly 1 up to rounding.
    """
    atoms = list(atoms)
    if not atoms:
        raise EmptyMeasure("a measure needs at least one atom")
    for point, mass in atoms:
        if mass <= 0.0:
            raise NonPositiveMass(f"atom at {tuple(point)} has mass {mass}")
    merged = _merge_atoms(atoms, snap)
    total = sum(m for _, m in merged)
    if not normalize and abs(total - 1.0) > 1e-9:
        raise UnnormalizedMass(f"total mass {total} differs from 1")
    return DiscreteMeasure(atoms=tuple((p, m / total) for p, m in merged))


def make_signed(atoms, snap: float = MERGE_SNAP,
                zero_tol: float = ZERO_MASS_TOL) -> SignedDiscreteMeasure:
    """Build a signed measure; atoms with |mass| <= zero_tol are dropped."""
    merged = _merge_atoms(atoms, snap)
    return SignedDiscreteMeasure(
        atoms=tuple((p, m) for p, m in merged if abs(m) > zero_tol))


def measure_difference(mu_plus: DiscreteMeasure,
                       mu_minus: DiscreteMeasure) -> SignedDiscreteMeasure:
    """The signed measure mu_plus - mu_minus."""
    atoms = list(mu_plus.atoms) + [(p, -m) for p, m in mu_minus.atoms]
    return make_signed(atoms)


def signed_close(lhs: SignedDiscreteMeasure, rhs: SignedDiscreteMeasure,
                 tol: float = 1e-10, snap: float = 1e-9) -> bool:
    """True if the two signed measures agree within tol per atom."""
    table: dict = {}
    for p, m in lhs.atoms:
        table[geometry.snap_key(p, snap)] = table.get(geometry.snap_key(p, snap), 0.0) + m
    for p, m in rhs.atoms:
        key = geometry.snap_key(p, snap)
        table[key] = table.get(key, 0.0) - m
    return all(abs(v) <= tol for v in table.values())


@dataclass(frozen=True)
class TransportPlan:
    """Coupling matrix between the atoms of two discrete measures."""

    source: DiscreteMeasure
    target: DiscreteMeasure
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        if w.shape != (len(self.source), len(self.target)):
            raise DimensionMismatch(
                f"plan shape {w.shape} does not match atoms "
                f"({len(self.source)}, {len(self.target)})")
        if np.any(w < -1e-15):
            raise NonPositiveMass("plan weights must be nonnegative")
        row_err = np.abs(w.sum(axis=1) - np.asarray(self.source.masses)).max()
        col_err = np.abs(w.sum(axis=0) - np.asarray(self.target.masses)).max()
        if row_err > 1e-10 or col_err > 1e-10:
            raise UnnormalizedMass(
                f"marginal mismatch: rows {row_err:.2e}, cols {col_err:.2e}")


def plan_cost(plan: TransportPlan, cost_matrix) -> float:
    """Total cost sum_ij pi_ij * c_ij, with 0 * inf = 0.

    Returns inf as soon as any positive plan entry meets an infinite cost.
    """
    c = np.asarray(cost_matrix, dtype=float)
    if c.shape != plan.weights.shape:
        raise DimensionMismatch(
            f"cost shape {c.shape} does not match plan {plan.weights.shape}")
    total = 0.0
    for i in range(c.shape[0]):
        for j in range(c.shape[1]):
            w = plan.weights[i, j]
            if w == 0.0:
                continue
            if math.isinf(c[i, j]):
                return math.inf
            total += w * c[i, j]
    return total
