"""Grasp feasibility under the quasi-static lift condition.

A parallel-jaw grasp lifts its payload when the summed friction capacity of
all finger contacts is at least the (optionally factored) weight.  The
solvers here invert that condition for the normal force or the pocket
pressure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .contact import (
    DEFAULT_BULGES,
    ContactRegime,
    contact_from_bulge,
    effective_modulus,
    hertz_load,
)
from .errors import DomainError
from .membrane import EXACT, resolve_bulge

GRAVITY = 9.81
SCAN_POINTS = 256

SWEEP_HEADER = ("n_newton", "p_pascal", "regime", "capacity_n", "demand_n", "margin_n", "feasible")


@dataclass(frozen=True)
class GraspQuery:
    mass: float
    n: float
    p: float
    gravity: float = GRAVITY
    contacts: int = 2
    safety_factor: float = 1.0

    def __post_init__(self):
        if not self.mass >= 0:
            raise DomainError(f"mass must be >= 0, got {self.mass!r}")
        if not self.gravity > 0:
            raise DomainError(f"gravity must be > 0, got {self.gravity!r}")
        if int(self.contacts) != self.contacts or self.contacts < 1:
            raise DomainError(f"contacts must be a positive integer, got {self.contacts!r}")
        if not self.n >= 0:
            raise DomainError(f"normal force must be >= 0, got {self.n!r}")
        if not self.p >= 0:
            raise DomainError(f"pressure must be >= 0, got {self.p!r}")
        if not self.safety_factor > 0:
            raise DomainError(f"safety_factor must be > 0, got {self.safety_factor!r}")

    @property
    def demand(self):
        return self.mass * self.gravity * self.safety_factor


@dataclass(frozen=True)
class GraspVerdict:
    n: float
    p: float
    feasible: bool
    capacity: float
    demand: float
    margin: float
    regime: ContactRegime

    def row(self):
        return (self.n, self.p, self.regime.value, self.capacity, self.demand,
                self.margin, self.feasible)


def _demand(mass, gravity, safety_factor):
    return mass * gravity * safety_factor


def _verdict(n, p, solution, contacts, demand):
    capacity = contacts * solution.friction_force
    return GraspVerdict(
        n=float(n),
        p=float(p),
        feasible=capacity >= demand,
        capacity=capacity,
        demand=demand,
        margin=capacity - demand,
        regime=solution.regime,
    )


def check_grasp(q, spec, per_bulge=DEFAULT_BULGES, mode=EXACT):
    """Evaluate the lift condition for one query.  Zero margin is feasible."""
    bulge = resolve_bulge(q.p, spec, mode)
    solution = contact_from_bulge(q.n, bulge, spec, per_bulge)
    return _verdict(q.n, q.p, solution, q.contacts, q.demand)


def grasp_capacity(n, p, spec, contacts=2, per_bulge=DEFAULT_BULGES, mode=EXACT):
    """Total friction capacity of ``contacts`` identical finger contacts."""
    bulge = resolve_bulge(p, spec, mode)
    return contacts * contact_from_bulge(n, bulge, spec, per_bulge).friction_force


def _bisect_first(is_ok, lo, hi, tol):
    # invariant: not is_ok(lo), is_ok(hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if is_ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _nudge_up(x, is_ok, limit=64):
    for _ in range(limit):
        if is_ok(x):
            return x
        x = math.nextafter(x, math.inf)
    return None


def min_normal_force(mass, gravity, contacts, p, spec, *, per_bulge=DEFAULT_BULGES,
                     mode=EXACT, safety_factor=1.0):
    """Smallest per-contact normal force that lifts ``mass`` at pressure ``p``.

    Returns ``None`` when no finite normal force is sufficient.  Capacity is
    non-decreasing in the normal force, so the answer is a single threshold.
    The full-membrane closed form is tried first; it is only valid if the
    membrane still carries the whole load there, otherwise the threshold is
    found by bisection, carried to float resolution.
    """
    if not mass >= 0:
        raise DomainError(f"mass must be >= 0, got {mass!r}")
    GraspQuery(mass=mass, n=0.0, p=p, gravity=gravity, contacts=contacts,
               safety_factor=safety_factor)
    demand = _demand(mass, gravity, safety_factor)
    if demand == 0.0:
        return 0.0

    bulge = resolve_bulge(p, spec, mode)

    def capacity(n):
        return contacts * contact_from_bulge(n, bulge, spec, per_bulge).friction_force

    def feasible(n):
        return capacity(n) >= demand

    if not bulge.has_cap or bulge.s <= 0.0:
        if spec.mu_rim == 0.0:
            return None
        return _nudge_up(demand / (contacts * spec.mu_rim), feasible)

    e_star = effective_modulus(p, spec)
    coeff = spec.tau_s * math.pi * (3.0 * bulge.R / (4.0 * e_star)) ** (2.0 / 3.0)
    # capacity = contacts * per_bulge * coeff * (n / per_bulge) ** (2/3)
    guess = per_bulge * (demand / (contacts * per_bulge * coeff)) ** 1.5
    if math.isfinite(guess):
        solution = contact_from_bulge(guess, bulge, spec, per_bulge)
        if solution.regime is ContactRegime.FULL_MEMBRANE:
            n = _nudge_up(guess, feasible)
            if n is not None and contact_from_bulge(n, bulge, spec, per_bulge).regime \
                    is ContactRegime.FULL_MEMBRANE:
                return n

    if spec.mu_rim == 0.0:
        # membrane saturates at an indentation equal to the protrusion
        n_sat = per_bulge * hertz_load(bulge.s, e_star, bulge.R)
        if not feasible(n_sat):
            return None
        hi = n_sat
    else:
        hi = max(guess if math.isfinite(guess) else 1.0, 1e-9)
        while not feasible(hi):
            hi *= 2.0
            if hi > 1e15:
                return None
    return _bisect_first(feasible, 0.0, hi, tol=0.0)


def min_pressure(mass, gravity, contacts, n, spec, *, per_bulge=DEFAULT_BULGES,
                 mode=EXACT, safety_factor=1.0, tol=1.0, scan_points=SCAN_POINTS):
    """Smallest pocket pressure in ``[0, p_cap]`` that lifts ``mass`` at load ``n``.

    A coarse scan over ``scan_points`` pressures locates the first feasible
    cell, which bisection then narrows to ``tol`` pascals.  Returns ``None``
    if even ``p_cap`` is insufficient.
    """
    GraspQuery(mass=mass, n=n, p=0.0, gravity=gravity, contacts=contacts,
               safety_factor=safety_factor)
    demand = _demand(mass, gravity, safety_factor)

    def feasible(p):
        return grasp_capacity(n, p, spec, contacts, per_bulge, mode) >= demand

    if feasible(0.0):
        return 0.0
    grid = np.linspace(0.0, spec.p_cap, scan_points)
    prev = 0.0
    for p in grid[1:]:
        p = float(p)
        if feasible(p):
            return _bisect_first(feasible, prev, p, tol)
        prev = p
    return None


def sweep_grid(mass, gravity, contacts, n_values, p_values, spec, *,
               per_bulge=DEFAULT_BULGES, mode=EXACT, safety_factor=1.0):
    """Verdicts over an (n, p) grid, normal force as the outer (row) index."""
    n_values = list(n_values)
    p_values = list(p_values)
    if not n_values or not p_values:
        raise DomainError("sweep grids must be non-empty")
    demand = _demand(mass, gravity, safety_factor)
    GraspQuery(mass=mass, n=0.0, p=0.0, gravity=gravity, contacts=contacts,
               safety_factor=safety_factor)
    bulges = [resolve_bulge(p, spec, mode) for p in p_values]
    table = []
    for n in n_values:
        for p, bulge in zip(p_values, bulges):
            solution = contact_from_bulge(n, bulge, spec, per_bulge)
            table.append(_verdict(n, p, solution, contacts, demand))
    return table
