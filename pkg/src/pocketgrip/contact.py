"""Pressure-stiffened Hertzian contact and regime-dependent friction.

Each bulge is treated as a sphere of radius ``R`` pressed onto a rigid flat
object.  The contact modulus stiffens linearly with pocket pressure and the
membrane friction follows Archard's elastic model, ``F = tau_s * A``.  The
rigid rim of the shell sits ``g`` behind the contact plane, so depending on
how far the bulge protrudes the load is carried by the rim, by the membrane,
or shared between them.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError
from .membrane import EXACT, BulgeState, MembraneSpec, resolve_bulge

DEFAULT_BULGES = 3


class ContactRegime(str, enum.Enum):
    RIM_ONLY = "RimOnly"
    MIXED = "Mixed"
    FULL_MEMBRANE = "FullMembrane"

    def __str__(self):
        return self.value

    @property
    def rank(self):
        return _RANK[self]


_RANK = {
    ContactRegime.RIM_ONLY: 0,
    ContactRegime.MIXED: 1,
    ContactRegime.FULL_MEMBRANE: 2,
}


@dataclass(frozen=True)
class ContactSolution:
    """Resolved finger/object contact at one (normal load, pressure) point.

    ``delta`` and ``area`` refer to the membrane: ``delta`` is the
    indentation of a single bulge under its share of the load and ``area``
    is summed over all bulges of the finger.
    """

    n: float
    p: float
    bulge: BulgeState
    per_bulge: int
    regime: ContactRegime
    e_star: float
    delta: float
    n_membrane: float
    n_rim: float
    area: float
    friction_force: float
    mu_eff: float


def effective_modulus(p, spec):
    """Contact modulus of the tensioned membrane, ``E0 (1 + eta p)``."""
    if not p >= 0:
        raise DomainError(f"pressure must be >= 0, got {p!r}")
    return spec.E0 * (1.0 + spec.eta * p)


def _check_hertz(n, e_star, r):
    if not n >= 0:
        raise DomainError(f"normal load must be >= 0, got {n!r}")
    if not e_star > 0:
        raise DomainError(f"contact modulus must be > 0, got {e_star!r}")
    if r is None or not r > 0:
        raise DomainError(f"sphere radius must be > 0, got {r!r}")


def hertz_indentation(n, e_star, r):
    """Approach of a sphere pressed onto a flat: ``(3n / (4 E* sqrt(r)))**(2/3)``."""
    _check_hertz(n, e_star, r)
    return (3.0 * n / (4.0 * e_star * math.sqrt(r))) ** (2.0 / 3.0)


def hertz_area(n, e_star, r):
    """Contact area ``pi a_c**2`` with ``a_c = (3 n r / (4 E*))**(1/3)``."""
    _check_hertz(n, e_star, r)
    return math.pi * (3.0 * n * r / (4.0 * e_star)) ** (2.0 / 3.0)


def hertz_load(delta, e_star, r):
    """Load giving indentation ``delta``; inverse of :func:`hertz_indentation`."""
    _check_hertz(0.0, e_star, r)
    if not delta >= 0:
        raise DomainError(f"indentation must be >= 0, got {delta!r}")
    return (4.0 / 3.0) * e_star * math.sqrt(r) * delta**1.5


def classify(n, bulge, e_star, per_bulge=DEFAULT_BULGES):
    """Contact regime of a finger carrying total load ``n``."""
    if not bulge.has_cap or bulge.s <= 0.0:
        return ContactRegime.RIM_ONLY
    if bulge.s >= hertz_indentation(n / per_bulge, e_star, bulge.R):
        return ContactRegime.FULL_MEMBRANE
    return ContactRegime.MIXED


def contact_from_bulge(n, bulge, spec, per_bulge=DEFAULT_BULGES):
    """Resolve the contact for a bulge state that is already known.

    Useful in loops over the normal load, where the bulge only depends on
    pressure and need not be recomputed.
    """
    if not n >= 0 or math.isinf(n):
        raise DomainError(f"normal load must be finite and >= 0, got {n!r}")
    if int(per_bulge) != per_bulge or per_bulge < 1:
        raise DomainError(f"per_bulge must be a positive integer, got {per_bulge!r}")
    n = float(n)
    e_star = effective_modulus(bulge.p, spec)
    regime = classify(n, bulge, e_star, per_bulge)

    if regime is ContactRegime.RIM_ONLY:
        n_mem, delta, area = 0.0, 0.0, 0.0
        friction = spec.mu_rim * n
    else:
        load = n / per_bulge
        if regime is ContactRegime.MIXED:
            # The rim is rigid at a fixed standoff: the membrane can only take
            # the load that indents it by exactly its protrusion.
            load = min(hertz_load(bulge.s, e_star, bulge.R), load)
        delta = hertz_indentation(load, e_star, bulge.R)
        area = per_bulge * hertz_area(load, e_star, bulge.R)
        n_mem = n if regime is ContactRegime.FULL_MEMBRANE else per_bulge * load
        friction = spec.tau_s * area + spec.mu_rim * (n - n_mem)

    return ContactSolution(
        n=n,
        p=bulge.p,
        bulge=bulge,
        per_bulge=int(per_bulge),
        regime=regime,
        e_star=e_star,
        delta=delta,
        n_membrane=n_mem,
        n_rim=n - n_mem,
        area=area,
        friction_force=friction,
        mu_eff=_mu_eff(n, friction, regime, spec),
    )


def _mu_eff(n, friction, regime, spec):
    if regime is ContactRegime.RIM_ONLY:
        return spec.mu_rim
    return friction / n if n > 0 else 0.0


def resolve_contact(n, p, spec: MembraneSpec, per_bulge=DEFAULT_BULGES, mode=EXACT):
    """Full contact state of one finger at normal load ``n`` and pressure ``p``.

    Parameters
    ----------
    n : float
        Normal load on the finger (N), shared equally by ``per_bulge`` bulges.
    p : float
        Pocket pressure (Pa).
    spec : MembraneSpec
    per_bulge : int
        Number of bulges on the finger.
    mode : {"exact", "linear"}
        How the bulge height is obtained from pressure.

    Returns
    -------
    ContactSolution
    """
    return contact_from_bulge(n, resolve_bulge(p, spec, mode), spec, per_bulge)


def friction_force(n, p, spec, per_bulge=DEFAULT_BULGES, mode=EXACT):
    return resolve_contact(n, p, spec, per_bulge, mode).friction_force
