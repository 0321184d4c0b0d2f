"""Bulge mechanics of a pressurised silicone pocket.

A clamped membrane of half-span ``a`` inflates into a spherical cap under
internal pressure.  The pressure/apex-height relation is the classical
bulge-test cubic::

    p = 2 sigma0 t h / a**2 + (4/3) E t h**3 / ((1 - nu**2) a**4)

The cap radius follows from the chord geometry, ``R = (a**2 + h**2) / (2 h)``,
and the part of the cap standing proud of the recessed rim is ``s = h - g``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .errors import DomainError

LINEAR = "linear"
EXACT = "exact"
MODES = (LINEAR, EXACT)


@dataclass(frozen=True)
class MembraneSpec:
    """Physical constants of one finger pocket, SI units throughout.

    Attributes
    ----------
    sigma0 : float
        Residual equibiaxial stress of the membrane (Pa).
    t : float
        Membrane thickness (m).
    a : float
        Effective half-span of the opening, half the groove width (m).
    E : float
        Young's modulus of the membrane (Pa).
    nu : float
        Poisson's ratio, strictly inside (0, 0.5).
    h_max : float
        Limiting bulge height (m).
    g : float
        Depth by which the rigid rim is recessed below the contact plane (m).
    E0 : float
        Effective contact modulus at zero pressure (Pa).
    eta : float
        Pressure stiffening factor of the contact modulus (1/Pa).
    tau_s : float
        Interfacial shear strength of the silicone/object pair (Pa).
    mu_rim : float
        Coulomb friction coefficient of the rigid rim on the object.
    """

    sigma0: float
    t: float
    a: float
    E: float
    nu: float
    h_max: float
    g: float
    E0: float
    eta: float
    tau_s: float
    mu_rim: float = 0.2

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise DomainError(f"{f.name} must be a number, got {value!r}", field=f.name)
            if not math.isfinite(value):
                raise DomainError(f"{f.name} must be finite, got {value!r}", field=f.name)
            object.__setattr__(self, f.name, float(value))
        for name in ("sigma0", "t", "a", "E", "E0", "tau_s", "h_max"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be > 0, got {getattr(self, name)!r}", field=name)
        for name in ("g", "eta", "mu_rim"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be >= 0, got {getattr(self, name)!r}", field=name)
        if not 0 < self.nu < 0.5:
            raise DomainError(f"nu must lie in the open interval (0, 0.5), got {self.nu!r}", field="nu")
        if self.h_max <= self.g:
            raise DomainError(
                f"h_max ({self.h_max!r}) must exceed the rim gap g ({self.g!r}); "
                "the pocket could never reach the object",
                field="h_max",
            )

    @property
    def k_h(self):
        """Small-deflection compliance dh/dp = a**2 / (2 sigma0 t), in m/Pa."""
        return self.a**2 / (2.0 * self.sigma0 * self.t)

    @property
    def p_cap(self):
        """Pressure at which the bulge reaches ``h_max``."""
        return bulge_pressure(self.h_max, self)


@dataclass(frozen=True)
class BulgeState:
    """Resolved bulge at one pressure.  ``R`` is ``None`` for a flat membrane."""

    p: float
    h: float
    R: float | None
    s: float

    @property
    def has_cap(self):
        return self.R is not None


def reference_spec(**overrides):
    """Return the shipped reference pocket, optionally with fields replaced.

    The values are order-of-magnitude estimates for a soft addition-cure
    silicone pocket in an 8 mm wide groove.  They are not measured material
    constants; supply a configuration file for quantitative work.
    """
    values = dict(
        sigma0=0.5e6,
        t=1.0e-3,
        a=4.0e-3,
        E=1.0e6,
        nu=0.48,
        h_max=3.0e-3,
        g=0.5e-3,
        E0=0.1e6,
        eta=2.0e-6,
        tau_s=20.0e3,
        mu_rim=0.2,
    )
    values.update(overrides)
    return MembraneSpec(**values)


def _linear_stiffness(spec):
    return 2.0 * spec.sigma0 * spec.t / spec.a**2


def _cubic_stiffness(spec):
    return (4.0 / 3.0) * spec.E * spec.t / ((1.0 - spec.nu**2) * spec.a**4)


def _check_pressure(p):
    if not p >= 0 or math.isinf(p):
        raise DomainError(f"pressure must be finite and >= 0, got {p!r}")


def bulge_pressure(h, spec):
    """Internal pressure needed to hold the apex at height ``h``."""
    if not 0.0 <= h <= spec.h_max:
        raise DomainError(f"h must lie in [0, h_max={spec.h_max!r}], got {h!r}")
    return _linear_stiffness(spec) * h + _cubic_stiffness(spec) * h**3


def bulge_height_linear(p, spec):
    """Small-deflection height ``min(k_h p, h_max)``."""
    _check_pressure(p)
    return min(spec.k_h * p, spec.h_max)


def bulge_height_exact(p, spec, rtol=1e-12):
    """Invert the bulge cubic for ``h`` on ``[0, h_max]``.

    The linearised height overestimates the root (the cubic term only adds
    pressure), so ``[0, min(k_h p, h_max)]`` always brackets it.  Bisection
    narrows the bracket to 10 % of its upper end, then a safeguarded Newton
    iteration finishes.
    """
    _check_pressure(p)
    if p == 0.0:
        return 0.0
    if p >= spec.p_cap:
        return spec.h_max

    c1 = _linear_stiffness(spec)
    c3 = _cubic_stiffness(spec)

    def residual(h):
        return c1 * h + c3 * h**3 - p

    lo, hi = 0.0, min(spec.k_h * p, spec.h_max)
    if residual(hi) <= 0.0:
        return hi

    while hi - lo > 0.1 * hi:
        mid = 0.5 * (lo + hi)
        if residual(mid) > 0.0:
            hi = mid
        else:
            lo = mid

    # stop well inside rtol so callers can rely on it
    tol = 1e-2 * rtol
    h = 0.5 * (lo + hi)
    for _ in range(100):
        r = residual(h)
        if r == 0.0:
            return h
        if r > 0.0:
            hi = h
        else:
            lo = h
        h_new = h - r / (c1 + 3.0 * c3 * h * h)
        if not lo <= h_new <= hi:
            h_new = 0.5 * (lo + hi)
        if abs(h_new - h) <= tol * h_new or hi - lo <= tol * hi:
            return h_new
        h = h_new
    return h


def cap_radius(h, spec):
    """Spherical-cap radius of a bulge of height ``h``; ``None`` when flat."""
    if h <= 0.0:
        return None
    return (spec.a**2 + h * h) / (2.0 * h)


def resolve_bulge(p, spec, mode=EXACT):
    """Height, cap radius and rim protrusion of the pocket at pressure ``p``."""
    if mode == EXACT:
        h = bulge_height_exact(p, spec)
    elif mode == LINEAR:
        h = bulge_height_linear(p, spec)
    else:
        raise DomainError(f"mode must be one of {MODES}, got {mode!r}")
    return BulgeState(p=float(p), h=h, R=cap_radius(h, spec), s=h - spec.g)
