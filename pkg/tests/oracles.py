"""Independent reference implementations used as test oracles.

Nothing here calls into the package's solvers: the cubic is inverted in
closed form and the contact model is re-coded with numpy so whole grids can
be evaluated at once.
"""

import numpy as np
from hypothesis import strategies as st

from pocketgrip.membrane import MembraneSpec


def cubic_coefficients(spec):
    c1 = 2.0 * spec.sigma0 * spec.t / spec.a**2
    c3 = 4.0 * spec.E * spec.t / (3.0 * (1.0 - spec.nu**2) * spec.a**4)
    return c1, c3


def height_closed_form(p, spec):
    """Real root of c3 h^3 + c1 h = p (hyperbolic form, no cancellation)."""
    c1, c3 = cubic_coefficients(spec)
    r = c1 / c3
    q = np.asarray(p, dtype=float) / c3
    h = 2.0 * np.sqrt(r / 3.0) * np.sinh(np.arcsinh(1.5 * q / r * np.sqrt(3.0 / r)) / 3.0)
    return np.minimum(h, spec.h_max)


def capacity_grid(n, p, spec, contacts=2, per_bulge=3):
    """Total friction capacity, broadcast over arrays ``n`` and ``p``."""
    n, p = np.broadcast_arrays(np.asarray(n, float), np.asarray(p, float))
    h = height_closed_form(p, spec)
    k = per_bulge
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        R = (spec.a**2 + h**2) / (2.0 * h)
        e = spec.E0 * (1.0 + spec.eta * p)
        s = h - spec.g
        load = n / k
        delta_full = (3.0 * load / (4.0 * e * np.sqrt(R))) ** (2.0 / 3.0)
        sat = 4.0 / 3.0 * e * np.sqrt(R) * np.clip(s, 0.0, None) ** 1.5
        load_m = np.minimum(sat, load)
        area = k * np.pi * (3.0 * load_m * R / (4.0 * e)) ** (2.0 / 3.0)
        mixed = spec.tau_s * area + spec.mu_rim * (n - k * load_m)
        full = spec.tau_s * k * np.pi * (3.0 * load * R / (4.0 * e)) ** (2.0 / 3.0)
    rim = spec.mu_rim * n
    out = np.where((h <= 0) | (s <= 0), rim, np.where(s >= delta_full, full, mixed))
    return contacts * out


def random_spec(rng):
    """A physically plausible pocket with broad parameter spread."""
    a = rng.uniform(2e-3, 6e-3)
    g = rng.uniform(0.0, 1.5e-3)
    return MembraneSpec(
        sigma0=10 ** rng.uniform(5.0, 6.3),
        t=rng.uniform(0.5e-3, 2e-3),
        a=a,
        E=10 ** rng.uniform(5.3, 6.7),
        nu=rng.uniform(0.3, 0.49),
        h_max=rng.uniform(g + 0.3e-3, g + a),
        g=g,
        E0=10 ** rng.uniform(4.7, 6.3),
        eta=rng.uniform(0.0, 1e-5),
        tau_s=10 ** rng.uniform(3.7, 5.3),
        mu_rim=rng.uniform(0.0, 0.6),
    )


@st.composite
def specs(draw, mu_rim=None):
    """Hypothesis strategy over the same family as :func:`random_spec`."""
    seed = draw(st.integers(0, 2**32 - 1))
    spec = random_spec(np.random.default_rng(seed))
    if mu_rim is not None:
        spec = MembraneSpec(**{**spec.__dict__, "mu_rim": mu_rim})
    return spec
