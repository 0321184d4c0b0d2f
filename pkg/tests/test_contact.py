import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import capacity_grid, specs
from pocketgrip.contact import (
    ContactRegime,
    classify,
    contact_from_bulge,
    effective_modulus,
    friction_force,
    hertz_area,
    hertz_indentation,
    hertz_load,
    resolve_contact,
)
from pocketgrip.errors import DomainError
from pocketgrip.membrane import reference_spec, resolve_bulge

REF = reference_spec()


def test_hertz_textbook_values():
    # contact radius c = (3 n R / (4 E*))^(1/3), delta = c^2 / R
    n, e, r = 1.0, 1e5, 0.01
    c = (3 * n * r / (4 * e)) ** (1 / 3)
    assert hertz_indentation(n, e, r) == pytest.approx(c * c / r, rel=1e-14)
    assert hertz_area(n, e, r) == pytest.approx(math.pi * c * c, rel=1e-14)
    assert hertz_load(c * c / r, e, r) == pytest.approx(n, rel=1e-14)


def test_hertz_rejects_bad_inputs():
    with pytest.raises(DomainError):
        hertz_indentation(-1.0, 1e5, 0.01)
    with pytest.raises(DomainError):
        hertz_area(1.0, 0.0, 0.01)


def test_effective_modulus_stiffens_linearly():
    assert effective_modulus(0.0, REF) == REF.E0
    assert effective_modulus(100e3, REF) == pytest.approx(REF.E0 * 1.2)


def test_zero_pressure_is_rim_only_coulomb():
    s = resolve_contact(3.0, 0.0, REF)
    assert s.regime is ContactRegime.RIM_ONLY
    assert s.friction_force == pytest.approx(0.6)
    assert s.mu_eff == REF.mu_rim
    assert (s.n_rim, s.n_membrane, s.area) == (3.0, 0.0, 0.0)


def test_full_membrane_archard_closed_form():
    p = 350e3
    s = resolve_contact(3.0, p, REF)
    assert s.regime is ContactRegime.FULL_MEMBRANE
    R, e = s.bulge.R, REF.E0 * (1 + REF.eta * p)
    expected = REF.tau_s * 3 * math.pi * (3 * 1.0 * R / (4 * e)) ** (2 / 3)
    assert s.friction_force == pytest.approx(expected, rel=1e-13)
    assert s.n_rim == 0.0


def test_mixed_membrane_indents_by_its_protrusion():
    s = resolve_contact(3.0, 75e3, REF)
    assert s.regime is ContactRegime.MIXED
    assert s.delta == pytest.approx(s.bulge.s, rel=1e-12)
    assert 0 < s.n_membrane < s.n
    expected = REF.tau_s * s.area + REF.mu_rim * s.n_rim
    assert s.friction_force == pytest.approx(expected, rel=1e-14)


def test_reference_curve_rises_through_regimes():
    mus = [resolve_contact(3.0, p, REF).mu_eff for p in np.linspace(0, 125e3, 26)]
    assert mus[0] == REF.mu_rim
    assert all(b >= a for a, b in zip(mus, mus[1:]))
    assert mus[-1] > REF.mu_rim + 0.05


def test_full_membrane_mu_falls_with_pressure():
    # Archard friction with a shrinking cap and stiffening modulus: the model
    # itself predicts a mild decrease once the rim carries nothing
    a = resolve_contact(1.0, 300e3, REF)
    b = resolve_contact(1.0, 360e3, REF)
    assert a.regime is b.regime is ContactRegime.FULL_MEMBRANE
    assert b.mu_eff < a.mu_eff


def _boundary(n, lo, hi, spec):
    # pressure where the regime rank at load n first increases inside [lo, hi]
    rank = resolve_contact(n, lo, spec).regime.rank
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if resolve_contact(n, mid, spec).regime.rank > rank:
            hi = mid
        else:
            lo = mid
    return hi


def test_continuity_across_boundaries():
    # a kink is allowed at a regime change, a jump is not: the change in
    # mu_eff across the boundary must shrink in proportion to the step
    onset = _boundary(3.0, 0.0, 100e3, REF)
    full = _boundary(3.0, onset + 1.0, REF.p_cap, REF)
    assert resolve_contact(3.0, full, REF).regime is ContactRegime.FULL_MEMBRANE
    for pb in (onset, full):
        jumps = [abs(resolve_contact(3.0, pb + d, REF).mu_eff - resolve_contact(3.0, pb - d, REF).mu_eff)
                 for d in (1.0, 1e-2)]
        assert jumps[1] <= 0.02 * jumps[0] + 1e-12


def test_classify_without_cap():
    b = resolve_bulge(0.0, REF)
    assert classify(5.0, b, REF.E0) is ContactRegime.RIM_ONLY


def test_per_bulge_validated():
    with pytest.raises(DomainError):
        resolve_contact(1.0, 1e3, REF, per_bulge=0)


@settings(max_examples=200, deadline=None)
@given(specs(), st.floats(0.0, 20.0), st.floats(0.0, 1.0))
def test_matches_vectorised_oracle(spec, n, frac):
    p = frac * spec.p_cap
    got = friction_force(n, p, spec)
    want = float(capacity_grid(n, p, spec, contacts=1))
    assert got == pytest.approx(want, rel=1e-9, abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(specs(), st.floats(0.0, 20.0), st.floats(0.0, 1.0))
def test_load_is_conserved(spec, n, frac):
    s = resolve_contact(n, frac * spec.p_cap, spec)
    assert s.n_membrane >= 0 and s.n_rim >= -4 * math.ulp(n)
    assert abs(s.n_membrane + s.n_rim - n) <= 4 * math.ulp(n)


@settings(max_examples=150, deadline=None)
@given(specs(), st.floats(0.01, 20.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_regime_rank_monotone(spec, n, f1, f2):
    p1, p2 = sorted((f1 * spec.p_cap, f2 * spec.p_cap))
    assert resolve_contact(n, p1, spec).regime.rank <= resolve_contact(n, p2, spec).regime.rank
    assert resolve_contact(n, p2, spec).regime.rank >= resolve_contact(2 * n, p2, spec).regime.rank


@settings(max_examples=150, deadline=None)
@given(specs(), st.floats(0.0, 20.0), st.floats(0.0, 20.0), st.floats(0.0, 1.0))
def test_friction_monotone_in_load(spec, n1, n2, frac):
    n1, n2 = sorted((n1, n2))
    p = frac * spec.p_cap
    assert friction_force(n1, p, spec) <= friction_force(n2, p, spec) * (1 + 1e-12)
