import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from oracles import capacity_grid, specs
from pocketgrip.contact import ContactRegime
from pocketgrip.errors import DomainError
from pocketgrip.grasp import (
    GraspQuery,
    check_grasp,
    grasp_capacity,
    min_normal_force,
    min_pressure,
    sweep_grid,
)
from pocketgrip.membrane import reference_spec

REF = reference_spec()
KPA = [0.0, 25e3, 50e3, 75e3, 100e3, 125e3]


def test_zero_mass_is_feasible_with_full_margin():
    v = check_grasp(GraspQuery(mass=0.0, n=3.0, p=50e3), REF)
    assert v.feasible and v.margin == v.capacity


def test_rim_only_example():
    v = check_grasp(GraspQuery(mass=0.2, n=3.0, p=0.0), REF)
    assert v.capacity == pytest.approx(1.2)
    assert v.demand == pytest.approx(1.962)
    assert not v.feasible
    assert v.regime is ContactRegime.RIM_ONLY


def test_exact_tie_counts_as_feasible():
    cap = grasp_capacity(3.0, 80e3, REF)
    v = check_grasp(GraspQuery(mass=1.0, n=3.0, p=80e3, gravity=cap), REF)
    assert v.margin == 0.0 and v.feasible


def test_safety_factor_scales_demand():
    q = GraspQuery(mass=0.1, n=3.0, p=0.0, safety_factor=2.0)
    assert check_grasp(q, REF).demand == pytest.approx(2 * 0.981)


@pytest.mark.parametrize("kwargs", [
    dict(mass=-1.0), dict(gravity=0.0), dict(contacts=0), dict(n=-1.0), dict(p=-5.0),
])
def test_query_validation(kwargs):
    base = dict(mass=0.1, n=1.0, p=0.0)
    base.update(kwargs)
    with pytest.raises(DomainError):
        GraspQuery(**base)


def test_min_normal_force_rim_only_closed_form():
    n = min_normal_force(0.2, 9.81, 2, 0.0, REF)
    assert n == pytest.approx(4.905, rel=1e-12)
    assert check_grasp(GraspQuery(0.2, n, 0.0), REF).feasible
    assert not check_grasp(GraspQuery(0.2, 0.999 * n, 0.0), REF).feasible


def test_min_normal_force_full_membrane_closed_form():
    p = 360e3
    n = min_normal_force(0.05, 9.81, 2, p, REF)
    v = check_grasp(GraspQuery(0.05, n, p), REF)
    assert v.regime is ContactRegime.FULL_MEMBRANE
    assert v.margin == pytest.approx(0.0, abs=1e-12)


def test_min_normal_force_small_mass_limit():
    assert min_normal_force(1e-12, 9.81, 2, 50e3, REF) < 1e-6
    assert min_normal_force(0.0, 9.81, 2, 50e3, REF) == 0.0


def test_min_normal_force_infeasible_without_rim_friction():
    spec = reference_spec(mu_rim=0.0)
    assert min_normal_force(0.1, 9.81, 2, 0.0, spec) is None
    assert min_normal_force(100.0, 9.81, 2, 50e3, spec) is None


def test_min_pressure_zero_when_rim_suffices():
    assert min_pressure(0.01, 9.81, 2, 3.0, REF) == 0.0


def test_min_pressure_infeasible():
    assert min_pressure(5.0, 9.81, 2, 3.0, REF) is None


def test_canonical_grid_shape_and_pointwise_oracle():
    table = sweep_grid(0.2, 9.81, 2, [3.0, 3.5, 4.0], KPA, REF)
    assert len(table) == 18
    coords = [(v.n, v.p) for v in table]
    assert coords == [(n, p) for n in (3.0, 3.5, 4.0) for p in KPA]
    for v in table:
        assert v == check_grasp(GraspQuery(0.2, v.n, v.p), REF)


def test_single_cell_grid():
    (v,) = sweep_grid(0.2, 9.81, 2, [3.0], [50e3], REF)
    assert v == check_grasp(GraspQuery(0.2, 3.0, 50e3), REF)


def test_empty_grid_rejected():
    with pytest.raises(DomainError):
        sweep_grid(0.2, 9.81, 2, [], [0.0], REF)


def test_sweep_is_pure():
    a = [v.row() for v in sweep_grid(0.5, 9.81, 2, [8.0, 8.5, 9.0], KPA, REF)]
    b = [v.row() for v in sweep_grid(0.5, 9.81, 2, [8.0, 8.5, 9.0], KPA, REF)]
    assert a == b


def test_reference_trend_across_canonical_grid():
    # zero-pressure cells fail, high-pressure cells hold, for both payloads
    for mass, forces in ((0.2, (3.0, 3.5, 4.0)), (0.5, (8.0, 8.5, 9.0))):
        table = sweep_grid(mass, 9.81, 2, forces, KPA, REF)
        assert not any(v.feasible for v in table if v.p == 0.0)
        assert all(v.feasible for v in table if v.p == 125e3)


@settings(max_examples=100, deadline=None)
@given(specs(), st.floats(0.001, 1.0), st.floats(0.0, 1.0))
def test_min_normal_force_brackets(spec, mass, frac):
    p = frac * spec.p_cap
    n = min_normal_force(mass, 9.81, 2, p, spec)
    if n is None:
        assert grasp_capacity(1e6, p, spec) < mass * 9.81
        return
    assert check_grasp(GraspQuery(mass, n, p), spec).feasible
    assert not check_grasp(GraspQuery(mass, 0.999 * n, p), spec).feasible


@settings(max_examples=60, deadline=None)
@given(specs(), st.floats(0.001, 1.0), st.floats(0.5, 10.0))
def test_min_pressure_brackets(spec, mass, n):
    p = min_pressure(mass, 9.81, 2, n, spec)
    if p is None:
        grid = np.linspace(0.0, spec.p_cap, 2000)
        assert not np.any(capacity_grid(n, grid, spec) >= mass * 9.81)
        return
    assert check_grasp(GraspQuery(mass, n, p), spec).feasible
    if p > 0:
        assert not check_grasp(GraspQuery(mass, n, max(p - 2.0, 0.0)), spec).feasible


@settings(max_examples=100, deadline=None)
@given(specs(), st.floats(0.0, 20.0), st.floats(0.0, 20.0), st.floats(0.0, 1.0))
def test_capacity_monotone_in_normal_force(spec, n1, n2, frac):
    n1, n2 = sorted((n1, n2))
    p = frac * spec.p_cap
    assert grasp_capacity(n1, p, spec) <= grasp_capacity(n2, p, spec) * (1 + 1e-12)


@settings(max_examples=50, deadline=None)
@given(specs(), st.floats(0.0, 20.0), st.floats(0.0, 1.0))
def test_capacity_is_non_negative(spec, n, frac):
    assume(n > 0)
    assert grasp_capacity(n, frac * spec.p_cap, spec) >= 0.0
