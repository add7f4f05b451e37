import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elemsym.errors import DomainError, PreconditionError
from elemsym.extrema import (
    Method,
    Status,
    descend_on_variety,
    falsify_local_extremum,
    gradient_bound,
    grid_oracle,
    random_combo,
    solve_global,
    verify_interior_suite,
    verify_component_bound,
)
from elemsym.hyperbolic import sample_variety_point
from elemsym.polytope import BoxDomain, contains
from elemsym.symfun import SymCombo, elem_sym_all, eval_combo


def test_foregger_maximum_beats_p0(foregger):
    dom, phi = foregger
    rep = solve_global(dom, phi)
    assert rep.method is Method.CANDIDATES_EXACT
    assert rep.max_value > -0.1875
    assert rep.min_value <= rep.max_value
    for c in rep.max_points + rep.min_points:
        assert contains(dom, c.x)


def test_constant_combination_falls_back():
    dom = BoxDomain.unit(3, 1.2)
    rep = solve_global(dom, SymCombo(3, (7, 1, 0, 0)))
    assert rep.min_value == pytest.approx(8.2) and rep.max_value == pytest.approx(8.2)
    assert rep.method is Method.GRID_FALLBACK and not rep.hypothesis_ok


def test_single_point_domain():
    dom = BoxDomain.unit(3, 3.0)
    phi = SymCombo(3, (0, 0, 1, 1))
    rep = solve_global(dom, phi)
    assert rep.min_value == rep.max_value == eval_combo(phi, (1, 1, 1))


def test_ties_sorted():
    # E_2 on the unit cube at level 1: max 1/3 at the center, min 0 at the three vertices
    rep = solve_global(BoxDomain.unit(3, 1.0), SymCombo.single(3, 2))
    pts = [c.point for c in rep.min_points]
    assert len(pts) == 3 and pts == sorted(pts)


def test_grid_oracle_errors(foregger):
    dom, phi = foregger
    with pytest.raises(DomainError):
        grid_oracle(dom, phi, 1)
    with pytest.raises(DomainError):
        grid_oracle(BoxDomain.unit(7, 3.0), SymCombo.single(7, 2), 3)
    with pytest.raises(DomainError):
        grid_oracle(BoxDomain.unit(3, 4.0), SymCombo.single(3, 2), 5)


def test_grid_oracle_linear():
    g = grid_oracle(BoxDomain.unit(3, 1.3), SymCombo.single(3, 1), 21)
    assert g.min == pytest.approx(1.3) and g.max == pytest.approx(1.3)


@settings(max_examples=15, deadline=None)
@given(st.integers(3, 4), st.integers(0, 10_000))
def test_sandwich(n, seed):
    rng = np.random.default_rng(seed)
    lo = rng.uniform(-0.5, 0.5, n)
    hi = lo + rng.uniform(0.5, 1.0, n)
    dom = BoxDomain(tuple(lo), tuple(hi), float(rng.uniform(lo.sum() + 0.2, hi.sum() - 0.2)))
    phi = random_combo(n, rng)
    rep = solve_global(dom, phi)
    if rep.method is not Method.CANDIDATES_EXACT:
        return
    g = grid_oracle(dom, phi, 31)
    slack = gradient_bound(dom, phi) * g.spacing * np.sqrt(n)
    tol = 1e-12
    assert g.max <= rep.max_value + tol and rep.max_value <= g.max + slack
    assert rep.min_value <= g.min + tol and g.min - slack <= rep.min_value


def test_falsifier_foregger(foregger):
    dom, phi = foregger
    v = falsify_local_extremum(dom, phi, (0.5, 0.5, 0.25))
    assert v.status is Status.FALSIFIED
    for w in (v.ascent_witness, v.descent_witness):
        assert contains(dom, w.point)
        assert np.linalg.norm(np.array(w.point) - (0.5, 0.5, 0.25)) <= w.radius * (1 + 1e-9)
    assert v.ascent_witness.value >= v.value + v.margin
    assert v.descent_witness.value <= v.value - v.margin


def test_falsifier_respects_strict_max():
    dom = BoxDomain((0, 0, 0), (2, 2, 2), 3.0)
    v = falsify_local_extremum(dom, SymCombo.single(3, 2), (1, 1, 1))
    assert v.status is Status.NOT_FALSIFIED
    assert v.budget_used == 3 * 512


def test_falsifier_preconditions(foregger):
    dom, phi = foregger
    with pytest.raises(PreconditionError):
        falsify_local_extremum(dom, phi, (0.625, 0.5, 0.125))
    with pytest.raises(PreconditionError):
        falsify_local_extremum(dom, phi, (0.5, 0.5, 0.3))


def test_falsifier_deterministic(foregger):
    dom, phi = foregger
    a = falsify_local_extremum(dom, phi, (0.5, 0.5, 0.25), seed=3)
    b = falsify_local_extremum(dom, phi, (0.5, 0.5, 0.25), seed=3)
    assert a == b


def test_interior_suite_suite_small():
    r = verify_interior_suite(3, trials=3, seed=0, points_per_trial=5)
    assert r.anomaly_count == 0 and r.points_checked > 0


def test_interior_suite_rejects_linear():
    with pytest.raises(PreconditionError):
        verify_interior_suite(3, trials=1, phi=SymCombo.single(3, 1))


def test_interior_suite_thread_independent():
    a = verify_interior_suite(3, trials=4, seed=5, points_per_trial=3, threads=1)
    b = verify_interior_suite(3, trials=4, seed=5, points_per_trial=3, threads=4)
    assert a == b


def test_descent_keeps_pinned_coefficients():
    gam = np.array([0.0, -2.0])
    phi = SymCombo(4, (0.3, -1.0, 0.5, 1.2, -0.7))
    x0 = sample_variety_point(4, gam, seed=1)
    res = descend_on_variety(phi, gam, x0, record_path=True)
    assert len(res.path) > 1
    for f in res.path:
        assert f.coeffs[4] == 1.0 and f.coeffs[3] == 0.0 and f.coeffs[2] == -2.0
    assert res.converged
    e = elem_sym_all(res.endpoint)
    assert abs(e[1]) <= 1e-7 and abs(e[2] + 2) <= 1e-7
    assert res.value <= eval_combo(phi, x0)


def test_component_bound_small():
    r = verify_component_bound(4, 2, [0.0, -2.0], trials=4, seed=0)
    assert len(r.converged) == 4
    assert not r.violations and r.max_residual <= 1e-7


def test_component_bound_preconditions():
    with pytest.raises(PreconditionError):
        verify_component_bound(3, 3, [0, 0, 0])
    with pytest.raises(PreconditionError):
        verify_component_bound(4, 2, [0, -2], phi=SymCombo.single(4, 2))


def test_component_bound_single_constraint_collapses_to_one_value():
    r = verify_component_bound(3, 1, [1.0], trials=6, seed=0)
    assert all(t.components == 1 for t in r.converged)


def test_component_bound_high_multiplicity_cluster():
    # n = 6 minimizers carry a five-fold coordinate; float coefficients blur it
    r = verify_component_bound(6, 2, [0.0, -2.0], trials=10, seed=0)
    assert len(r.converged) == 10 and not r.violations
