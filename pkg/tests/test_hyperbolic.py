import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elemsym.errors import DomainError, NotHyperbolicError, PreconditionError, SamplingExhausted
from elemsym.hyperbolic import (
    from_roots,
    is_hyperbolic,
    perturb_repeated_roots,
    point_from_poly,
    roots_of,
    sample_variety_point,
    sturm_chain,
    variety_poly,
)
from elemsym.poly import UniPoly, deflate, divide_by_roots
from elemsym.symfun import elem_sym_all


def planted(rng, n, s):
    """Random roots: s distinct values with multiplicities summing to n."""
    vals = np.sort(rng.uniform(-3, 3, s))
    while s > 1 and np.min(np.diff(vals)) < 0.1:
        vals = np.sort(rng.uniform(-3, 3, s))
    cuts = np.sort(rng.choice(np.arange(1, n), s - 1, replace=False)) if s > 1 else []
    mults = np.diff(np.concatenate([[0], cuts, [n]])).astype(int)
    return vals, mults


def test_unipoly_basics():
    f = UniPoly((-2, 5, -4, 1))
    assert f.degree == 3 and f(1) == 0 and f(2) == 0
    assert UniPoly.from_descending([1, -4, 5, -2]) == f
    assert (f - f).is_zero() and (f - f).degree == -1
    q, r = deflate(f, 2.0)
    assert r == pytest.approx(0) and q == UniPoly((1, -2, 1))
    q, worst = divide_by_roots(f, [1.0, 2.0])
    assert q.degree == 1 and worst == pytest.approx(0)


def test_known_profile():
    prof = roots_of(UniPoly((-2, 5, -4, 1)))
    np.testing.assert_allclose(prof.values, [1, 2], atol=1e-9)
    assert prof.multiplicities == (2, 1)
    assert prof.degree == 3


def test_complex_roots_rejected():
    assert not is_hyperbolic(UniPoly((1, 0, 1)))
    with pytest.raises(NotHyperbolicError):
        roots_of(UniPoly((1, 0, 1)))
    with pytest.raises(DomainError):
        roots_of(UniPoly((3.0,)))


def test_sturm_chain_counts_distinct_roots():
    f = from_roots([-1.0, 0.5, 2.0])
    chain = sturm_chain(f.array())
    assert len(chain) == 4


@settings(max_examples=60)
@given(st.integers(2, 8), st.integers(0, 10_000), st.data())
def test_planted_multiplicities(n, seed, data):
    s = data.draw(st.integers(1, n))
    rng = np.random.default_rng(seed)
    vals, mults = planted(rng, n, s)
    prof = roots_of(from_roots(np.repeat(vals, mults)))
    assert prof.multiplicities == tuple(mults)
    np.testing.assert_allclose(prof.values, vals, atol=1e-3)


@settings(max_examples=60)
@given(st.integers(1, 10), st.integers(0, 10_000))
def test_vieta_roundtrip(n, seed):
    rng = np.random.default_rng(seed)
    r = np.sort(rng.uniform(-3, 3, n))
    while n > 1 and np.min(np.diff(r)) < 0.1:
        r = np.sort(rng.uniform(-3, 3, n))
    back = point_from_poly(from_roots(r))
    np.testing.assert_allclose(back, r, rtol=1e-8, atol=1e-8)


def test_vieta_sign_convention():
    x = np.array([1.0, 2.0, 3.0])
    c = from_roots(x).coeffs
    e = elem_sym_all(x)
    for j in range(4):
        assert c[3 - j] == pytest.approx((-1) ** j * e[j])


def test_splitting_on_double_root():
    pert = perturb_repeated_roots(UniPoly((-2, 5, -4, 1)))
    assert pert.g.degree == 1
    assert pert.eps0 > 0
    for eps in (pert.eps0 / 2, pert.eps0 / 10):
        assert pert.holds_at(eps)
        assert pert.profile_at(eps).distinct_count == 3


def test_splitting_preconditions():
    with pytest.raises(PreconditionError):
        perturb_repeated_roots(UniPoly((1, 0, 1)))
    with pytest.raises(PreconditionError):
        perturb_repeated_roots(from_roots([0.0, 1.0, 2.0]))


@settings(max_examples=40)
@given(st.integers(2, 8), st.integers(0, 10_000), st.data())
def test_splitting_random(n, seed, data):
    s = data.draw(st.integers(1, n - 1))
    vals, mults = planted(np.random.default_rng(seed), n, s)
    f = from_roots(np.repeat(vals, mults))
    pert = perturb_repeated_roots(f)
    # f = p * g with p carrying each distinct root once
    assert pert.p.degree == s and pert.g.degree == n - s
    for eps in (pert.eps0 / 2, pert.eps0 / 10):
        assert pert.holds_at(eps)


def test_variety_poly_pins_top_coefficients():
    f = variety_poly(4, [0.0, -2.0], [0.3, -0.1])
    assert f.coeffs[4] == 1 and f.coeffs[3] == 0 and f.coeffs[2] == -2
    with pytest.raises(DomainError):
        variety_poly(4, [0.0, -2.0], [0.3])


@settings(max_examples=20)
@given(st.integers(3, 6), st.integers(0, 1000))
def test_sampled_points_lie_on_variety(n, seed):
    x = sample_variety_point(n, [0.0, -2.0], seed=seed)
    e = elem_sym_all(x)
    assert abs(e[1]) <= 1e-7 and abs(e[2] + 2) <= 1e-7


def test_sampling_errors():
    with pytest.raises(DomainError):
        sample_variety_point(3, [0.0, -1.0, 0.0])
    # E_2 > E_1^2 / 2 has no real points: sum of squares would be negative
    with pytest.raises(SamplingExhausted):
        sample_variety_point(3, [0.0, 1.0], seed=0, budget=50)
