import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elemsym.errors import DomainError, EmptyDomainError
from elemsym.polytope import (
    BoxDomain,
    Tag,
    all_edges_nonconstant,
    contains,
    edge_restrictions,
    enumerate_candidates,
    enumerate_faces,
)
from elemsym.symfun import SymCombo, eval_combo
from oracles import faces_by_vertices, vertices


def random_domain(rng, n):
    lo = rng.uniform(-1, 1, n)
    hi = lo + rng.uniform(0.2, 1.5, n)
    gamma = rng.uniform(lo.sum(), hi.sum())
    return BoxDomain(tuple(lo), tuple(hi), gamma)


def test_box_validation():
    with pytest.raises(DomainError):
        BoxDomain((0, 1), (1, 1), 0.5)
    with pytest.raises(EmptyDomainError):
        enumerate_faces(BoxDomain.unit(3, 4.0))


def test_foregger_faces(foregger):
    dom, _ = foregger
    faces = enumerate_faces(dom)
    assert len(faces) == 13
    assert [f.dim for f in faces].count(2) == 1
    edge = [f for f in faces if f.dim == 1 and f.pattern[2] is Tag.LO][0]
    assert edge.gamma_star == pytest.approx(1.125)


def test_foregger_candidates(foregger):
    dom, phi = foregger
    cands = enumerate_candidates(dom)
    assert len(cands) == 8
    assert (0.5625, 0.5625, 0.125) in [c.point for c in cands]
    assert all(contains(dom, c.x) for c in cands)
    assert all_edges_nonconstant(dom, phi)
    assert not all_edges_nonconstant(dom, SymCombo.single(3, 1))


def test_single_point_domain():
    dom = BoxDomain.unit(3, 3.0)
    faces = enumerate_faces(dom)
    assert len(faces) == 1 and faces[0].dim == 0
    assert [c.point for c in enumerate_candidates(dom)] == [(1.0, 1.0, 1.0)]


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(0, 10_000))
def test_faces_match_vertex_oracle(n, seed):
    dom = random_domain(np.random.default_rng(seed), n)
    faces = enumerate_faces(dom)
    dims, verts = faces_by_vertices(dom.lo, dom.hi, dom.gamma)
    assert sorted(f.dim for f in faces) == dims
    cand = np.array([c.point for c in enumerate_candidates(dom)])
    for v in verts:
        assert np.min(np.max(np.abs(cand - v), axis=1)) <= 1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 5), st.integers(0, 10_000))
def test_face_points_are_feasible(n, seed):
    dom = random_domain(np.random.default_rng(seed), n)
    for f in enumerate_faces(dom):
        x = f.point(dom)
        assert contains(dom, x)
        for i, v in f.fixed:
            assert x[i] == v


def test_faces_sorted_and_unique(foregger):
    dom, _ = foregger
    faces = enumerate_faces(dom)
    assert len({f.pattern for f in faces}) == len(faces)
    assert [f.dim for f in faces] == sorted(f.dim for f in faces)


def test_edge_restriction_values(foregger):
    dom, phi = foregger
    for face, poly in edge_restrictions(dom, phi):
        lo, hi = face.t_range(dom)
        for t in np.linspace(lo, hi, 5):
            x = face.point(dom)
            k1, k2 = face.free
            x[k1], x[k2] = t, face.gamma_star - t
            assert poly(t) == pytest.approx(eval_combo(phi, x), abs=1e-12)


def test_vertex_oracle_self_check():
    assert len(vertices((0, 0, 0), (1, 1, 1), 1.5)) == 6
