"""Slow, independent reference implementations used only by the tests."""

import itertools
import math

import numpy as np


def brute_elem_sym(x, j):
    """Sum over all j-subsets, straight from the definition."""
    return float(sum(math.prod(c) for c in itertools.combinations(x, j)))


def brute_combo(coeffs, x):
    return sum(c * brute_elem_sym(x, j) for j, c in enumerate(coeffs))


def numeric_gradient(f, x, h=1e-6):
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g


def vertices(lo, hi, gamma, tol=1e-9):
    """Vertices of {sum x = gamma} inside the box: all coordinates at bounds
    except at most one."""
    n = len(lo)
    out = []
    for corner in itertools.product((0, 1), repeat=n):
        x = np.array([hi[i] if c else lo[i] for i, c in enumerate(corner)], dtype=float)
        if abs(x.sum() - gamma) <= tol:
            out.append(x)
        for i in range(n):
            y = x.copy()
            y[i] = gamma - (x.sum() - x[i])
            if lo[i] + tol < y[i] < hi[i] - tol:
                out.append(y)
    uniq = []
    for v in out:
        if not any(np.max(np.abs(v - u)) <= tol for u in uniq):
            uniq.append(v)
    return uniq


def faces_by_vertices(lo, hi, gamma, tol=1e-9):
    """Faces as distinct nonempty vertex subsets cut out by every pattern of
    tight bounds; returns the sorted list of face dimensions."""
    verts = vertices(lo, hi, gamma, tol)
    n = len(lo)
    seen = {}
    for pattern in itertools.product((0, 1, 2), repeat=n):
        members = []
        for k, v in enumerate(verts):
            ok = all(
                t == 2 or (t == 0 and abs(v[i] - lo[i]) <= tol) or (t == 1 and abs(v[i] - hi[i]) <= tol)
                for i, t in enumerate(pattern)
            )
            if ok:
                members.append(k)
        if members:
            key = tuple(members)
            if key not in seen:
                pts = np.array([verts[k] for k in members])
                dim = int(np.linalg.matrix_rank(pts[1:] - pts[0], tol=1e-9)) if len(pts) > 1 else 0
                seen[key] = dim
    return sorted(seen.values()), verts
