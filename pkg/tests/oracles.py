"""Independent reference computations used by the tests.

Nothing here imports the LP solver under test: distances to hulls come
either from scipy's HiGHS or from brute-force search over barycentric
grids.
"""
import itertools

import numpy as np
from scipy.optimize import linprog


def scipy_hull_tv(p, V):
    """min TV(p, q) over q in CH(rows of V), solved by HiGHS."""
    V = np.atleast_2d(np.asarray(V, float))
    p = np.asarray(p, float)
    m, d = V.shape
    A = np.zeros((d + 1, m + 2 * d))
    A[:d, :m] = V.T
    A[:d, m:m + d] = -np.eye(d)
    A[:d, m + d:] = np.eye(d)
    A[d, :m] = 1.0
    c = np.concatenate([np.zeros(m), np.full(2 * d, 0.5)])
    res = linprog(c, A_eq=A, b_eq=np.append(p, 1.0), bounds=(0, None), method="highs")
    assert res.status == 0
    return res.fun


def barycentric_grid(m, n):
    """All weight vectors in the (m-1)-simplex with denominators ``n``."""
    if m == 1:
        return np.ones((1, 1))
    rows = [c for c in itertools.product(range(n + 1), repeat=m - 1) if sum(c) <= n]
    G = np.array([list(c) + [n - sum(c)] for c in rows], dtype=float)
    return G / n


def _project(L):
    L = np.clip(L, 0.0, None)
    s = L.sum(axis=1, keepdims=True)
    s[s == 0] = 1.0
    return L / s


def grid_hull_tv(p, V, coarse=20, rounds=14, width=7):
    """Brute-force TV distance from ``p`` to CH(V) by zooming grid search.

    The objective is convex in the barycentric weights, so refining around
    the best grid point converges to the global minimum.
    """
    V = np.atleast_2d(np.asarray(V, float))
    p = np.asarray(p, float)
    m = V.shape[0]
    f = lambda L: 0.5 * np.abs(L @ V - p).sum(axis=1)
    L = barycentric_grid(m, coarse)
    vals = f(L)
    best = L[np.argmin(vals)]
    best_val = vals.min()
    h = 2.0 / coarse
    offsets = np.linspace(-1.0, 1.0, width)
    cube = np.array(list(itertools.product(offsets, repeat=m)))
    for _ in range(rounds):
        cand = _project(best + h * cube)
        vals = f(cand)
        i = int(np.argmin(vals))
        if vals[i] <= best_val:
            best, best_val = cand[i], vals[i]
        h *= 0.4
    return float(best_val)


def grid_hausdorff_tv(A, B, outer=3):
    """Hausdorff TV distance with both hulls sampled on barycentric grids."""
    A = np.atleast_2d(np.asarray(A, float))
    B = np.atleast_2d(np.asarray(B, float))

    def directed(X, Y):
        pts = barycentric_grid(X.shape[0], outer) @ X
        return max(grid_hull_tv(x, Y) for x in pts)

    return max(directed(A, B), directed(B, A))


def finite_hilbert_hausdorff(S, T):
    """Plain double loop over the Hilbert projective metric."""
    def d(p, q):
        r = np.log(p) - np.log(q)
        return r.max() - r.min()

    st = max(min(d(s, t) for t in T) for s in S)
    ts = max(min(d(s, t) for s in S) for t in T)
    return max(st, ts)
