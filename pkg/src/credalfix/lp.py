"""Dense two-phase simplex for small standard-form linear programs.

Solves ``min c @ x  s.t.  A_eq @ x = b_eq, x >= 0``. Problems in this
package are (number of extremes) x (dimension), both at most a few
hundred, so a dense tableau with Bland's anti-cycling rule is plenty.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LPError

PIVOT_TOL = 1e-10


@dataclass(frozen=True)
class LPResult:
    x: np.ndarray
    fun: float
    iterations: int


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    col_vals = T[:, col].copy()
    col_vals[row] = 0.0
    T -= np.outer(col_vals, T[row])


def _run(T: np.ndarray, basis: list, ncols: int, tol: float, max_iter: int) -> int:
    """Pivot until optimal. The last row of ``T`` holds reduced costs."""
    m = T.shape[0] - 1
    for it in range(max_iter):
        cost = T[-1, :ncols]
        entering = np.flatnonzero(cost < -tol)
        if entering.size == 0:
            return it
        col = int(entering[0])  # Bland: lowest index
        column = T[:m, col]
        ok = column > tol
        if not ok.any():
            raise LPError("linear program is unbounded")
        ratios = np.full(m, np.inf)
        ratios[ok] = T[:m, -1][ok] / column[ok]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + tol * max(1.0, abs(best)))
        row = int(min(ties, key=lambda i: basis[i]))  # Bland tie-break
        _pivot(T, row, col)
        basis[row] = col
    raise LPError(f"simplex did not terminate within {max_iter} pivots")


def solve_lp(c, A_eq, b_eq, tol: float = PIVOT_TOL, max_iter: int | None = None) -> LPResult:
    """Minimize ``c @ x`` over ``{x >= 0 : A_eq @ x = b_eq}``.

    Raises :class:`LPError` when the program is infeasible or unbounded.
    """
    c = np.asarray(c, dtype=float)
    A = np.array(A_eq, dtype=float, ndmin=2)
    b = np.array(b_eq, dtype=float).ravel()
    m, n = A.shape
    if c.shape != (n,) or b.shape != (m,):
        raise ValueError(f"shape mismatch: c {c.shape}, A {A.shape}, b {b.shape}")
    if max_iter is None:
        max_iter = 50 * (m + n) + 100

    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1

    # phase 1: artificial identity basis, minimize the sum of artificials
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    T[-1, :n] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    basis = list(range(n, n + m))
    it1 = _run(T, basis, n + m, tol, max_iter)
    if -T[-1, -1] > 1e-9 * max(1.0, float(np.abs(b).max(initial=0.0))):
        raise LPError(f"linear program is infeasible (residual {-T[-1, -1]:.3g})")

    # drive zero-level artificials out of the basis; drop redundant rows
    keep = []
    for i in range(m):
        if basis[i] >= n:
            candidates = np.flatnonzero(np.abs(T[i, :n]) > tol)
            if candidates.size == 0:
                continue
            _pivot(T, i, int(candidates[0]))
            basis[i] = int(candidates[0])
        keep.append(i)

    T2 = np.zeros((len(keep) + 1, n + 1))
    T2[:-1, :n] = T[keep, :n]
    T2[:-1, -1] = T[keep, -1]
    basis2 = [basis[i] for i in keep]
    cb = c[basis2]
    T2[-1, :n] = c - cb @ T2[:-1, :n]
    T2[-1, -1] = -cb @ T2[:-1, -1]
    it2 = _run(T2, basis2, n, tol, max_iter)

    x = np.zeros(n)
    x[basis2] = np.maximum(T2[:-1, -1], 0.0)
    return LPResult(x=x, fun=float(c @ x), iterations=it1 + it2)
