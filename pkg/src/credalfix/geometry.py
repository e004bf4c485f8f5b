"""Finitely generated credal sets and interval credal sets.

A :class:`FGCS` is stored by its extreme points. Membership and
point-to-set distances are small linear programs over convex-combination
weights, solved with :mod:`credalfix.lp`. Hausdorff distances between
polytopes are evaluated vertex-wise: the TV distance from a point to a
convex set is convex in the point, so its maximum over a polytope sits at
a vertex.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, EmptyCredalError, ParameterError, PositivityError
from .lp import solve_lp
from .simplex import Dist, as_weights, pairwise_hilbert, sample_positive

#: points within this TV distance of a hull count as members
MEMBERSHIP_TOL = 1e-9

METRICS = ("tv_hausdorff", "finite_hilbert", "interval")


class FGCS:
    """Convex hull of finitely many distributions on a common finite space.

    Build with :func:`reduce` (or :meth:`from_points`) to get the minimal
    extreme-point representation; the raw constructor keeps the points as
    given and marks the set unreduced.
    """

    __slots__ = ("extremes", "reduced", "_matrix")

    def __init__(self, extremes, reduced: bool = False):
        pts = tuple(p if isinstance(p, Dist) else Dist(p) for p in extremes)
        if not pts:
            raise EmptyCredalError("a credal set needs at least one extreme point")
        dim = pts[0].dim
        for i, p in enumerate(pts):
            if p.dim != dim:
                raise DimensionError(f"extreme {i} has dim {p.dim}, expected {dim}")
        self.extremes = pts
        self._matrix = np.vstack([p.weights for p in pts])
        self._matrix.flags.writeable = False
        if reduced:
            for i in range(len(pts)):
                if len(pts) > 1 and _in_hull(self._matrix[i], np.delete(self._matrix, i, axis=0)):
                    raise ParameterError(f"extreme {i} lies in the hull of the others")
        self.reduced = bool(reduced)

    @classmethod
    def from_points(cls, points) -> "FGCS":
        return reduce(points)

    @classmethod
    def simplex(cls, dim: int) -> "FGCS":
        """The whole probability simplex (its vertices are the point masses)."""
        return cls._trusted(np.eye(dim))

    @classmethod
    def _trusted(cls, matrix: np.ndarray, reduced: bool = True) -> "FGCS":
        obj = cls.__new__(cls)
        obj.extremes = tuple(Dist(row) for row in matrix)
        obj._matrix = np.vstack([p.weights for p in obj.extremes])
        obj._matrix.flags.writeable = False
        obj.reduced = reduced
        return obj

    @property
    def matrix(self) -> np.ndarray:
        """Extreme points as rows."""
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[1]

    def __len__(self):
        return len(self.extremes)

    def __iter__(self):
        return iter(self.extremes)

    def __eq__(self, other):
        if not isinstance(other, FGCS):
            return NotImplemented
        if self._matrix.shape != other._matrix.shape:
            return False
        a = self._matrix[np.lexsort(self._matrix.T[::-1])]
        b = other._matrix[np.lexsort(other._matrix.T[::-1])]
        return bool(np.array_equal(a, b))

    __hash__ = None

    def __repr__(self):
        rows = ", ".join("[" + ", ".join(f"{v:.6g}" for v in row) + "]" for row in self._matrix)
        return f"FGCS([{rows}], reduced={self.reduced})"

    def tolist(self) -> list:
        return self._matrix.tolist()

    def is_positive(self) -> bool:
        return bool(np.all(self._matrix > 0))


@dataclass(frozen=True)
class IntervalCredal:
    """Credal set ``{P_lam : lo <= lam <= hi}`` on a two-point space.

    ``P_lam`` puts mass ``lam`` on outcome 1 and ``1 - lam`` on outcome 0.
    """

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (0.0 <= lo <= hi <= 1.0):
            raise ParameterError(f"need 0 <= lo <= hi <= 1, got [{lo!r}, {hi!r}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def includes(self, other: "IntervalCredal") -> bool:
        """Exact interval inclusion ``other ⊆ self``."""
        return self.lo <= other.lo and other.hi <= self.hi

    def to_fgcs(self) -> FGCS:
        pts = [[1.0 - self.lo, self.lo]]
        if self.hi != self.lo:
            pts.append([1.0 - self.hi, self.hi])
        return FGCS._trusted(np.array(pts))

    @classmethod
    def from_fgcs(cls, s: FGCS) -> "IntervalCredal":
        if s.dim != 2:
            raise DimensionError(f"interval credal sets live on dim 2, got {s.dim}")
        lam = np.clip(s.matrix[:, 1], 0.0, 1.0)
        return cls(float(lam.min()), float(lam.max()))

    def tolist(self) -> list:
        return [self.lo, self.hi]


def _hull_distance(p: np.ndarray, V: np.ndarray) -> float:
    """min over q in CH(rows of V) of TV(p, q), as a linear program."""
    m, d = V.shape
    if m == 1:
        return 0.5 * float(np.abs(p - V[0]).sum())
    # variables [w (m), u (d), v (d)]:  V^T w - u + v = p,  sum w = 1
    A = np.zeros((d + 1, m + 2 * d))
    A[:d, :m] = V.T
    A[:d, m:m + d] = -np.eye(d)
    A[:d, m + d:] = np.eye(d)
    A[d, :m] = 1.0
    b = np.append(p, 1.0)
    c = np.concatenate([np.zeros(m), np.full(2 * d, 0.5)])
    return max(solve_lp(c, A, b).fun, 0.0)


def _in_hull(p: np.ndarray, V: np.ndarray, tol: float = MEMBERSHIP_TOL) -> bool:
    return _hull_distance(p, V) <= tol


def _check_dim(s: FGCS, d: int) -> None:
    if s.dim != d:
        raise DimensionError(f"credal set has dim {s.dim}, operand has dim {d}")


def reduce(points) -> FGCS:
    """Drop every point that is a convex combination of the others.

    Points are tested one at a time against the hull of all points still
    retained; removing a non-extreme point never changes the hull, so the
    survivors are exactly the extreme points (one representative per
    cluster of duplicates).
    """
    if isinstance(points, FGCS):
        if points.reduced:
            return points
        points = points.extremes
    pts = [as_weights(p) if isinstance(p, Dist) else as_weights(Dist(p)) for p in points]
    if not pts:
        raise EmptyCredalError("cannot reduce an empty point list")
    dim = pts[0].size
    for i, p in enumerate(pts):
        if p.size != dim:
            raise DimensionError(f"point {i} has dim {p.size}, expected {dim}")
    M = np.vstack(pts)
    alive = np.ones(len(M), dtype=bool)
    for i in range(len(M)):
        alive[i] = False
        if not alive.any() or not _in_hull(M[i], M[alive]):
            alive[i] = True
    return FGCS._trusted(M[alive])


def contains(s: FGCS, p, tol: float = MEMBERSHIP_TOL) -> bool:
    """True iff ``p`` is within TV distance ``tol`` of the hull of ``s``."""
    w = as_weights(p)
    _check_dim(s, w.size)
    return _hull_distance(w, s.matrix) <= tol


def includes(a: FGCS, b: FGCS, tol: float = MEMBERSHIP_TOL) -> bool:
    """True iff ``b ⊆ a`` (every extreme of ``b`` is a member of ``a``)."""
    _check_dim(a, b.dim)
    return all(_hull_distance(row, a.matrix) <= tol for row in b.matrix)


def support_function(s: FGCS, direction) -> float:
    """``sup over q in s of q @ direction``; attained at an extreme point."""
    d = np.asarray(direction, dtype=float)
    _check_dim(s, d.size)
    return float((s.matrix @ d).max())


def point_to_set_tv(p, s: FGCS) -> float:
    """Exact TV distance from ``p`` to the convex hull of ``s``."""
    w = as_weights(p)
    _check_dim(s, w.size)
    return _hull_distance(w, s.matrix)


def hausdorff_tv(a: FGCS, b: FGCS) -> float:
    """Hausdorff distance between two polytopes under total variation."""
    _check_dim(a, b.dim)
    ab = max(_hull_distance(u, b.matrix) for u in a.matrix)
    ba = max(_hull_distance(v, a.matrix) for v in b.matrix)
    return max(ab, ba)


def hausdorff_finite_hilbert(s, t) -> float:
    """Hausdorff distance between finite point sets under the Hilbert metric."""
    s = s.extremes if isinstance(s, FGCS) else s
    t = t.extremes if isinstance(t, FGCS) else t
    if len(s) == 0 or len(t) == 0:
        raise EmptyCredalError("Hausdorff distance needs nonempty point sets")
    D = pairwise_hilbert(s, t)
    return float(max(D.min(axis=1).max(), D.min(axis=0).max()))


def hausdorff_interval(a: IntervalCredal, b: IntervalCredal) -> float:
    """Hausdorff distance between intervals: the larger endpoint gap."""
    return max(abs(a.lo - b.lo), abs(a.hi - b.hi))


def set_distance(a, b, metric: str) -> float:
    """Dispatch to the Hausdorff distance named by ``metric``."""
    if metric == "interval":
        return hausdorff_interval(a, b)
    if isinstance(a, IntervalCredal):
        a = a.to_fgcs()
    if isinstance(b, IntervalCredal):
        b = b.to_fgcs()
    if metric == "tv_hausdorff":
        return hausdorff_tv(a, b)
    if metric == "finite_hilbert":
        if not (a.is_positive() and b.is_positive()):
            raise PositivityError("finite_hilbert metric needs strictly positive extremes")
        return hausdorff_finite_hilbert(a, b)
    raise ParameterError(f"unknown metric {metric!r}; expected one of {METRICS}")


def random_fgcs(rng: np.random.Generator, dim: int, n_points: int) -> FGCS:
    """Hull of ``n_points`` positive Dirichlet(1) draws, reduced."""
    return reduce(list(sample_positive(rng, dim, size=n_points)))
